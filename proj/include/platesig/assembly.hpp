#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "platesig/bfs.hpp"
#include "platesig/dof_map.hpp"
#include "platesig/fields.hpp"
#include "platesig/mesh.hpp"
#include "platesig/plate.hpp"

namespace platesig {

using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// [x]_+ = max(x, 0).
inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

/// Sparse system on the free DOFs.
struct SparseSystem {
    SparseMat A;
    Eigen::VectorXd b;
};

/// Mesh-dependent penalty gamma = gamma0 / h_edge^p, evaluated per edge with
/// the element side length as h_edge.
struct PenaltyRule {
    double gamma0;
    int exponent;

    double gamma(double h_edge) const {
        if (!(gamma0 > 0.0)) throw std::invalid_argument("penalty: gamma0 must be positive");
        return gamma0 / std::pow(h_edge, exponent);
    }
};

/// Point load of strength P at (x, y), positive downwards.
struct PointLoad {
    Vec2 position;
    double strength;
};

struct Loads {
    std::vector<PointLoad> points;
    double uniform = 0.0;
};

namespace detail {

/// Integrand M(N_b) : kappa(N_a) of the bending form.
inline double bending_integrand(const std::array<double, kDerivCount>& nb,
                                const std::array<double, kDerivCount>& na, double D_std,
                                double nu) {
    return D_std * ((nb[d20] + nu * nb[d02]) * na[d20] + (nb[d02] + nu * nb[d20]) * na[d02] +
                    2.0 * (1.0 - nu) * nb[d11] * na[d11]);
}

} // namespace detail

/// Element bending stiffness, K_ab = int_K M(N_b) : kappa(N_a). The default
/// 4x4 Gauss rule is exact for the bicubic integrands.
inline Eigen::Matrix<double, kElemDofs, kElemDofs>
element_bending_matrix(double hx, double hy, const MaterialParams& mat, int gauss_n = 4) {
    Eigen::Matrix<double, kElemDofs, kElemDofs> K;
    K.setZero();
    const auto rule = gauss_rule_unit(gauss_n);
    const double jac = hx * hy;
    const double Ds = mat.D_std();
    for (const auto& gx : rule) {
        for (const auto& gy : rule) {
            const BfsValues basis = eval_basis(hx, hy, gx.x, gy.x);
            const double w = gx.w * gy.w * jac;
            for (int a = 0; a < kElemDofs; ++a) {
                for (int b = 0; b < kElemDofs; ++b) {
                    K(a, b) += w * detail::bending_integrand(basis.n[b], basis.n[a], Ds, mat.nu);
                }
            }
        }
    }
    return K;
}

/// Interior bending stiffness in full DOF numbering. All elements share the
/// same geometry, so one element matrix is scattered everywhere.
inline std::vector<Triplet> bending_triplets(const StructuredMesh& mesh,
                                             const MaterialParams& mat, int gauss_n = 4) {
    const auto K = element_bending_matrix(mesh.hx(), mesh.hy(), mat, gauss_n);
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(mesh.element_count()) * kElemDofs * kElemDofs);
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto dofs = element_dofs(mesh, e);
        for (int a = 0; a < kElemDofs; ++a)
            for (int b = 0; b < kElemDofs; ++b) trips.emplace_back(dofs[a], dofs[b], K(a, b));
    }
    return trips;
}

inline SparseMat assemble_bending(const StructuredMesh& mesh, const MaterialParams& mat,
                                  int gauss_n = 4) {
    const int n = kDofsPerNode * mesh.node_count();
    SparseMat A(n, n);
    const auto trips = bending_triplets(mesh, mat, gauss_n);
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
}

/// Corner-force contributions C_ab = +sum_corners jump(M_nt(N_b))(x_i) N_a(x_i),
/// jump = M_nt(incoming) - M_nt(outgoing) in counterclockwise traversal.
///
/// The sign follows from integrating <M_nt, d_t v> by parts along each side
/// with the tangent t = (n2, -n1), which runs clockwise: the endpoint terms
/// come out as +jump * v per corner. Validated against the polynomial
/// exact-consistency oracle in the assembly tests.
///
/// Only the consistent one-sided term is assembled; the transpose would be
/// inconsistent with the continuous problem since the deflection is
/// unconstrained at corners. Rows touch only corner-node value DOFs, so the
/// term drops out of the reduced system whenever those DOFs are constrained.
inline std::vector<Triplet> corner_force_triplets(const StructuredMesh& mesh,
                                                  const MaterialParams& mat) {
    std::vector<Triplet> trips;
    for (const Corner& c : mesh.corners()) {
        const Vec2 local = mesh.local_coords(c.element, c.position);
        const BfsValues basis = eval_basis(mesh.hx(), mesh.hy(), local.x(), local.y());
        const auto dofs = element_dofs(mesh, c.element);
        const Vec2 n_in = side_normal(c.side_in), t_in = side_tangent(c.side_in);
        const Vec2 n_out = side_normal(c.side_out), t_out = side_tangent(c.side_out);
        for (int b = 0; b < kElemDofs; ++b) {
            const SymTensor2 kap = curvature(basis.n[b][d20], basis.n[b][d11], basis.n[b][d02]);
            const MomentTensor M = moment(kap, kap.trace(), mat);
            const double jump = moment_nt(M, n_in, t_in) - moment_nt(M, n_out, t_out);
            if (jump == 0.0) continue;
            for (int a = 0; a < kElemDofs; ++a) {
                const double va = basis.n[a][d00];
                if (va == 0.0) continue;
                trips.emplace_back(dofs[a], dofs[b], jump * va);
            }
        }
    }
    return trips;
}

inline SparseMat assemble_corner_forces(const StructuredMesh& mesh, const MaterialParams& mat) {
    const int n = kDofsPerNode * mesh.node_count();
    SparseMat C(n, n);
    const auto trips = corner_force_triplets(mesh, mat);
    C.setFromTriplets(trips.begin(), trips.end());
    return C;
}

/// Load vector in full DOF numbering: point loads P N_a(x0) plus a uniform
/// load integrated with 4x4 Gauss. Throws std::domain_error for point loads
/// outside the domain.
inline Eigen::VectorXd assemble_load(const StructuredMesh& mesh, const Loads& loads) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(kDofsPerNode * mesh.node_count());
    for (const PointLoad& pl : loads.points) {
        const int e = mesh.element_containing(pl.position);
        const Vec2 local = mesh.local_coords(e, pl.position);
        const BfsValues basis = eval_basis(mesh.hx(), mesh.hy(), local.x(), local.y());
        const auto dofs = element_dofs(mesh, e);
        for (int a = 0; a < kElemDofs; ++a) f[dofs[a]] += pl.strength * basis.n[a][d00];
    }
    if (loads.uniform != 0.0) {
        // One element load vector, scattered over all elements.
        Eigen::Matrix<double, kElemDofs, 1> fe;
        fe.setZero();
        const auto rule = gauss_rule_unit(4);
        const double jac = mesh.hx() * mesh.hy();
        for (const auto& gx : rule) {
            for (const auto& gy : rule) {
                const BfsValues basis = eval_basis(mesh.hx(), mesh.hy(), gx.x, gy.x);
                const double w = gx.w * gy.w * jac * loads.uniform;
                for (int a = 0; a < kElemDofs; ++a) fe[a] += w * basis.n[a][d00];
            }
        }
        for (int e = 0; e < mesh.element_count(); ++e) {
            const auto dofs = element_dofs(mesh, e);
            for (int a = 0; a < kElemDofs; ++a) f[dofs[a]] += fe[a];
        }
    }
    return f;
}

/// Load vector of a smooth areal load, int f N_a, in full DOF numbering.
inline Eigen::VectorXd assemble_function_load(const StructuredMesh& mesh,
                                              const std::function<double(Vec2)>& f,
                                              int gauss_n = 5) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(kDofsPerNode * mesh.node_count());
    const auto rule = gauss_rule_unit(gauss_n);
    const double jac = mesh.hx() * mesh.hy();
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto dofs = element_dofs(mesh, e);
        const Vec2 o = mesh.element_origin(e);
        for (const auto& gx : rule) {
            for (const auto& gy : rule) {
                const BfsValues basis = eval_basis(mesh.hx(), mesh.hy(), gx.x, gy.x);
                const Vec2 p{o.x() + gx.x * mesh.hx(), o.y() + gy.x * mesh.hy()};
                const double w = gx.w * gy.w * jac * f(p);
                for (int a = 0; a < kElemDofs; ++a) out[dofs[a]] += w * basis.n[a][d00];
            }
        }
    }
    return out;
}

/// Precomputed data for one Signorini boundary quadrature point: the basis
/// traces entering the Nitsche contact term. psi(N_a) = N_a - gamma^{-1} T(N_a).
struct ContactPointData {
    std::array<int, kElemDofs> dofs;
    std::array<double, kElemDofs> trace; ///< N_a at the point
    std::array<double, kElemDofs> shear; ///< T(N_a) at the point
    std::array<double, kElemDofs> psi;
    double gamma;
    double weight;
    double gap;
    Vec2 position;
    int edge;
};

/// Signorini-boundary quadrature context; immutable across Newton iterations.
struct ContactContext {
    std::vector<ContactPointData> points;

    static ContactContext build(const StructuredMesh& mesh, const MaterialParams& mat,
                                const BoundarySpec& spec, const PenaltyRule& penalty,
                                int subdivisions = 4, int points_per_interval = 4) {
        ContactContext ctx;
        const auto bq = boundary_quadrature(mesh, subdivisions, points_per_interval);
        for (const auto& qp : bq) {
            const BoundaryEdge& be = mesh.boundary_edges()[qp.edge];
            if (spec.tag(be.side) != SideBC::signorini) continue;
            ContactPointData p;
            p.dofs = element_dofs(mesh, be.element);
            const Vec2 local = mesh.local_coords(be.element, qp.position);
            const BfsValues basis = eval_basis(mesh.hx(), mesh.hy(), local.x(), local.y());
            p.gamma = penalty.gamma(be.length);
            p.weight = qp.weight;
            p.gap = spec.gap;
            p.position = qp.position;
            p.edge = qp.edge;
            for (int a = 0; a < kElemDofs; ++a) {
                const ThirdDerivatives d3{basis.n[a][d30], basis.n[a][d21], basis.n[a][d12],
                                          basis.n[a][d03]};
                p.trace[a] = basis.n[a][d00];
                p.shear[a] = kirchhoff_shear(d3, qp.normal, qp.tangent, mat);
                p.psi[a] = p.trace[a] - p.shear[a] / p.gamma;
            }
            ctx.points.push_back(p);
        }
        return ctx;
    }
};

/// Contact contribution to the residual, accumulated into r (full numbering):
///   r_a += w ( -gamma [g - psi(u)]_+ psi(N_a) - gamma^{-1} T(u) T(N_a) ).
/// If `active` is non-null it receives the branch flag g - psi(u) > 0 per
/// quadrature point.
inline void contact_residual(const ContactContext& ctx, const Eigen::VectorXd& u,
                             Eigen::VectorXd& r, std::vector<bool>* active = nullptr) {
    if (active) active->assign(ctx.points.size(), false);
    for (std::size_t i = 0; i < ctx.points.size(); ++i) {
        const auto& p = ctx.points[i];
        double psi_u = 0.0, shear_u = 0.0;
        for (int a = 0; a < kElemDofs; ++a) {
            const double ua = u[p.dofs[a]];
            psi_u += p.psi[a] * ua;
            shear_u += p.shear[a] * ua;
        }
        const double s = p.gap - psi_u;
        const bool is_active = s > 0.0;
        if (active) (*active)[i] = is_active;
        const double pen = is_active ? p.gamma * s : 0.0;
        for (int a = 0; a < kElemDofs; ++a) {
            r[p.dofs[a]] += p.weight * (-pen * p.psi[a] - shear_u * p.shear[a] / p.gamma);
        }
    }
}

/// Semismooth (generalized) Jacobian of the contact residual for the given
/// active flags: active points add +gamma psi psi^T, every point adds
/// -gamma^{-1} T T^T. The kink s = 0 takes the inactive branch.
inline void contact_jacobian_triplets(const ContactContext& ctx, const std::vector<bool>& active,
                                      std::vector<Triplet>& trips) {
    for (std::size_t i = 0; i < ctx.points.size(); ++i) {
        const auto& p = ctx.points[i];
        for (int a = 0; a < kElemDofs; ++a) {
            for (int b = 0; b < kElemDofs; ++b) {
                double v = -p.weight * p.shear[a] * p.shear[b] / p.gamma;
                if (active[i]) v += p.weight * p.gamma * p.psi[a] * p.psi[b];
                if (v != 0.0) trips.emplace_back(p.dofs[a], p.dofs[b], v);
            }
        }
    }
}

/// Active set from the current iterate: g - psi(u) > 0 per quadrature point.
inline std::vector<bool> contact_active_set(const ContactContext& ctx, const Eigen::VectorXd& u) {
    std::vector<bool> active(ctx.points.size(), false);
    for (std::size_t i = 0; i < ctx.points.size(); ++i) {
        const auto& p = ctx.points[i];
        double psi_u = 0.0;
        for (int a = 0; a < kElemDofs; ++a) psi_u += p.psi[a] * u[p.dofs[a]];
        active[i] = (p.gap - psi_u) > 0.0;
    }
    return active;
}

/// RHS contribution gamma <g, psi(v)> of the fully-active (Nitsche equality)
/// linearization, used to seed the Newton iteration.
inline void contact_equality_rhs(const ContactContext& ctx, Eigen::VectorXd& rhs) {
    for (const auto& p : ctx.points) {
        for (int a = 0; a < kElemDofs; ++a) {
            rhs[p.dofs[a]] += p.weight * p.gamma * p.gap * p.psi[a];
        }
    }
}

/// Convert full-numbering triplets to the free-DOF submatrix.
inline SparseMat to_free_matrix(const std::vector<Triplet>& trips, const DofMap& dofs) {
    std::vector<Triplet> reduced;
    reduced.reserve(trips.size());
    for (const auto& t : trips) {
        const int r = dofs.free_index(t.row());
        const int c = dofs.free_index(t.col());
        if (r >= 0 && c >= 0) reduced.emplace_back(r, c, t.value());
    }
    SparseMat A(dofs.free_count(), dofs.free_count());
    A.setFromTriplets(reduced.begin(), reduced.end());
    return A;
}

} // namespace platesig
