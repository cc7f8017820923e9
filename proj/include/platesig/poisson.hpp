#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "platesig/assembly.hpp"
#include "platesig/mesh.hpp"
#include "platesig/newton.hpp"

namespace platesig {

/// Per-side boundary condition for the scalar Poisson reference problem.
enum class PoissonBC : int { dirichlet, signorini, neumann };

struct PoissonBoundarySpec {
    std::array<PoissonBC, 4> side{PoissonBC::dirichlet, PoissonBC::dirichlet,
                                  PoissonBC::dirichlet, PoissonBC::dirichlet};
    double dirichlet_value = 0.0; ///< constant Dirichlet data
    double gap = 0.0;             ///< constant obstacle in u <= g

    PoissonBC tag(Side s) const { return side[static_cast<int>(s)]; }
    void set(Side s, PoissonBC bc) { side[static_cast<int>(s)] = bc; }
    bool any_signorini() const {
        for (auto t : side)
            if (t == PoissonBC::signorini) return true;
        return false;
    }
};

/// Bilinear (Q1) shape functions and gradients on a hx x hy rectangle,
/// node order (0,0), (1,0), (0,1), (1,1).
struct Q1Values {
    std::array<double, 4> val;
    std::array<Vec2, 4> grad;
};

inline Q1Values q1_eval(double hx, double hy, double xi, double eta) {
    Q1Values v;
    const double a[2] = {1.0 - xi, xi};
    const double b[2] = {1.0 - eta, eta};
    const double da[2] = {-1.0 / hx, 1.0 / hx};
    const double db[2] = {-1.0 / hy, 1.0 / hy};
    for (int cy = 0; cy < 2; ++cy) {
        for (int cx = 0; cx < 2; ++cx) {
            const int k = 2 * cy + cx;
            v.val[k] = a[cx] * b[cy];
            v.grad[k] = {da[cx] * b[cy], a[cx] * db[cy]};
        }
    }
    return v;
}

using ScalarField = std::function<double(Vec2)>;

namespace detail {

/// Q1 stiffness and load, full nodal numbering.
inline std::vector<Triplet> q1_stiffness_triplets(const StructuredMesh& mesh) {
    Eigen::Matrix4d K = Eigen::Matrix4d::Zero();
    const auto rule = gauss_rule_unit(2);
    const double jac = mesh.hx() * mesh.hy();
    for (const auto& gx : rule) {
        for (const auto& gy : rule) {
            const Q1Values v = q1_eval(mesh.hx(), mesh.hy(), gx.x, gy.x);
            const double w = gx.w * gy.w * jac;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) K(a, b) += w * v.grad[a].dot(v.grad[b]);
        }
    }
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(mesh.element_count()) * 16);
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto nodes = mesh.element_nodes(e);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) trips.emplace_back(nodes[a], nodes[b], K(a, b));
    }
    return trips;
}

inline Eigen::VectorXd q1_load(const StructuredMesh& mesh, const ScalarField& f) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.node_count());
    const auto rule = gauss_rule_unit(3);
    const double jac = mesh.hx() * mesh.hy();
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto nodes = mesh.element_nodes(e);
        const Vec2 o = mesh.element_origin(e);
        for (const auto& gx : rule) {
            for (const auto& gy : rule) {
                const Q1Values v = q1_eval(mesh.hx(), mesh.hy(), gx.x, gy.x);
                const Vec2 p{o.x() + gx.x * mesh.hx(), o.y() + gy.x * mesh.hy()};
                const double w = gx.w * gy.w * jac * f(p);
                for (int a = 0; a < 4; ++a) out[nodes[a]] += w * v.val[a];
            }
        }
    }
    return out;
}

struct PoissonEdgePoint {
    std::array<int, 4> nodes;
    std::array<double, 4> trace;
    std::array<double, 4> dn;  ///< normal derivative of each shape function
    std::array<double, 4> phi; ///< trace - dn / gamma
    double gamma;
    double weight;
    double data; ///< dirichlet value or gap
    Vec2 position;
};

inline std::vector<PoissonEdgePoint> poisson_edge_points(const StructuredMesh& mesh,
                                                         const PoissonBoundarySpec& spec,
                                                         PoissonBC which, double gamma0,
                                                         int subdivisions, int q) {
    std::vector<PoissonEdgePoint> out;
    const auto bq = boundary_quadrature(mesh, subdivisions, q);
    for (const auto& qp : bq) {
        const BoundaryEdge& be = mesh.boundary_edges()[qp.edge];
        if (spec.tag(be.side) != which) continue;
        PoissonEdgePoint p;
        p.nodes = mesh.element_nodes(be.element);
        const Vec2 local = mesh.local_coords(be.element, qp.position);
        const Q1Values v = q1_eval(mesh.hx(), mesh.hy(), local.x(), local.y());
        p.gamma = gamma0 / be.length;
        p.weight = qp.weight;
        p.data = (which == PoissonBC::dirichlet) ? spec.dirichlet_value : spec.gap;
        p.position = qp.position;
        for (int a = 0; a < 4; ++a) {
            p.trace[a] = v.val[a];
            p.dn[a] = qp.normal.dot(v.grad[a]);
            p.phi[a] = p.trace[a] - p.dn[a] / p.gamma;
        }
        out.push_back(p);
    }
    return out;
}

} // namespace detail

/// Scalar Poisson problem with Nitsche boundary treatment. The linear part
/// (stiffness, loads, Nitsche Dirichlet terms) is fixed; Signorini sides add
/// the piecewise-linear contact term a la the plate solver.
class PoissonSignoriniProblem {
public:
    PoissonSignoriniProblem(const StructuredMesh& mesh, const ScalarField& f,
                            const PoissonBoundarySpec& spec, double gamma0, int subdivisions = 4,
                            int q = 4)
        : n_(mesh.node_count()) {
        base_trips_ = detail::q1_stiffness_triplets(mesh);
        b_ = detail::q1_load(mesh, f);
        // Symmetric Nitsche terms on Dirichlet sides:
        //   -<dn u, v> - <dn v, u> + gamma <u, v>,  rhs <g, gamma v - dn v>.
        for (const auto& p :
             detail::poisson_edge_points(mesh, spec, PoissonBC::dirichlet, gamma0, 1, 3)) {
            for (int a = 0; a < 4; ++a) {
                for (int bb = 0; bb < 4; ++bb) {
                    const double v = p.weight * (-p.dn[bb] * p.trace[a] - p.dn[a] * p.trace[bb] +
                                                 p.gamma * p.trace[bb] * p.trace[a]);
                    if (v != 0.0) base_trips_.emplace_back(p.nodes[a], p.nodes[bb], v);
                }
                b_[p.nodes[a]] += p.weight * p.data * (p.gamma * p.trace[a] - p.dn[a]);
            }
        }
        base_.resize(n_, n_);
        base_.setFromTriplets(base_trips_.begin(), base_trips_.end());
        contact_ = detail::poisson_edge_points(mesh, spec, PoissonBC::signorini, gamma0,
                                               subdivisions, q);
    }

    int size() const { return n_; }
    bool has_contact() const { return !contact_.empty(); }
    const Eigen::VectorXd& rhs() const { return b_; }
    const std::vector<detail::PoissonEdgePoint>& contact_points() const { return contact_; }

    Eigen::VectorXd residual(const Eigen::VectorXd& u) const {
        Eigen::VectorXd r = base_ * u - b_;
        for (const auto& p : contact_) {
            double phi_u = 0.0, dn_u = 0.0;
            for (int a = 0; a < 4; ++a) {
                phi_u += p.phi[a] * u[p.nodes[a]];
                dn_u += p.dn[a] * u[p.nodes[a]];
            }
            const double pen = p.gamma * positive_part(phi_u - p.data);
            for (int a = 0; a < 4; ++a) {
                r[p.nodes[a]] += p.weight * (pen * p.phi[a] - dn_u * p.dn[a] / p.gamma);
            }
        }
        return r;
    }

    std::vector<bool> active_set(const Eigen::VectorXd& u) const {
        std::vector<bool> active(contact_.size(), false);
        for (std::size_t i = 0; i < contact_.size(); ++i) {
            const auto& p = contact_[i];
            double phi_u = 0.0;
            for (int a = 0; a < 4; ++a) phi_u += p.phi[a] * u[p.nodes[a]];
            active[i] = (phi_u - p.data) > 0.0;
        }
        return active;
    }

    SparseMat jacobian(const Eigen::VectorXd& /*u*/, const std::vector<bool>& active) const {
        std::vector<Triplet> trips = base_trips_;
        append_contact_jacobian(active, trips);
        SparseMat J(n_, n_);
        J.setFromTriplets(trips.begin(), trips.end());
        return J;
    }

    /// Fully-active linearization; algebraically identical to the symmetric
    /// Nitsche Dirichlet system with data g on the Signorini sides.
    SparseSystem equality_system() const {
        std::vector<Triplet> trips = base_trips_;
        append_contact_jacobian(std::vector<bool>(contact_.size(), true), trips);
        Eigen::VectorXd rhs = b_;
        for (const auto& p : contact_) {
            for (int a = 0; a < 4; ++a)
                rhs[p.nodes[a]] += p.weight * p.gamma * p.data * p.phi[a];
        }
        SparseMat A(n_, n_);
        A.setFromTriplets(trips.begin(), trips.end());
        return {A, rhs};
    }

    ContactState recover_multiplier(const Eigen::VectorXd& u) const {
        const int m = static_cast<int>(contact_.size());
        ContactState st;
        st.active.assign(m, false);
        st.lambda.resize(m);
        st.constraint_values.resize(m);
        st.positions_x.resize(m);
        st.positions_y.resize(m);
        for (int i = 0; i < m; ++i) {
            const auto& p = contact_[i];
            double phi_u = 0.0, trace_u = 0.0;
            for (int a = 0; a < 4; ++a) {
                phi_u += p.phi[a] * u[p.nodes[a]];
                trace_u += p.trace[a] * u[p.nodes[a]];
            }
            st.lambda[i] = -p.gamma * positive_part(phi_u - p.data);
            st.active[i] = st.lambda[i] < 0.0;
            st.constraint_values[i] = trace_u - p.data;
            st.positions_x[i] = p.position.x();
            st.positions_y[i] = p.position.y();
        }
        return st;
    }

private:
    void append_contact_jacobian(const std::vector<bool>& active,
                                 std::vector<Triplet>& trips) const {
        for (std::size_t i = 0; i < contact_.size(); ++i) {
            const auto& p = contact_[i];
            for (int a = 0; a < 4; ++a) {
                for (int bb = 0; bb < 4; ++bb) {
                    double v = -p.weight * p.dn[a] * p.dn[bb] / p.gamma;
                    if (active[i]) v += p.weight * p.gamma * p.phi[a] * p.phi[bb];
                    if (v != 0.0) trips.emplace_back(p.nodes[a], p.nodes[bb], v);
                }
            }
        }
    }

    int n_;
    std::vector<Triplet> base_trips_;
    SparseMat base_;
    Eigen::VectorXd b_;
    std::vector<detail::PoissonEdgePoint> contact_;
};

struct PoissonLinearResult {
    Eigen::VectorXd u;
    LinearSolveStats stats;
    bool ok = false;
    /// True when the symmetric Nitsche matrix is positive definite; false
    /// flags an under-penalized (indefinite) system.
    bool positive_definite = false;
};

/// Symmetric Nitsche imposition of u = g on the Dirichlet sides of `spec`
/// (default: all four sides), gamma = gamma0 / h_edge.
inline PoissonLinearResult
solve_poisson_dirichlet_nitsche(const StructuredMesh& mesh, const ScalarField& f, double g,
                                double gamma0,
                                std::optional<PoissonBoundarySpec> spec_in = std::nullopt) {
    PoissonBoundarySpec spec = spec_in.value_or(PoissonBoundarySpec{});
    spec.dirichlet_value = g;
    PoissonSignoriniProblem prob(mesh, f, spec, gamma0);
    // No contact points on Dirichlet/Neumann-only specs: the equality system
    // is the plain linear Nitsche system.
    const SparseSystem sys = prob.equality_system();

    PoissonLinearResult out;
    SparseMat A = sys.A;
    A.makeCompressed();
    Eigen::SimplicialLDLT<SparseMat> ldlt;
    ldlt.compute(A);
    if (ldlt.info() == Eigen::Success) {
        out.positive_definite = (ldlt.vectorD().array() > 0.0).all();
    }
    const LinearSolveResult lin = solve_sparse_lu(A, sys.b);
    out.u = lin.x;
    out.stats = lin.stats;
    out.ok = lin.stats.success;
    return out;
}

struct PoissonSolveOptions {
    NewtonOptions newton;
    int subdivisions = 4;
    int points_per_interval = 4;
    std::optional<Eigen::VectorXd> initial_guess;
};

struct PoissonSolution {
    Eigen::VectorXd u;
    ContactState state;
    SolveReport report;
};

/// Nitsche contact solve for u <= g on the Signorini sides; remaining sides
/// are Nitsche Dirichlet or natural. Seeded by the fully-active solve unless
/// a warm start is given.
inline PoissonSolution solve_poisson_signorini_nitsche(const StructuredMesh& mesh,
                                                       const ScalarField& f,
                                                       const PoissonBoundarySpec& spec,
                                                       double gamma0,
                                                       const PoissonSolveOptions& opts = {}) {
    PoissonSignoriniProblem prob(mesh, f, spec, gamma0, opts.subdivisions,
                                 opts.points_per_interval);
    PoissonSolution sol;
    Eigen::VectorXd u;
    std::optional<std::vector<bool>> seed_active;
    if (opts.initial_guess) {
        u = *opts.initial_guess;
    } else {
        const SparseSystem eq = prob.equality_system();
        const LinearSolveResult lin = solve_sparse_lu(eq.A, eq.b);
        sol.report.linear_residuals.push_back(lin.stats.residual_rel);
        if (!lin.stats.success) {
            sol.report.status = SolveStatus::singular_system;
            sol.u = Eigen::VectorXd::Zero(mesh.node_count());
            sol.state = prob.recover_multiplier(sol.u);
            return sol;
        }
        u = lin.x;
        seed_active = std::vector<bool>(prob.contact_points().size(), true);
    }
    SolveReport rep =
        semismooth_newton(prob, u, opts.newton, prob.rhs().norm(), std::move(seed_active));
    rep.linear_residuals.insert(rep.linear_residuals.begin(), sol.report.linear_residuals.begin(),
                                sol.report.linear_residuals.end());
    sol.report = std::move(rep);
    sol.u = std::move(u);
    sol.state = prob.recover_multiplier(sol.u);
    return sol;
}

/// Q1 field value at a point.
inline double q1_value_at(const StructuredMesh& mesh, const Eigen::VectorXd& u, Vec2 p) {
    const int e = mesh.element_containing(p);
    const Vec2 local = mesh.local_coords(e, p);
    const Q1Values v = q1_eval(mesh.hx(), mesh.hy(), local.x(), local.y());
    const auto nodes = mesh.element_nodes(e);
    double out = 0.0;
    for (int a = 0; a < 4; ++a) out += v.val[a] * u[nodes[a]];
    return out;
}

/// L2 error of a Q1 field against an exact solution (3x3 Gauss).
inline double q1_l2_error(const StructuredMesh& mesh, const Eigen::VectorXd& u,
                          const ScalarField& exact) {
    double acc = 0.0;
    const auto rule = gauss_rule_unit(3);
    const double jac = mesh.hx() * mesh.hy();
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto nodes = mesh.element_nodes(e);
        const Vec2 o = mesh.element_origin(e);
        for (const auto& gx : rule) {
            for (const auto& gy : rule) {
                const Q1Values v = q1_eval(mesh.hx(), mesh.hy(), gx.x, gy.x);
                const Vec2 p{o.x() + gx.x * mesh.hx(), o.y() + gy.x * mesh.hy()};
                double uh = 0.0;
                for (int a = 0; a < 4; ++a) uh += v.val[a] * u[nodes[a]];
                const double diff = uh - exact(p);
                acc += gx.w * gy.w * jac * diff * diff;
            }
        }
    }
    return std::sqrt(acc);
}

} // namespace platesig
