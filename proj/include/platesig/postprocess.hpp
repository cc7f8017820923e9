#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "platesig/assembly.hpp"
#include "platesig/fields.hpp"
#include "platesig/mesh.hpp"
#include "platesig/plate_solver.hpp"
#include "platesig/poisson.hpp"

namespace platesig {

/// Kirchhoff shear and recovered multiplier at one element-side midpoint on
/// the boundary; s is the arc-length coordinate counterclockwise from the
/// domain's lower-left corner.
struct ShearSample {
    double s;
    Vec2 position;
    double shear;
    double lambda;
    bool active;
};

struct ShearProfile {
    std::vector<ShearSample> samples;
};

/// T(u_h) at the midpoint of every boundary edge, evaluated from the unique
/// adjacent element with the same pointwise shear operator the assembly uses.
/// lambda is recovered at the midpoint on Signorini sides and zero elsewhere.
inline ShearProfile extract_shear_profile(const StructuredMesh& mesh, const MaterialParams& mat,
                                          const BoundarySpec& spec, const PenaltyRule& penalty,
                                          const Eigen::VectorXd& u) {
    ShearProfile profile;
    double arc = 0.0;
    for (const BoundaryEdge& be : mesh.boundary_edges()) {
        ShearSample smp;
        smp.position = be.midpoint();
        smp.s = arc + 0.5 * be.length;
        arc += be.length;
        const FieldSample fs =
            eval_field_local(mesh, u, be.element, mesh.local_coords(be.element, smp.position));
        smp.shear = kirchhoff_shear(third_derivatives(fs), be.normal, be.tangent, mat);
        if (spec.tag(be.side) == SideBC::signorini) {
            const double gamma = penalty.gamma(be.length);
            const double psi_u = fs.value - smp.shear / gamma;
            smp.lambda = -gamma * positive_part(spec.gap - psi_u);
        } else {
            smp.lambda = 0.0;
        }
        smp.active = smp.lambda < 0.0;
        profile.samples.push_back(smp);
    }
    return profile;
}

/// Loads understood by the Navier series oracle.
struct NavierLoad {
    enum class Kind { uniform, point } kind = Kind::uniform;
    double magnitude = 1.0;
    Vec2 position{0.5, 0.5}; ///< point-load location (uniform ignores it)
};

/// Center deflection of a simply supported square plate of side a via the
/// classical double sine series; `terms` odd indices per direction
/// (m, n = 1, 3, ..., 2*terms - 1).
inline double navier_center_deflection(const NavierLoad& load, double a, double D_std,
                                       int terms) {
    if (terms < 50) throw std::invalid_argument("navier series: need at least 50 terms");
    const double pi = std::numbers::pi;
    double sum = 0.0;
    if (load.kind == NavierLoad::Kind::uniform) {
        // a_mn = 16 q a^4 / (pi^6 D m n (m^2+n^2)^2), m, n odd
        for (int m = 1; m < 2 * terms; m += 2) {
            const double sm = (((m - 1) / 2) % 2 == 0) ? 1.0 : -1.0; // sin(m pi/2)
            for (int n = 1; n < 2 * terms; n += 2) {
                const double sn = (((n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
                const double mn = static_cast<double>(m) * m + static_cast<double>(n) * n;
                sum += sm * sn / (m * n * mn * mn);
            }
        }
        return 16.0 * load.magnitude * a * a * a * a / (std::pow(pi, 6) * D_std) * sum;
    }
    // Point load P at (x0, y0): a_mn = 4 P sin(m pi x0/a) sin(n pi y0/a) /
    // (a^2 D pi^4 ((m^2+n^2)/a^2)^2); evaluated at the center.
    for (int m = 1; m <= 2 * terms; ++m) {
        const double smc = std::sin(m * pi * 0.5);
        if (smc == 0.0) continue;
        const double smx = std::sin(m * pi * load.position.x() / a);
        for (int n = 1; n <= 2 * terms; ++n) {
            const double snc = std::sin(n * pi * 0.5);
            if (snc == 0.0) continue;
            const double sny = std::sin(n * pi * load.position.y() / a);
            const double mn = static_cast<double>(m) * m + static_cast<double>(n) * n;
            sum += smx * sny * smc * snc / (mn * mn);
        }
    }
    return 4.0 * load.magnitude * a * a / (std::pow(pi, 4) * D_std) * sum;
}

/// L2 norm of u_h - exact over the mesh.
inline double plate_l2_error(const StructuredMesh& mesh, const Eigen::VectorXd& u,
                             const std::function<double(Vec2)>& exact, int gauss_n = 5) {
    double acc = 0.0;
    const auto rule = gauss_rule_unit(gauss_n);
    const double jac = mesh.hx() * mesh.hy();
    for (int e = 0; e < mesh.element_count(); ++e) {
        const Vec2 o = mesh.element_origin(e);
        for (const auto& gx : rule) {
            for (const auto& gy : rule) {
                const FieldSample s = eval_field_local(mesh, u, e, {gx.x, gy.x});
                const Vec2 p{o.x() + gx.x * mesh.hx(), o.y() + gy.x * mesh.hy()};
                const double diff = s.value - exact(p);
                acc += gx.w * gy.w * jac * diff * diff;
            }
        }
    }
    return std::sqrt(acc);
}

/// Energy norm sqrt(int M(e) : kappa(e)) of the error, from exact second
/// derivatives.
inline double plate_energy_error(const StructuredMesh& mesh, const Eigen::VectorXd& u,
                                 const MaterialParams& mat,
                                 const std::function<SymTensor2(Vec2)>& exact_hessian,
                                 int gauss_n = 5) {
    double acc = 0.0;
    const auto rule = gauss_rule_unit(gauss_n);
    const double jac = mesh.hx() * mesh.hy();
    const double Ds = mat.D_std();
    for (int e = 0; e < mesh.element_count(); ++e) {
        const Vec2 o = mesh.element_origin(e);
        for (const auto& gx : rule) {
            for (const auto& gy : rule) {
                const FieldSample s = eval_field_local(mesh, u, e, {gx.x, gy.x});
                const Vec2 p{o.x() + gx.x * mesh.hx(), o.y() + gy.x * mesh.hy()};
                const SymTensor2 he = exact_hessian(p);
                const double exx = s.dxx - he.xx;
                const double exy = s.dxy - he.xy;
                const double eyy = s.dyy - he.yy;
                const double integrand =
                    Ds * ((exx + mat.nu * eyy) * exx + (eyy + mat.nu * exx) * eyy +
                          2.0 * (1.0 - mat.nu) * exy * exy);
                acc += gx.w * gy.w * jac * integrand;
            }
        }
    }
    return std::sqrt(acc);
}

struct ConvergenceRow {
    double h;
    double error_l2;
    double error_energy;
    double rate_l2;     ///< log2(e_prev / e_this); 0 on the first row
    double rate_energy;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
};

enum class SweepKind { plate_bilateral_sine, poisson_dirichlet_sine };

/// Manufactured-solution refinement study on the unit square.
///
/// plate_bilateral_sine: u = sin(pi x) sin(pi y), f = 4 pi^4 D_std u, all
/// sides simply supported (strong); energy and L2 errors.
/// poisson_dirichlet_sine: u = sin(pi x) sin(pi y), f = 2 pi^2 u, g = 0
/// imposed by Nitsche with the given gamma0; H1-seminorm and L2 errors.
inline ConvergenceTable convergence_sweep(SweepKind kind, int base_n, int levels,
                                          const MaterialParams& mat, double poisson_gamma0 = 10.0) {
    if (levels < 1) throw std::invalid_argument("sweep: levels must be >= 1");
    const double pi = std::numbers::pi;
    ConvergenceTable table;
    const auto exact = [pi](Vec2 p) { return std::sin(pi * p.x()) * std::sin(pi * p.y()); };
    int n = base_n;
    for (int level = 0; level < levels; ++level, n *= 2) {
        const StructuredMesh mesh({0.0, 0.0}, {1.0, 1.0}, n, n);
        ConvergenceRow row{};
        row.h = mesh.h();
        if (kind == SweepKind::plate_bilateral_sine) {
            const double Ds = mat.D_std();
            BoundarySpec bc;
            bc.side.fill(SideBC::simply_supported);
            DofMap dofs = apply_strong_bcs(mesh, bc);
            std::vector<Triplet> trips = bending_triplets(mesh, mat);
            const SparseMat A = to_free_matrix(trips, dofs);
            const Eigen::VectorXd f_full = assemble_function_load(
                mesh, [&](Vec2 p) { return 4.0 * std::pow(pi, 4) * Ds * exact(p); });
            const LinearSolveResult lin = solve_sparse_llt(A, dofs.restrict_to_free(f_full));
            if (!lin.stats.success) throw std::runtime_error("sweep: bilateral solve failed");
            const Eigen::VectorXd u = dofs.expand(lin.x);
            row.error_l2 = plate_l2_error(mesh, u, exact);
            row.error_energy = plate_energy_error(mesh, u, mat, [pi, &exact](Vec2 p) {
                const double s = std::sin(pi * p.x()) * std::sin(pi * p.y());
                const double c = std::cos(pi * p.x()) * std::cos(pi * p.y());
                return SymTensor2{-pi * pi * s, pi * pi * c, -pi * pi * s};
            });
        } else {
            const auto f = [pi, &exact](Vec2 p) { return 2.0 * pi * pi * exact(p); };
            const PoissonLinearResult res =
                solve_poisson_dirichlet_nitsche(mesh, f, 0.0, poisson_gamma0);
            if (!res.ok) throw std::runtime_error("sweep: poisson solve failed");
            row.error_l2 = q1_l2_error(mesh, res.u, exact);
            // H1 seminorm error by quadrature.
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
                        Vec2 gh = Vec2::Zero();
                        for (int a = 0; a < 4; ++a) gh += v.grad[a] * res.u[nodes[a]];
                        const Vec2 ge{pi * std::cos(pi * p.x()) * std::sin(pi * p.y()),
                                      pi * std::sin(pi * p.x()) * std::cos(pi * p.y())};
                        acc += gx.w * gy.w * jac * (gh - ge).squaredNorm();
                    }
                }
            }
            row.error_energy = std::sqrt(acc);
        }
        if (!table.rows.empty()) {
            row.rate_l2 = std::log2(table.rows.back().error_l2 / row.error_l2);
            row.rate_energy = std::log2(table.rows.back().error_energy / row.error_energy);
        }
        table.rows.push_back(row);
    }
    return table;
}

} // namespace platesig
