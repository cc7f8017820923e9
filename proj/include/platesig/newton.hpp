#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "platesig/linear_solver.hpp"

namespace platesig {

enum class SolveStatus {
    residual_tol,
    active_set_fixed_and_residual_tol,
    max_iters,
    singular_system,
};

inline const char* solve_status_name(SolveStatus s) {
    switch (s) {
    case SolveStatus::residual_tol: return "residual_tol";
    case SolveStatus::active_set_fixed_and_residual_tol:
        return "active_set_fixed_and_residual_tol";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::singular_system: return "singular_system";
    }
    return "?";
}

struct NewtonOptions {
    double tol_rel = 1e-10; ///< residual tolerance relative to ||f||
    int max_iters = 50;
    bool damping = false;   ///< step halving when the residual increases
    int max_halvings = 5;
};

struct SolveReport {
    SolveStatus status = SolveStatus::max_iters;
    int iterations = 0;
    double tol_abs = 0.0;
    std::vector<double> residual_norms;
    std::vector<int> active_set_sizes;
    std::vector<double> linear_residuals;
    std::vector<int> halvings; ///< damping halvings per Newton update

    bool converged() const {
        return status == SolveStatus::residual_tol ||
               status == SolveStatus::active_set_fixed_and_residual_tol;
    }
};

/// Per-boundary-quadrature-point contact diagnostics of a converged solve.
struct ContactState {
    std::vector<bool> active;          ///< branch flags, active <=> lambda < 0
    Eigen::VectorXd lambda;            ///< recovered multiplier, <= 0
    Eigen::VectorXd constraint_values; ///< u_h - g per quadrature point
    Eigen::VectorXd positions_x;
    Eigen::VectorXd positions_y;

    int active_count() const { return static_cast<int>(std::count(active.begin(), active.end(), true)); }
};

/// Semismooth Newton on a piecewise-smooth residual.
///
/// Problem interface (all vectors in free-DOF numbering):
///   Eigen::VectorXd residual(const Eigen::VectorXd& u);
///   std::vector<bool> active_set(const Eigen::VectorXd& u);
///   SparseMat jacobian(const Eigen::VectorXd& u, const std::vector<bool>& active);
///   bool has_contact() const;
///
/// Converges when the residual norm is at or below tol AND the active set is
/// unchanged over the last iteration (the latter only when contact points
/// exist). `seed_active`, when given, acts as the set "before" the first
/// iterate (the set that produced the initial guess), so acceptance on the
/// first pass still verifies set-fixedness.
template <class Problem>
SolveReport semismooth_newton(Problem& prob, Eigen::VectorXd& u, const NewtonOptions& opt,
                              double rhs_norm,
                              std::optional<std::vector<bool>> seed_active = std::nullopt) {
    SolveReport rep;
    rep.tol_abs = opt.tol_rel * std::max(rhs_norm, 1e-300);

    std::vector<bool> prev_active;
    bool have_prev = false;
    if (seed_active) {
        prev_active = std::move(*seed_active);
        have_prev = true;
    }
    for (int it = 1; it <= opt.max_iters; ++it) {
        rep.iterations = it;
        Eigen::VectorXd r = prob.residual(u);
        const double rn = r.norm();
        std::vector<bool> active = prob.active_set(u);
        rep.residual_norms.push_back(rn);
        rep.active_set_sizes.push_back(
            static_cast<int>(std::count(active.begin(), active.end(), true)));

        const bool set_fixed = !prob.has_contact() || !have_prev || active == prev_active;
        if (rn <= rep.tol_abs && set_fixed) {
            rep.status = prob.has_contact() ? SolveStatus::active_set_fixed_and_residual_tol
                                            : SolveStatus::residual_tol;
            return rep;
        }

        const SparseMat J = prob.jacobian(u, active);
        const LinearSolveResult lin = solve_sparse_lu(J, -r);
        rep.linear_residuals.push_back(lin.stats.residual_rel);
        if (!lin.stats.success) {
            rep.status = SolveStatus::singular_system;
            return rep;
        }

        int halved = 0;
        if (opt.damping) {
            double step = 1.0;
            while (halved < opt.max_halvings &&
                   prob.residual(u + step * lin.x).norm() > rn) {
                step *= 0.5;
                ++halved;
            }
            u += step * lin.x;
        } else {
            u += lin.x;
        }
        rep.halvings.push_back(halved);
        prev_active = std::move(active);
        have_prev = true;
    }
    rep.status = SolveStatus::max_iters;
    return rep;
}

} // namespace platesig
