#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <optional>
#include <utility>
#include <vector>

#include "platesig/assembly.hpp"
#include "platesig/dof_map.hpp"
#include "platesig/newton.hpp"

namespace platesig {

struct PlateSolveOptions {
    NewtonOptions newton;
    int contact_subdivisions = 4;
    int contact_points_per_interval = 4;
    /// Warm start in full DOF numbering. When absent the iteration is seeded
    /// by the fully-active (Nitsche equality) linear solve, which also covers
    /// the cold start from the zero state.
    std::optional<Eigen::VectorXd> initial_guess;
};

/// Discrete plate Signorini system on the free DOFs: interior bending plus
/// corner forces plus the Nitsche contact boundary terms.
class PlateSignoriniProblem {
public:
    PlateSignoriniProblem(const StructuredMesh& mesh, const MaterialParams& mat,
                          const BoundarySpec& spec, const PenaltyRule& penalty,
                          const Loads& loads, int subdivisions = 4, int points_per_interval = 4)
        : mesh_(mesh), spec_(spec), dofs_(apply_strong_bcs(mesh, spec)),
          ctx_(ContactContext::build(mesh, mat, spec, penalty, subdivisions,
                                     points_per_interval)) {
        interior_trips_ = bending_triplets(mesh, mat);
        const auto corner_trips = corner_force_triplets(mesh, mat);
        interior_trips_.insert(interior_trips_.end(), corner_trips.begin(), corner_trips.end());
        const int n = kDofsPerNode * mesh.node_count();
        interior_full_.resize(n, n);
        interior_full_.setFromTriplets(interior_trips_.begin(), interior_trips_.end());
        f_full_ = assemble_load(mesh, loads);
    }

    const DofMap& dof_map() const { return dofs_; }
    const ContactContext& contact() const { return ctx_; }
    const Eigen::VectorXd& load_full() const { return f_full_; }
    double rhs_norm() const { return dofs_.restrict_to_free(f_full_).norm(); }

    bool has_contact() const { return !ctx_.points.empty(); }

    Eigen::VectorXd residual(const Eigen::VectorXd& u_free) const {
        const Eigen::VectorXd u = dofs_.expand(u_free);
        Eigen::VectorXd r = interior_full_ * u - f_full_;
        contact_residual(ctx_, u, r);
        return dofs_.restrict_to_free(r);
    }

    std::vector<bool> active_set(const Eigen::VectorXd& u_free) const {
        return contact_active_set(ctx_, dofs_.expand(u_free));
    }

    SparseMat jacobian(const Eigen::VectorXd& /*u_free*/, const std::vector<bool>& active) const {
        std::vector<Triplet> trips = interior_trips_;
        contact_jacobian_triplets(ctx_, active, trips);
        return to_free_matrix(trips, dofs_);
    }

    /// Fully-active linearization: bending + corners + gamma<psi,psi> -
    /// gamma^{-1}<T,T>, with rhs f + gamma<g, psi(v)>. This is the Nitsche
    /// imposition of u = g on the Signorini sides.
    SparseSystem equality_system() const {
        std::vector<Triplet> trips = interior_trips_;
        const std::vector<bool> all_active(ctx_.points.size(), true);
        contact_jacobian_triplets(ctx_, all_active, trips);
        Eigen::VectorXd rhs = f_full_;
        contact_equality_rhs(ctx_, rhs);
        return {to_free_matrix(trips, dofs_), dofs_.restrict_to_free(rhs)};
    }

private:
    const StructuredMesh& mesh_;
    BoundarySpec spec_;
    DofMap dofs_;
    ContactContext ctx_;
    std::vector<Triplet> interior_trips_;
    SparseMat interior_full_;
    Eigen::VectorXd f_full_;
};

/// lambda_h = -gamma [g - psi(u_h)]_+ at every Signorini quadrature point,
/// with the pointwise Kuhn-Tucker data (sign and constraint value) alongside.
inline ContactState recover_multiplier(const ContactContext& ctx, const Eigen::VectorXd& u_full) {
    const int n = static_cast<int>(ctx.points.size());
    ContactState st;
    st.active.assign(n, false);
    st.lambda.resize(n);
    st.constraint_values.resize(n);
    st.positions_x.resize(n);
    st.positions_y.resize(n);
    for (int i = 0; i < n; ++i) {
        const auto& p = ctx.points[i];
        double psi_u = 0.0, trace_u = 0.0;
        for (int a = 0; a < kElemDofs; ++a) {
            psi_u += p.psi[a] * u_full[p.dofs[a]];
            trace_u += p.trace[a] * u_full[p.dofs[a]];
        }
        const double s = p.gap - psi_u;
        st.lambda[i] = s > 0.0 ? -p.gamma * s : 0.0;
        st.active[i] = st.lambda[i] < 0.0;
        st.constraint_values[i] = trace_u - p.gap;
        st.positions_x[i] = p.position.x();
        st.positions_y[i] = p.position.y();
    }
    return st;
}

struct PlateSolution {
    Eigen::VectorXd u; ///< full DOF numbering, constrained entries zero
    ContactState state;
    SolveReport report;
};

/// Semismooth Newton solve of the plate Signorini (or bilateral) problem.
inline PlateSolution solve_plate_signorini(const StructuredMesh& mesh, const MaterialParams& mat,
                                           const BoundarySpec& spec, const PenaltyRule& penalty,
                                           const Loads& loads, const PlateSolveOptions& opts = {}) {
    spec.validate();
    PlateSignoriniProblem prob(mesh, mat, spec, penalty, loads, opts.contact_subdivisions,
                               opts.contact_points_per_interval);
    const DofMap& dofs = prob.dof_map();

    Eigen::VectorXd u_free;
    PlateSolution sol;
    std::optional<std::vector<bool>> seed_active;
    if (opts.initial_guess) {
        u_free = dofs.restrict_to_free(*opts.initial_guess);
    } else if (prob.has_contact()) {
        const SparseSystem eq = prob.equality_system();
        const LinearSolveResult lin = solve_sparse_lu(eq.A, eq.b);
        sol.report.linear_residuals.push_back(lin.stats.residual_rel);
        if (!lin.stats.success) {
            sol.report.status = SolveStatus::singular_system;
            sol.u = Eigen::VectorXd::Zero(kDofsPerNode * mesh.node_count());
            sol.state = recover_multiplier(prob.contact(), sol.u);
            return sol;
        }
        u_free = lin.x;
        seed_active = std::vector<bool>(prob.contact().points.size(), true);
    } else {
        u_free = Eigen::VectorXd::Zero(dofs.free_count());
    }

    SolveReport rep =
        semismooth_newton(prob, u_free, opts.newton, prob.rhs_norm(), std::move(seed_active));
    rep.linear_residuals.insert(rep.linear_residuals.begin(),
                                sol.report.linear_residuals.begin(),
                                sol.report.linear_residuals.end());
    sol.report = std::move(rep);
    sol.u = dofs.expand(u_free);
    sol.state = recover_multiplier(prob.contact(), sol.u);
    return sol;
}

struct BilateralSolution {
    Eigen::VectorXd u;
    LinearSolveStats stats;
    bool ok = false;
};

/// Linear bilateral plate solve (no Signorini sides): strong essential BCs,
/// Cholesky factorization of the reduced SPD system.
inline BilateralSolution solve_plate_bilateral(const StructuredMesh& mesh,
                                               const MaterialParams& mat,
                                               const BoundarySpec& spec, const Loads& loads) {
    spec.validate();
    DofMap dofs = apply_strong_bcs(mesh, spec);
    std::vector<Triplet> trips = bending_triplets(mesh, mat);
    const auto corner_trips = corner_force_triplets(mesh, mat);
    trips.insert(trips.end(), corner_trips.begin(), corner_trips.end());
    const SparseMat A = to_free_matrix(trips, dofs);
    const Eigen::VectorXd b = dofs.restrict_to_free(assemble_load(mesh, loads));
    LinearSolveResult lin = solve_sparse_llt(A, b);
    if (!lin.stats.success) {
        // Corner terms make the matrix mildly nonsymmetric when corners are
        // unconstrained; fall back to LU.
        lin = solve_sparse_lu(A, b);
    }
    BilateralSolution out;
    out.stats = lin.stats;
    out.ok = lin.stats.success;
    out.u = out.ok ? dofs.expand(lin.x)
                   : Eigen::VectorXd::Zero(kDofsPerNode * mesh.node_count());
    return out;
}

} // namespace platesig
