#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>

#include "platesig/assembly.hpp"

namespace platesig {

struct LinearSolveStats {
    bool success = false;
    double residual_rel = 0.0; ///< ||Ax - b|| / ||b||
    int refinements = 0;
};

struct LinearSolveResult {
    Eigen::VectorXd x;
    LinearSolveStats stats;
};

namespace detail {

inline double rel_residual(const SparseMat& A, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& b) {
    const double bn = b.norm();
    const double rn = (A * x - b).norm();
    if (bn == 0.0) return rn;
    return rn / bn;
}

template <class Factorization>
LinearSolveResult refine_and_check(const Factorization& lu, const SparseMat& A,
                                   const Eigen::VectorXd& b) {
    LinearSolveResult out;
    out.x = lu.solve(b);
    if (!out.x.allFinite()) return out;
    double rel = rel_residual(A, out.x, b);
    // Iterative refinement off the cached factorization.
    for (int k = 0; k < 3 && rel > 1e-13; ++k) {
        const Eigen::VectorXd corr = lu.solve(b - A * out.x);
        if (!corr.allFinite()) break;
        const Eigen::VectorXd cand = out.x + corr;
        const double cand_rel = rel_residual(A, cand, b);
        if (cand_rel >= rel) break;
        out.x = cand;
        rel = cand_rel;
        out.stats.refinements = k + 1;
    }
    out.stats.residual_rel = rel;
    out.stats.success = std::isfinite(rel) && rel <= 1e-8;
    return out;
}

} // namespace detail

/// Direct sparse LU solve with iterative refinement. A failed factorization
/// or a relative residual above 1e-8 is reported as failure (singular or
/// numerically unusable system).
inline LinearSolveResult solve_sparse_lu(const SparseMat& A, const Eigen::VectorXd& b) {
    SparseMat Ac = A;
    Ac.makeCompressed();
    Eigen::SparseLU<SparseMat> lu;
    lu.compute(Ac);
    if (lu.info() != Eigen::Success) return {};
    return detail::refine_and_check(lu, Ac, b);
}

/// Cholesky solve for symmetric positive definite systems.
inline LinearSolveResult solve_sparse_llt(const SparseMat& A, const Eigen::VectorXd& b) {
    SparseMat Ac = A;
    Ac.makeCompressed();
    Eigen::SimplicialLLT<SparseMat> llt;
    llt.compute(Ac);
    if (llt.info() != Eigen::Success) return {};
    return detail::refine_and_check(llt, Ac, b);
}

} // namespace platesig
