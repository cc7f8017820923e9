#pragma once

#include <cmath>
#include <stdexcept>

#include "platesig/mesh.hpp"

namespace platesig {

/// Kirchhoff plate material. All quantities follow the convention that
/// displacements, loads and gaps are positive downwards.
struct MaterialParams {
    double E;  ///< Young's modulus
    double nu; ///< Poisson ratio
    double t;  ///< thickness
    double D;  ///< plate modulus E t^3 / (12 (1 + nu))

    /// Flexural rigidity E t^3 / (12 (1 - nu^2)) = D / (1 - nu).
    double D_std() const { return D / (1.0 - nu); }
};

inline double plate_modulus(double E, double nu, double t) {
    if (!(E > 0.0)) throw std::invalid_argument("material: E must be positive");
    if (!(t > 0.0)) throw std::invalid_argument("material: thickness must be positive");
    if (!(nu >= 0.0 && nu < 1.0))
        throw std::invalid_argument("material: nu must satisfy 0 <= nu < 1");
    return E * t * t * t / (12.0 * (1.0 + nu));
}

inline MaterialParams make_material(double E, double nu, double t) {
    return {E, nu, t, plate_modulus(E, nu, t)};
}

/// Symmetric 2x2 tensor (curvature or moment).
struct SymTensor2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double trace() const { return xx + yy; }
};

using MomentTensor = SymTensor2;

/// Curvature kappa(v) = grad (x) grad v from the second derivatives of v.
inline SymTensor2 curvature(double vxx, double vxy, double vyy) { return {vxx, vxy, vyy}; }

/// Plate stress (moment) tensor M = D (kappa + nu (1-nu)^{-1} trace(kappa) I).
/// Expects lap == kappa.trace().
inline MomentTensor moment(const SymTensor2& kappa, double lap, const MaterialParams& m) {
    const double c = m.D * m.nu / (1.0 - m.nu);
    return {m.D * kappa.xx + c * lap, m.D * kappa.xy, m.D * kappa.yy + c * lap};
}

/// Contraction a . M . b.
inline double contract(const MomentTensor& M, Vec2 a, Vec2 b) {
    return a.x() * (M.xx * b.x() + M.xy * b.y()) + a.y() * (M.xy * b.x() + M.yy * b.y());
}

inline double moment_nn(const MomentTensor& M, Vec2 n) { return contract(M, n, n); }
inline double moment_nt(const MomentTensor& M, Vec2 n, Vec2 t) { return contract(M, n, t); }

/// Third derivatives of a scalar field at a point.
struct ThirdDerivatives {
    double xxx = 0.0;
    double xxy = 0.0;
    double xyy = 0.0;
    double yyy = 0.0;
};

/// Kirchhoff shear T = n . Div M + d_t M_nt on a straight boundary segment
/// with constant (n, t), t = (n2, -n1).
///
/// Both terms are linear in the third derivatives of v:
///   Div M          = D_std * grad(lap v)
///   grad M_xx      = D_std * (v_xxx + nu v_xyy, v_xxy + nu v_yyy)
///   grad M_yy      = D_std * (nu v_xxx + v_xyy, nu v_xxy + v_yyy)
///   grad M_xy      = D_std (1 - nu) * (v_xxy, v_xyy)
///   d_t M_nt       = t . [ n1 n2 (grad M_xx - grad M_yy) + (n2^2 - n1^2) grad M_xy ]
/// d_t M_nt differentiates the closed-form M_nt expression along the edge,
/// exact for bicubics.
inline double kirchhoff_shear(const ThirdDerivatives& d, Vec2 n, Vec2 t,
                              const MaterialParams& m) {
    const double Ds = m.D_std();
    const Vec2 div_m{Ds * (d.xxx + d.xyy), Ds * (d.xxy + d.yyy)};
    const Vec2 grad_mxx{Ds * (d.xxx + m.nu * d.xyy), Ds * (d.xxy + m.nu * d.yyy)};
    const Vec2 grad_myy{Ds * (m.nu * d.xxx + d.xyy), Ds * (m.nu * d.xxy + d.yyy)};
    const Vec2 grad_mxy{Ds * (1.0 - m.nu) * d.xxy, Ds * (1.0 - m.nu) * d.xyy};
    const Vec2 grad_mnt =
        n.x() * n.y() * (grad_mxx - grad_myy) + (n.y() * n.y() - n.x() * n.x()) * grad_mxy;
    return n.dot(div_m) + t.dot(grad_mnt);
}

} // namespace platesig
