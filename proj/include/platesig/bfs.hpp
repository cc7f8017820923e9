#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>

#include "platesig/dof_map.hpp"
#include "platesig/hermite.hpp"
#include "platesig/mesh.hpp"

namespace platesig {

/// Partial derivative slots returned by basis evaluation.
enum Deriv : int {
    d00 = 0, // value
    d10,     // d/dx
    d01,     // d/dy
    d20,     // d2/dx2
    d11,     // d2/dxdy
    d02,     // d2/dy2
    d30,     // d3/dx3
    d21,     // d3/dx2dy
    d12,     // d3/dxdy2
    d03,     // d3/dy3
    kDerivCount
};

/// All 16 BFS shape functions evaluated at one point: n[a][d] is derivative
/// slot d of shape function a. Local DOF ordering is corner-major with
/// corners (0,0), (1,0), (0,1), (1,1) and per-corner types
/// (value, d_x, d_y, d_xy), matching StructuredMesh::element_nodes.
struct BfsValues {
    std::array<std::array<double, kDerivCount>, kElemDofs> n;
};

/// Bogner-Fox-Schmit bicubic Hermite basis on an axis-aligned rectangle of
/// size hx x hy, evaluated at local coordinates (xi, eta) in [0,1]^2.
///
/// Shape functions are outer products of cubic Hermite polynomials; the
/// derivative-type functions carry factors hx, hy so the corresponding nodal
/// DOFs hold physical derivative values. Physical derivatives follow from
/// reference ones by the diagonal scaling 1/hx, 1/hy per differentiation
/// order. Third derivatives are analytic, not numerically differentiated.
inline BfsValues eval_basis(double hx, double hy, double xi, double eta) {
    const auto tx = HermiteBasis1D::eval(xi);
    const auto ty = HermiteBasis1D::eval(eta);
    const std::array<double, 4> ihx{1.0, 1.0 / hx, 1.0 / (hx * hx), 1.0 / (hx * hx * hx)};
    const std::array<double, 4> ihy{1.0, 1.0 / hy, 1.0 / (hy * hy), 1.0 / (hy * hy * hy)};
    // slot -> (x order, y order)
    static constexpr std::array<std::array<int, 2>, kDerivCount> kOrders{{
        {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3},
    }};
    BfsValues out;
    for (int corner = 0; corner < 4; ++corner) {
        const int cx = corner & 1;
        const int cy = corner >> 1;
        for (int type = 0; type < kDofsPerNode; ++type) {
            const bool slope_x = (type == 1 || type == 3);
            const bool slope_y = (type == 2 || type == 3);
            const int ix = slope_x ? HermiteBasis1D::slope_index(cx)
                                   : HermiteBasis1D::value_index(cx);
            const int iy = slope_y ? HermiteBasis1D::slope_index(cy)
                                   : HermiteBasis1D::value_index(cy);
            const double scale = (slope_x ? hx : 1.0) * (slope_y ? hy : 1.0);
            auto& row = out.n[kDofsPerNode * corner + type];
            for (int d = 0; d < kDerivCount; ++d) {
                const int a = kOrders[d][0];
                const int b = kOrders[d][1];
                row[d] = scale * tx[ix][a] * ihx[a] * ty[iy][b] * ihy[b];
            }
        }
    }
    return out;
}

/// Global DOF indices of element e, in local DOF order.
inline std::array<int, kElemDofs> element_dofs(const StructuredMesh& mesh, int e) {
    const auto nodes = mesh.element_nodes(e);
    std::array<int, kElemDofs> dofs;
    for (int c = 0; c < 4; ++c)
        for (int t = 0; t < kDofsPerNode; ++t)
            dofs[kDofsPerNode * c + t] = dof_index(nodes[c], static_cast<DofType>(t));
    return dofs;
}

/// Field value and derivatives through third order at a point.
struct FieldSample {
    double value = 0.0;
    Vec2 gradient = Vec2::Zero();
    double dxx = 0.0, dxy = 0.0, dyy = 0.0;
    double dxxx = 0.0, dxxy = 0.0, dxyy = 0.0, dyyy = 0.0;

    double deriv(Deriv d) const {
        switch (d) {
        case d00: return value;
        case d10: return gradient.x();
        case d01: return gradient.y();
        case d20: return dxx;
        case d11: return dxy;
        case d02: return dyy;
        case d30: return dxxx;
        case d21: return dxxy;
        case d12: return dxyy;
        case d03: return dyyy;
        default: return 0.0;
        }
    }
};

/// Evaluate the global field at local coordinates within a known element.
inline FieldSample eval_field_local(const StructuredMesh& mesh, const Eigen::VectorXd& u, int e,
                                    Vec2 local) {
    const BfsValues basis = eval_basis(mesh.hx(), mesh.hy(), local.x(), local.y());
    const auto dofs = element_dofs(mesh, e);
    std::array<double, kDerivCount> acc{};
    for (int a = 0; a < kElemDofs; ++a) {
        const double ua = u[dofs[a]];
        for (int d = 0; d < kDerivCount; ++d) acc[d] += ua * basis.n[a][d];
    }
    FieldSample s;
    s.value = acc[d00];
    s.gradient = {acc[d10], acc[d01]};
    s.dxx = acc[d20];
    s.dxy = acc[d11];
    s.dyy = acc[d02];
    s.dxxx = acc[d30];
    s.dxxy = acc[d21];
    s.dxyy = acc[d12];
    s.dyyy = acc[d03];
    return s;
}

/// Evaluate the global field at a physical point; the containing element is
/// chosen deterministically (lowest element index on inter-element lines).
/// Throws std::domain_error outside the domain.
inline FieldSample eval_field(const StructuredMesh& mesh, const Eigen::VectorXd& u, Vec2 p) {
    const int e = mesh.element_containing(p);
    return eval_field_local(mesh, u, e, mesh.local_coords(e, p));
}

/// Value, gradient and Hessian of the interpolated field; value and gradient
/// are single-valued across element interfaces, second derivatives may jump.
struct InterpSample {
    double value;
    Vec2 gradient;
    Eigen::Matrix2d hessian;
};

inline InterpSample interpolate(const StructuredMesh& mesh, const Eigen::VectorXd& u, Vec2 p) {
    const FieldSample s = eval_field(mesh, u, p);
    InterpSample out;
    out.value = s.value;
    out.gradient = s.gradient;
    out.hessian << s.dxx, s.dxy, s.dxy, s.dyy;
    return out;
}

/// Nodal data (u, u_x, u_y, u_xy) of a smooth function at one point.
using NodalData = std::array<double, 4>;

/// Global BFS interpolant of a smooth function given by its nodal data.
inline Eigen::VectorXd nodal_interpolant(const StructuredMesh& mesh,
                                         const std::function<NodalData(Vec2)>& f) {
    Eigen::VectorXd u(kDofsPerNode * mesh.node_count());
    for (int n = 0; n < mesh.node_count(); ++n) {
        const NodalData d = f(mesh.node_coord(n));
        for (int t = 0; t < kDofsPerNode; ++t) u[dof_index(n, static_cast<DofType>(t))] = d[t];
    }
    return u;
}

} // namespace platesig
