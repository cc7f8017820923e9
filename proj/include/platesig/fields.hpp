#pragma once

#include <Eigen/Dense>

#include "platesig/bfs.hpp"
#include "platesig/mesh.hpp"
#include "platesig/plate.hpp"

namespace platesig {

inline ThirdDerivatives third_derivatives(const FieldSample& s) {
    return {s.dxxx, s.dxxy, s.dxyy, s.dyyy};
}

inline MomentTensor moment_of(const FieldSample& s, const MaterialParams& m) {
    const SymTensor2 kappa = curvature(s.dxx, s.dxy, s.dyy);
    return moment(kappa, kappa.trace(), m);
}

/// Kirchhoff shear of the discrete field at a boundary point, evaluated from
/// the given adjacent element.
inline double shear_at(const StructuredMesh& mesh, const Eigen::VectorXd& u, int element,
                       Vec2 point, Vec2 n, Vec2 t, const MaterialParams& m) {
    const FieldSample s = eval_field_local(mesh, u, element, mesh.local_coords(element, point));
    return kirchhoff_shear(third_derivatives(s), n, t, m);
}

/// Twisting-moment jump M_nt^- - M_nt^+ at a corner: M_nt from the incoming
/// side minus M_nt from the outgoing side, both evaluated in the corner
/// element with the counterclockwise traversal fixing which side is which.
inline double corner_moment_jump(const StructuredMesh& mesh, const Eigen::VectorXd& u,
                                 const Corner& corner, const MaterialParams& m) {
    const FieldSample s =
        eval_field_local(mesh, u, corner.element, mesh.local_coords(corner.element, corner.position));
    const MomentTensor M = moment_of(s, m);
    const double mnt_in = moment_nt(M, side_normal(corner.side_in), side_tangent(corner.side_in));
    const double mnt_out =
        moment_nt(M, side_normal(corner.side_out), side_tangent(corner.side_out));
    return mnt_in - mnt_out;
}

} // namespace platesig
