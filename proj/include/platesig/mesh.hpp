#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "platesig/quadrature.hpp"

namespace platesig {

using Vec2 = Eigen::Vector2d;

/// Boundary sides of the rectangle, in counterclockwise traversal order.
enum class Side : int { bottom = 0, right = 1, top = 2, left = 3 };

inline const char* side_name(Side s) {
    switch (s) {
    case Side::bottom: return "bottom";
    case Side::right: return "right";
    case Side::top: return "top";
    case Side::left: return "left";
    }
    return "?";
}

/// Outward unit normal of a side.
inline Vec2 side_normal(Side s) {
    switch (s) {
    case Side::bottom: return {0, -1};
    case Side::right: return {1, 0};
    case Side::top: return {0, 1};
    default: return {-1, 0};
    }
}

/// Boundary tangent t = (n2, -n1).
inline Vec2 side_tangent(Side s) {
    const Vec2 n = side_normal(s);
    return {n.y(), -n.x()};
}

/// Per-side boundary condition tag for the plate problem.
enum class SideBC : int { signorini, simply_supported, clamped, free_edge };

/// Boundary condition assignment: one tag per side plus the (constant) gap g
/// shared by all Signorini sides.
struct BoundarySpec {
    std::array<SideBC, 4> side{SideBC::signorini, SideBC::signorini, SideBC::signorini,
                               SideBC::signorini};
    double gap = 0.0;

    SideBC tag(Side s) const { return side[static_cast<int>(s)]; }
    void set(Side s, SideBC bc) { side[static_cast<int>(s)] = bc; }

    bool any_signorini() const {
        for (auto t : side)
            if (t == SideBC::signorini) return true;
        return false;
    }

    void validate() const {
        if (!std::isfinite(gap)) throw std::invalid_argument("boundary spec: gap must be finite");
    }
};

/// One element side lying on the domain boundary.
///
/// Edges are enumerated counterclockwise: bottom side left to right, right
/// side upward, top side right to left, left side downward. `start` is the
/// first endpoint in that orientation and `direction` the unit traversal
/// vector, so points on the edge are start + r*length*direction, r in [0,1].
///
/// `normal` is the outward unit normal and `tangent` follows the convention
/// t = (n2, -n1); note the tangent is the clockwise orientation and need not
/// coincide with `direction`.
struct BoundaryEdge {
    Side side;
    int element;     ///< adjacent element index
    Vec2 start;
    Vec2 direction;
    double length;
    Vec2 normal;
    Vec2 tangent;

    Vec2 point(double r) const { return start + r * length * direction; }
    Vec2 midpoint() const { return point(0.5); }
};

/// Corner of the rectangle with its two adjacent sides in counterclockwise
/// order: `side_in` arrives at the corner, `side_out` leaves it.
struct Corner {
    int node;
    Vec2 position;
    Side side_in;
    Side side_out;
    int element;     ///< the unique element containing the corner
};

/// Axis-aligned structured rectangular mesh of a rectangle domain.
///
/// Nodes and elements are ordered lexicographically with x fastest; these
/// orderings are fixed so outputs are reproducible across runs.
class StructuredMesh {
public:
    StructuredMesh(Vec2 origin, Vec2 extents, int nx, int ny)
        : origin_(origin), extents_(extents), nx_(nx), ny_(ny) {
        if (nx < 1 || ny < 1)
            throw std::invalid_argument("mesh: element counts must be >= 1");
        if (!(extents.x() > 0.0) || !(extents.y() > 0.0))
            throw std::invalid_argument("mesh: extents must be positive");
        hx_ = extents_.x() / nx_;
        hy_ = extents_.y() / ny_;
        build_boundary();
    }

    Vec2 origin() const { return origin_; }
    Vec2 extents() const { return extents_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    /// Global mesh size h = max(hx, hy).
    double h() const { return std::max(hx_, hy_); }

    int node_count() const { return (nx_ + 1) * (ny_ + 1); }
    int element_count() const { return nx_ * ny_; }

    int node_index(int i, int j) const { return j * (nx_ + 1) + i; }
    Vec2 node_coord(int node) const {
        const int i = node % (nx_ + 1);
        const int j = node / (nx_ + 1);
        return {origin_.x() + i * hx_, origin_.y() + j * hy_};
    }

    int element_index(int i, int j) const { return j * nx_ + i; }
    /// Corner nodes of element e in local order (0,0), (1,0), (0,1), (1,1).
    std::array<int, 4> element_nodes(int e) const {
        const int i = e % nx_;
        const int j = e / nx_;
        const int n00 = node_index(i, j);
        return {n00, n00 + 1, n00 + nx_ + 1, n00 + nx_ + 2};
    }
    /// Lower-left corner coordinate of element e.
    Vec2 element_origin(int e) const {
        const int i = e % nx_;
        const int j = e / nx_;
        return {origin_.x() + i * hx_, origin_.y() + j * hy_};
    }

    const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }
    const std::array<Corner, 4>& corners() const { return corners_; }

    /// Element containing (x, y); on inter-element lines the lowest element
    /// index wins. Throws std::domain_error for points outside the domain.
    int element_containing(Vec2 p) const {
        const int i = containing_1d(p.x(), origin_.x(), hx_, nx_, extents_.x(), "x");
        const int j = containing_1d(p.y(), origin_.y(), hy_, ny_, extents_.y(), "y");
        return element_index(i, j);
    }

    /// Local coordinates (xi, eta) in [0,1]^2 of p within element e.
    Vec2 local_coords(int e, Vec2 p) const {
        const Vec2 o = element_origin(e);
        return {(p.x() - o.x()) / hx_, (p.y() - o.y()) / hy_};
    }

    bool contains(Vec2 p) const {
        const double tolx = 1e-12 * (extents_.x() + std::abs(origin_.x()));
        const double toly = 1e-12 * (extents_.y() + std::abs(origin_.y()));
        return p.x() >= origin_.x() - tolx && p.x() <= origin_.x() + extents_.x() + tolx &&
               p.y() >= origin_.y() - toly && p.y() <= origin_.y() + extents_.y() + toly;
    }

    /// Nodes lying on a given side (corners included on both adjacent sides).
    std::vector<int> side_nodes(Side s) const {
        std::vector<int> out;
        switch (s) {
        case Side::bottom:
            for (int i = 0; i <= nx_; ++i) out.push_back(node_index(i, 0));
            break;
        case Side::right:
            for (int j = 0; j <= ny_; ++j) out.push_back(node_index(nx_, j));
            break;
        case Side::top:
            for (int i = 0; i <= nx_; ++i) out.push_back(node_index(i, ny_));
            break;
        case Side::left:
            for (int j = 0; j <= ny_; ++j) out.push_back(node_index(0, j));
            break;
        }
        return out;
    }

private:
    static int containing_1d(double x, double o, double h, int n, double L, const char* axis) {
        const double tol = 1e-12 * (L + std::abs(o));
        if (x < o - tol || x > o + L + tol) {
            throw std::domain_error(std::string("point outside domain in ") + axis);
        }
        double t = (x - o) / h;
        int i = static_cast<int>(std::floor(t));
        if (i < 0) i = 0;
        if (i > n - 1) i = n - 1;
        // Tie on an interior grid line: take the lower element.
        if (i >= 1 && x == o + i * h) i -= 1;
        return i;
    }

    void build_boundary() {
        boundary_edges_.clear();
        boundary_edges_.reserve(2 * (nx_ + ny_));
        const double x0 = origin_.x(), y0 = origin_.y();
        const double x1 = x0 + extents_.x(), y1 = y0 + extents_.y();
        // bottom, left to right
        for (int i = 0; i < nx_; ++i) {
            boundary_edges_.push_back({Side::bottom, element_index(i, 0),
                                       Vec2(x0 + i * hx_, y0), Vec2(1, 0), hx_, Vec2(0, -1),
                                       Vec2(-1, 0)});
        }
        // right, upward
        for (int j = 0; j < ny_; ++j) {
            boundary_edges_.push_back({Side::right, element_index(nx_ - 1, j),
                                       Vec2(x1, y0 + j * hy_), Vec2(0, 1), hy_, Vec2(1, 0),
                                       Vec2(0, -1)});
        }
        // top, right to left
        for (int i = 0; i < nx_; ++i) {
            boundary_edges_.push_back({Side::top, element_index(nx_ - 1 - i, ny_ - 1),
                                       Vec2(x1 - i * hx_, y1), Vec2(-1, 0), hx_, Vec2(0, 1),
                                       Vec2(1, 0)});
        }
        // left, downward
        for (int j = 0; j < ny_; ++j) {
            boundary_edges_.push_back({Side::left, element_index(0, ny_ - 1 - j),
                                       Vec2(x0, y1 - j * hy_), Vec2(0, -1), hy_, Vec2(-1, 0),
                                       Vec2(0, 1)});
        }
        corners_ = {
            Corner{node_index(0, 0), Vec2(x0, y0), Side::left, Side::bottom, element_index(0, 0)},
            Corner{node_index(nx_, 0), Vec2(x1, y0), Side::bottom, Side::right,
                   element_index(nx_ - 1, 0)},
            Corner{node_index(nx_, ny_), Vec2(x1, y1), Side::right, Side::top,
                   element_index(nx_ - 1, ny_ - 1)},
            Corner{node_index(0, ny_), Vec2(x0, y1), Side::top, Side::left,
                   element_index(0, ny_ - 1)},
        };
    }

    Vec2 origin_;
    Vec2 extents_;
    int nx_, ny_;
    double hx_, hy_;
    std::vector<BoundaryEdge> boundary_edges_;
    std::array<Corner, 4> corners_;
};

inline StructuredMesh build_mesh(Vec2 origin, Vec2 extents, int nx, int ny) {
    return StructuredMesh(origin, extents, nx, ny);
}

inline StructuredMesh refine_uniform(const StructuredMesh& mesh) {
    return StructuredMesh(mesh.origin(), mesh.extents(), 2 * mesh.nx(), 2 * mesh.ny());
}

/// Quadrature point on the boundary. `edge` indexes mesh.boundary_edges().
struct BoundaryQuadPoint {
    int edge;
    Vec2 position;
    double weight;
    Vec2 normal;
    Vec2 tangent;
};

/// Composite Gauss quadrature over every boundary edge: m subintervals of
/// q points each, ordered along the counterclockwise traversal. Weights per
/// edge sum to the edge length.
inline std::vector<BoundaryQuadPoint> boundary_quadrature(const StructuredMesh& mesh,
                                                          int subdivisions, int points) {
    if (subdivisions < 1) throw std::invalid_argument("boundary quadrature: subdivisions >= 1");
    if (points < 2 || points > 4)
        throw std::invalid_argument("boundary quadrature: points per interval must be in {2,3,4}");
    const auto rule = composite_gauss_unit(subdivisions, points);
    std::vector<BoundaryQuadPoint> out;
    out.reserve(mesh.boundary_edges().size() * rule.size());
    for (int e = 0; e < static_cast<int>(mesh.boundary_edges().size()); ++e) {
        const auto& be = mesh.boundary_edges()[e];
        for (const auto& gp : rule) {
            out.push_back({e, be.point(gp.x), gp.w * be.length, be.normal, be.tangent});
        }
    }
    return out;
}

} // namespace platesig
