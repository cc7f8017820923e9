#include <gtest/gtest.h>

#include <map>
#include <set>

#include "platesig/mesh.hpp"

using namespace platesig;

TEST(Mesh, SmallestMeshCounts) {
    const StructuredMesh m({0, 0}, {1, 1}, 1, 1);
    EXPECT_EQ(m.node_count(), 4);
    EXPECT_EQ(m.element_count(), 1);
    EXPECT_EQ(m.boundary_edges().size(), 4u);
    EXPECT_EQ(m.corners().size(), 4u);
}

TEST(Mesh, TwoByTwoCounts) {
    const StructuredMesh m({0, 0}, {1, 1}, 2, 2);
    EXPECT_EQ(m.node_count(), 9);
    EXPECT_EQ(m.element_count(), 4);
    EXPECT_EQ(m.boundary_edges().size(), 8u);
}

TEST(Mesh, MeshSizeDefinition) {
    const StructuredMesh m({0, 0}, {1, 1}, 16, 16);
    EXPECT_DOUBLE_EQ(m.h(), 0.0625);
    const StructuredMesh r({0, 0}, {2, 1}, 4, 4);
    EXPECT_DOUBLE_EQ(r.hx(), 0.5);
    EXPECT_DOUBLE_EQ(r.hy(), 0.25);
    EXPECT_DOUBLE_EQ(r.h(), 0.5);
}

TEST(Mesh, InvalidArguments) {
    EXPECT_THROW(StructuredMesh({0, 0}, {1, 1}, 0, 1), std::invalid_argument);
    EXPECT_THROW(StructuredMesh({0, 0}, {1, 1}, 1, 0), std::invalid_argument);
    EXPECT_THROW(StructuredMesh({0, 0}, {-1, 1}, 1, 1), std::invalid_argument);
    EXPECT_THROW(StructuredMesh({0, 0}, {1, 0}, 1, 1), std::invalid_argument);
}

TEST(Mesh, UniformRefinement) {
    const StructuredMesh m({0, 0}, {1, 1}, 4, 4);
    const StructuredMesh r = refine_uniform(m);
    EXPECT_EQ(r.nx(), 8);
    EXPECT_EQ(r.ny(), 8);
    EXPECT_DOUBLE_EQ(m.h(), 0.25);
    EXPECT_DOUBLE_EQ(r.h(), 0.125);

    const StructuredMesh rr = refine_uniform(r);
    EXPECT_EQ(rr.element_count(), 16 * m.element_count());

    // Parent node coordinates are a subset of child coordinates.
    std::set<std::pair<double, double>> child;
    for (int n = 0; n < r.node_count(); ++n) {
        const Vec2 p = r.node_coord(n);
        child.insert({p.x(), p.y()});
    }
    for (int n = 0; n < m.node_count(); ++n) {
        const Vec2 p = m.node_coord(n);
        EXPECT_TRUE(child.count({p.x(), p.y()})) << "missing parent node " << n;
    }
}

TEST(Mesh, ElementAreasSumToDomainArea) {
    const StructuredMesh m({0.3, -1.2}, {2.7, 1.9}, 7, 11);
    double area = 0.0;
    for (int e = 0; e < m.element_count(); ++e) area += m.hx() * m.hy();
    EXPECT_NEAR(area, 2.7 * 1.9, 1e-14 * 2.7 * 1.9);
}

TEST(Mesh, CornersAppearInExactlyTwoSides) {
    const StructuredMesh m({0, 0}, {1, 1}, 3, 2);
    ASSERT_EQ(m.corners().size(), 4u);
    std::map<int, std::set<Side>> corner_sides;
    for (const Corner& c : m.corners()) {
        for (int s = 0; s < 4; ++s) {
            const auto nodes = m.side_nodes(static_cast<Side>(s));
            if (std::find(nodes.begin(), nodes.end(), c.node) != nodes.end())
                corner_sides[c.node].insert(static_cast<Side>(s));
        }
    }
    for (const auto& [node, sides] : corner_sides) EXPECT_EQ(sides.size(), 2u) << node;
}

TEST(Mesh, BoundaryEdgeEnumerationIsCounterclockwise) {
    const StructuredMesh m({0, 0}, {1, 1}, 2, 2);
    const auto& edges = m.boundary_edges();
    ASSERT_EQ(edges.size(), 8u);
    // Edges chain head to tail around the boundary.
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const Vec2 end = edges[e].point(1.0);
        const Vec2 next_start = edges[(e + 1) % edges.size()].start;
        EXPECT_LT((end - next_start).norm(), 1e-14);
    }
    EXPECT_EQ(edges[0].side, Side::bottom);
    EXPECT_EQ(edges[2].side, Side::right);
    EXPECT_EQ(edges[4].side, Side::top);
    EXPECT_EQ(edges[6].side, Side::left);
}

TEST(Mesh, BoundaryQuadratureWeightsAndFrames) {
    const StructuredMesh m({0, 0}, {1, 1}, 2, 3);
    for (int q = 2; q <= 4; ++q) {
        const auto bq = boundary_quadrature(m, 1, q);
        double total = 0.0;
        std::map<int, double> per_edge;
        for (const auto& p : bq) {
            total += p.weight;
            per_edge[p.edge] += p.weight;
        }
        EXPECT_NEAR(total, 4.0, 1e-13) << "perimeter with q=" << q;
        for (const auto& [e, w] : per_edge) {
            const double len = m.boundary_edges()[e].length;
            EXPECT_NEAR(w, len, 1e-14 * len);
        }
    }
    // Tangent convention t = (n2, -n1).
    for (const auto& p : boundary_quadrature(m, 2, 3)) {
        EXPECT_NEAR(p.normal.norm(), 1.0, 1e-15);
        EXPECT_NEAR(p.tangent.x(), p.normal.y(), 1e-15);
        EXPECT_NEAR(p.tangent.y(), -p.normal.x(), 1e-15);
        const BoundaryEdge& be = m.boundary_edges()[p.edge];
        if (be.side == Side::right) {
            EXPECT_EQ(p.normal, Vec2(1, 0));
            EXPECT_EQ(p.tangent, Vec2(0, -1));
        }
        if (be.side == Side::bottom) {
            EXPECT_EQ(p.normal, Vec2(0, -1));
            EXPECT_EQ(p.tangent, Vec2(-1, 0));
        }
    }
}

TEST(Mesh, SubdividedQuadratureStillSumsToEdgeLength) {
    const StructuredMesh m({0, 0}, {2, 1}, 3, 4);
    const auto bq = boundary_quadrature(m, 4, 4);
    std::map<int, double> per_edge;
    for (const auto& p : bq) per_edge[p.edge] += p.weight;
    for (const auto& [e, w] : per_edge) {
        const double len = m.boundary_edges()[e].length;
        EXPECT_NEAR(w, len, 1e-14 * len);
    }
    EXPECT_EQ(bq.size(), m.boundary_edges().size() * 16);
}

TEST(Mesh, ElementContainingWithTieRule) {
    const StructuredMesh m({0, 0}, {1, 1}, 4, 4);
    EXPECT_EQ(m.element_containing({0.1, 0.1}), 0);
    EXPECT_EQ(m.element_containing({0.9, 0.9}), 15);
    // On the interior grid line x = 0.25 the lower element wins.
    EXPECT_EQ(m.element_containing({0.25, 0.1}), 0);
    EXPECT_EQ(m.element_containing({0.1, 0.25}), 0);
    // Domain corners and edges stay inside.
    EXPECT_EQ(m.element_containing({1.0, 1.0}), 15);
    EXPECT_EQ(m.element_containing({0.0, 0.0}), 0);
    EXPECT_THROW(m.element_containing({1.5, 0.5}), std::domain_error);
    EXPECT_THROW(m.element_containing({0.5, -0.5}), std::domain_error);
}

TEST(Mesh, CornerAdjacency) {
    const StructuredMesh m({0, 0}, {1, 1}, 3, 3);
    const auto& corners = m.corners();
    EXPECT_EQ(corners[0].side_in, Side::left);
    EXPECT_EQ(corners[0].side_out, Side::bottom);
    EXPECT_EQ(corners[1].side_in, Side::bottom);
    EXPECT_EQ(corners[1].side_out, Side::right);
    EXPECT_EQ(corners[2].side_in, Side::right);
    EXPECT_EQ(corners[2].side_out, Side::top);
    EXPECT_EQ(corners[3].side_in, Side::top);
    EXPECT_EQ(corners[3].side_out, Side::left);
    for (const Corner& c : m.corners()) {
        EXPECT_EQ(m.element_containing(c.position), c.element);
    }
}
