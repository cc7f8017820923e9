#include <gtest/gtest.h>

#include <random>

#include "platesig/bfs.hpp"
#include "platesig/hermite.hpp"
#include "test_util.hpp"

using namespace platesig;
using testutil::Poly2;

TEST(Hermite, EndpointConditions) {
    const auto t0 = HermiteBasis1D::eval(0.0);
    const auto t1 = HermiteBasis1D::eval(1.0);
    // H00: value 1 at 0, zero value/slope elsewhere.
    EXPECT_DOUBLE_EQ(t0[0][0], 1.0);
    EXPECT_DOUBLE_EQ(t0[0][1], 0.0);
    EXPECT_DOUBLE_EQ(t1[0][0], 0.0);
    EXPECT_DOUBLE_EQ(t1[0][1], 0.0);
    // H01: slope 1 at 0.
    EXPECT_DOUBLE_EQ(t0[1][0], 0.0);
    EXPECT_DOUBLE_EQ(t0[1][1], 1.0);
    EXPECT_DOUBLE_EQ(t1[1][0], 0.0);
    EXPECT_DOUBLE_EQ(t1[1][1], 0.0);
    // Mirror conditions at s = 1.
    EXPECT_DOUBLE_EQ(t1[2][0], 1.0);
    EXPECT_DOUBLE_EQ(t1[2][1], 0.0);
    EXPECT_DOUBLE_EQ(t0[2][0], 0.0);
    EXPECT_DOUBLE_EQ(t0[2][1], 0.0);
    EXPECT_DOUBLE_EQ(t1[3][0], 0.0);
    EXPECT_DOUBLE_EQ(t1[3][1], 1.0);
    EXPECT_DOUBLE_EQ(t0[3][0], 0.0);
    EXPECT_DOUBLE_EQ(t0[3][1], 0.0);
}

TEST(Bfs, KroneckerProperty) {
    const double hx = 0.3, hy = 0.7;
    for (int corner = 0; corner < 4; ++corner) {
        const double xi = corner & 1 ? 1.0 : 0.0;
        const double eta = corner >> 1 ? 1.0 : 0.0;
        const BfsValues basis = eval_basis(hx, hy, xi, eta);
        for (int a = 0; a < kElemDofs; ++a) {
            // DOF functionals at this corner: value, d_x, d_y, d_xy.
            const std::array<double, 4> functionals{basis.n[a][d00], basis.n[a][d10],
                                                    basis.n[a][d01], basis.n[a][d11]};
            for (int t = 0; t < 4; ++t) {
                const double expected = (a == kDofsPerNode * corner + t) ? 1.0 : 0.0;
                EXPECT_NEAR(functionals[t], expected, 1e-13)
                    << "corner " << corner << " type " << t << " shape " << a;
            }
        }
    }
}

TEST(Bfs, ValueFunctionsPartitionUnityAndCornerKronecker) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const double xi = dist(rng), eta = dist(rng);
        const BfsValues basis = eval_basis(0.42, 1.3, xi, eta);
        double value_sum = 0.0;
        for (int c = 0; c < 4; ++c) value_sum += basis.n[kDofsPerNode * c][d00];
        EXPECT_NEAR(value_sum, 1.0, 1e-14);
        // Derivative-type shape functions vanish (in value) at every node.
        for (int c = 0; c < 4; ++c) {
            const double cx = c & 1 ? 1.0 : 0.0;
            const double cy = c >> 1 ? 1.0 : 0.0;
            const BfsValues at_node = eval_basis(0.42, 1.3, cx, cy);
            for (int cc = 0; cc < 4; ++cc)
                for (int t = 1; t < 4; ++t)
                    EXPECT_NEAR(at_node.n[kDofsPerNode * cc + t][d00], 0.0, 1e-14);
        }
    }
}

TEST(Bfs, CubicMonomialInterpolationOnOneElement) {
    const StructuredMesh mesh({0, 0}, {1, 1}, 1, 1);
    Poly2 p;
    p.c[3][3] = 1.0; // x^3 y^3
    const Eigen::VectorXd u = testutil::interpolate_poly(mesh, p);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const Vec2 q{(i + 0.5) / 5.0, (j + 0.5) / 5.0};
            EXPECT_NEAR(eval_field(mesh, u, q).value, p(q.x(), q.y()), 1e-12);
        }
    }
}

TEST(Bfs, ReferenceDerivativesMatchFiniteDifferences) {
    // Derivative ladder on a unit element: each slot of order k+1 is the
    // central difference of the matching order-k slot.
    struct Step {
        Deriv from, to;
        bool in_x;
    };
    const std::array<Step, 9> steps{{{d00, d10, true},
                                     {d00, d01, false},
                                     {d10, d20, true},
                                     {d10, d11, false},
                                     {d01, d02, false},
                                     {d20, d30, true},
                                     {d20, d21, false},
                                     {d11, d12, false},
                                     {d02, d03, false}}};
    const double h = 1e-5;
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(0.1, 0.9);
    for (int k = 0; k < 10; ++k) {
        const double xi = dist(rng), eta = dist(rng);
        const BfsValues basis = eval_basis(1.0, 1.0, xi, eta);
        for (const Step& st : steps) {
            const BfsValues plus =
                eval_basis(1.0, 1.0, xi + (st.in_x ? h : 0.0), eta + (st.in_x ? 0.0 : h));
            const BfsValues minus =
                eval_basis(1.0, 1.0, xi - (st.in_x ? h : 0.0), eta - (st.in_x ? 0.0 : h));
            for (int a = 0; a < kElemDofs; ++a) {
                const double fd = (plus.n[a][st.from] - minus.n[a][st.from]) / (2.0 * h);
                const double exact = basis.n[a][st.to];
                const double scale = std::max(1.0, std::abs(exact));
                EXPECT_NEAR(fd, exact, 1e-6 * scale)
                    << "slot " << st.to << " shape " << a << " at (" << xi << "," << eta << ")";
            }
        }
    }
}

TEST(Bfs, GlobalQ3InterpolationIsExact) {
    const StructuredMesh mesh({0, 0}, {1, 1}, 4, 4);
    std::mt19937 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const Poly2 p = Poly2::random(rng);
        const Eigen::VectorXd u = testutil::interpolate_poly(mesh, p);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (int k = 0; k < 40; ++k) {
            const Vec2 q{dist(rng), dist(rng)};
            const FieldSample s = eval_field(mesh, u, q);
            EXPECT_NEAR(s.value, p(q.x(), q.y()), 1e-12);
            EXPECT_NEAR(s.gradient.x(), p.deriv(1, 0, q.x(), q.y()), 1e-12);
            EXPECT_NEAR(s.gradient.y(), p.deriv(0, 1, q.x(), q.y()), 1e-12);
            EXPECT_NEAR(s.dxx, p.deriv(2, 0, q.x(), q.y()), 1e-11);
            EXPECT_NEAR(s.dxy, p.deriv(1, 1, q.x(), q.y()), 1e-11);
            EXPECT_NEAR(s.dyy, p.deriv(0, 2, q.x(), q.y()), 1e-11);
        }
    }
}

TEST(Bfs, InterpolateConstantAndLinearFields) {
    const StructuredMesh mesh({0, 0}, {1, 1}, 3, 3);
    const Eigen::VectorXd one = nodal_interpolant(mesh, [](Vec2) {
        return NodalData{1.0, 0.0, 0.0, 0.0};
    });
    const Eigen::VectorXd xfield = nodal_interpolant(mesh, [](Vec2 p) {
        return NodalData{p.x(), 1.0, 0.0, 0.0};
    });
    for (const Vec2 q : {Vec2{0.13, 0.77}, Vec2{0.5, 0.5}, Vec2{0.99, 0.01}}) {
        const InterpSample s1 = interpolate(mesh, one, q);
        EXPECT_NEAR(s1.value, 1.0, 1e-14);
        EXPECT_NEAR(s1.gradient.norm(), 0.0, 1e-13);
        const InterpSample sx = interpolate(mesh, xfield, q);
        EXPECT_NEAR(sx.value, q.x(), 1e-14);
        EXPECT_NEAR(sx.gradient.x(), 1.0, 1e-13);
        EXPECT_NEAR(sx.gradient.y(), 0.0, 1e-13);
    }
}

TEST(Bfs, C1ContinuityAcrossInteriorEdges) {
    const StructuredMesh mesh({0, 0}, {1, 1}, 2, 2);
    std::mt19937 rng(29);
    const Eigen::VectorXd u = testutil::random_dof_vector(mesh, rng);
    // Vertical interior edge x = 0.5 between elements 0 and 1.
    for (double y : {0.1, 0.27, 0.33}) {
        const Vec2 p{0.5, y};
        const FieldSample left = eval_field_local(mesh, u, 0, mesh.local_coords(0, p));
        const FieldSample right = eval_field_local(mesh, u, 1, mesh.local_coords(1, p));
        EXPECT_NEAR(left.value, right.value, 1e-13);
        EXPECT_NEAR(left.gradient.x(), right.gradient.x(), 1e-12);
        EXPECT_NEAR(left.gradient.y(), right.gradient.y(), 1e-12);
    }
    // Horizontal interior edge y = 0.5 between elements 0 and 2.
    for (double x : {0.12, 0.4, 0.48}) {
        const Vec2 p{x, 0.5};
        const FieldSample below = eval_field_local(mesh, u, 0, mesh.local_coords(0, p));
        const FieldSample above = eval_field_local(mesh, u, 2, mesh.local_coords(2, p));
        EXPECT_NEAR(below.value, above.value, 1e-13);
        EXPECT_NEAR(below.gradient.x(), above.gradient.x(), 1e-12);
        EXPECT_NEAR(below.gradient.y(), above.gradient.y(), 1e-12);
    }
}

TEST(Bfs, OutOfDomainEvaluationThrows) {
    const StructuredMesh mesh({0, 0}, {1, 1}, 2, 2);
    const Eigen::VectorXd u = Eigen::VectorXd::Zero(kDofsPerNode * mesh.node_count());
    EXPECT_THROW(interpolate(mesh, u, {1.5, 0.5}), std::domain_error);
    EXPECT_THROW(interpolate(mesh, u, {0.5, -0.1}), std::domain_error);
}
