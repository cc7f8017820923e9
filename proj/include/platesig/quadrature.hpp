#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace platesig {

/// One-dimensional Gauss-Legendre point on the reference interval [0,1].
struct GaussPoint1D {
    double x;
    double w;
};

namespace detail {

// Nodes/weights on [-1,1], mapped to [0,1] below.
inline constexpr std::array<GaussPoint1D, 2> kGauss2{{
    {-0.57735026918962576451, 1.0},
    {0.57735026918962576451, 1.0},
}};

inline constexpr std::array<GaussPoint1D, 3> kGauss3{{
    {-0.77459666924148337704, 5.0 / 9.0},
    {0.0, 8.0 / 9.0},
    {0.77459666924148337704, 5.0 / 9.0},
}};

inline constexpr std::array<GaussPoint1D, 4> kGauss4{{
    {-0.86113631159405257522, 0.34785484513745385737},
    {-0.33998104358485626480, 0.65214515486254614263},
    {0.33998104358485626480, 0.65214515486254614263},
    {0.86113631159405257522, 0.34785484513745385737},
}};

inline constexpr std::array<GaussPoint1D, 5> kGauss5{{
    {-0.90617984593866399280, 0.23692688505618908751},
    {-0.53846931010568309104, 0.47862867049936646804},
    {0.0, 0.56888888888888888889},
    {0.53846931010568309104, 0.47862867049936646804},
    {0.90617984593866399280, 0.23692688505618908751},
}};

} // namespace detail

/// Gauss-Legendre rule with `n` points on [0,1], n in {2,3,4,5}.
/// Exact for polynomials of degree <= 2n-1.
inline std::span<const GaussPoint1D> gauss_rule_reference(int n) {
    switch (n) {
    case 2: return detail::kGauss2;
    case 3: return detail::kGauss3;
    case 4: return detail::kGauss4;
    case 5: return detail::kGauss5;
    default: throw std::invalid_argument("gauss rule: point count must be in {2,3,4,5}");
    }
}

/// Rule mapped to [0,1]: x01 = (x+1)/2, w01 = w/2.
inline std::vector<GaussPoint1D> gauss_rule_unit(int n) {
    auto ref = gauss_rule_reference(n);
    std::vector<GaussPoint1D> out(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        out[i] = {0.5 * (ref[i].x + 1.0), 0.5 * ref[i].w};
    }
    return out;
}

/// Composite rule on [0,1]: `m` equal subintervals, `q` Gauss points each.
inline std::vector<GaussPoint1D> composite_gauss_unit(int m, int q) {
    if (m < 1) throw std::invalid_argument("composite gauss: subdivisions must be >= 1");
    auto base = gauss_rule_unit(q);
    std::vector<GaussPoint1D> out;
    out.reserve(static_cast<std::size_t>(m) * base.size());
    const double dm = 1.0 / m;
    for (int k = 0; k < m; ++k) {
        for (const auto& gp : base) {
            out.push_back({(k + gp.x) * dm, gp.w * dm});
        }
    }
    return out;
}

} // namespace platesig
