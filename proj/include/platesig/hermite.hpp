#pragma once

#include <array>

namespace platesig {

/// Cubic Hermite basis on [0,1].
///
/// Four polynomials dual to the endpoint functionals {value at 0, slope at 0,
/// value at 1, slope at 1}:
///
///   H00(s) = 1 - 3s^2 + 2s^3   (value at 0)
///   H01(s) = s - 2s^2 + s^3    (slope at 0)
///   H10(s) = 3s^2 - 2s^3       (value at 1)
///   H11(s) = -s^2 + s^3        (slope at 1)
///
/// eval() returns each polynomial with its derivatives through order 3;
/// cubics have constant third derivatives, evaluated analytically.
struct HermiteBasis1D {
    /// values[k][d] = d-th derivative of polynomial k at s,
    /// k in {H00, H01, H10, H11}, d in 0..3.
    using Table = std::array<std::array<double, 4>, 4>;

    static Table eval(double s) {
        const double s2 = s * s;
        const double s3 = s2 * s;
        Table t;
        // H00
        t[0] = {1.0 - 3.0 * s2 + 2.0 * s3, -6.0 * s + 6.0 * s2, -6.0 + 12.0 * s, 12.0};
        // H01
        t[1] = {s - 2.0 * s2 + s3, 1.0 - 4.0 * s + 3.0 * s2, -4.0 + 6.0 * s, 6.0};
        // H10
        t[2] = {3.0 * s2 - 2.0 * s3, 6.0 * s - 6.0 * s2, 6.0 - 12.0 * s, -12.0};
        // H11
        t[3] = {-s2 + s3, -2.0 * s + 3.0 * s2, -2.0 + 6.0 * s, 6.0};
        return t;
    }

    /// Index of the value polynomial for endpoint `end` (0 or 1).
    static constexpr int value_index(int end) { return end == 0 ? 0 : 2; }
    /// Index of the slope polynomial for endpoint `end` (0 or 1).
    static constexpr int slope_index(int end) { return end == 0 ? 1 : 3; }
};

} // namespace platesig
