#pragma once

#include <vector>

namespace melnlab {

// Chebyshev expansion sum_m c_m T_m(s) on [a, b], s = (2t - a - b)/(b - a).
class ChebSeries {
public:
    ChebSeries() = default;
    ChebSeries(double a, double b, std::vector<double> c) : a_(a), b_(b), c_(std::move(c)) {}

    // Chebyshev–Lobatto nodes ordered from a to b (D + 1 points).
    static std::vector<double> lobatto_nodes(double a, double b, int D);
    // Interpolant through values at lobatto_nodes(a, b, D).
    static ChebSeries interpolate(double a, double b, const std::vector<double>& values);

    double eval(double t) const;
    // Antiderivative vanishing at a.
    ChebSeries integral() const;
    // Largest of the last three coefficients relative to the largest coefficient.
    double tail_ratio() const;

    double a() const { return a_; }
    double b() const { return b_; }
    const std::vector<double>& coeffs() const { return c_; }

private:
    double a_ = -1.0, b_ = 1.0;
    std::vector<double> c_;
};

}  // namespace melnlab
