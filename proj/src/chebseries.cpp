#include "melnlab/chebseries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace melnlab {

std::vector<double> ChebSeries::lobatto_nodes(double a, double b, int D) {
    std::vector<double> t(static_cast<std::size_t>(D) + 1);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int q = 0; q <= D; ++q) t[static_cast<std::size_t>(q)] = mid - half * std::cos(std::numbers::pi * q / D);
    t.front() = a;
    t.back() = b;
    return t;
}

ChebSeries ChebSeries::interpolate(double a, double b, const std::vector<double>& values) {
    const int D = static_cast<int>(values.size()) - 1;
    std::vector<double> c(static_cast<std::size_t>(D) + 1, 0.0);
    // Node q sits at s = -cos(πq/D) = cos(π(D-q)/D).
    for (int m = 0; m <= D; ++m) {
        double s = 0.0;
        for (int q = 0; q <= D; ++q) {
            const double w = (q == 0 || q == D) ? 0.5 : 1.0;
            s += w * values[static_cast<std::size_t>(q)] * std::cos(std::numbers::pi * m * (D - q) / D);
        }
        c[static_cast<std::size_t>(m)] = 2.0 * s / D;
    }
    c[0] *= 0.5;
    c[static_cast<std::size_t>(D)] *= 0.5;
    return ChebSeries(a, b, std::move(c));
}

double ChebSeries::eval(double t) const {
    const double s = (2.0 * t - a_ - b_) / (b_ - a_);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t m = c_.size(); m-- > 1;) {
        const double b0 = 2.0 * s * b1 - b2 + c_[m];
        b2 = b1;
        b1 = b0;
    }
    return s * b1 - b2 + c_[0];
}

ChebSeries ChebSeries::integral() const {
    const std::size_t D = c_.size() - 1;
    std::vector<double> C(D + 2, 0.0);
    auto c = [&](std::size_t m) { return m <= D ? c_[m] : 0.0; };
    const double scale = 0.5 * (b_ - a_);
    if (D + 2 > 1) C[1] = c(0) - 0.5 * c(2);
    for (std::size_t m = 2; m <= D + 1; ++m) C[m] = (c(m - 1) - c(m + 1)) / (2.0 * m);
    double at_minus1 = 0.0;
    for (std::size_t m = 1; m < C.size(); ++m) at_minus1 += (m % 2 ? -1.0 : 1.0) * C[m];
    C[0] = -at_minus1;
    for (double& v : C) v *= scale;
    return ChebSeries(a_, b_, std::move(C));
}

double ChebSeries::tail_ratio() const {
    double big = 0.0;
    for (double v : c_) big = std::max(big, std::abs(v));
    if (big == 0.0) return 0.0;
    const std::size_t n = c_.size();
    double tail = 0.0;
    for (std::size_t m = n >= 3 ? n - 3 : 0; m < n; ++m) tail = std::max(tail, std::abs(c_[m]));
    return tail / big;
}

}  // namespace melnlab
