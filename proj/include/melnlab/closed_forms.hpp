#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "melnlab/cheb_kit.hpp"
#include "melnlab/core_model.hpp"

namespace melnlab {

enum class ParityCase { odd, even };

// First-order coefficient vector: v0..v2 for n odd, v0..v3 for n even.
struct VCoefficients {
    ParityCase parity = ParityCase::odd;
    std::array<double, 4> v{0, 0, 0, 0};

    std::size_t size() const { return parity == ParityCase::odd ? 3 : 4; }
};

ParityCase parity_of(int n);
VCoefficients v_coefficients(const OrderCoefficients& c, int n);
VCoefficients v_coefficients(const SystemConfig& cfg);
// Linear map from the 12 flat order coefficients to v (rows 0..size-1).
Eigen::MatrixXd v_map(int n);
// Order-one config whose v-vector equals the target; other coefficients zero.
SystemConfig config_from_v(const VCoefficients& v, int n, int k = 1);

double m1_closed(const VCoefficients& v, int n, double r);
double m1_closed(const SystemConfig& cfg, double r);

// x = r cos θ1(r), the positive root of x² + x^{2n} = r², and its inverse.
double cov_x_of_r(double r, int n);
double cov_r_of_x(double x, int n);
// dr/dx along the section.
double cov_dr_dx(double x, int n);

// Numerator q1^k (n = 2k+1) or q2^k (n = 2k) and the positive denominator with M1(r(x)) = q / den.
double q_poly(const VCoefficients& v, int n, double x);
double q_poly(const SystemConfig& cfg, double x);
double q_denominator(int n, double x);
// Numerator basis functions in v order: q = sum_j v_j basis_j (for n = 1: {1, 2x, 1}).
std::vector<std::function<double(double)>> q_basis(int n);

// Numerator span declared for M_l, with the positive denominator it multiplies.
enum class SpanVariant { standard, f7_divided };
struct DeclaredSpan {
    int n = 1, ell = 1;
    SpanVariant variant = SpanVariant::standard;
    std::string family;
    std::vector<std::string> basis;
    std::vector<std::function<double(double)>> functions;
    std::function<double(double)> denominator;
    bool jacobian = false;  // numerator of the section-coordinate displacement dx/dr * M_l
};

DeclaredSpan declared_span(int n, int ell, SpanVariant variant = SpanVariant::standard);

struct SpanSample {
    double x = 0.0;
    double m = 0.0;  // M_l(r(x)), displacement in r
};

struct SpanFit {
    std::string family;
    std::vector<std::string> basis;
    std::vector<double> coefficients;
    double residual = 0.0;  // relative L2 over the samples
    double condition = 0.0;
    int rank = 0;
    bool rank_deficient = false;
    std::vector<double> target, fitted;  // numerator values per sample
};

SpanFit fit_to_span(const std::vector<SpanSample>& samples, int n, int ell, SpanVariant variant = SpanVariant::standard);
// Log-spaced x-grid sampling of M_l from the recursion.
std::vector<SpanSample> sample_melnikov(const SystemConfig& cfg, int ell, double x_lo, double x_hi, int count);
// Rows "x,M,fitted,residual"; M and fitted are numerators divided back by the denominator factor.
std::string span_fit_csv(const std::vector<SpanSample>& samples, const SpanFit& fit, int n, int ell,
                         SpanVariant variant = SpanVariant::standard);

struct VanishingOptions {
    int samples = 24;
    double x_lo = 0.3, x_hi = 2.0;
    int restarts = 6;
    double tol = 1e-10;  // max |M_i| / max |M_ell| over the grid, i < ell
    std::uint64_t seed = 1;
};

struct VanishingConfig {
    SystemConfig config;
    int ell = 1;
    std::vector<double> lower_residuals;  // sup |M_i| on the grid, i = 1..ell-1
    double m_ell_scale = 0.0;             // sup |M_ell| on the grid
    double discontinuity = 0.0;           // |(a - alpha, b - beta)| at order 1
    bool success = false;
    std::vector<std::string> notes;
};

// Config of order k >= ell with M_1 = ... = M_{ell-1} = 0 and a discontinuous order-1 part.
VanishingConfig build_vanishing_config(int n, int ell, int k, const VanishingOptions& opts = {});

struct M1Realization {
    int n = 1;
    int target = 0;
    VCoefficients v;
    SystemConfig config;
    ZeroReport zeros;  // zeros of q in x on [a, b]
    std::vector<double> r_zeros;
    int attempts = 0;
    bool success = false;
};

// Ceiling on simple positive zeros of M1: 1 (n = 1), 3 (n = 2 or odd), 4 (even n >= 4).
int m1_ceiling(int n);
// Search for v with the requested number of simple zeros of q on [a, b].
M1Realization realize_m1_zeros(int n, int target, std::uint64_t seed = 7, int attempts = 4000, double a = 1e-3,
                               double b = 1e3);
// Simple zeros of M1 in r for a given order-one config.
ZeroReport m1_zeros(const SystemConfig& cfg, double a = 1e-3, double b = 1e3, const IsolateOptions& opts = {});

struct CeilingScan {
    int n = 1;
    int configs = 0;
    int ceiling = 0;
    int max_count = 0;
    std::vector<int> histogram;  // histogram[c] = configs with c zeros
    int non_exhaustive = 0;
    bool respected = false;
};

// Zero counts of M1 over random order-one configs (uniform in [-1, 1]).
CeilingScan m1_ceiling_scan(int n, int configs, std::uint64_t seed, bool parallel = true);

}  // namespace melnlab
