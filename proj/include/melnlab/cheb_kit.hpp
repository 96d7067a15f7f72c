#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <utility>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "melnlab/jet.hpp"

namespace melnlab {

// Largest jet order the basis evaluators accept; derived families need order + 8.
constexpr std::size_t max_basis_order = 24;

// u_m^k (m = 1..23) and u_24^{k, lambda} on x > 0.
struct BasisFunction {
    int id = 1;
    int k = 1;
    double lambda = 0.0;

    Jet eval_jet(double x, std::size_t order) const;
    double operator()(double x) const;
    std::string name() const;
};

Jet eval_jet(const BasisFunction& f, double x, std::size_t order);

// Linear combination of basis functions, optionally differentiated; evaluated in quad precision.
struct FamilyMember {
    std::string label;
    int k = 1;
    double lambda = 0.0;
    std::vector<std::pair<double, int>> terms;  // (coefficient, basis id)
    std::size_t derivative = 0;

    Jet jet(double x, std::size_t order) const;
};

struct OrderedFamily {
    std::string name;
    int k = 1;
    double lambda = 0.0;
    std::vector<FamilyMember> members;

    std::size_t size() const { return members.size(); }
    // Value of sum_j c_j member_j at x.
    double combine(const std::vector<double>& c, double x) const;
};

FamilyMember member(const BasisFunction& f);
// m-th derivative of a member as a new member.
FamilyMember derivative_member(const FamilyMember& f, std::size_t m);

OrderedFamily family_F(int index, int k, double lambda = 0.0);  // F1..F7
OrderedFamily family_G(int k);
OrderedFamily family_H(int k, double alpha, double beta);
OrderedFamily family_J0();       // [1, x, x^2, x^3, (u21^1)^(5), (u23^1)^(5)]
OrderedFamily family_H8(int k);  // eighth derivatives of u18^k..u23^k
// Parses "F2 k=1", "F7 k=1 lambda=2", "G k=3", "H k=3 alpha=0.5 beta=-1", "J0", "H8 k=2".
OrderedFamily family_by_name(const std::string& spec);
// Default lambda of F7 for a given k.
double default_lambda(int k);

struct WronskianValue {
    double value = 0.0;       // may be +-inf when out of double range
    long double log_abs = 0;  // natural log of |W|
    int sign = 0;
    double rcond = 0.0;       // smallest over largest pivot of the scaled matrix
    bool ill_conditioned = false;
};

// Determinant of the (s+1)x(s+1) derivative matrix of the first s+1 members.
WronskianValue wronskian(const OrderedFamily& fam, double x, std::size_t s);

struct ZeroEntry {
    double x = 0.0;
    double lo = 0.0, hi = 0.0;  // bracketing pair
    double residual = 0.0;      // |f(x)|
    double derivative = 0.0;    // f'(x) by central differences
    bool simple = false;
};

struct LedgerEntry {
    enum class Kind { sign_change, dip_resolved, dip_unresolved };
    Kind kind = Kind::sign_change;
    double lo = 0.0, hi = 0.0;
    int depth = 0;
    double ratio = 0.0;  // min |f| over the cell relative to its neighbours
};

struct ZeroReport {
    double a = 0.0, b = 0.0;
    std::vector<ZeroEntry> zeros;
    std::vector<LedgerEntry> ledger;
    std::size_t evaluations = 0;
    bool exhaustive = false;
    bool budget_exhausted = false;

    std::size_t count() const { return zeros.size(); }
    std::size_t simple_count() const;
};

struct IsolateOptions {
    int initial_points = 4096;
    std::size_t budget = 1u << 20;  // total function evaluations
    int refine_depth = 8;           // x4 subdivisions around a dip
    double xtol = 1e-12;
    double simple_floor = 1e-9;
    double abs_scale = 1.0;  // floor for the magnitude in the simplicity test; 0 makes it purely relative
    double dip_resolve = 0.5;  // a dip is cleared once its parabolic minimum keeps this fraction of the sampled minimum
    bool log_spacing = true;  // ignored when a <= 0
};

ZeroReport isolate_zeros(const std::function<double(double)>& f, double a, double b, const IsolateOptions& opts = {});

enum class FamilyClass { ect, et_accuracy_one, theorem3_bound, inconclusive };
std::string to_string(FamilyClass c);

struct AccuracyVerdict {
    std::string family;
    double a = 0.0, b = 0.0;
    std::vector<int> nu;  // zero counts of W_0..W_n
    std::vector<bool> nu_simple;
    FamilyClass classification = FamilyClass::inconclusive;
    int bound = -1;  // ceiling on isolated zeros in the span; -1 when inconclusive
    bool tails_dominated = false;  // leading-power behaviour confirmed beyond [a, b]
    std::vector<ZeroReport> reports;
    std::vector<std::string> notes;
};

AccuracyVerdict certify_family(const OrderedFamily& fam, double a, double b, const IsolateOptions& opts = {});

// n + nu_n + nu_{n-1} + 2 (nu_{n-2} + ... + nu_0) + sum_{i=3}^{n-1} min(2 nu_i, nu_{i-3} + ... + nu_0), n = nu.size() - 1.
int theorem3_bound(const std::vector<int>& nu);

// Dense polynomial with long double coefficients, c[m] multiplies x^m.
struct Polynomial {
    std::vector<long double> c;

    long double eval(long double x) const;
    long double derivative(long double x) const;
    int degree() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(long double s) const;
};

// u_m^k(x^{2k}) for m = 18..24 as polynomials in x.
Polynomial f7_basis_substituted(int m, int k, double lambda);

extern const std::array<double, 6> prop4_coefficients;

struct Prop4Result {
    Polynomial g;
    ZeroReport zeros;
    double a1 = 0.0;
    bool a1_adjusted = false;
    std::string note;
};

// g(x) = f(x^2) for the printed F7^{1,2} combination, zeros on (0, x_max).
Prop4Result prop4_check(double x_max = 50.0);

struct Prop5Options {
    std::vector<double> scales{0.3, 0.25, 0.2, 0.15, 0.1, 0.05};
    double ratio = 0.5;  // prescribed zeros of h at scale * ratio^j, j = 0..4
};

struct Prop5Result {
    int k = 2;
    std::array<long double, 5> ladder{};  // g(0), g(1/2), g(1), g'(1), g(2) at a = 0
    bool ladder_ok = false;
    ZeroReport base_zeros;  // g_k(.; 0) on (0, 2)
    std::array<double, 5> a{};
    double scale = 0.0;
    ZeroReport zeros;
    int best_count = 0;
    bool success = false;
    std::vector<std::string> notes;
};

// g_k(x; a) = f(x^{2k}; a) for the sign-ladder combination in Span(F7^{k,1}).
Polynomial prop5_polynomial(int k, const std::array<double, 5>& a);
Prop5Result prop5_witness(int k, const Prop5Options& opts = {});

struct F7Ceiling {
    int k = 1;
    int derivative_order = 0;  // 5 via J0 for k = 1, 8 via H8 for k > 1
    AccuracyVerdict verdict;
    int ceiling = -1;
};

F7Ceiling f7_ceiling(int k, double a = 1e-3, double b = 1e3, const IsolateOptions& opts = {});

nlohmann::json to_json(const ZeroReport& r);
nlohmann::json to_json(const AccuracyVerdict& v);
// Rows "x,W0,...,Wn" on a log-spaced grid.
std::string wronskian_csv(const OrderedFamily& fam, double a, double b, int points);

}  // namespace melnlab
