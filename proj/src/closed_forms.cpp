#include "melnlab/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "melnlab/errors.hpp"
#include "melnlab/recursion.hpp"
#include "parallel_for.hpp"

namespace melnlab {

namespace {

constexpr double pi = std::numbers::pi;

void check_n(int n) {
    if (n < 1) throw ConfigError("switching exponent n must be a positive integer");
}

int half_k(int n) { return n / 2; }  // k with n = 2k or n = 2k + 1

double log_point(double a, double b, int i, int count) {
    if (count == 1) return a;
    return a * std::pow(b / a, static_cast<double>(i) / (count - 1));
}

}  // namespace

ParityCase parity_of(int n) {
    check_n(n);
    return n % 2 ? ParityCase::odd : ParityCase::even;
}

VCoefficients v_coefficients(const OrderCoefficients& c, int n) {
    VCoefficients v;
    v.parity = parity_of(n);
    const double a01 = c.a[0], a11 = c.a[1], b01 = c.b[0], b21 = c.b[2];
    const double al01 = c.alpha[0], al11 = c.alpha[1], be01 = c.beta[0], be21 = c.beta[2];
    if (v.parity == ParityCase::odd) {
        v.v = {4 * be01 - 4 * b01, -pi * (a11 + al11 + b21 + be21), 4 * (a01 - al01), 0.0};
    } else {
        v.v = {-pi * (a11 + al11 + b21 + be21) / 2, a11 - al11 - b21 + be21, a11 - al11 + b21 - be21, 2 * (be01 - b01)};
    }
    return v;
}

VCoefficients v_coefficients(const SystemConfig& cfg) {
    if (cfg.k < 1) throw ConfigError("config has no first-order coefficients");
    return v_coefficients(cfg.order(1), cfg.n);
}

Eigen::MatrixXd v_map(int n) {
    const std::size_t d = parity_of(n) == ParityCase::odd ? 3 : 4;
    Eigen::MatrixXd V(static_cast<Eigen::Index>(d), 12);
    for (int j = 0; j < 12; ++j) {
        std::array<double, 12> e{};
        e[static_cast<std::size_t>(j)] = 1.0;
        const VCoefficients v = v_coefficients(OrderCoefficients::from_flat(e), n);
        for (std::size_t i = 0; i < d; ++i) V(static_cast<Eigen::Index>(i), j) = v.v[i];
    }
    return V;
}

SystemConfig config_from_v(const VCoefficients& v, int n, int k) {
    if (v.parity != parity_of(n)) throw ConfigError("v-vector parity does not match n");
    SystemConfig cfg(n, k);
    OrderCoefficients& c = cfg.order(1);
    if (v.parity == ParityCase::odd) {
        c.b[0] = -v.v[0] / 4;
        c.a[1] = -v.v[1] / pi;
        c.a[0] = v.v[2] / 4;
    } else {
        const double s = -2 * v.v[0] / pi;  // a11 + b21 + beta21 with alpha11 = 0
        c.a[1] = (v.v[1] + v.v[2]) / 2;
        const double diff = (v.v[2] - v.v[1]) / 2;  // b21 - beta21
        c.b[2] = (s - c.a[1] + diff) / 2;
        c.beta[2] = (s - c.a[1] - diff) / 2;
        c.beta[0] = v.v[3] / 2;
    }
    return cfg;
}

double m1_closed(const VCoefficients& v, int n, double r) {
    if (!(r > 0.0)) throw DomainError("m1_closed needs r > 0");
    if (v.parity != parity_of(n)) throw ConfigError("v-vector parity does not match n");
    const double x = cov_x_of_r(r, n);
    const double t1 = n == 1 ? pi / 4 : std::atan(std::pow(x, n - 1));
    const double c = x / r, s = std::sin(t1);
    if (v.parity == ParityCase::odd) return 0.5 * (v.v[0] * c + r * v.v[1] + v.v[2] * s);
    return r * v.v[0] + r * v.v[1] * s * c + r * v.v[2] * t1 + v.v[3] * c;
}

double m1_closed(const SystemConfig& cfg, double r) { return m1_closed(v_coefficients(cfg), cfg.n, r); }

double cov_r_of_x(double x, int n) {
    check_n(n);
    if (!(x > 0.0)) throw DomainError("cov_r_of_x needs x > 0");
    return x * std::sqrt(1.0 + std::pow(x, 2 * n - 2));
}

double cov_dr_dx(double x, int n) {
    check_n(n);
    if (!(x > 0.0)) throw DomainError("cov_dr_dx needs x > 0");
    const double p = std::pow(x, 2 * n - 2);
    return (1.0 + n * p) / std::sqrt(1.0 + p);
}

double cov_x_of_r(double r, int n) {
    check_n(n);
    if (!(r > 0.0)) throw DomainError("cov_x_of_r needs r > 0");
    if (n == 1) return r / std::numbers::sqrt2;
    // x ↦ x² + x^{2n} is increasing; bracket, bisect to a tight interval, then polish with Newton.
    auto g = [&](double x) { return cov_r_of_x(x, n) - r; };
    double lo = 0.0, hi = std::min(r, std::pow(r, 1.0 / n));
    while (g(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 60 && hi - lo > 1e-6 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 20; ++it) {
        const double step = g(x) / cov_dr_dx(x, n);
        const double xn = std::clamp(x - step, lo, hi);
        if (std::abs(xn - x) <= 1e-16 * x) {
            x = xn;
            break;
        }
        x = xn;
    }
    return x;
}

std::vector<std::function<double(double)>> q_basis(int n) {
    check_n(n);
    if (n == 1) return {[](double) { return 1.0; }, [](double x) { return 2.0 * x; }, [](double) { return 1.0; }};
    const int k = half_k(n);
    auto u = [k](int id) { return std::function<double(double)>([f = BasisFunction{id, k}](double x) { return f(x); }); };
    if (n % 2) return {u(1), u(12), u(4)};
    return {u(13), u(5), u(15), u(2)};
}

double q_poly(const VCoefficients& v, int n, double x) {
    if (v.parity != parity_of(n)) throw ConfigError("v-vector parity does not match n");
    if (!(x > 0.0)) throw DomainError("q_poly needs x > 0");
    const auto basis = q_basis(n);
    double s = 0.0;
    for (std::size_t j = 0; j < basis.size(); ++j) s += v.v[j] * basis[j](x);
    return s;
}

double q_poly(const SystemConfig& cfg, double x) { return q_poly(v_coefficients(cfg), cfg.n, x); }

double q_denominator(int n, double x) {
    check_n(n);
    if (!(x > 0.0)) throw DomainError("q_denominator needs x > 0");
    const int k = half_k(n);
    if (n % 2) return 2.0 * std::sqrt(std::pow(x, 4 * k) + 1.0);
    return std::sqrt(x * x + std::pow(x, 4 * k));
}

DeclaredSpan declared_span(int n, int ell, SpanVariant variant) {
    check_n(n);
    if (ell < 1 || ell > 6) throw ConfigError("declared spans cover orders 1..6");
    const int k = half_k(n);
    DeclaredSpan s;
    s.n = n;
    s.ell = ell;
    s.variant = variant;
    if (variant == SpanVariant::f7_divided && (ell != 6 || n % 2 == 0 || n == 1))
        throw ConfigError("the F7 form applies to order 6 with odd n >= 3 only");
    if (ell == 1) {
        if (n == 1) {
            s.family = "{1, x}";
            s.basis = {"1", "x"};
            s.functions = {[](double) { return 1.0; }, [](double x) { return x; }};
        } else {
            const OrderedFamily f = family_F(n % 2 ? 1 : 2, k);
            s.family = f.name;
            for (const FamilyMember& m : f.members) {
                s.basis.push_back(m.label);
                s.functions.push_back([b = BasisFunction{m.terms.front().second, k}](double x) { return b(x); });
            }
        }
        s.denominator = [n](double x) { return q_denominator(n, x); };
        return s;
    }
    if (n == 1) throw ConfigError("higher-order spans are declared for n >= 2 only");
    s.jacobian = true;
    if (variant == SpanVariant::f7_divided) {
        const double lam = default_lambda(k);
        const OrderedFamily f = family_F(7, k, lam);
        s.family = f.name + " at x^" + std::to_string(2 * k);
        for (const FamilyMember& m : f.members) {
            s.basis.push_back(m.label);
            s.functions.push_back([b = BasisFunction{m.terms.front().second, k, lam}, k](double x) {
                return b(std::pow(x, 2 * k));
            });
        }
        s.denominator = [k](double x) {
            const double p = 1.0 + (1.0 + 2 * k) * std::pow(x, 4 * k);
            return x * x * p * p;
        };
        return s;
    }
    const int index = n == 2 ? 3 : (n % 2 ? 5 : 6);
    const OrderedFamily f = family_F(index, k);
    s.family = f.name;
    for (const FamilyMember& m : f.members) {
        s.basis.push_back(m.label);
        s.functions.push_back([b = BasisFunction{m.terms.front().second, k}](double x) { return b(x); });
    }
    if (n == 2) {
        s.denominator = [](double x) { return std::pow(1.0 + 2 * x * x, 2); };
    } else if (n % 2) {
        s.denominator = [k](double x) { return std::pow(1.0 + (1.0 + 2 * k) * std::pow(x, 4 * k), 2); };
    } else {
        s.denominator = [k](double x) { return std::pow(1.0 + 2 * k * std::pow(x, 4 * k - 2), 2); };
    }
    return s;
}

namespace {

// Factor turning M_l(r(x)) into the declared numerator.
double numerator_factor(const DeclaredSpan& s, double x) {
    const double f = s.denominator(x);
    return s.jacobian ? f / cov_dr_dx(x, s.n) : f;
}

}  // namespace

SpanFit fit_to_span(const std::vector<SpanSample>& samples, int n, int ell, SpanVariant variant) {
    const DeclaredSpan s = declared_span(n, ell, variant);
    const auto m = static_cast<Eigen::Index>(samples.size());
    const auto p = static_cast<Eigen::Index>(s.functions.size());
    if (m < 3 * p) throw ConfigError("span fit needs at least 3 samples per basis function");
    Eigen::MatrixXd A(m, p);
    Eigen::VectorXd t(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double x = samples[static_cast<std::size_t>(i)].x;
        if (!(x > 0.0)) throw DomainError("span fit samples need x > 0");
        t(i) = samples[static_cast<std::size_t>(i)].m * numerator_factor(s, x);
        for (Eigen::Index j = 0; j < p; ++j) A(i, j) = s.functions[static_cast<std::size_t>(j)](x);
    }
    // Column equilibration, then a truncated SVD solve.
    Eigen::VectorXd scale = A.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < p; ++j)
        if (scale(j) == 0.0) scale(j) = 1.0;
    const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    SpanFit fit;
    fit.family = s.family;
    fit.basis = s.basis;
    fit.condition = sv(p - 1) > 0.0 ? sv(0) / sv(p - 1) : std::numeric_limits<double>::infinity();
    svd.setThreshold(1e-13);
    fit.rank = static_cast<int>(svd.rank());
    fit.rank_deficient = fit.rank < p;
    const Eigen::VectorXd c = scale.cwiseInverse().asDiagonal() * svd.solve(t);
    const Eigen::VectorXd yhat = A * c;
    fit.coefficients.assign(c.data(), c.data() + p);
    fit.target.assign(t.data(), t.data() + m);
    fit.fitted.assign(yhat.data(), yhat.data() + m);
    const double tn = t.norm();
    fit.residual = tn > 0.0 ? (t - yhat).norm() / tn : (t - yhat).norm();
    return fit;
}

std::vector<SpanSample> sample_melnikov(const SystemConfig& cfg, int ell, double x_lo, double x_hi, int count) {
    if (ell < 1 || ell > cfg.k) throw ConfigError("sampled order exceeds the config order");
    if (!(x_lo > 0.0) || !(x_hi > x_lo) || count < 2) throw ConfigError("sampling needs 0 < x_lo < x_hi and 2 points");
    const MelnikovEngine eng(cfg.with_order(ell));
    std::vector<SpanSample> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double x = log_point(x_lo, x_hi, i, count);
        out[static_cast<std::size_t>(i)] = {x, eng.melnikov(ell, cov_r_of_x(x, cfg.n))};
    }
    return out;
}

std::string span_fit_csv(const std::vector<SpanSample>& samples, const SpanFit& fit, int n, int ell, SpanVariant variant) {
    const DeclaredSpan s = declared_span(n, ell, variant);
    if (fit.fitted.size() != samples.size()) throw ConfigError("span fit does not belong to these samples");
    std::ostringstream os;
    os.precision(17);
    os << "x,M,fitted,residual\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = fit.fitted[i] / numerator_factor(s, samples[i].x);
        os << samples[i].x << ',' << samples[i].m << ',' << f << ',' << samples[i].m - f << '\n';
    }
    return os.str();
}

namespace {

// Discontinuity (a - alpha, b - beta) of one order.
double discontinuity_norm(const OrderCoefficients& c) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += std::pow(c.a[j] - c.alpha[j], 2) + std::pow(c.b[j] - c.beta[j], 2);
    return std::sqrt(s);
}

OrderCoefficients from_vector(const Eigen::VectorXd& v) {
    std::array<double, 12> a{};
    for (int j = 0; j < 12; ++j) a[static_cast<std::size_t>(j)] = v(j);
    return OrderCoefficients::from_flat(a);
}

// Orders 1..ell-1 are parameterized by null-space coordinates of the v-map; the range part of
// each order m >= 2 is solved linearly to cancel the projection of M_m onto the M1 family.
struct VanishingProblem {
    int n, ell;
    Eigen::MatrixXd N, P, Phi, PhiPinv;
    std::vector<double> r;
    Eigen::VectorXd last_null;  // null coordinates of order ell-1, fixed per restart

    int dim() const { return static_cast<int>(N.cols()); }
    int inputs() const { return ell >= 3 ? dim() * (ell - 2) : 0; }
    int values() const { return static_cast<int>(r.size()) * (ell - 2) + 1; }

    // Builds orders 1..ell-1 from parameters; returns residual of the non-range parts.
    SystemConfig assemble(const Eigen::VectorXd& p, Eigen::VectorXd* res) const {
        SystemConfig cfg(n, ell - 1);
        const int d = dim();
        cfg.order(1) = from_vector(N * p.segment(0, d));
        const auto G = static_cast<Eigen::Index>(r.size());
        for (int m = 2; m <= ell - 1; ++m) {
            const Eigen::VectorXd theta = m < ell - 1 ? Eigen::VectorXd(p.segment((m - 1) * d, d)) : last_null;
            cfg.order(m) = from_vector(N * theta);
            const MelnikovEngine eng(cfg.with_order(m));
            Eigen::VectorXd R(G);
            for (Eigen::Index i = 0; i < G; ++i) R(i) = eng.melnikov(m, r[static_cast<std::size_t>(i)]);
            const Eigen::VectorXd v = -(PhiPinv * R);
            if (res) res->segment((m - 2) * G, G) = R + Phi * v;
            cfg.order(m) = from_vector(N * theta + P * v);
        }
        if (res) (*res)(res->size() - 1) = discontinuity_norm(cfg.order(1)) - 1.0;
        return cfg;
    }
};

struct VanishingFunctor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const VanishingProblem& prob;
    int inputs() const { return prob.inputs(); }
    int values() const { return prob.values(); }
    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
        prob.assemble(p, &f);
        return 0;
    }
};

}  // namespace

VanishingConfig build_vanishing_config(int n, int ell, int k, const VanishingOptions& opts) {
    check_n(n);
    if (ell < 1 || ell > 6) throw ConfigError("vanishing order must lie in 1..6");
    if (k < ell) throw ConfigError("config order must be at least the target order");
    if (opts.samples < 8 || !(opts.x_lo > 0.0) || !(opts.x_hi > opts.x_lo)) throw ConfigError("invalid vanishing grid");
    VanishingProblem prob{n, ell, {}, {}, {}, {}, {}, {}};
    const Eigen::MatrixXd V = v_map(n);
    Eigen::JacobiSVD<Eigen::MatrixXd> vs(V, Eigen::ComputeFullV);
    const auto d = V.rows();
    prob.N = vs.matrixV().rightCols(12 - d);
    prob.P = V.completeOrthogonalDecomposition().pseudoInverse();
    for (int i = 0; i < opts.samples; ++i) prob.r.push_back(cov_r_of_x(log_point(opts.x_lo, opts.x_hi, i, opts.samples), n));
    prob.Phi.resize(opts.samples, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        VCoefficients e;
        e.parity = parity_of(n);
        e.v[static_cast<std::size_t>(j)] = 1.0;
        for (int i = 0; i < opts.samples; ++i) prob.Phi(i, j) = m1_closed(e, n, prob.r[static_cast<std::size_t>(i)]);
    }
    prob.PhiPinv = prob.Phi.completeOrthogonalDecomposition().pseudoInverse();

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> G;
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    auto gauss = [&](Eigen::Index m) {
        Eigen::VectorXd v(m);
        for (Eigen::Index i = 0; i < m; ++i) v(i) = G(rng);
        return v;
    };
    const int dnull = prob.dim();

    VanishingConfig best;
    best.ell = ell;
    double best_score = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < std::max(1, opts.restarts); ++attempt) {
        prob.last_null = gauss(dnull);
        Eigen::VectorXd p(std::max(dnull, prob.inputs()));
        p = gauss(p.size());
        // Normalize the order-1 discontinuity to one before refinement.
        {
            const double dn = discontinuity_norm(from_vector(prob.N * p.segment(0, dnull)));
            if (dn > 0.0) p.segment(0, dnull) /= dn;
        }
        if (ell >= 3) {
            VanishingFunctor fun{prob};
            Eigen::NumericalDiff<VanishingFunctor> nd(fun);
            Eigen::LevenbergMarquardt<Eigen::NumericalDiff<VanishingFunctor>> lm(nd);
            lm.parameters.maxfev = 400 * (prob.inputs() + 1);
            lm.parameters.xtol = 1e-15;
            lm.parameters.ftol = 1e-15;
            lm.minimize(p);
        }
        SystemConfig cfg(n, k);
        const SystemConfig lower = ell >= 2 ? prob.assemble(p, nullptr) : cfg;
        for (int m = 1; m < ell; ++m) cfg.order(m) = lower.order(m);
        for (int m = ell; m <= k; ++m) {
            std::array<double, 12> a{};
            for (double& e : a) e = U(rng);
            cfg.order(m) = OrderCoefficients::from_flat(a);
        }
        // Independent check on a shifted grid.
        VanishingConfig out;
        out.config = cfg;
        out.ell = ell;
        out.discontinuity = discontinuity_norm(cfg.order(1));
        const MelnikovEngine eng(cfg.with_order(ell));
        out.lower_residuals.assign(static_cast<std::size_t>(ell - 1), 0.0);
        const int checks = 2 * opts.samples;
        for (int i = 0; i < checks; ++i) {
            const double x = log_point(opts.x_lo * 0.9, opts.x_hi * 1.1, i, checks);
            const std::vector<double> M = eng.melnikov_all(cov_r_of_x(x, n));
            for (int m = 1; m < ell; ++m)
                out.lower_residuals[static_cast<std::size_t>(m - 1)] =
                    std::max(out.lower_residuals[static_cast<std::size_t>(m - 1)], std::abs(M[static_cast<std::size_t>(m - 1)]));
            out.m_ell_scale = std::max(out.m_ell_scale, std::abs(M[static_cast<std::size_t>(ell - 1)]));
        }
        const double worst = out.lower_residuals.empty()
                                 ? 0.0
                                 : *std::max_element(out.lower_residuals.begin(), out.lower_residuals.end());
        const double score = out.m_ell_scale > 0.0 ? worst / out.m_ell_scale : std::numeric_limits<double>::infinity();
        out.success = score <= opts.tol && out.discontinuity > 0.5;
        if (score < best_score || (out.success && !best.success)) {
            best_score = score;
            best = out;
        }
        if (out.success) break;
    }
    std::ostringstream note;
    note << "lower-order sup / sup |M_" << ell << "| = " << best_score;
    best.notes.push_back(note.str());
    if (!best.success) best.notes.push_back("no restart met the vanishing tolerance");
    return best;
}

int m1_ceiling(int n) {
    check_n(n);
    if (n == 1) return 1;
    if (n == 2 || n % 2) return 3;
    return 4;
}

namespace {

IsolateOptions q_isolate_options() {
    IsolateOptions o;
    o.abs_scale = 0.0;
    return o;
}

}  // namespace

M1Realization realize_m1_zeros(int n, int target, std::uint64_t seed, int attempts, double a, double b) {
    check_n(n);
    if (target < 0) throw ConfigError("target zero count must be nonnegative");
    if (!(a > 0.0) || !(b > a)) throw ConfigError("zero search interval must satisfy 0 < a < b");
    M1Realization out;
    out.n = n;
    out.target = target;
    const auto basis = q_basis(n);
    const auto d = static_cast<Eigen::Index>(basis.size());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logu(std::log(0.2), std::log(3.0));
    std::normal_distribution<double> G;
    for (int t = 0; t < attempts; ++t) {
        VCoefficients v;
        v.parity = parity_of(n);
        if (t % 2 == 0 && d >= 2) {
            // Prescribe d - 1 zeros; v spans the null space of the evaluation rows.
            Eigen::MatrixXd E(d - 1, d);
            for (Eigen::Index i = 0; i < d - 1; ++i) {
                const double x = std::exp(logu(rng));
                for (Eigen::Index j = 0; j < d; ++j) E(i, j) = basis[static_cast<std::size_t>(j)](x);
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(E, Eigen::ComputeFullV);
            const Eigen::VectorXd nv = svd.matrixV().col(d - 1);
            for (Eigen::Index j = 0; j < d; ++j) v.v[static_cast<std::size_t>(j)] = nv(j);
        } else {
            for (Eigen::Index j = 0; j < d; ++j) v.v[static_cast<std::size_t>(j)] = G(rng);
        }
        ZeroReport rep = isolate_zeros([&](double x) { return q_poly(v, n, x); }, a, b, q_isolate_options());
        out.attempts = t + 1;
        if (rep.exhaustive && static_cast<int>(rep.count()) == target && static_cast<int>(rep.simple_count()) == target) {
            out.v = v;
            out.config = config_from_v(v, n);
            out.r_zeros.clear();
            for (const ZeroEntry& z : rep.zeros) out.r_zeros.push_back(cov_r_of_x(z.x, n));
            out.zeros = std::move(rep);
            out.success = true;
            return out;
        }
    }
    return out;
}

ZeroReport m1_zeros(const SystemConfig& cfg, double a, double b, const IsolateOptions& opts) {
    const VCoefficients v = v_coefficients(cfg);
    return isolate_zeros([&](double r) { return m1_closed(v, cfg.n, r); }, a, b, opts);
}

CeilingScan m1_ceiling_scan(int n, int configs, std::uint64_t seed, bool parallel) {
    check_n(n);
    if (configs < 1) throw ConfigError("ceiling scan needs at least one config");
    CeilingScan s;
    s.n = n;
    s.configs = configs;
    s.ceiling = m1_ceiling(n);
    std::vector<int> counts(static_cast<std::size_t>(configs), 0);
    std::vector<char> exhaustive(static_cast<std::size_t>(configs), 1);
    const IsolateOptions o = q_isolate_options();
    // Per-config generators keep serial and parallel runs identical.
    detail::parallel_for(configs, parallel, [&](long i) {
        std::seed_seq seq{seed, static_cast<std::uint64_t>(i)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        std::array<double, 12> a{};
        for (double& e : a) e = U(rng);
        const VCoefficients v = v_coefficients(OrderCoefficients::from_flat(a), n);
        const ZeroReport r = isolate_zeros([&](double x) { return q_poly(v, n, x); }, 1e-3, 1e3, o);
        counts[static_cast<std::size_t>(i)] = static_cast<int>(r.simple_count());
        exhaustive[static_cast<std::size_t>(i)] = r.exhaustive && r.simple_count() == r.count();
    });
    for (int i = 0; i < configs; ++i) {
        const int c = counts[static_cast<std::size_t>(i)];
        if (static_cast<int>(s.histogram.size()) <= c) s.histogram.resize(static_cast<std::size_t>(c) + 1, 0);
        ++s.histogram[static_cast<std::size_t>(c)];
        s.max_count = std::max(s.max_count, c);
        if (!exhaustive[static_cast<std::size_t>(i)]) ++s.non_exhaustive;
    }
    s.respected = s.max_count <= s.ceiling;
    return s;
}

}  // namespace melnlab
