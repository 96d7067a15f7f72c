#include "melnlab/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "melnlab/combinatorics.hpp"
#include "melnlab/errors.hpp"
#include "melnlab/jet.hpp"

namespace melnlab {

namespace {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

Jet jet_from(const Vec& c, JetVar var) {
    Jet j(0.0, c.size() - 1, var);
    for (std::size_t d = 0; d < c.size(); ++d) j[d] = c[d];
    return j;
}

// a(ε) = Σ_{q=1}^{qmax} α^q ε^q / q! as an ε-jet of the given order.
Jet crossing_shift(const Vec& alpha, int qmax, std::size_t order) {
    Jet a(0.0, order, JetVar::eps);
    for (int q = 1; q <= qmax && static_cast<std::size_t>(q) <= order; ++q) a[static_cast<std::size_t>(q)] = alpha[static_cast<std::size_t>(q)] / factorial(q);
    return a;
}

void require(bool ok, const char* what) {
    if (!ok) throw SequencingError(what);
}

// Per-region derivatives ∂_r^L F_m at fixed r, m = 1..k, L = 0..k-1.
struct RegionData {
    std::vector<std::vector<TrigPoly>> G;  // G[m][L]
};

RegionData region_data(const PolarField& f, Region s, double x) {
    const int k = f.k();
    RegionData d;
    d.G.assign(static_cast<std::size_t>(k) + 1, {});
    for (int m = 1; m <= k; ++m)
        for (int L = 0; L < k; ++L) d.G[static_cast<std::size_t>(m)].push_back(f.F(m, s).r_derivative_at(x, L));
    return d;
}

// Integrand of order i from G values (Gv[m][L]) and z values of lower orders (zv[m]).
template <class Value, class GAccess, class ZAccess>
Value integrand(int i, GAccess G, ZAccess Z) {
    Value K = G(i, 0);
    for (int l = 1; l < i; ++l) {
        for (const auto& b : partitions_cached(l).tuples) {
            Value term = G(i - l, b.L) * b.weight;
            for (int m = 1; m <= l; ++m)
                for (int e = 0; e < b.b[static_cast<std::size_t>(m - 1)]; ++e) term = term * Z(m);
            K = K + term;
        }
    }
    return K;
}

}  // namespace

double alpha_faa_di_bruno(int q, const Vec& theta_derivs, const Vec& w) {
    require(q >= 1 && static_cast<int>(w.size()) > q && static_cast<int>(theta_derivs.size()) > q,
            "alpha: w_i or theta derivatives missing for requested order");
    double s = 0.0;
    for (int l = 1; l <= q; ++l) {
        double inner = 0.0;
        for (const auto& u : compositions_cached(q, l).tuples) {
            double p = 1.0;
            for (int ur : u) p *= w[static_cast<std::size_t>(ur)];
            inner += p;
        }
        s += factorial(q) / factorial(l) * theta_derivs[static_cast<std::size_t>(l)] * inner;
    }
    return s;
}

double alpha_by_composition(int q, const Vec& theta_derivs, const Vec& w) {
    require(q >= 1 && static_cast<int>(w.size()) > q && static_cast<int>(theta_derivs.size()) > q,
            "alpha: w_i or theta derivatives missing for requested order");
    Vec taylor(static_cast<std::size_t>(q) + 1);
    for (int l = 0; l <= q; ++l) taylor[static_cast<std::size_t>(l)] = theta_derivs[static_cast<std::size_t>(l)] / factorial(l);
    Jet W(0.0, static_cast<std::size_t>(q), JetVar::eps);
    for (int i = 1; i <= q; ++i) W[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)];
    return factorial(q) * compose_offset(taylor, W)[static_cast<std::size_t>(q)];
}

double w_faa_di_bruno(int i, const Mat& zjet, const Vec& alpha) {
    require(i >= 1 && static_cast<int>(zjet.size()) > i, "w: z jets missing for requested order");
    require(static_cast<int>(alpha.size()) >= i, "w: alpha^m missing for m < i");
    double s = zjet[static_cast<std::size_t>(i)][0] / factorial(i);
    for (int a = 1; a < i; ++a) {
        const Vec& zj = zjet[static_cast<std::size_t>(i - a)];
        double inner = 0.0;
        for (const auto& b : partitions_cached(a).tuples) {
            require(static_cast<int>(zj.size()) > b.L, "w: z jet order too low");
            double p = b.weight * factorial(b.L) * zj[static_cast<std::size_t>(b.L)];
            for (int m = 1; m <= a; ++m) p *= std::pow(alpha[static_cast<std::size_t>(m)], b.b[static_cast<std::size_t>(m - 1)]);
            inner += p;
        }
        s += inner / factorial(i - a);
    }
    return s;
}

double w_by_composition(int i, const Mat& zjet, const Vec& alpha) {
    require(i >= 1 && static_cast<int>(zjet.size()) > i, "w: z jets missing for requested order");
    require(static_cast<int>(alpha.size()) >= i, "w: alpha^m missing for m < i");
    const Jet a = crossing_shift(alpha, i - 1, static_cast<std::size_t>(i));
    double s = 0.0;
    for (int m = 1; m <= i; ++m) s += compose_offset(zjet[static_cast<std::size_t>(m)], a)[static_cast<std::size_t>(i - m)] / factorial(m);
    return s;
}

double jump_correction(int i, const Mat& left, const Mat& right, const Vec& alpha) {
    if (i < 2) return 0.0;
    require(static_cast<int>(left.size()) >= i && static_cast<int>(right.size()) >= i, "jump: z jets missing for orders < i");
    require(static_cast<int>(alpha.size()) >= i, "jump: alpha^q missing for q < i");
    const Jet a = crossing_shift(alpha, i - 1, static_cast<std::size_t>(i - 1));
    double s = 0.0;
    for (int p = 1; p < i; ++p) {
        const int m = i - p;
        const Vec& L = left[static_cast<std::size_t>(m)];
        const Vec& R = right[static_cast<std::size_t>(m)];
        Vec delta(std::min(L.size(), R.size()));
        for (std::size_t d = 0; d < delta.size(); ++d) delta[d] = (L[d] - R[d]) / factorial(m);
        s += compose_offset(delta, a)[static_cast<std::size_t>(p)];
    }
    return factorial(i) * s;
}

double ZTable::z_value(int i, int j, double t) const {
    if (i < 1 || i > k) throw DomainError("z: order outside 1..k");
    if (j < 0 || j > N) throw DomainError("z: sector index outside 0..N");
    const double lo = theta[static_cast<std::size_t>(j)], hi = theta[static_cast<std::size_t>(j) + 1];
    const double slack = 1e-12 * (1.0 + std::abs(hi));
    if (t < lo - slack || t > hi + slack)
        throw DomainError("z: t = " + std::to_string(t) + " outside sector [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return z[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(std::clamp(t, lo, hi));
}

double ZTable::melnikov(int i) const {
    if (i < 1 || i > k) throw DomainError("melnikov: order outside 1..k");
    return z[static_cast<std::size_t>(i)][static_cast<std::size_t>(N)].eval(T) / factorial(i);
}

double ZTable::w_ij(int i, int j) const {
    if (i < 1 || i > k || j < 1 || j > N) throw DomainError("w: index outside table");
    return w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

double ZTable::alpha_q(int j, int q) const {
    if (q < 1 || q > k || j < 1 || j > N) throw DomainError("alpha: index outside table");
    return alpha[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)];
}

MelnikovEngine::MelnikovEngine(const SystemConfig& cfg, RecursionOptions opts)
    : field_(cfg), geom_(cfg.n), opts_(opts) {
    if (opts_.cheb_degree < 8 || opts_.max_cheb_degree < opts_.cheb_degree) throw ConfigError("invalid Chebyshev degree settings");
}

ZTable MelnikovEngine::compute(double x) const {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("melnikov: x must be positive and finite");
    ZTable t;
    for (int D = opts_.cheb_degree; D <= opts_.max_cheb_degree; D *= 2)
        if (attempt(x, D, t)) return t;
    throw NumericalError("melnikov: Chebyshev tail did not settle up to degree " + std::to_string(opts_.max_cheb_degree) +
                         " at x = " + std::to_string(x));
}

bool MelnikovEngine::attempt(double x, int D, ZTable& t) const {
    const int k = field_.k(), N = 2;
    const std::size_t K1 = static_cast<std::size_t>(k) + 1;
    const std::size_t P = static_cast<std::size_t>(k);  // t-jet order
    t = ZTable{};
    t.k = k;
    t.N = N;
    t.T = 2.0 * std::numbers::pi;
    t.x = x;
    t.cheb_degree = D;
    t.theta_derivs.resize(static_cast<std::size_t>(N) + 2);
    for (int j = 0; j <= N + 1; ++j) {
        const Jet th = geom_.theta_jet(j, x, P);
        t.theta.push_back(th.value());
        for (std::size_t l = 0; l <= P; ++l) t.theta_derivs[static_cast<std::size_t>(j)].push_back(th.derivative(l));
    }
    t.z.assign(K1, std::vector<ChebSeries>(static_cast<std::size_t>(N) + 1));
    t.jet_left.assign(K1, Mat(static_cast<std::size_t>(N) + 1));
    t.jet_right.assign(K1, Mat(static_cast<std::size_t>(N) + 1));
    t.w.assign(K1, Vec(static_cast<std::size_t>(N) + 1, 0.0));
    t.alpha.assign(K1, Vec(static_cast<std::size_t>(N) + 1, 0.0));
    t.jump.assign(K1, Vec(static_cast<std::size_t>(N) + 1, 0.0));

    const RegionData plus = region_data(field_, Region::plus, x);
    const RegionData minus = region_data(field_, Region::minus, x);
    auto data = [&](int j) -> const RegionData& { return SwitchingGeometry::sector_region(j) == Region::plus ? plus : minus; };

    // Node tables per sector: G values and z values.
    std::vector<Vec> nodes(static_cast<std::size_t>(N) + 1);
    std::vector<std::vector<std::vector<Vec>>> Gv(static_cast<std::size_t>(N) + 1);
    std::vector<Mat> Zv(static_cast<std::size_t>(N) + 1, Mat(K1));
    for (int j = 0; j <= N; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        nodes[ju] = ChebSeries::lobatto_nodes(t.theta[ju], t.theta[ju + 1], D);
        const RegionData& rd = data(j);
        Gv[ju].assign(K1, std::vector<Vec>(static_cast<std::size_t>(k)));
        for (int m = 1; m <= k; ++m)
            for (int L = 0; L < k; ++L) {
                Vec& g = Gv[ju][static_cast<std::size_t>(m)][static_cast<std::size_t>(L)];
                const TrigPoly& p = rd.G[static_cast<std::size_t>(m)][static_cast<std::size_t>(L)];
                g.resize(nodes[ju].size());
                for (std::size_t q = 0; q < g.size(); ++q) g[q] = p.eval(nodes[ju][q]);
            }
    }

    // t-jet of z_i on sector j at angle th, given lower-order jets at the same point.
    auto z_jet_at = [&](int i, int j, double th, double value, const Mat& lower) {
        const RegionData& rd = data(j);
        std::vector<std::vector<Jet>> Gj(K1);
        for (int m = 1; m <= i; ++m)
            for (int L = 0; L < k; ++L)
                Gj[static_cast<std::size_t>(m)].push_back(
                    jet_from(rd.G[static_cast<std::size_t>(m)][static_cast<std::size_t>(L)].taylor(th, static_cast<int>(P)), JetVar::t));
        std::vector<Jet> Zj(K1);
        for (int m = 1; m < i; ++m) Zj[static_cast<std::size_t>(m)] = jet_from(lower[static_cast<std::size_t>(m)], JetVar::t);
        const Jet K = integrand<Jet>(
            i, [&](int m, int L) { return Gj[static_cast<std::size_t>(m)][static_cast<std::size_t>(L)]; },
            [&](int m) { return Zj[static_cast<std::size_t>(m)]; });
        Vec c(P + 1, 0.0);
        c[0] = value;
        for (std::size_t d = 0; d < P; ++d) c[d + 1] = factorial(i) * K[d] / static_cast<double>(d + 1);
        return c;
    };

    for (int i = 1; i <= k; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        for (int j = 0; j <= N; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            double start = 0.0;
            if (j >= 1) {
                Mat left(iu), right(iu);
                for (int m = 1; m < i; ++m) {
                    left[static_cast<std::size_t>(m)] = t.jet_left[static_cast<std::size_t>(m)][ju];
                    right[static_cast<std::size_t>(m)] = t.jet_right[static_cast<std::size_t>(m)][ju];
                }
                Vec al(iu);
                for (int q = 1; q < i; ++q) al[static_cast<std::size_t>(q)] = t.alpha[static_cast<std::size_t>(q)][ju];
                const double J = opts_.include_jumps ? jump_correction(i, left, right, al) : 0.0;
                t.jump[iu][ju] = J;
                start = Zv[ju - 1][iu].back() + J;
                Mat lower(iu);
                for (int m = 1; m < i; ++m) lower[static_cast<std::size_t>(m)] = t.jet_right[static_cast<std::size_t>(m)][ju];
                t.jet_right[iu][ju] = z_jet_at(i, j, t.theta[ju], start, lower);
            }
            const std::size_t nq = nodes[ju].size();
            Vec Kv(nq);
            for (std::size_t q = 0; q < nq; ++q)
                Kv[q] = integrand<double>(
                    i, [&](int m, int L) { return Gv[ju][static_cast<std::size_t>(m)][static_cast<std::size_t>(L)][q]; },
                    [&](int m) { return Zv[ju][static_cast<std::size_t>(m)][q]; });
            const ChebSeries Ks = ChebSeries::interpolate(t.theta[ju], t.theta[ju + 1], Kv);
            double big = 0.0;
            for (double v : Ks.coeffs()) big = std::max(big, std::abs(v));
            const double tail = Ks.tail_ratio() * big;
            if (tail > opts_.tail_tol * big && tail > 1e-15) return false;
            Vec c = Ks.integral().coeffs();
            for (double& v : c) v *= factorial(i);
            c[0] += start;
            t.z[iu][ju] = ChebSeries(t.theta[ju], t.theta[ju + 1], std::move(c));
            Vec& zv = Zv[ju][iu];
            zv.resize(nq);
            for (std::size_t q = 0; q < nq; ++q) zv[q] = t.z[iu][ju].eval(nodes[ju][q]);

            if (j < N) {
                const std::size_t jn = ju + 1;
                Mat lower(iu);
                for (int m = 1; m < i; ++m) lower[static_cast<std::size_t>(m)] = t.jet_left[static_cast<std::size_t>(m)][jn];
                t.jet_left[iu][jn] = z_jet_at(i, j, t.theta[jn], zv.back(), lower);
                Mat zj(K1);
                for (int m = 1; m <= i; ++m) zj[static_cast<std::size_t>(m)] = t.jet_left[static_cast<std::size_t>(m)][jn];
                Vec al(iu);
                for (int q = 1; q < i; ++q) al[static_cast<std::size_t>(q)] = t.alpha[static_cast<std::size_t>(q)][jn];
                t.w[iu][jn] = w_faa_di_bruno(i, Mat(zj.begin(), zj.begin() + static_cast<std::ptrdiff_t>(iu) + 1), al);
                Vec ww(iu + 1);
                for (int m = 1; m <= i; ++m) ww[static_cast<std::size_t>(m)] = t.w[static_cast<std::size_t>(m)][jn];
                t.alpha[iu][jn] = alpha_faa_di_bruno(i, t.theta_derivs[jn], ww);
            }
        }
    }
    return true;
}

double MelnikovEngine::melnikov(int i, double x) const {
    if (i < 1 || i > field_.k()) throw DomainError("melnikov: order outside 1..k");
    return compute(x).melnikov(i);
}

std::vector<double> MelnikovEngine::melnikov_all(double x) const {
    const ZTable t = compute(x);
    std::vector<double> out;
    for (int i = 1; i <= t.k; ++i) out.push_back(t.melnikov(i));
    return out;
}

MelnikovEngine make_engine(const SystemConfig& cfg) { return MelnikovEngine(cfg); }

}  // namespace melnlab
