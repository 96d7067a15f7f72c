#include "melnlab/filippov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "melnlab/combinatorics.hpp"
#include "melnlab/errors.hpp"
#include "melnlab/jet.hpp"

namespace melnlab {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

Jet ipow(const Jet& x, int n) {
    Jet r = Jet::constant(1.0, x.base(), x.order(), x.var());
    for (int i = 0; i < n; ++i) r = r * x;
    return r;
}

double direction_sign(Direction d) { return d == Direction::counterclockwise ? -1.0 : 1.0; }

AffineField oriented_field(const SystemConfig& cfg, Region s, double eps, Direction d) {
    AffineField f = region_affine_field(cfg, s, eps);
    const double sg = direction_sign(d);
    for (double& v : f.A) v *= sg;
    for (double& v : f.c) v *= sg;
    return f;
}

// u(t) = E(t)(u0 - u*) + u*, E = e^{τt}(cos ωt I + sin ωt / ω M) or its hyperbolic form.
template <class T>
struct Flow {
    std::array<T, 4> A;
    std::array<T, 2> c;
};

std::array<double, 2> flow_eval(const Flow<double>& f, const std::array<double, 2>& u0, double t) {
    const auto& A = f.A;
    const double tau = 0.5 * (A[0] + A[3]);
    const double det = A[0] * A[3] - A[1] * A[2];
    const double delta = tau * tau - det;
    double C, S;  // E = e^{τt} (C I + S M)
    if (delta < -1e-300) {
        const double w = std::sqrt(-delta);
        C = std::cos(w * t);
        S = std::sin(w * t) / w;
    } else if (delta > 1e-300) {
        const double w = std::sqrt(delta);
        C = std::cosh(w * t);
        S = std::sinh(w * t) / w;
    } else {
        C = 1.0;
        S = t;
    }
    const double e = std::exp(tau * t);
    const double M0 = A[0] - tau, M3 = A[3] - tau;
    if (std::abs(det) < 1e-300) throw NumericalError("singular region matrix");
    const double us0 = -(A[3] * f.c[0] - A[1] * f.c[1]) / det;
    const double us1 = -(-A[2] * f.c[0] + A[0] * f.c[1]) / det;
    const double d0 = u0[0] - us0, d1 = u0[1] - us1;
    return {e * (C * d0 + S * (M0 * d0 + A[1] * d1)) + us0, e * (C * d1 + S * (A[2] * d0 + M3 * d1)) + us1};
}

std::array<Jet, 2> flow_eval(const Flow<Jet>& f, const std::array<Jet, 2>& u0, const Jet& t) {
    const auto& A = f.A;
    const Jet tau = 0.5 * (A[0] + A[3]);
    const Jet det = A[0] * A[3] - A[1] * A[2];
    const Jet delta = tau * tau - det;
    if (!(delta.value() < 0.0)) throw NumericalError("jet flow requires a rotating region field");
    const Jet w = sqrt(-delta);
    const Jet C = cos(w * t);
    const Jet S = sin(w * t) / w;
    const Jet e = exp(tau * t);
    const Jet M0 = A[0] - tau, M3 = A[3] - tau;
    const Jet us0 = -(A[3] * f.c[0] - A[1] * f.c[1]) / det;
    const Jet us1 = -(-1.0 * A[2] * f.c[0] + A[0] * f.c[1]) / det;
    const Jet d0 = u0[0] - us0, d1 = u0[1] - us1;
    return {e * (C * d0 + S * (M0 * d0 + A[1] * d1)) + us0, e * (C * d1 + S * (A[2] * d0 + M3 * d1)) + us1};
}

template <class T>
std::array<T, 2> velocity(const Flow<T>& f, const std::array<T, 2>& u) {
    return {f.A[0] * u[0] + f.A[1] * u[1] + f.c[0], f.A[2] * u[0] + f.A[3] * u[1] + f.c[1]};
}

Flow<double> to_flow(const AffineField& a) { return {a.A, a.c}; }

// Region field with ε-jet coefficients.
Flow<Jet> jet_flow(const SystemConfig& cfg, Region s, Direction d, std::size_t order) {
    const double sg = direction_sign(d);
    Flow<Jet> f;
    for (auto& v : f.A) v = Jet(0.0, order, JetVar::eps);
    for (auto& v : f.c) v = Jet(0.0, order, JetVar::eps);
    f.A[1][0] = sg;
    f.A[2][0] = -sg;
    for (int i = 1; i <= cfg.k && static_cast<std::size_t>(i) <= order; ++i) {
        const auto& o = cfg.order(i);
        const auto& p = s == Region::plus ? o.a : o.alpha;
        const auto& q = s == Region::plus ? o.b : o.beta;
        const auto iu = static_cast<std::size_t>(i);
        f.c[0][iu] = sg * p[0];
        f.A[0][iu] = sg * p[1];
        f.A[1][iu] = sg * p[2];
        f.c[1][iu] = sg * q[0];
        f.A[2][iu] = sg * q[1];
        f.A[3][iu] = sg * q[2];
    }
    return f;
}

enum class EventKind { switching, section };

struct EventHit {
    double t;
    std::array<double, 2> u;
    double transversality;
    double residual;
};

double event_value(EventKind kind, int n, const std::array<double, 2>& u) {
    return kind == EventKind::switching ? u[1] - ipow(u[0], n) : u[1];
}

double event_rate(EventKind kind, int n, const std::array<double, 2>& u, const std::array<double, 2>& v) {
    if (kind == EventKind::section) return v[1];
    return v[1] - (n == 1 ? 1.0 : n * ipow(u[0], n - 1)) * v[0];
}

// First zero of the event function after t = 0 by sampling, bisection and one Newton polish.
bool locate_event(const Flow<double>& f, const std::array<double, 2>& u0, EventKind kind, int n, double t_max, double h,
                  const SimOptions& opts, bool require_positive_x, EventHit& hit) {
    double ta = 0.0;
    double ga = event_value(kind, n, u0);
    bool first = true;
    for (double tb = h; tb <= t_max + h; tb += h) {
        const auto ub = flow_eval(f, u0, tb);
        const double rb = std::hypot(ub[0], ub[1]);
        if (!(rb >= opts.r_min && rb <= opts.r_max)) throw NumericalError("trajectory left r in [r_min, r_max] at t = " + std::to_string(tb));
        const double gb = event_value(kind, n, ub);
        if (first) {
            // The segment starts on the switching curve; skip the initial zero.
            if (kind == EventKind::switching && std::abs(ga) < 1e-12) ga = gb;
            first = false;
        }
        const bool sign_change = (ga < 0.0 && gb >= 0.0) || (ga > 0.0 && gb <= 0.0);
        if (sign_change && (!require_positive_x || ub[0] > 0.0)) {
            double lo = ta, hi = tb, glo = ga;
            while (hi - lo > 1e-15 * (1.0 + hi)) {
                const double mid = 0.5 * (lo + hi);
                const double gm = event_value(kind, n, flow_eval(f, u0, mid));
                if ((gm < 0.0) == (glo < 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            double t = 0.5 * (lo + hi);
            auto u = flow_eval(f, u0, t);
            const double g = event_value(kind, n, u);
            const double gp = event_rate(kind, n, u, velocity(f, u));
            if (std::abs(gp) < opts.tangency_floor)
                throw NumericalError("tangential contact with the switching curve at t = " + std::to_string(t));
            t -= g / gp;
            u = flow_eval(f, u0, t);
            hit = {t, u, gp, std::abs(event_value(kind, n, u))};
            return true;
        }
        ta = tb;
        ga = gb;
    }
    return false;
}

Region region_after(int crossing_index) { return crossing_index % 2 == 1 ? Region::plus : Region::minus; }

}  // namespace

std::array<double, 2> TrajectorySegment::eval(double t) const {
    if (t < t0 - 1e-12 || t > t1 + 1e-12) throw DomainError("segment evaluation outside its time span");
    return flow_eval(to_flow(field), start, t - t0);
}

PoincareResult integrate_return(double x0, double eps, const SystemConfig& cfg, const SimOptions& opts) {
    cfg.validate();
    if (!(x0 >= opts.x_min)) throw DomainError("x0 below the admissible minimum " + std::to_string(opts.x_min));
    if (!(x0 >= opts.r_min && x0 <= opts.r_max)) throw DomainError("x0 outside [r_min, r_max]");
    PoincareResult res;
    res.x0 = x0;
    res.eps = eps;
    std::array<double, 2> u{x0, 0.0};
    double t = 0.0;
    const double h = 2.0 * std::numbers::pi / opts.samples_per_turn;
    const double t_max = 4.0 * std::numbers::pi;
    Region reg = Region::minus;
    for (int seg = 0; seg < 3; ++seg) {
        const AffineField af = oriented_field(cfg, reg, eps, opts.direction);
        const Flow<double> f = to_flow(af);
        EventHit hit{};
        TrajectorySegment s;
        s.region = reg;
        s.t0 = t;
        s.start = u;
        s.field = af;
        if (seg < 2) {
            if (!locate_event(f, u, EventKind::switching, cfg.n, t_max, h, opts, false, hit))
                throw NumericalError("no switching-curve crossing found from t = " + std::to_string(t));
            res.crossing_times.push_back(t + hit.t);
            res.crossing_points.push_back(hit.u);
            s.exit_transversality = hit.transversality;
        } else {
            EventHit sw{};
            const bool has_sec = locate_event(f, u, EventKind::section, cfg.n, t_max, h, opts, true, hit);
            if (!has_sec) throw NumericalError("no return to the section");
            if (locate_event(f, u, EventKind::switching, cfg.n, hit.t, h, opts, false, sw) && sw.t < hit.t)
                throw NumericalError("unexpected third switching-curve crossing before the return");
        }
        s.t1 = t + hit.t;
        s.end = hit.u;
        res.segments.push_back(s);
        res.error_estimate += hit.residual / std::max(std::abs(hit.transversality), 1e-300) * std::hypot(velocity(f, hit.u)[0], velocity(f, hit.u)[1]);
        t += hit.t;
        u = hit.u;
        reg = region_after(seg + 1);
    }
    res.value = u[0];
    res.displacement = u[0] - x0;
    res.error_estimate += 4.0 * std::numeric_limits<double>::epsilon() * x0;
    return res;
}

double default_ladder_base(int i, const SystemConfig& cfg) {
    static const double base[] = {0.02, 0.05, 0.1, 0.15, 0.2, 0.25};
    const double b = base[std::clamp(i, 1, 6) - 1];
    return b / std::max(1.0, cfg.magnitude());
}

ExtractionResult extract_melnikov(double x0, int i, const SystemConfig& cfg, const ExtractionOptions& opts) {
    if (i < 1 || i > cfg.k) throw DomainError("extract: order outside 1..k");
    if (opts.rungs < 2) throw ConfigError("extract: at least two ladder rungs required");
    ExtractionResult out;
    out.base = opts.base > 0.0 ? opts.base : default_ladder_base(i, cfg);
    SimOptions sim = opts.sim;
    sim.direction = Direction::counterclockwise;
    // Central difference of order i with nodes (i/2 - m) h, weights (-1)^m C(i, m).
    auto central = [&](double h) {
        double s = 0.0;
        for (int m = 0; m <= i; ++m) {
            const double e = (0.5 * i - m) * h;
            if (e == 0.0) continue;
            s += (m % 2 ? -1.0 : 1.0) * binomial(i, m) * integrate_return(x0, e, cfg, sim).displacement;
        }
        return s / std::pow(h, i) / factorial(i);
    };
    const int R = opts.rungs;
    std::vector<std::vector<double>> T(static_cast<std::size_t>(R));
    double best = 0.0, best_err = std::numeric_limits<double>::infinity();
    double h = out.base;
    for (int j = 0; j < R; ++j, h *= 0.5) {
        auto& row = T[static_cast<std::size_t>(j)];
        row.push_back(central(h));
        double f4 = 1.0;
        for (int m = 1; m <= j; ++m) {
            f4 *= 4.0;
            const double prev = T[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(m - 1)];
            row.push_back(row[static_cast<std::size_t>(m - 1)] + (row[static_cast<std::size_t>(m - 1)] - prev) / (f4 - 1.0));
            const double err = std::max(std::abs(row[static_cast<std::size_t>(m)] - row[static_cast<std::size_t>(m - 1)]),
                                        std::abs(row[static_cast<std::size_t>(m)] - prev));
            if (err < best_err) {
                best_err = err;
                best = row[static_cast<std::size_t>(m)];
            }
        }
    }
    out.value = best;
    out.error_estimate = best_err;
    out.flagged = best_err > opts.reject_tol * std::max(1.0, std::abs(best));
    return out;
}

namespace {

struct JetState {
    std::array<Jet, 2> u;
};

// Advance one segment with ε-jets, returning the state at the event; t_guess is the scalar local event time.
JetState jet_segment(const Flow<Jet>& f, const JetState& s, EventKind kind, int n, double t_guess) {
    const std::size_t P = s.u[0].order();
    Jet t = Jet::constant(t_guess, 0.0, P, JetVar::eps);
    for (std::size_t it = 0; it < P + 3; ++it) {
        const auto u = flow_eval(f, s.u, t);
        const auto v = velocity(f, u);
        Jet g = kind == EventKind::switching ? u[1] - ipow(u[0], n) : u[1];
        Jet gp = kind == EventKind::section ? v[1] : v[1] - (n == 1 ? Jet::constant(1.0, 0.0, P, JetVar::eps) : n * ipow(u[0], n - 1)) * v[0];
        t -= g / gp;
    }
    return {flow_eval(f, s.u, t)};
}

std::vector<JetState> jet_orbit(double x0, const SystemConfig& cfg, int order, const SimOptions& opts) {
    SimOptions sim = opts;
    sim.direction = Direction::counterclockwise;
    const PoincareResult base = integrate_return(x0, 0.0, cfg, sim);
    const auto P = static_cast<std::size_t>(order);
    JetState s{{Jet::constant(x0, 0.0, P, JetVar::eps), Jet::constant(0.0, 0.0, P, JetVar::eps)}};
    std::vector<JetState> states;
    Region reg = Region::minus;
    for (int seg = 0; seg < 3; ++seg) {
        const Flow<Jet> f = jet_flow(cfg, reg, Direction::counterclockwise, P);
        const auto& bs = base.segments[static_cast<std::size_t>(seg)];
        s = jet_segment(f, s, seg < 2 ? EventKind::switching : EventKind::section, cfg.n, bs.t1 - bs.t0);
        states.push_back(s);
        reg = region_after(seg + 1);
    }
    return states;
}

}  // namespace

std::vector<double> extract_melnikov_jet(double x0, const SystemConfig& cfg, int order, const SimOptions& opts) {
    if (order < 1) throw DomainError("extract: order must be positive");
    const auto states = jet_orbit(x0, cfg, order, opts);
    const Jet& x = states.back().u[0];
    std::vector<double> m;
    for (int i = 1; i <= order; ++i) m.push_back(x[static_cast<std::size_t>(i)]);
    return m;
}

CrossingJet crossing_jet(double x0, const SystemConfig& cfg, int j, int order) {
    if (j < 1 || j > 2) throw DomainError("crossing index must be 1 or 2");
    const auto states = jet_orbit(x0, cfg, order, {});
    const auto& u = states[static_cast<std::size_t>(j - 1)].u;
    const Jet r = sqrt(u[0] * u[0] + u[1] * u[1]);
    Jet ang = atan(u[1] / u[0]);
    if (j == 2) ang += std::numbers::pi;
    CrossingJet out;
    for (int i = 0; i <= order; ++i) {
        out.w.push_back(i == 0 ? 0.0 : r[static_cast<std::size_t>(i)]);
        out.alpha.push_back(ang[static_cast<std::size_t>(i)]);
    }
    return out;
}

CycleSearch find_limit_cycles(double eps, const SystemConfig& cfg, const std::vector<double>& seeds, const CycleSearchOptions& opts) {
    CycleSearch out;
    SimOptions sim = opts.sim;
    sim.direction = Direction::counterclockwise;
    auto delta = [&](double x) { return integrate_return(x, eps, cfg, sim).displacement; };
    bool all_flat = !seeds.empty();
    for (double s : seeds) {
        const double h = opts.fd_step * std::max(1.0, s);
        if (std::max({std::abs(delta(s)), std::abs(delta(s + h)), std::abs(delta(s - h))}) > 1e-13 * std::max(1.0, s)) {
            all_flat = false;
            break;
        }
    }
    if (all_flat) {
        out.period_annulus = true;
        out.diagnostics.push_back("period annulus, no isolated cycles");
        return out;
    }
    for (double seed : seeds) {
        double x = seed, d = 0.0, dp = 0.0;
        int it = 0;
        bool converged = false;
        try {
            d = delta(x);
            for (; it < opts.max_iterations; ++it) {
                const double h = opts.fd_step * std::max(1.0, x);
                dp = (delta(x + h) - delta(x - h)) / (2.0 * h);
                if (dp == 0.0) break;
                const double step = d / dp;
                double lam = 1.0, xn = x - step, dn = 0.0;
                for (int back = 0; back < 20; ++back) {
                    xn = x - lam * step;
                    if (xn >= sim.x_min) {
                        dn = delta(xn);
                        if (std::abs(dn) < std::abs(d) || std::abs(dn) <= opts.tol) break;
                    }
                    lam *= 0.5;
                }
                const bool small_step = std::abs(lam * step) <= 1e-14 * (1.0 + x);
                x = xn;
                d = dn;
                if (std::abs(d) <= opts.tol || small_step) {
                    converged = true;
                    break;
                }
            }
        } catch (const std::exception& e) {
            out.diagnostics.push_back("seed " + std::to_string(seed) + ": " + e.what());
            continue;
        }
        if (!converged || std::abs(d) > 1e-10) {
            out.diagnostics.push_back("seed " + std::to_string(seed) + ": Newton did not converge (|delta| = " + std::to_string(std::abs(d)) + ")");
            continue;
        }
        const double h = opts.fd_step * std::max(1.0, x);
        dp = (delta(x + h) - delta(x - h)) / (2.0 * h);
        LimitCycle c;
        c.x = x;
        c.eps = eps;
        c.multiplier = 1.0 + dp;
        c.residual = std::abs(d);
        c.stable_forward = c.multiplier > 1.0;  // forward time runs the inverse map
        c.seed = seed;
        c.iterations = it + 1;
        const bool dup = std::any_of(out.cycles.begin(), out.cycles.end(), [&](const LimitCycle& o) { return std::abs(o.x - x) < opts.dedup; });
        if (!dup) out.cycles.push_back(c);
    }
    std::sort(out.cycles.begin(), out.cycles.end(), [](const LimitCycle& a, const LimitCycle& b) { return a.x < b.x; });
    return out;
}

}  // namespace melnlab
