#include "melnlab/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "melnlab/cheb_kit.hpp"
#include "melnlab/closed_forms.hpp"
#include "melnlab/errors.hpp"
#include "melnlab/filippov.hpp"
#include "melnlab/kernels.hpp"
#include "melnlab/report.hpp"

namespace melnlab {

const std::vector<std::string>& reproduce_cases() {
    static const std::vector<std::string> ids{"m1_n1", "m1_n2", "m1_odd", "m1_even", "m2_n3_structure",
                                              "prop4", "prop5_k2", "cycles_n2_l1"};
    return ids;
}

namespace {

std::string zeros_csv(const ZeroReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "x,residual,derivative,simple\n";
    for (const ZeroEntry& z : r.zeros) os << z.x << ',' << z.residual << ',' << z.derivative << ',' << (z.simple ? 1 : 0) << '\n';
    return os.str();
}

std::string q_curve_csv(const VCoefficients& v, int n, double lo, double hi) {
    std::ostringstream os;
    os.precision(17);
    os << "x,q,M1\n";
    for (double x : make_grid(lo, hi, 400, true))
        os << x << ',' << q_poly(v, n, x) << ',' << q_poly(v, n, x) / q_denominator(n, x) << '\n';
    return os.str();
}

// Realization plus ceiling scan for each n.
CaseReport m1_case(const std::string& id, const std::vector<int>& ns, std::uint64_t seed, int configs) {
    CaseReport rep;
    rep.id = id;
    rep.pass = true;
    std::ostringstream st;
    for (int n : ns) {
        const int ceiling = m1_ceiling(n);
        const M1Realization r = realize_m1_zeros(n, ceiling, seed + static_cast<std::uint64_t>(n));
        const CeilingScan s = m1_ceiling_scan(n, configs, seed * 1000 + static_cast<std::uint64_t>(n));
        const bool ok = r.success && s.respected;
        rep.pass = rep.pass && ok;
        if (st.tellp() > 0) st << "; ";
        st << "n=" << n << ": " << (r.success ? std::to_string(ceiling) : std::string("fewer than ") + std::to_string(ceiling))
           << " simple zeros realized; max " << s.max_count << " over " << s.configs << " random configs, ceiling " << ceiling
           << (s.respected ? " respected" : " exceeded");
        nlohmann::json d;
        d["n"] = n;
        d["ceiling"] = ceiling;
        d["realized"] = r.success;
        d["attempts"] = r.attempts;
        d["v"] = std::vector<double>(r.v.v.begin(), r.v.v.begin() + static_cast<long>(r.v.size()));
        d["x_zeros"] = nlohmann::json::array();
        for (const ZeroEntry& z : r.zeros.zeros) d["x_zeros"].push_back(z.x);
        d["r_zeros"] = r.r_zeros;
        d["config"] = config_to_json(r.config);
        d["scan"] = {{"configs", s.configs}, {"max_count", s.max_count}, {"histogram", s.histogram},
                     {"non_exhaustive", s.non_exhaustive}, {"respected", s.respected}};
        rep.details["n" + std::to_string(n)] = d;
        if (r.success) {
            rep.artifacts.push_back({"m1_n" + std::to_string(n) + "_zeros.csv", zeros_csv(r.zeros)});
            rep.artifacts.push_back({"m1_n" + std::to_string(n) + "_curve.csv", q_curve_csv(r.v, n, 0.05, 20.0)});
        }
    }
    rep.statement = st.str();
    return rep;
}

CaseReport m2_structure(std::uint64_t seed) {
    CaseReport rep;
    rep.id = "m2_n3_structure";
    VanishingOptions o;
    o.seed = seed;
    const VanishingConfig vc = build_vanishing_config(3, 2, 2, o);
    const auto samples = sample_melnikov(vc.config, 2, 0.3, 2.0, 40);
    const SpanFit fit = fit_to_span(samples, 3, 2);
    // Simulation cross-check of M2 at three section points.
    const std::vector<double> r{cov_r_of_x(0.5, 3), cov_r_of_x(1.0, 3), cov_r_of_x(1.5, 3)};
    const auto ext = extraction_table(vc.config, 2, r);
    const auto rec = melnikov_table(vc.config, r);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        worst = std::max(worst, std::abs(ext[i].value - rec[i][1]) / std::max(1e-12, std::abs(rec[i][1])));
    rep.pass = vc.success && fit.residual <= 1e-6 && worst <= 1e-3;
    std::ostringstream st;
    st << "M1 = 0 config (lower sup " << vc.lower_residuals[0] << "); M2 numerator fits " << fit.family
       << " with relative residual " << fit.residual << "; simulation agrees to " << worst;
    rep.statement = st.str();
    rep.details = {{"config", config_to_json(vc.config)},
                   {"lower_residuals", vc.lower_residuals},
                   {"discontinuity", vc.discontinuity},
                   {"family", fit.family},
                   {"basis", fit.basis},
                   {"coefficients", fit.coefficients},
                   {"residual", fit.residual},
                   {"condition", fit.condition},
                   {"simulation_relative_gap", worst}};
    rep.artifacts.push_back({"m2_n3_fit.csv", span_fit_csv(samples, fit, 3, 2)});
    return rep;
}

CaseReport prop4_case() {
    CaseReport rep;
    rep.id = "prop4";
    const Prop4Result p = prop4_check();
    rep.pass = p.zeros.count() == 8 && p.zeros.simple_count() == 8 && p.zeros.exhaustive;
    rep.statement = std::to_string(p.zeros.simple_count()) + " simple zeros of g(x) = f(x^2) on (0, 50); " + p.note;
    rep.details = {{"zeros", to_json(p.zeros)}, {"a1", p.a1}, {"a1_adjusted", p.a1_adjusted}, {"note", p.note}};
    rep.artifacts.push_back({"prop4_zeros.csv", zeros_csv(p.zeros)});
    return rep;
}

CaseReport prop5_case() {
    CaseReport rep;
    rep.id = "prop5_k2";
    const Prop5Result p = prop5_witness(2);
    rep.pass = p.ladder_ok && p.base_zeros.simple_count() == 4 && p.success && p.zeros.simple_count() == 9;
    std::ostringstream st;
    st << "sign ladder " << (p.ladder_ok ? "holds" : "fails") << "; " << p.base_zeros.simple_count()
       << " simple zeros of g_2(x; 0) in (0, 2); witness at scale " << p.scale << " gives " << p.zeros.simple_count()
       << " simple zeros";
    rep.statement = st.str();
    std::vector<double> ladder(p.ladder.begin(), p.ladder.end());
    rep.details = {{"ladder", ladder},          {"ladder_ok", p.ladder_ok},
                   {"base_zeros", to_json(p.base_zeros)}, {"a", p.a},
                   {"scale", p.scale},          {"zeros", to_json(p.zeros)},
                   {"notes", p.notes}};
    rep.artifacts.push_back({"prop5_k2_zeros.csv", zeros_csv(p.zeros)});
    return rep;
}

CaseReport cycles_case(std::uint64_t seed) {
    CaseReport rep;
    rep.id = "cycles_n2_l1";
    const double eps = 1e-4;
    const M1Realization r = realize_m1_zeros(2, 3, seed + 2);
    if (!r.success) {
        rep.statement = "no three-zero first-order config found";
        return rep;
    }
    const CycleSearch cs = find_limit_cycles(eps, r.config, r.r_zeros);
    bool close = cs.cycles.size() == r.r_zeros.size();
    bool stable_sign = close;
    nlohmann::json cyc = nlohmann::json::array();
    const VCoefficients v = v_coefficients(r.config);
    for (std::size_t i = 0; i < cs.cycles.size(); ++i) {
        const LimitCycle& c = cs.cycles[i];
        const double a = i < r.r_zeros.size() ? r.r_zeros[i] : 0.0;
        const double h = 1e-6 * a;
        const double dm = (m1_closed(v, 2, a + h) - m1_closed(v, 2, a - h)) / (2 * h);
        const bool near = std::abs(c.x - a) <= 5 * eps;
        const bool sign_ok = (c.multiplier - 1.0 > 0) == (eps * dm > 0);
        close = close && near;
        stable_sign = stable_sign && sign_ok;
        cyc.push_back({{"x", c.x}, {"melnikov_zero", a}, {"distance", std::abs(c.x - a)}, {"multiplier", c.multiplier},
                       {"residual", c.residual}, {"stable_forward", c.stable_forward}, {"sign_consistent", sign_ok}});
    }
    rep.pass = close && stable_sign;
    std::ostringstream st;
    st << cs.cycles.size() << " limit cycles at eps = " << eps << " for " << r.r_zeros.size() << " simple zeros of M1; "
       << (close ? "each within 5 eps" : "not all within 5 eps") << "; stability signs "
       << (stable_sign ? "match" : "do not match") << " eps M1'";
    rep.statement = st.str();
    rep.details = {{"config", config_to_json(r.config)}, {"eps", eps}, {"cycles", cyc}, {"diagnostics", cs.diagnostics}};
    return rep;
}

}  // namespace

CaseReport run_case(const std::string& id, std::uint64_t seed, int scan_configs) {
    if (id == "m1_n1") return m1_case(id, {1}, seed, scan_configs);
    if (id == "m1_n2") return m1_case(id, {2}, seed, scan_configs);
    if (id == "m1_odd") return m1_case(id, {3, 5}, seed, scan_configs);
    if (id == "m1_even") return m1_case(id, {4, 6}, seed, scan_configs);
    if (id == "m2_n3_structure") return m2_structure(seed);
    if (id == "prop4") return prop4_case();
    if (id == "prop5_k2") return prop5_case();
    if (id == "cycles_n2_l1") return cycles_case(seed);
    throw ConfigError("unknown case '" + id + "'");
}

}  // namespace melnlab
