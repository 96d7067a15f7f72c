#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "melnlab/cheb_kit.hpp"
#include "melnlab/closed_forms.hpp"
#include "melnlab/errors.hpp"
#include "melnlab/kernels.hpp"
#include "melnlab/recursion.hpp"
#include "melnlab/report.hpp"
#include "melnlab/reproduce.hpp"

namespace fs = std::filesystem;
using namespace melnlab;

namespace {

constexpr int exit_numerical = 2;
constexpr int exit_config = 3;

struct Options {
    std::string config, interval, grid = "24log", orders = "1", family, case_id, out = "melnlab_out";
    std::uint64_t seed = 1;
    int workers = 0;
    int scan_configs = 1000;
};

void write_file(const fs::path& p, const std::string& s) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + p.string());
    f << s;
}

fs::path prepare_out(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir);
    return fs::path(dir);
}

RunManifest manifest(const std::string& cmd, const Options& o) {
    RunManifest m;
    m.command = cmd;
    m.config_path = o.config;
    m.out_dir = o.out;
    m.seed = o.seed;
    m.family = o.family;
    m.case_id = o.case_id;
    return m;
}

// Span fit of M_i when M_1..M_{i-1} vanish on the sampled grid.
nlohmann::json span_fit_record(const SystemConfig& cfg, int i, const fs::path& out) {
    if (cfg.n < 2 && i > 1) return {{"applicable", false}, {"reason", "no declared span for n = 1 above order 1"}};
    if (i > 6) return {{"applicable", false}, {"reason", "no declared span above order 6"}};
    const auto s = sample_melnikov(cfg.with_order(i), i, 0.3, 2.0, 40);
    if (i > 1) {
        const MelnikovEngine eng(cfg.with_order(i));
        double lower = 0.0, top = 0.0;
        for (const SpanSample& p : s) {
            const auto m = eng.melnikov_all(cov_r_of_x(p.x, cfg.n));
            for (int j = 0; j + 1 < i; ++j) lower = std::max(lower, std::abs(m[static_cast<std::size_t>(j)]));
            top = std::max(top, std::abs(m.back()));
        }
        if (lower > 1e-9 * std::max(1.0, top))
            return {{"applicable", false}, {"reason", "lower orders do not vanish"}, {"lower_sup", lower}};
    }
    const SpanFit f = fit_to_span(s, cfg.n, i);
    const std::string name = "span_fit_M" + std::to_string(i) + ".csv";
    write_file(out / name, span_fit_csv(s, f, cfg.n, i));
    return {{"applicable", true}, {"family", f.family},       {"basis", f.basis},          {"coefficients", f.coefficients},
            {"residual", f.residual}, {"condition", f.condition}, {"rank_deficient", f.rank_deficient}, {"csv", name}};
}

int cmd_melnikov(const Options& o) {
    if (o.config.empty()) throw ConfigError("melnikov needs --config");
    const SystemConfig cfg = load_config(o.config);
    const auto [lo, hi] = o.interval.empty() ? std::pair{0.3, 3.0} : parse_interval(o.interval);
    const auto [points, log] = parse_grid(o.grid);
    const std::vector<int> orders = parse_orders(o.orders);
    for (int i : orders)
        if (i > cfg.k) throw ConfigError("order " + std::to_string(i) + " exceeds config order " + std::to_string(cfg.k));
    const fs::path out = prepare_out(o.out);
    const std::vector<double> r = make_grid(lo, hi, points, log);
    const auto table = melnikov_table(cfg, r);

    RunManifest m = manifest("melnikov", o);
    m.interval_lo = lo;
    m.interval_hi = hi;
    m.grid_points = points;
    m.grid_log = log;
    m.orders = orders;
    nlohmann::json summary{{"manifest", to_json(m)}, {"config", config_to_json(cfg)}, {"orders", nlohmann::json::object()}};
    bool quality = true;
    for (int i : orders) {
        const auto ext = extraction_table(cfg, i, r);
        std::ostringstream csv;
        csv.precision(17);
        csv << "r,recursion,simulation,relative_gap,x" << (i == 1 ? ",closed_form" : "") << '\n';
        double worst = 0.0;
        int flagged = 0;
        for (std::size_t p = 0; p < r.size(); ++p) {
            const double rec = table[p][static_cast<std::size_t>(i - 1)];
            const double gap = std::abs(ext[p].value - rec) / std::max(1.0, std::abs(rec));
            worst = std::max(worst, gap);
            if (ext[p].flagged) ++flagged;
            csv << r[p] << ',' << rec << ',' << ext[p].value << ',' << gap << ',' << cov_x_of_r(r[p], cfg.n);
            if (i == 1) csv << ',' << m1_closed(cfg, r[p]);
            csv << '\n';
        }
        const std::string name = "melnikov_M" + std::to_string(i) + ".csv";
        write_file(out / name, csv.str());
        write_file(out / ("melnikov_M" + std::to_string(i) + ".gp"),
                   gnuplot_script(name, {"recursion", "simulation"}, log, "M" + std::to_string(i)));
        nlohmann::json rec{{"csv", name}, {"max_relative_gap", worst}, {"flagged_extractions", flagged}};
        rec["span_fit"] = span_fit_record(cfg, i, out);
        summary["orders"][std::to_string(i)] = rec;
        if (flagged > 0) quality = false;
    }
    summary["quality_ok"] = quality;
    write_file(out / "melnikov_summary.json", dump_json(summary));
    std::cout << dump_json(summary);
    return quality ? 0 : exit_numerical;
}

int cmd_cheb(const Options& o) {
    if (o.family.empty()) throw ConfigError("cheb needs --family");
    const fs::path out = prepare_out(o.out);
    const auto [lo, hi] = o.interval.empty() ? std::pair{1e-3, 1e3} : parse_interval(o.interval);
    const auto [points, log] = parse_grid(o.grid);
    RunManifest m = manifest("cheb", o);
    m.interval_lo = lo;
    m.interval_hi = hi;
    m.grid_points = points;
    m.grid_log = log;
    nlohmann::json summary{{"manifest", to_json(m)}};
    std::string fam = o.family;
    bool ok = true;
    // Trailing keywords select the witness checks instead of a plain certification.
    auto strip = [&](const std::string& word) {
        const auto p = fam.rfind(" " + word);
        if (p == std::string::npos || p + word.size() + 1 != fam.size()) return false;
        fam = fam.substr(0, p);
        return true;
    };
    if (strip("prop4")) {
        const Prop4Result p = prop4_check(hi > 1e2 ? 50.0 : hi);
        summary["prop4"] = {{"zeros", to_json(p.zeros)}, {"a1_adjusted", p.a1_adjusted}, {"note", p.note}};
        ok = p.zeros.simple_count() == 8 && p.zeros.exhaustive;
    } else if (strip("prop5")) {
        const OrderedFamily f = family_by_name(fam);
        const Prop5Result p = prop5_witness(f.k);
        summary["prop5"] = {{"ladder_ok", p.ladder_ok}, {"base_zeros", to_json(p.base_zeros)}, {"a", p.a},
                            {"scale", p.scale},        {"zeros", to_json(p.zeros)},           {"notes", p.notes}};
        ok = p.success;
    } else if (strip("ceiling")) {
        const OrderedFamily f = family_by_name(fam);
        const F7Ceiling c = f7_ceiling(f.k, lo, hi);
        summary["ceiling"] = {{"k", c.k}, {"derivative_order", c.derivative_order}, {"ceiling", c.ceiling},
                              {"verdict", to_json(c.verdict)}};
        ok = c.ceiling > 0;
    } else {
        const OrderedFamily f = family_by_name(fam);
        if (!(lo > 0.0)) throw ConfigError("certification interval must be positive");
        const AccuracyVerdict v = certify_family(f, lo, hi);
        summary["verdict"] = to_json(v);
        write_file(out / "wronskians.csv", wronskian_csv(f, lo, hi, points));
        std::vector<std::string> cols;
        for (std::size_t s = 0; s < f.size(); ++s) cols.push_back("W" + std::to_string(s));
        write_file(out / "wronskians.gp", gnuplot_script("wronskians.csv", cols, true, f.name));
        ok = v.classification != FamilyClass::inconclusive;
    }
    summary["family"] = o.family;
    summary["quality_ok"] = ok;
    write_file(out / "cheb_summary.json", dump_json(summary));
    std::cout << dump_json(summary);
    return ok ? 0 : exit_numerical;
}

int cmd_reproduce(const Options& o) {
    if (o.case_id.empty()) throw ConfigError("reproduce needs --case");
    const CaseReport rep = run_case(o.case_id, o.seed, o.scan_configs);
    const fs::path out = prepare_out(o.out);
    RunManifest m = manifest("reproduce", o);
    nlohmann::json j{{"manifest", to_json(m)}, {"case", rep.id}, {"result", rep.pass ? "PASS" : "FAIL"},
                     {"statement", rep.statement}, {"details", rep.details}, {"artifacts", nlohmann::json::array()}};
    for (const auto& [name, body] : rep.artifacts) {
        write_file(out / name, body);
        j["artifacts"].push_back(name);
    }
    write_file(out / (rep.id + ".json"), dump_json(j));
    std::cout << rep.id << ": " << rep.statement << ' ' << (rep.pass ? "PASS" : "FAIL") << '\n';
    return rep.pass ? 0 : exit_numerical;
}

int error_exit(int code, const std::string& kind, const std::string& what, const Options& o) {
    const nlohmann::json j{{"error", kind}, {"message", what}};
    std::cerr << dump_json(j);
    std::error_code ec;
    fs::create_directories(o.out, ec);
    if (fs::is_directory(o.out, ec)) {
        std::ofstream f(fs::path(o.out) / "error.json");
        f << dump_json(j);
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"melnlab: Melnikov functions, Wronskian certificates and scripted scenarios"};
    app.require_subcommand(1);
    Options o;
    if (const char* w = std::getenv("MELNLAB_WORKERS")) o.workers = std::atoi(w);

    auto common = [&](CLI::App* c) {
        c->add_option("--out", o.out, "Output directory");
        c->add_option("--seed", o.seed, "Seed for randomized searches");
        c->add_option("--workers", o.workers, "Worker threads (falls back to MELNLAB_WORKERS)");
        c->add_option("--interval", o.interval, "Interval A:B");
        c->add_option("--grid", o.grid, "Grid N, Nlog or Nlin");
    };
    CLI::App* mel = app.add_subcommand("melnikov", "Tabulate M_i from the recursion against simulation");
    mel->add_option("--config", o.config, "System config JSON")->required();
    mel->add_option("--orders", o.orders, "Orders, e.g. 1,2 or 1-3");
    common(mel);
    CLI::App* cheb = app.add_subcommand("cheb", "Certify a function family through its Wronskians");
    cheb->add_option("--family", o.family, "Family, e.g. \"F2 k=1\" or \"F7 k=1 lambda=2 prop4\"")->required();
    common(cheb);
    CLI::App* rep = app.add_subcommand("reproduce", "Run a scripted scenario");
    rep->add_option("--case", o.case_id, "Scenario id")->required();
    rep->add_option("--scan-configs", o.scan_configs, "Random configs per ceiling scan");
    common(rep);
    app.add_subcommand("cases", "List scenario ids")->callback([] {
        for (const auto& id : reproduce_cases()) std::cout << id << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }
    set_workers(o.workers);
    try {
        if (mel->parsed()) return cmd_melnikov(o);
        if (cheb->parsed()) return cmd_cheb(o);
        if (rep->parsed()) return cmd_reproduce(o);
        return 0;
    } catch (const ConfigError& e) {
        return error_exit(exit_config, "config", e.what(), o);
    } catch (const DomainError& e) {
        return error_exit(exit_config, "domain", e.what(), o);
    } catch (const nlohmann::json::exception& e) {
        return error_exit(exit_config, "config", e.what(), o);
    } catch (const NumericalError& e) {
        return error_exit(exit_numerical, "numerical", e.what(), o);
    } catch (const std::exception& e) {
        return error_exit(exit_numerical, "internal", e.what(), o);
    }
}
