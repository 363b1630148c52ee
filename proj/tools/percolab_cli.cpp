// percolab command-line front end: estimates, exactly computes, and analyzes
// two-point connectivity curves on finite boxes of Z^d. Every subcommand
// writes a JSON report (schema "percolab/1") embedding its resolved
// configuration; curves can additionally be exported as CSV.
//
// Exit codes: 0 success, 1 validation or I/O failure, 2 statistically
// inconclusive result under --strict.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "percolab/analysis.hpp"
#include "percolab/core.hpp"
#include "percolab/estimators.hpp"
#include "percolab/lattice.hpp"
#include "percolab/oracle.hpp"
#include "percolab/report.hpp"

namespace {

using namespace percolab;

// Accepts "4", "1,3,5" or "1..8".
std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    auto range_pos = text.find("..");
    if (range_pos != std::string::npos) {
        int lo = std::stoi(text.substr(0, range_pos));
        int hi = std::stoi(text.substr(range_pos + 2));
        if (hi < lo) throw CLI::ValidationError("n", "range upper end below lower end");
        for (int n = lo; n <= hi; ++n) out.push_back(n);
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        std::string tok = text.substr(start, comma == std::string::npos
                                                 ? std::string::npos
                                                 : comma - start);
        if (!tok.empty()) out.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw CLI::ValidationError("n", "empty n list");
    return out;
}

// Accepts scientific notation ("1e6") for counts.
std::uint64_t parse_count(const std::string& text, const char* field) {
    double v = std::stod(text);
    if (!(v >= 1.0) || v != std::floor(v) || v > 1.8e19)
        throw CLI::ValidationError(field, "must be a positive integer (scientific "
                                          "notation accepted)");
    return static_cast<std::uint64_t>(v);
}

LatticeGraph resolve_graph(const RunConfig& cfg) {
    if (cfg.fixture == "unit-square") return LatticeGraph::box({0, 0}, {1, 1});
    if (!cfg.fixture.empty())
        throw std::invalid_argument("fixture: unknown name '" + cfg.fixture +
                                    "' (available: unit-square)");
    return build_box(BoxSpec{cfg.d, cfg.n_max, cfg.margin});
}

Json graph_json(const RunConfig& cfg) {
    if (!cfg.fixture.empty()) return Json{{"fixture", cfg.fixture}};
    return json_of(BoxSpec{cfg.d, cfg.n_max, cfg.margin});
}

std::vector<std::string> standard_notes(const RunConfig& cfg) {
    std::vector<std::string> notes;
    if (cfg.event == "truncated") notes.push_back(truncated_proxy_note());
    if (cfg.fixture.empty() && cfg.d == 1) notes.push_back(d1_fixture_note());
    return notes;
}

void emit(const Json& report, const RunConfig& cfg, const PairedCurve* curve) {
    std::string text = report.dump(2);
    text.push_back('\n');
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream os(cfg.out, std::ios::binary);
        if (!os || !(os << text))
            throw std::runtime_error("cannot write report to " + cfg.out);
    }
    if (!cfg.csv.empty()) {
        if (!curve)
            throw std::invalid_argument("csv: this subcommand produces no curve");
        std::ofstream os(cfg.csv, std::ios::binary);
        if (!os || !(os << curve_csv(*curve)))
            throw std::runtime_error("cannot write CSV to " + cfg.csv);
    }
}

Json load_report(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read input report " + path);
    Json j;
    is >> j;
    return j;
}

CurveParams curve_params(const RunConfig& cfg) {
    CurveParams p;
    p.p = cfg.p.value();
    p.ns = cfg.n_list;
    p.kind = event_kind_from_string(cfg.event);
    p.samples = cfg.samples;
    p.seed = cfg.seed;
    p.workers = cfg.workers;
    p.ci_level = cfg.ci_level;
    return p;
}

int run_exact(RunConfig cfg) {
    LatticeGraph g = resolve_graph(cfg);
    const double p = cfg.p.value_or(0.5);
    cfg.p = p;
    EventKind kind = event_kind_from_string(cfg.event);
    Json polys = Json::array();
    Json curve = Json::array();
    for (int n : cfg.n_list) {
        auto [u, v] = axis_pair(g, n);
        ConnectivityPolynomial poly = connectivity_counts(g, {kind, u, v});
        Json jp = json_of(poly, graph_json(cfg));
        jp["n"] = n;
        polys.push_back(jp);
        curve.push_back(Json{{"n", n}, {"value", eval_polynomial(poly, p)}, {"stderr", 0.0}});
    }
    Json results{{"graph", graph_json(cfg)},
                 {"p", p},
                 {"event", cfg.event},
                 {"polynomials", polys},
                 {"curve", curve}};
    emit(make_report("exact", cfg, standard_notes(cfg), results), cfg, nullptr);
    return 0;
}

int run_tau(RunConfig cfg, EventKind kind) {
    cfg.event = to_string(kind);
    if (!cfg.p) throw std::invalid_argument("p: required for this subcommand");
    LatticeGraph g = resolve_graph(cfg);
    PairedCurve curve = estimate_curve(g, curve_params(cfg));
    Json results = json_of(curve);
    results["graph"] = graph_json(cfg);
    std::string name = kind == EventKind::truncated ? "tau-trunc" : "tau";
    emit(make_report(name, cfg, standard_notes(cfg), results), cfg, &curve);
    return 0;
}

int run_sweep(RunConfig cfg) {
    if (cfg.event == "truncated")
        throw std::invalid_argument(
            "event: the truncated event is not increasing in the bond count; "
            "sweep estimation refuses it (use tau-trunc)");
    if (cfg.p_grid.empty()) throw std::invalid_argument("p-grid: required for sweep");
    LatticeGraph g = resolve_graph(cfg);
    SweepFamily fam = sweep_estimate(g, cfg.n_list, cfg.p_grid, cfg.sweeps, cfg.seed,
                                     EventKind::two_point);
    Json results = json_of(fam);
    results["graph"] = graph_json(cfg);
    emit(make_report("sweep", cfg, standard_notes(cfg), results), cfg, nullptr);
    return 0;
}

int run_fit_oz(RunConfig cfg) {
    if (cfg.input.empty()) throw std::invalid_argument("input: curve report required");
    Json in = load_report(cfg.input);
    std::vector<CurvePoint> pts = curve_points_from_report(in);
    OzFit fit = fit_oz(pts, cfg.d, oz_form_from_string(cfg.form));
    Json results = json_of(fit);
    results["input_kind"] = in.value("kind", "");
    bool inconclusive = fit.trend_flagged;
    emit(make_report("fit-oz", cfg, standard_notes(cfg), results), cfg, nullptr);
    return cfg.strict && inconclusive ? 2 : 0;
}

int run_check_bounds(RunConfig cfg) {
    if (cfg.input.empty()) throw std::invalid_argument("input: curve report required");
    Json in = load_report(cfg.input);
    std::vector<CurvePoint> pts = curve_points_from_report(in);
    if (!cfg.p) {
        const Json& results = in.at("results");
        if (results.contains("p"))
            cfg.p = results.at("p").get<double>();
        else if (in.at("config").contains("p") && !in.at("config").at("p").is_null())
            cfg.p = in.at("config").at("p").get<double>();
        else
            throw std::invalid_argument("p: not present in input report; pass --p");
    }
    BoundParams params{cfg.c1, cfg.c2, cfg.c};
    BoundReport rep = check_bounds(pts, bound_kind_from_string(cfg.bound), *cfg.p,
                                   cfg.d, params, cfg.z);
    bool inconclusive = rep.inconclusive > 0;
    emit(make_report("check-bounds", cfg, standard_notes(cfg), json_of(rep)), cfg,
         nullptr);
    return cfg.strict && inconclusive ? 2 : 0;
}

int run_ratio(RunConfig cfg) {
    if (!cfg.p) throw std::invalid_argument("p: required for ratio");
    LatticeGraph g = resolve_graph(cfg);
    PairedCurve curve = estimate_curve(g, curve_params(cfg));
    const double nu = 0.5 * (cfg.d - 1);
    XiEstimate xi = estimate_xi(to_curve_points(curve), XiModel::oz(nu));
    RatioReport rep = ratio_diagnostic(curve, xi, cfg.d, cfg.z);
    Json results = json_of(rep);
    results["xi_fit"] = json_of(xi);
    results["curve"] = json_of(curve)["curve"];
    bool inconclusive = false;
    for (const RatioPoint& pt : rep.points)
        inconclusive |= pt.z_above_one <= cfg.z && pt.z_above_one >= -cfg.z;
    emit(make_report("ratio", cfg, standard_notes(cfg), results), cfg, &curve);
    return cfg.strict && inconclusive ? 2 : 0;
}

int run_mono_check(RunConfig cfg) {
    if (!cfg.p) throw std::invalid_argument("p: required for mono-check");
    LatticeGraph g = resolve_graph(cfg);
    PairedCurve curve = estimate_curve(g, curve_params(cfg));
    MonotonicityReport rep = check_monotone(curve, cfg.z);
    Json results = json_of(rep);
    results["curve"] = json_of(curve)["curve"];
    emit(make_report("mono-check", cfg, standard_notes(cfg), results), cfg, &curve);
    return cfg.strict && rep.overall == MonoVerdict::inconclusive ? 2 : 0;
}

int run_mono_scan(RunConfig cfg) {
    if (cfg.p_grid.empty()) throw std::invalid_argument("p-grid: required for mono-scan");
    ScanParams sp;
    sp.kind = event_kind_from_string(cfg.event);
    sp.p_grid = cfg.p_grid;
    auto [lo_it, hi_it] = std::minmax_element(cfg.n_list.begin(), cfg.n_list.end());
    sp.n_lo = *lo_it;
    sp.n_hi = *hi_it;
    sp.samples = cfg.samples;
    sp.seed = cfg.seed;
    sp.workers = cfg.workers;
    sp.z = cfg.z;
    sp.ci_level = cfg.ci_level;
    ThresholdScan scan = scan_monotonicity(BoxSpec{cfg.d, cfg.n_max, cfg.margin}, sp);
    bool inconclusive = false;
    for (const MonotonicityReport& rep : scan.reports)
        inconclusive |= rep.overall == MonoVerdict::inconclusive;
    emit(make_report("mono-scan", cfg, standard_notes(cfg), json_of(scan)), cfg, nullptr);
    return cfg.strict && inconclusive ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "percolab — two-point connectivity laboratory for Bernoulli bond "
        "percolation on finite boxes of Z^d"};
    app.set_config("--config", "", "config file (INI/TOML; flags override file values)");
    app.require_subcommand(1);
    app.fallthrough(); // let --config and friends appear after the subcommand

    RunConfig cfg;
    cfg.seed = 1;
    std::string n_text, samples_text, sweeps_text;

    auto add_box = [&](CLI::App* sub) {
        sub->add_option("--d", cfg.d, "lattice dimension (d >= 2; d = 1 for fixtures)")
            ->capture_default_str();
        sub->add_option("--n-max", cfg.n_max,
                        "largest axis-1 distance the box must hold (lattice sites)");
        sub->add_option("--margin", cfg.margin,
                        "padding around the 0 -> n_max*e1 segment (lattice sites)")
            ->capture_default_str();
        sub->add_option("--fixture", cfg.fixture,
                        "named fixture graph instead of a box (unit-square)");
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--n", n_text, "target distances: '1..8' or '1,2,5' (lattice sites)");
        sub->add_option("--seed", cfg.seed, "RNG seed (64-bit)")
            ->envname("PERCOLAB_SEED")
            ->capture_default_str();
        sub->add_option("--out", cfg.out, "report path (default: stdout)");
        sub->add_option("--csv", cfg.csv, "also export the curve as CSV to this path");
        sub->add_flag("--strict", cfg.strict,
                      "exit 2 when the result is statistically inconclusive");
    };
    auto add_sampling = [&](CLI::App* sub) {
        sub->add_option("--samples", samples_text,
                        "Monte Carlo samples (scientific notation accepted, e.g. 1e6)");
        sub->add_option("--workers", cfg.workers,
                        "worker threads (statistics-neutral: results do not depend on it)")
            ->capture_default_str();
        sub->add_option("--ci-level", cfg.ci_level,
                        "Wilson confidence level in (0,1)")
            ->capture_default_str();
    };
    auto add_p = [&](CLI::App* sub, bool required) {
        CLI::callback_t assign = [&cfg](const CLI::results_t& res) {
            cfg.p = std::stod(res[0]);
            return true;
        };
        auto* opt = sub->add_option("--p", assign, "bond probability in [0,1]");
        opt->expected(1);
        if (required) opt->required();
    };
    auto add_z = [&](CLI::App* sub) {
        sub->add_option("--z", cfg.z, "significance multiplier for verdicts")
            ->capture_default_str();
    };

    CLI::App* exact = app.add_subcommand(
        "exact", "exact event probabilities by exhaustive enumeration (M <= 24 bonds)");
    add_box(exact);
    add_common(exact);
    add_p(exact, false);
    exact->add_option("--event", cfg.event, "two_point | truncated")
        ->capture_default_str();

    CLI::App* tau = app.add_subcommand(
        "tau", "Monte Carlo estimate of the two-point connectivity curve tau_p(n)");
    add_box(tau);
    add_common(tau);
    add_sampling(tau);
    add_p(tau, true);

    CLI::App* tau_trunc = app.add_subcommand(
        "tau-trunc",
        "Monte Carlo estimate of the truncated two-point curve (finite-cluster proxy)");
    add_box(tau_trunc);
    add_common(tau_trunc);
    add_sampling(tau_trunc);
    add_p(tau_trunc, true);

    CLI::App* sweep = app.add_subcommand(
        "sweep", "occupation-number sweep estimate across a whole p grid at once");
    add_box(sweep);
    add_common(sweep);
    sweep->add_option("--p-grid", cfg.p_grid, "probabilities to evaluate (list in [0,1])")
        ->delimiter(',');
    sweep->add_option("--sweeps", sweeps_text,
                      "bond-permutation sweeps (scientific notation accepted)");
    sweep->add_option("--event", cfg.event,
                      "two_point only (truncated is refused: not increasing)")
        ->capture_default_str();

    CLI::App* fit = app.add_subcommand(
        "fit-oz", "Ornstein-Zernike fit A e^{-n/xi} / n^nu of a stored curve report");
    add_common(fit);
    fit->add_option("--input", cfg.input, "curve report JSON (from tau/tau-trunc/exact)")
        ->required();
    fit->add_option("--d", cfg.d, "lattice dimension of the input curve")
        ->capture_default_str();
    fit->add_option("--form", cfg.form,
                    "lemma1 | lemma3 (nu=(d-1)/2) or lemma5 (nu=2, d=2 truncated)")
        ->capture_default_str();

    CLI::App* bounds = app.add_subcommand(
        "check-bounds", "sandwich a stored curve between the explicit bound formulas");
    add_common(bounds);
    add_z(bounds);
    add_p(bounds, false);
    bounds->add_option("--input", cfg.input, "curve report JSON")->required();
    bounds->add_option("--d", cfg.d, "lattice dimension of the input curve")
        ->capture_default_str();
    bounds->add_option("--bound", cfg.bound, "lemma2 | lemma4 (d>=3) | lemma6 (d=2)")
        ->capture_default_str();
    bounds->add_option("--C1", cfg.c1, "lemma2 lower-bound constant (> 0)")
        ->capture_default_str();
    bounds->add_option("--C2", cfg.c2, "lemma2 upper-bound constant (> 0)")
        ->capture_default_str();
    bounds->add_option("--C", cfg.c, "lemma4 upper-bound constant (> 0)")
        ->capture_default_str();

    CLI::App* ratio = app.add_subcommand(
        "ratio", "successive-ratio diagnostic against the Ornstein-Zernike prediction");
    add_box(ratio);
    add_common(ratio);
    add_sampling(ratio);
    add_p(ratio, true);
    add_z(ratio);

    CLI::App* mono = app.add_subcommand(
        "mono-check", "paired monotonicity verdicts tau(n) > tau(n+1) at one p");
    add_box(mono);
    add_common(mono);
    add_sampling(mono);
    add_p(mono, true);
    add_z(mono);
    mono->add_option("--event", cfg.event, "two_point | truncated")->capture_default_str();

    CLI::App* scan = app.add_subcommand(
        "mono-scan", "monotonicity scan over a p grid with empirical threshold");
    add_box(scan);
    add_common(scan);
    add_sampling(scan);
    add_z(scan);
    scan->add_option("--p-grid", cfg.p_grid, "probabilities to scan (list in [0,1])")
        ->delimiter(',');
    scan->add_option("--event", cfg.event, "two_point | truncated")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (!samples_text.empty()) cfg.samples = parse_count(samples_text, "samples");
        if (!sweeps_text.empty()) cfg.sweeps = parse_count(sweeps_text, "sweeps");
        if (cfg.p && !(*cfg.p >= 0.0 && *cfg.p <= 1.0))
            throw std::invalid_argument("p: must lie in [0,1]");
        for (double p : cfg.p_grid)
            if (!(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument("p-grid: entries must lie in [0,1]");
        if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0))
            throw std::invalid_argument("ci-level: must lie in (0,1)");
        if (cfg.workers < 1) throw std::invalid_argument("workers: must be >= 1");
        if (!n_text.empty()) cfg.n_list = parse_n_list(n_text);
        if (!n_text.empty() && cfg.fixture.empty()) {
            // without an explicit --n-max, grow the box to hold the n list
            bool explicit_nmax = false;
            for (CLI::App* sub : {exact, tau, tau_trunc, sweep, ratio, mono, scan})
                if (sub->parsed() && sub->count("--n-max")) explicit_nmax = true;
            if (!explicit_nmax)
                for (int n : cfg.n_list) cfg.n_max = std::max(cfg.n_max, n);
        }
        if (cfg.n_list.empty())
            for (int n = 1; n <= cfg.n_max; ++n) cfg.n_list.push_back(n);

        for (CLI::App* sub : {exact, tau, tau_trunc, sweep, fit, bounds, ratio, mono, scan})
            if (sub->parsed()) cfg.subcommand = sub->get_name();

        if (exact->parsed()) return run_exact(cfg);
        if (tau->parsed()) return run_tau(cfg, EventKind::two_point);
        if (tau_trunc->parsed()) return run_tau(cfg, EventKind::truncated);
        if (sweep->parsed()) return run_sweep(cfg);
        if (fit->parsed()) return run_fit_oz(cfg);
        if (bounds->parsed()) return run_check_bounds(cfg);
        if (ratio->parsed()) return run_ratio(cfg);
        if (mono->parsed()) return run_mono_check(cfg);
        if (scan->parsed()) return run_mono_scan(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
