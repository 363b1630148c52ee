#include "percolab/report.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <sstream>
#include <stdexcept>

namespace percolab {

Json json_of(const RunConfig& c) {
    Json j;
    j["subcommand"] = c.subcommand;
    j["d"] = c.d;
    j["n_max"] = c.n_max;
    j["margin"] = c.margin;
    j["fixture"] = c.fixture;
    if (c.p) j["p"] = *c.p; else j["p"] = nullptr;
    j["p_grid"] = c.p_grid;
    j["n_list"] = c.n_list;
    j["event"] = c.event;
    j["samples"] = c.samples;
    j["sweeps"] = c.sweeps;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["z"] = c.z;
    j["ci_level"] = c.ci_level;
    j["c1"] = c.c1;
    j["c2"] = c.c2;
    j["c"] = c.c;
    j["bound"] = c.bound;
    j["form"] = c.form;
    j["input"] = c.input;
    j["out"] = c.out;
    j["csv"] = c.csv;
    j["strict"] = c.strict;
    return j;
}

RunConfig run_config_from_json(const Json& j) {
    RunConfig c;
    c.subcommand = j.at("subcommand").get<std::string>();
    c.d = j.at("d").get<int>();
    c.n_max = j.at("n_max").get<int>();
    c.margin = j.at("margin").get<int>();
    c.fixture = j.at("fixture").get<std::string>();
    if (!j.at("p").is_null()) c.p = j.at("p").get<double>();
    c.p_grid = j.at("p_grid").get<std::vector<double>>();
    c.n_list = j.at("n_list").get<std::vector<int>>();
    c.event = j.at("event").get<std::string>();
    c.samples = j.at("samples").get<std::uint64_t>();
    c.sweeps = j.at("sweeps").get<std::uint64_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.workers = j.at("workers").get<int>();
    c.z = j.at("z").get<double>();
    c.ci_level = j.at("ci_level").get<double>();
    c.c1 = j.at("c1").get<double>();
    c.c2 = j.at("c2").get<double>();
    c.c = j.at("c").get<double>();
    c.bound = j.at("bound").get<std::string>();
    c.form = j.at("form").get<std::string>();
    c.input = j.at("input").get<std::string>();
    c.out = j.at("out").get<std::string>();
    c.csv = j.at("csv").get<std::string>();
    c.strict = j.at("strict").get<bool>();
    return c;
}

Json json_of(const BoxSpec& spec) {
    return Json{{"d", spec.d}, {"n_max", spec.n_max}, {"margin", spec.margin}};
}

Json json_of(const Estimate& e, int n) {
    return Json{{"n", n},
                {"mean", e.mean},
                {"stderr", e.stderr_},
                {"ci_low", e.ci_low},
                {"ci_high", e.ci_high},
                {"samples", e.samples},
                {"successes", e.successes}};
}

Json json_of(const PairedCurve& curve) {
    Json j;
    j["p"] = curve.p;
    j["event"] = to_string(curve.kind);
    j["samples"] = curve.samples;
    Json pts = Json::array();
    for (std::size_t i = 0; i < curve.ns.size(); ++i)
        pts.push_back(json_of(curve.entries[i], curve.ns[i]));
    j["curve"] = pts;
    Json diffs = Json::array();
    for (const PairDiff& d : curve.diffs) {
        diffs.push_back(Json{{"n", d.n},
                             {"diff", d.mean_diff},
                             {"stderr", d.stderr_},
                             {"n_plus", d.n_plus},
                             {"n_minus", d.n_minus},
                             {"n_both", d.n_both}});
    }
    j["diffs"] = diffs;
    return j;
}

Json json_of(const ConnectivityPolynomial& poly, const Json& graph) {
    return Json{
        {"M", poly.m}, {"counts", poly.counts}, {"event", poly.event}, {"graph", graph}};
}

Json json_of(const SweepFamily& fam) {
    Json curves = Json::array();
    for (std::size_t pi = 0; pi < fam.p_grid.size(); ++pi) {
        Json pts = Json::array();
        for (const SweepCurvePoint& pt : fam.curves[pi])
            pts.push_back(Json{{"n", pt.n}, {"mean", pt.mean}, {"stderr", pt.stderr_}});
        curves.push_back(Json{{"p", fam.p_grid[pi]}, {"points", pts}});
    }
    return Json{{"p_grid", fam.p_grid},
                {"ns", fam.ns},
                {"sweeps", fam.sweeps},
                {"curves", curves}};
}

Json json_of(const XiEstimate& xi) {
    return Json{{"xi", xi.xi},
                {"stderr", xi.stderr_},
                {"amplitude", xi.amplitude},
                {"window", Json::array({xi.window_lo, xi.window_hi})},
                {"model", xi.model.oz_corrected ? "oz_corrected" : "pure_exponential"},
                {"nu", xi.model.nu},
                {"residuals", xi.residuals}};
}

Json json_of(const OzFit& fit) {
    return Json{{"amplitude", fit.amplitude},
                {"xi", fit.xi},
                {"xi_stderr", fit.xi_stderr},
                {"nu", fit.nu},
                {"form", to_string(fit.form)},
                {"window", Json::array({fit.window_lo, fit.window_hi})},
                {"residuals", fit.residuals},
                {"residual_trend",
                 Json{{"coef", fit.trend_coef},
                      {"t", fit.trend_t},
                      {"flagged", fit.trend_flagged}}}};
}

Json json_of(const BoundReport& rep) {
    Json pts = Json::array();
    for (const BoundPoint& pt : rep.points) {
        Json jp{{"n", pt.n},
                {"value", pt.value},
                {"stderr", pt.stderr_},
                {"lower", pt.lower},
                {"verdict", to_string(pt.verdict)}};
        if (pt.upper_defined)
            jp["upper"] = pt.upper;
        else
            jp["upper"] = nullptr;
        pts.push_back(jp);
    }
    return Json{{"bound", to_string(rep.kind)},
                {"p", rep.p},
                {"d", rep.d},
                {"params", Json{{"c1", rep.params.c1},
                                {"c2", rep.params.c2},
                                {"c", rep.params.c}}},
                {"z", rep.z},
                {"points", pts},
                {"summary", Json{{"inside", rep.inside},
                                 {"below_lower", rep.below_lower},
                                 {"above_upper", rep.above_upper},
                                 {"inconclusive", rep.inconclusive}}}};
}

Json json_of(const MonotonicityReport& rep) {
    Json pts = Json::array();
    for (const MonoPoint& pt : rep.points) {
        Json jp{{"n", pt.n},
                {"diff", pt.diff},
                {"stderr", pt.stderr_},
                {"verdict", to_string(pt.verdict)}};
        if (pt.zscore)
            jp["zscore"] = *pt.zscore;
        else
            jp["zscore"] = nullptr;
        pts.push_back(jp);
    }
    return Json{{"p", rep.p},
                {"event", to_string(rep.kind)},
                {"z", rep.z},
                {"samples", rep.samples},
                {"points", pts},
                {"overall", to_string(rep.overall)}};
}

Json json_of(const RatioReport& rep) {
    Json pts = Json::array();
    for (const RatioPoint& pt : rep.points)
        pts.push_back(Json{{"n", pt.n},
                           {"ratio", pt.ratio},
                           {"stderr", pt.stderr_},
                           {"z_above_one", pt.z_above_one},
                           {"prediction", pt.prediction},
                           {"residual", pt.residual}});
    return Json{{"d", rep.d},
                {"z", rep.z},
                {"xi_used", rep.xi_used},
                {"points", pts},
                {"all_above_one", rep.all_above_one},
                {"residual_magnitude_monotone", rep.residual_magnitude_monotone}};
}

Json json_of(const ThresholdScan& scan) {
    Json reports = Json::array();
    for (const MonotonicityReport& rep : scan.reports) reports.push_back(json_of(rep));
    Json j{{"event", to_string(scan.kind)},
           {"z", scan.z},
           {"p_grid", scan.p_grid},
           {"reports", reports}};
    if (scan.empirical_threshold)
        j["empirical_threshold"] = *scan.empirical_threshold;
    else
        j["empirical_threshold"] = nullptr;
    return j;
}

namespace {

std::string iso8601_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

Json make_report(const std::string& kind, const RunConfig& config,
                 std::vector<std::string> notes, Json results) {
    Json j;
    j["schema"] = "percolab/1";
    j["kind"] = kind;
    j["timestamp"] = iso8601_now();
    j["config"] = json_of(config);
    j["notes"] = notes;
    j["results"] = std::move(results);
    return j;
}

std::string truncated_proxy_note() {
    return "truncated event uses the finite-volume proxy: the origin cluster "
           "must avoid the box boundary (stands in for 'not connected to "
           "infinity'; converges to the infinite-volume value as margin grows)";
}

std::string d1_fixture_note() {
    return "d=1 box: analytic test fixture only (tau = p^n on a path)";
}

namespace {

// Shortest round-trip representation, matching the JSON number encoding.
std::string fmt_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

} // namespace

std::string curve_csv(const PairedCurve& curve) {
    std::ostringstream os;
    os << "n,mean,stderr,ci_low,ci_high,samples\n";
    for (std::size_t i = 0; i < curve.ns.size(); ++i) {
        const Estimate& e = curve.entries[i];
        os << curve.ns[i] << ',' << fmt_double(e.mean) << ',' << fmt_double(e.stderr_)
           << ',' << fmt_double(e.ci_low) << ',' << fmt_double(e.ci_high) << ','
           << e.samples << '\n';
    }
    return os.str();
}

std::vector<CurvePoint> curve_points_from_report(const Json& report) {
    const Json& results = report.at("results");
    std::vector<CurvePoint> pts;
    if (results.contains("curve")) {
        for (const Json& row : results.at("curve")) {
            CurvePoint pt;
            pt.n = row.at("n").get<int>();
            pt.value = row.contains("mean") ? row.at("mean").get<double>()
                                            : row.at("value").get<double>();
            pt.stderr_ = row.contains("stderr") ? row.at("stderr").get<double>() : 0.0;
            pts.push_back(pt);
        }
        return pts;
    }
    throw std::invalid_argument("report carries no curve (expected results.curve)");
}

} // namespace percolab
