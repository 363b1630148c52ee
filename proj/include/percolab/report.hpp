#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "percolab/analysis.hpp"
#include "percolab/estimators.hpp"
#include "percolab/oracle.hpp"

namespace percolab {

using Json = nlohmann::json;

// Resolved run configuration embedded in every report; round-trips through
// JSON losslessly.
struct RunConfig {
    std::string subcommand;
    int d = 2;
    int n_max = 1;
    int margin = 0;
    std::string fixture; // empty, or a named test graph ("unit-square")
    std::optional<double> p;
    std::vector<double> p_grid;
    std::vector<int> n_list;
    std::string event = "two_point";
    std::uint64_t samples = 1000000;
    std::uint64_t sweeps = 10000;
    std::uint64_t seed = 1;
    int workers = 1;
    double z = 3.0;
    double ci_level = 0.95;
    double c1 = 4.0;
    double c2 = 4.0;
    double c = 8.0;
    std::string bound = "lemma2";
    std::string form = "lemma1";
    std::string input;  // curve file consumed by fit-oz / check-bounds
    std::string out;    // report path ("" = stdout)
    std::string csv;    // optional CSV curve path
    bool strict = false;

    bool operator==(const RunConfig&) const = default;
};

Json json_of(const RunConfig& c);
RunConfig run_config_from_json(const Json& j);

Json json_of(const BoxSpec& spec);
Json json_of(const Estimate& e, int n);
Json json_of(const PairedCurve& curve);
Json json_of(const ConnectivityPolynomial& poly, const Json& graph);
Json json_of(const SweepFamily& fam);
Json json_of(const XiEstimate& xi);
Json json_of(const OzFit& fit);
Json json_of(const BoundReport& rep);
Json json_of(const MonotonicityReport& rep);
Json json_of(const RatioReport& rep);
Json json_of(const ThresholdScan& scan);

// Standard report envelope: schema tag, kind discriminator, resolved config,
// ISO-8601 timestamp (excluded from the determinism contract), notes, and
// the kind-specific results object.
Json make_report(const std::string& kind, const RunConfig& config,
                 std::vector<std::string> notes, Json results);

// Disclosure strings attached to reports.
std::string truncated_proxy_note();
std::string d1_fixture_note();

// Columns: n,mean,stderr,ci_low,ci_high,samples
std::string curve_csv(const PairedCurve& curve);

// Parses curve points out of a report JSON (kinds tau/tau-trunc/exact/sweep).
std::vector<CurvePoint> curve_points_from_report(const Json& report);

} // namespace percolab
