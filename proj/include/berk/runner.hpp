// Copyright 2026 The berklab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BERK_RUNNER_HPP
#define BERK_RUNNER_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "berk/io.hpp"
#include "berk/verify.hpp"

namespace berk {

inline constexpr const char* kArtifactVersion = "0.1.0";

/*
 * One experiment = one config = one report.  Configs capture everything the
 * run depends on, so replaying a saved config reproduces the report byte for
 * byte.  Wall-clock timing is therefore never part of the report; the CLI
 * prints it on stderr.
 */
struct ExperimentConfig {
    std::string command;

    std::optional<Json> map;      // lift object, context included
    std::optional<Json> graph;    // vertex list, context included
    std::optional<Json> measure;  // atom list, context included
    std::optional<Json> f;        // per-vertex CPA values for equidist

    std::optional<std::string> point;  // probe point literal
    std::optional<std::string> bary;   // reference locus literal
    std::optional<std::string> C;      // scale constant, exact rational
    std::optional<std::string> eps;    // containment radius, exact rational

    int n = 1;
    int n_min = 1;
    int n_max = 1;

    std::string route = "both";      // crucial-measure: laplacian | weights | both
    std::string reference = "haar";  // equidist reference preset

    std::string suite;  // verify
    unsigned seed = 1;
    int trials = 100;

    std::optional<std::string> out;  // report JSON path
    std::optional<std::string> csv;  // report CSV path
};

struct RunReport {
    std::string version;
    Json config;
    bool routes_agree = true;
    CsvTable table;
    Json artifacts;  // command-specific payload, possibly null
};

namespace detail {

struct ConfigKeys {
    std::vector<std::string> required;
    std::vector<std::string> optional;
};

inline const ConfigKeys& config_keys(const std::string& command) {
    static const std::map<std::string, ConfigKeys> keys = {
        {"green-eval", {{"map", "point", "n_max"}, {"C"}}},
        {"crucial-measure", {{"map", "n"}, {"route"}}},
        {"equidist", {{"map", "graph", "n_max"}, {"n_min", "f", "C", "reference"}}},
        {"barycenter", {{"measure"}, {}}},
        {"minresloc", {{"map", "n"}, {}}},
        {"containment", {{"map", "bary", "eps", "n_max"}, {"n_min"}}},
        {"verify", {{"suite"}, {"seed", "trials"}}},
    };
    auto it = keys.find(command);
    if (it == keys.end()) throw ConfigInvalid("unknown command '" + command + "'");
    return it->second;
}

inline void check_config_fields(const Json& j, const ConfigKeys& keys) {
    for (const auto& k : keys.required)
        if (!j.contains(k))
            throw ConfigInvalid("config is missing required field '" + k + "'");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key == "command" || key == "out" || key == "csv") continue;
        bool known = std::find(keys.required.begin(), keys.required.end(), key) !=
                         keys.required.end() ||
                     std::find(keys.optional.begin(), keys.optional.end(), key) !=
                         keys.optional.end();
        if (!known)
            throw ConfigInvalid("config has unexpected field '" + key + "'");
    }
}

inline int int_field(const Json& j, const char* key) {
    if (!j.at(key).is_number_integer())
        throw ConfigInvalid(std::string("config field '") + key +
                            "' must be an integer");
    return j.at(key).get<int>();
}

}  // namespace detail

inline Json config_to_json(const ExperimentConfig& cfg) {
    const auto& keys = detail::config_keys(cfg.command);
    Json j;
    j["command"] = cfg.command;
    auto want = [&](const char* key) {
        return std::find(keys.required.begin(), keys.required.end(), key) !=
                   keys.required.end() ||
               std::find(keys.optional.begin(), keys.optional.end(), key) !=
                   keys.optional.end();
    };
    if (want("map") && cfg.map) j["map"] = *cfg.map;
    if (want("graph") && cfg.graph) j["graph"] = *cfg.graph;
    if (want("measure") && cfg.measure) j["measure"] = *cfg.measure;
    if (want("f") && cfg.f) j["f"] = *cfg.f;
    if (want("point") && cfg.point) j["point"] = *cfg.point;
    if (want("bary") && cfg.bary) j["bary"] = *cfg.bary;
    if (want("C") && cfg.C) j["C"] = *cfg.C;
    if (want("eps") && cfg.eps) j["eps"] = *cfg.eps;
    if (want("n")) j["n"] = cfg.n;
    if (want("n_min")) j["n_min"] = cfg.n_min;
    if (want("n_max")) j["n_max"] = cfg.n_max;
    if (want("route")) j["route"] = cfg.route;
    if (want("reference")) j["reference"] = cfg.reference;
    if (want("suite")) j["suite"] = cfg.suite;
    if (want("seed")) j["seed"] = cfg.seed;
    if (want("trials")) j["trials"] = cfg.trials;
    if (cfg.out) j["out"] = *cfg.out;
    if (cfg.csv) j["csv"] = *cfg.csv;
    return j;
}

inline ExperimentConfig config_from_json(const Json& j) {
    detail::expect_object(j, "config");
    if (!j.contains("command") || !j.at("command").is_string())
        throw ConfigInvalid("config needs a string field 'command'");
    ExperimentConfig cfg;
    cfg.command = j.at("command").get<std::string>();
    const auto& keys = detail::config_keys(cfg.command);
    detail::check_config_fields(j, keys);

    if (j.contains("map")) cfg.map = j.at("map");
    if (j.contains("graph")) cfg.graph = j.at("graph");
    if (j.contains("measure")) cfg.measure = j.at("measure");
    if (j.contains("f")) cfg.f = j.at("f");
    if (j.contains("point")) cfg.point = detail::string_field(j, "config", "point");
    if (j.contains("bary")) cfg.bary = detail::string_field(j, "config", "bary");
    if (j.contains("C")) cfg.C = detail::string_field(j, "config", "C");
    if (j.contains("eps")) cfg.eps = detail::string_field(j, "config", "eps");
    if (j.contains("n")) cfg.n = detail::int_field(j, "n");
    if (j.contains("n_min")) cfg.n_min = detail::int_field(j, "n_min");
    if (j.contains("n_max")) cfg.n_max = detail::int_field(j, "n_max");
    if (j.contains("route")) cfg.route = detail::string_field(j, "config", "route");
    if (j.contains("reference"))
        cfg.reference = detail::string_field(j, "config", "reference");
    if (j.contains("suite")) cfg.suite = detail::string_field(j, "config", "suite");
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned())
            throw ConfigInvalid("config field 'seed' must be a nonnegative integer");
        cfg.seed = j.at("seed").get<unsigned>();
    }
    if (j.contains("trials")) cfg.trials = detail::int_field(j, "trials");
    if (j.contains("out")) cfg.out = detail::string_field(j, "config", "out");
    if (j.contains("csv")) cfg.csv = detail::string_field(j, "config", "csv");
    return cfg;
}

inline Json report_to_json(const RunReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.table.rows) rows.push_back(row);
    return Json{{"version", r.version},
                {"config", r.config},
                {"routes_agree", r.routes_agree},
                {"columns", r.table.columns},
                {"rows", rows},
                {"artifacts", r.artifacts}};
}

inline RunReport report_from_json(const Json& j) {
    detail::check_fields(j, "report",
                         {"version", "config", "routes_agree", "columns", "rows",
                          "artifacts"});
    RunReport r;
    r.version = detail::string_field(j, "report", "version");
    r.config = j.at("config");
    if (!j.at("routes_agree").is_boolean())
        throw ConfigInvalid("report field 'routes_agree' must be a boolean");
    r.routes_agree = j.at("routes_agree").get<bool>();
    for (const auto& c : j.at("columns")) {
        if (!c.is_string()) throw ConfigInvalid("report columns must be strings");
        r.table.columns.push_back(c.get<std::string>());
    }
    for (const auto& row : j.at("rows")) {
        std::vector<std::string> cells;
        for (const auto& c : row) {
            if (!c.is_string()) throw ConfigInvalid("report cells must be strings");
            cells.push_back(c.get<std::string>());
        }
        r.table.rows.push_back(std::move(cells));
    }
    r.artifacts = j.at("artifacts");
    return r;
}

inline void export_csv(const RunReport& report, const std::string& path) {
    export_csv(report.table, path);
}

namespace detail {

inline Rat scale_constant(const ExperimentConfig& cfg, const Dynamics& dyn) {
    return cfg.C ? parse_rational(*cfg.C) : default_C(dyn);
}

inline Dynamics dynamics_from_config(const ExperimentConfig& cfg) {
    if (!cfg.map) throw ConfigInvalid("command '" + cfg.command + "' needs a map");
    return Dynamics(lift_from_json(*cfg.map));
}

inline void sort_atoms(TreeMeasure& nu) {
    std::sort(nu.begin(), nu.end(), [](const WeightedPoint& a, const WeightedPoint& b) {
        return tree_point_less(a.point, b.point);
    });
}

inline RunReport run_green_eval(const ExperimentConfig& cfg) {
    Dynamics dyn = dynamics_from_config(cfg);
    TreePoint P = point_from_string(dyn.context(), cfg.point.value());
    Rat C = scale_constant(cfg, dyn);
    auto ladder = green_ladder(dyn, P, cfg.n_max, C);

    RunReport r;
    r.table.columns = {"n",         "value",           "error_bound",
                       "empirical_gap", "value_dec",   "error_bound_dec",
                       "empirical_gap_dec"};
    for (const auto& g : ladder) {
        std::string gap = g.empirical_gap ? format_rational(*g.empirical_gap) : "";
        std::string gap_dec = g.empirical_gap ? decimal_string(*g.empirical_gap) : "";
        r.table.rows.push_back({std::to_string(g.n), format_rational(g.value),
                                format_rational(g.error_bound), gap,
                                decimal_string(g.value), decimal_string(g.error_bound),
                                gap_dec});
    }
    r.artifacts = Json{{"C_used", format_rational(C)}};
    return r;
}

inline RunReport run_crucial_measure(const ExperimentConfig& cfg) {
    Dynamics dyn = dynamics_from_config(cfg);
    const int n = cfg.n;
    RunReport r;
    TreeMeasure nu;
    if (cfg.route == "laplacian") {
        nu = crucial_measure_laplacian(dyn, n);
    } else if (cfg.route == "weights" || cfg.route == "both") {
        SpanTree T = crucial_skeleton(dyn, n);
        std::vector<TreePoint> candidates;
        for (int v = 0; v < T.size(); ++v) candidates.push_back(T.point(v));
        auto reports = crucial_measure_weights(dyn, n, candidates);
        nu = measure_from_weights(reports, dyn.degree(), n);
        if (cfg.route == "both") {
            TreeMeasure lap = crucial_measure_laplacian(dyn, n);
            if (!detail::same_measure(nu, lap))
                throw RouteMismatch("weight and Laplacian measures disagree");
        }
    } else {
        throw ConfigInvalid("route must be 'laplacian', 'weights', or 'both'");
    }
    sort_atoms(nu);
    r.table.columns = {"point", "mass", "mass_dec"};
    for (const auto& wp : nu)
        r.table.rows.push_back({point_to_string(wp.point), format_rational(wp.mass),
                                decimal_string(wp.mass)});
    r.artifacts = Json{{"measure", measure_to_json(dyn.context(), nu)}};
    return r;
}

inline RunReport run_equidist(const ExperimentConfig& cfg) {
    Dynamics dyn = dynamics_from_config(cfg);
    auto [gctx, T] = graph_from_json(cfg.graph.value());
    if (*gctx != *dyn.context())
        throw ConfigInvalid("graph and map live over different fields");

    std::vector<Rat> f(static_cast<size_t>(T.size()));
    if (cfg.f) {
        const Json& fj = *cfg.f;
        if (!fj.is_array()) throw ConfigInvalid("'f' must be an array of rows");
        std::vector<bool> seen(static_cast<size_t>(T.size()), false);
        for (const auto& row : fj) {
            check_fields(row, "f row", {"point", "value"});
            TreePoint P = point_from_string(gctx, string_field(row, "f row", "point"));
            Rat v = parse_rational(string_field(row, "f row", "value"));
            bool hit = false;
            for (int i = 0; i < T.size(); ++i) {
                if (!same_point(T.point(i), P)) continue;
                f[static_cast<size_t>(i)] = v;
                seen[static_cast<size_t>(i)] = true;
                hit = true;
            }
            if (!hit)
                throw ConfigInvalid("'f' value at " + point_to_string(P) +
                                    " is not a graph vertex");
        }
        for (int i = 0; i < T.size(); ++i)
            if (!seen[static_cast<size_t>(i)])
                throw ConfigInvalid("'f' is missing a value at " +
                                    point_to_string(T.point(i)));
    } else {
        // Default test function: distance to the Gauss point.
        TreePoint gauss{ValElement(gctx), Rat(0)};
        for (int i = 0; i < T.size(); ++i)
            f[static_cast<size_t>(i)] = rho(gauss, T.point(i));
    }

    if (cfg.reference != "haar")
        throw ConfigInvalid("reference preset must be 'haar'");
    TreeMeasure ref = haar_reference(T);
    Rat C = scale_constant(cfg, dyn);
    auto rows = equidist_report(dyn, cfg.n_min, cfg.n_max, T, f, ref, C);

    RunReport r;
    r.table.columns = {"n",        "integral_nu",     "integral_ref", "diff",
                       "bound",    "integral_nu_dec", "diff_dec",     "bound_dec"};
    for (const auto& row : rows)
        r.table.rows.push_back({std::to_string(row.n), format_rational(row.integral_nu),
                                format_rational(row.integral_ref),
                                format_rational(row.deviation), format_rational(row.bound),
                                decimal_string(row.integral_nu),
                                decimal_string(row.deviation), decimal_string(row.bound)});
    r.artifacts = Json{{"C_used", format_rational(C)}};
    return r;
}

inline RunReport run_barycenter(const ExperimentConfig& cfg) {
    if (!cfg.measure) throw ConfigInvalid("barycenter needs a measure");
    auto [ctx, nu] = measure_from_json(*cfg.measure);
    SegmentLocus L = barycenter(nu);
    RunReport r;
    r.table.columns = {"kind", "endpoint"};
    for (const auto& P : L.endpoints)
        r.table.rows.push_back(
            {L.kind == LocusKind::Point ? "point" : "segment", point_to_string(P)});
    r.artifacts = Json{{"locus", locus_to_json(L)}};
    return r;
}

inline RunReport run_minresloc(const ExperimentConfig& cfg) {
    Dynamics dyn = dynamics_from_config(cfg);
    MinResResult res = minresloc(dyn, cfg.n);
    RunReport r;
    r.table.columns = {"n", "kind", "endpoint_a", "endpoint_b", "min_value",
                       "min_value_dec"};
    bool is_seg = res.locus.kind == LocusKind::Segment;
    r.table.rows.push_back({std::to_string(cfg.n), is_seg ? "segment" : "point",
                            point_to_string(res.locus.endpoints[0]),
                            is_seg ? point_to_string(res.locus.endpoints[1]) : "",
                            format_rational(res.min_value),
                            decimal_string(res.min_value)});
    r.artifacts = Json{{"locus", locus_to_json(res.locus)},
                       {"min_value", format_rational(res.min_value)}};
    return r;
}

inline RunReport run_containment(const ExperimentConfig& cfg) {
    Dynamics dyn = dynamics_from_config(cfg);
    SegmentLocus ref = locus_from_spec(dyn.context(), cfg.bary.value());
    Rat eps = parse_rational(cfg.eps.value());
    auto rows = epsilon_containment(dyn, cfg.n_min, cfg.n_max, ref, eps);
    RunReport r;
    r.table.columns = {"n", "distance", "contained", "distance_dec"};
    for (const auto& row : rows)
        r.table.rows.push_back({std::to_string(row.n), format_rational(row.distance),
                                row.contained ? "true" : "false",
                                decimal_string(row.distance)});
    r.artifacts = Json{{"bary", locus_to_json(ref)},
                       {"eps", format_rational(eps)}};
    return r;
}

inline RunReport run_verify(const ExperimentConfig& cfg) {
    SuiteResult s = run_verify_suite(cfg.suite, cfg.seed, cfg.trials);
    RunReport r;
    r.routes_agree = s.passed();
    r.table.columns = {"suite", "cases", "failures"};
    r.table.rows.push_back(
        {s.name, std::to_string(s.cases), std::to_string(s.failures.size())});
    Json msgs = Json::array();
    for (const auto& m : s.failures) msgs.push_back(m);
    r.artifacts = Json{{"failure_messages", msgs}};
    return r;
}

}  // namespace detail

inline RunReport run_experiment(const ExperimentConfig& cfg) {
    RunReport r;
    if (cfg.command == "green-eval")
        r = detail::run_green_eval(cfg);
    else if (cfg.command == "crucial-measure")
        r = detail::run_crucial_measure(cfg);
    else if (cfg.command == "equidist")
        r = detail::run_equidist(cfg);
    else if (cfg.command == "barycenter")
        r = detail::run_barycenter(cfg);
    else if (cfg.command == "minresloc")
        r = detail::run_minresloc(cfg);
    else if (cfg.command == "containment")
        r = detail::run_containment(cfg);
    else if (cfg.command == "verify")
        r = detail::run_verify(cfg);
    else
        throw ConfigInvalid("unknown command '" + cfg.command + "'");
    r.version = kArtifactVersion;
    r.config = config_to_json(cfg);
    return r;
}

}  // namespace berk

#endif  // BERK_RUNNER_HPP
