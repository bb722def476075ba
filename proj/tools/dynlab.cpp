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

// dynlab: experiment front door.  Every subcommand assembles an
// ExperimentConfig, runs it, and emits a RunReport as JSON (stdout or --out)
// plus an optional CSV.  Reports are byte-identical for identical configs;
// wall-clock timing goes to stderr only.
//
// Exit codes: 0 success; 1 computation refused (ramification, partial
// coverage, no stabilization); 2 invalid config or I/O failure; 3 invariant
// violation (route mismatch, failed verify suite); 4 iteration budget.

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "berk/runner.hpp"

using namespace berk;

namespace {

struct MapArgs {
    std::string file;
    std::string preset;
    long p = 3;
    int e = 1;
};

void add_map_options(CLI::App* sub, MapArgs& args) {
    auto* file = sub->add_option("--map", args.file, "map description JSON file");
    auto* preset = sub->add_option("--preset", args.preset,
                                   "built-in map: haar | benedetto | squaring");
    sub->add_option("--p", args.p, "prime for --preset (default 3)");
    sub->add_option("--e", args.e, "ramification index for --preset (default 1)");
    file->excludes(preset);
    preset->excludes(file);
}

Json resolve_map(const MapArgs& args) {
    if (!args.file.empty()) return load_json(args.file);
    if (!args.preset.empty()) {
        auto ctx = make_context(Int(args.p), args.e);
        return lift_to_json(preset_lift(args.preset, ctx));
    }
    throw ConfigInvalid("provide --map FILE or --preset NAME");
}

void add_output_options(CLI::App* sub, ExperimentConfig& cfg,
                        std::string& out, std::string& csv) {
    sub->add_option("--out", out, "write the JSON report here instead of stdout");
    sub->add_option("--csv", csv, "also export the report rows as CSV");
    (void)cfg;
}

int execute(ExperimentConfig cfg) {
    const auto start = std::chrono::steady_clock::now();
    RunReport report = run_experiment(cfg);
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);

    Json rj = report_to_json(report);
    if (cfg.out)
        save_json(rj, *cfg.out);
    else
        std::cout << rj.dump(2) << "\n";
    if (cfg.csv) export_csv(report, *cfg.csv);

    std::cerr << "elapsed_ms " << elapsed.count() << "\n";
    if (!report.routes_agree) {
        std::cerr << "error: verification suite reported failures\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact resultant dynamics on the projective Berkovich line"};
    app.set_version_flag("--version", kArtifactVersion);
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string out, csv, config_path;
    MapArgs map_args;
    std::string point, bary, C, eps, f_path, graph_path, measure_path;

    auto finish_common = [&](CLI::App* sub) {
        add_output_options(sub, cfg, out, csv);
    };

    auto* green = app.add_subcommand(
        "green-eval", "diagonal Green's ladder at a point, with error bounds");
    add_map_options(green, map_args);
    green->add_option("--point", point, "probe point, e.g. \"0 @ 1\"")->required();
    green->add_option("--n-max", cfg.n_max, "largest iterate")->required();
    auto* green_c = green->add_option("--C", C, "scale constant (exact rational)");
    finish_common(green);
    green->callback([&] {
        cfg.command = "green-eval";
        cfg.map = resolve_map(map_args);
        cfg.point = point;
        if (green_c->count()) cfg.C = C;
    });

    auto* cm = app.add_subcommand("crucial-measure",
                                  "crucial measure of an iterate, cross-checked");
    add_map_options(cm, map_args);
    cm->add_option("--n", cfg.n, "iterate")->required();
    cm->add_option("--route", cfg.route, "laplacian | weights | both (default both)");
    finish_common(cm);
    cm->callback([&] {
        cfg.command = "crucial-measure";
        cfg.map = resolve_map(map_args);
    });

    auto* eq = app.add_subcommand(
        "equidist", "integrals against crucial measures along a ladder, with bounds");
    add_map_options(eq, map_args);
    eq->add_option("--graph", graph_path, "graph JSON file (vertex list)")->required();
    auto* eq_f = eq->add_option("--f", f_path,
                                "per-vertex values JSON; default is the distance "
                                "to the Gauss point");
    eq->add_option("--n-min", cfg.n_min, "first iterate (default 1)");
    eq->add_option("--n-max", cfg.n_max, "last iterate")->required();
    auto* eq_c = eq->add_option("--C", C, "scale constant (exact rational)");
    eq->add_option("--reference", cfg.reference, "reference measure preset");
    finish_common(eq);
    eq->callback([&] {
        cfg.command = "equidist";
        cfg.map = resolve_map(map_args);
        cfg.graph = load_json(graph_path);
        if (eq_f->count()) cfg.f = load_json(f_path);
        if (eq_c->count()) cfg.C = C;
    });

    auto* bc = app.add_subcommand("barycenter",
                                  "barycenter locus of a discrete probability");
    bc->add_option("--measure", measure_path, "measure JSON file")->required();
    finish_common(bc);
    bc->callback([&] {
        cfg.command = "barycenter";
        cfg.measure = load_json(measure_path);
    });

    auto* mr = app.add_subcommand("minresloc",
                                  "minimal resultant locus of an iterate, two routes");
    add_map_options(mr, map_args);
    mr->add_option("--n", cfg.n, "iterate")->required();
    finish_common(mr);
    mr->callback([&] {
        cfg.command = "minresloc";
        cfg.map = resolve_map(map_args);
    });

    auto* ct = app.add_subcommand(
        "containment", "distance of minimal-resultant loci to a reference locus");
    add_map_options(ct, map_args);
    ct->add_option("--bary", bary, "reference locus, e.g. \"1 @ 1,-1 @ 1\"")->required();
    ct->add_option("--eps", eps, "containment radius (exact rational)")->required();
    ct->add_option("--n-min", cfg.n_min, "first iterate (default 1)");
    ct->add_option("--n-max", cfg.n_max, "last iterate")->required();
    finish_common(ct);
    ct->callback([&] {
        cfg.command = "containment";
        cfg.map = resolve_map(map_args);
        cfg.bary = bary;
        cfg.eps = eps;
    });

    auto* vf = app.add_subcommand("verify", "randomized exact invariant suites");
    vf->add_option("--suite", cfg.suite,
                   "metric | laplacian | routes | slopes | barycenter")
        ->required();
    vf->add_option("--seed", cfg.seed, "RNG seed (default 1)");
    vf->add_option("--trials", cfg.trials, "cases per suite (default 100)");
    finish_common(vf);
    vf->callback([&] { cfg.command = "verify"; });

    auto* rn = app.add_subcommand("run", "replay a saved experiment config");
    rn->add_option("--config", config_path, "config JSON file")->required();
    rn->callback([&] { cfg.command = "run"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        // resolve_map / load_json failures inside callbacks
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (cfg.command == "run") {
            cfg = config_from_json(load_json(config_path));
        } else {
            if (!out.empty()) cfg.out = out;
            if (!csv.empty()) cfg.csv = csv;
        }
        return execute(std::move(cfg));
    } catch (const ConfigInvalid& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IOError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const TypeISupport& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NotProbability& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RouteMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IterationBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
