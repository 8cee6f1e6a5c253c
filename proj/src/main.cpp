#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mstsim/common.hpp"
#include "mstsim/driver.hpp"
#include "mstsim/oracle.hpp"
#include "mstsim/runtime.hpp"
#include "mstsim/tsp.hpp"
#include "mstsim/verify.hpp"

using nlohmann::ordered_json;
using namespace mstsim;

namespace {

struct ConfigFlags {
    std::string config_path;
    int alpha = 16;
    double beta = 0.0;
    int h = 6;
    double epsilon = 0.5;
    uint64_t seed = 1;
    std::string strategy = "cell-leader";
    bool strict_memory = false;
    long long machine_mem = 0;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* beta_opt = nullptr;
    CLI::Option* h_opt = nullptr;
    CLI::Option* eps_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* strategy_opt = nullptr;
    CLI::Option* strict_opt = nullptr;
    CLI::Option* mem_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file (flags win over it)");
        alpha_opt = cmd->add_option("--alpha", alpha, "grid base, must be 2^(2^g)");
        beta_opt = cmd->add_option("--beta", beta, "grouping-cell divisor (0 = default)");
        h_opt = cmd->add_option("--h", h, "compression rounds per stage");
        eps_opt = cmd->add_option("--epsilon", epsilon, "sampled-leader density exponent");
        seed_opt = cmd->add_option("--seed", seed, "RNG seed");
        strategy_opt = cmd->add_option(
            "--strategy", strategy, "exact-threshold | cell-leader | sampled-leader");
        strict_opt = cmd->add_flag("--strict-memory", strict_memory,
                                   "record per-machine memory violations");
        mem_opt = cmd->add_option("--machine-mem", machine_mem,
                                  "words per machine for --strict-memory");
    }

    AlgorithmConfig resolve() const {
        AlgorithmConfig out;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw io_error("cannot read " + config_path);
            ordered_json j;
            try {
                in >> j;
            } catch (const std::exception& e) {
                throw std::invalid_argument(config_path + ": " + e.what());
            }
            if (j.contains("alpha")) out.alpha = j["alpha"].get<int>();
            if (j.contains("beta")) out.beta = j["beta"].get<double>();
            if (j.contains("h")) out.h = j["h"].get<int>();
            if (j.contains("epsilon")) out.epsilon = j["epsilon"].get<double>();
            if (j.contains("seed")) out.seed = j["seed"].get<uint64_t>();
            if (j.contains("strategy"))
                out.strategy = strategy_from_name(j["strategy"].get<std::string>());
            if (j.contains("strict_memory")) out.strict_memory = j["strict_memory"].get<bool>();
            if (j.contains("machine_mem"))
                out.machine_memory_s = j["machine_mem"].get<long long>();
        }
        if (alpha_opt->count()) out.alpha = alpha;
        if (beta_opt->count()) out.beta = beta;
        if (h_opt->count()) out.h = h;
        if (eps_opt->count()) out.epsilon = epsilon;
        if (seed_opt->count()) out.seed = seed;
        if (strategy_opt->count()) out.strategy = strategy_from_name(strategy);
        if (strict_opt->count()) out.strict_memory = strict_memory;
        if (mem_opt->count()) out.machine_memory_s = machine_mem;
        return out;
    }
};

ordered_json config_json(const AlgorithmConfig& c) {
    return ordered_json{{"alpha", c.alpha},
                        {"beta", c.beta},
                        {"h", c.h},
                        {"epsilon", c.epsilon},
                        {"seed", c.seed},
                        {"strategy", strategy_name(c.strategy)},
                        {"strict_memory", c.strict_memory},
                        {"machine_mem", c.machine_memory_s}};
}

ordered_json ledger_json(const RoundLedger& ledger) {
    ordered_json per = ordered_json::object();
    for (const auto& [name, count] : ledger.per_primitive()) per[name] = count;
    ordered_json violations = ordered_json::array();
    for (const auto& v : ledger.violations())
        violations.push_back(ordered_json{{"stage", v.stage}, {"detail", v.detail}});
    return ordered_json{{"rounds", ledger.rounds()},
                        {"total_space_words", ledger.total_space_words()},
                        {"peak_machine_words", ledger.peak_machine_words()},
                        {"strict", ledger.strict()},
                        {"per_primitive", per},
                        {"violations", violations}};
}

void write_tree_file(const std::string& path, const SpanningTree& tree) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw io_error("cannot write " + path);
    for (const auto& e : tree.edges) {
        double t = e.stage < 0 ? 0.0 : std::ldexp(1.0, e.level_exponent);
        std::fprintf(f, "%d %d %.17g %.17g %d\n", e.u, e.v, e.weight, t, e.stage);
    }
    std::fclose(f);
}

void write_text(const std::string& path, const std::string& body) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw io_error("cannot write " + path);
    std::fwrite(body.data(), 1, body.size(), f);
    std::fclose(f);
}

int run_gen(const std::string& kind, int n, int d, uint64_t seed, int paths, int path_len,
            const std::string& out_path) {
    PointSet pts;
    if (kind == "uniform") {
        pts = gen_uniform(n, d, seed);
    } else if (kind == "gaussian-clusters") {
        pts = gen_gaussian_clusters(n, d, seed);
    } else if (kind == "parallel-paths") {
        if (paths + 1 > d)
            throw std::invalid_argument("parallel-paths needs d >= paths+1");
        pts = gen_parallel_paths(paths, path_len, d);
    } else {
        throw std::invalid_argument("unknown kind: " + kind);
    }
    write_points(out_path, pts);
    std::printf("wrote %d points (d=%d) to %s\n", pts.n, pts.d, out_path.c_str());
    return 0;
}

int run_run(const std::string& input, const std::string& out_dir,
            const AlgorithmConfig& config, bool with_oracle, bool dump_spanner,
            bool dump_hierarchy) {
    PointSet pts = read_points(input);
    std::filesystem::create_directories(out_dir);
    RunInternals internals;
    RunResult run = run_full(pts, config, &internals);

    write_tree_file(out_dir + "/tree.txt", run.tree);
    write_tour_dump(out_dir + "/tour.txt", run.tour);
    write_cycle(out_dir + "/cycle.txt", run.cycle);
    if (dump_spanner) write_spanner_dump(out_dir + "/spanner.txt", internals.spanner);
    if (dump_hierarchy)
        write_hierarchy_dump(out_dir + "/hierarchy.txt", internals.hierarchy);

    ordered_json report;
    report["n"] = pts.n;
    report["d"] = pts.d;
    report["config"] = config_json(run.config);
    report["normalize"] = ordered_json{{"degenerate", run.norm.degenerate},
                                       {"delta", run.norm.delta},
                                       {"scale", run.norm.scale},
                                       {"snapped_duplicates", run.duplicates},
                                       {"compact_n", run.compact_n},
                                       {"top_exponent", run.top_exponent}};
    report["tree_cost"] = run.tree.total_weight;
    bool oracle_on = with_oracle && pts.n <= kOracleMaxN;
    if (oracle_on) {
        OracleTree mst = exact_mst(pts);
        report["exact_mst_cost"] = mst.weight;
        report["ratio"] = mst.weight > 0.0 ? run.tree.total_weight / mst.weight : 1.0;
    } else {
        report["exact_mst_cost"] = nullptr;
        report["ratio"] = nullptr;
    }
    report["cycle_cost"] = run.cycle.cost;
    report["ledger"] = ledger_json(run.ledger);
    RoundsBreakdown formula = rounds_formula(run.config, pts.n, pts.d);
    report["rounds_formula"] =
        ordered_json{{"normalize", formula.normalize}, {"spanner", formula.spanner},
                     {"part1", formula.part1},         {"part2", formula.part2},
                     {"part3", formula.part3},         {"tour", formula.tour},
                     {"shortcut", formula.shortcut},   {"total", formula.total()}};
    report["per_level_component_counts"] = run.level_components;
    report["spanner_fallback_cells"] = run.spanner_fallbacks;
    report["tour_length"] = run.tour.size();
    report["max_base_tree_diameter"] = run.tour_stats.max_base_tree_diameter;
    report["theory_check"] = theory_check(run.config, pts.n, pts.d);

    std::string body = report.dump(2) + "\n";
    write_text(out_dir + "/report.json", body);
    std::fputs(body.c_str(), stdout);
    return 0;
}

int run_verify(std::vector<std::string> suites, int trials, int joins,
               const AlgorithmConfig& config) {
    if (suites.empty())
        suites = {"instances", "joins", "decay", "cuts"};
    if (suites.size() == 1 && suites.front() == "none") suites.clear();
    std::vector<SuiteResult> results;
    for (const std::string& name : suites) {
        if (name == "instances") {
            std::vector<InstanceCase> cases;
            for (int n : {50, 100, 300})
                for (int d : {2, 8})
                    for (const char* gen :
                         {"uniform", "gaussian-clusters", "parallel-paths"})
                        for (uint64_t seed = 1; seed <= 2; ++seed)
                            cases.push_back({gen, n, d, seed, config.strategy});
            results.push_back(suite_instances(cases));
        } else if (name == "joins") {
            results.push_back(suite_joins(joins, config.seed));
        } else if (name == "decay") {
            results.push_back(suite_decay(trials, config.seed));
        } else if (name == "cuts") {
            results.push_back(suite_cuts(trials, config.seed));
        } else {
            throw std::invalid_argument("unknown suite: " + name);
        }
    }
    int failures = 0;
    for (const SuiteResult& r : results) {
        std::printf("%-10s %d/%d passed\n", r.name.c_str(), r.checks - r.failures,
                    r.checks);
        for (const std::string& m : r.messages) std::printf("  %s\n", m.c_str());
        failures += r.failures;
    }
    if (results.empty()) std::printf("no suites selected\n");
    return failures == 0 ? 0 : 1;
}

int run_bench(const std::vector<int>& ns, int d, int seeds, const AlgorithmConfig& base,
              const std::string& out_path) {
    std::string csv = "n,d,seed,strategy,tree_cost,exact_cost,ratio,rounds,space,wall_ms\n";
    char line[256];
    for (int n : ns)
        for (int seed = 1; seed <= seeds; ++seed) {
            AlgorithmConfig config = base;
            config.seed = seed;
            PointSet pts = gen_uniform(n, d, seed);
            auto t0 = std::chrono::steady_clock::now();
            RunResult run = run_full(pts, config);
            auto t1 = std::chrono::steady_clock::now();
            double wall =
                std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() /
                1000.0;
            double exact = 0.0, ratio = 1.0;
            if (n <= kOracleMaxN) {
                exact = exact_mst(pts).weight;
                if (exact > 0.0) ratio = run.tree.total_weight / exact;
            }
            std::snprintf(line, sizeof(line), "%d,%d,%d,%s,%.17g,%.17g,%.6f,%lld,%lld,%.3f\n",
                          n, d, seed, strategy_name(config.strategy).c_str(),
                          run.tree.total_weight, exact, ratio, run.ledger.rounds(),
                          run.ledger.total_space_words(), wall);
            csv += line;
        }
    if (out_path.empty())
        std::fputs(csv.c_str(), stdout);
    else
        write_text(out_path, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"approximate Euclidean MST / TSP pipeline simulator"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate a point file");
    gen->set_help_flag("--help", "print help");
    std::string gen_kind = "uniform", gen_out = "points.txt";
    int gen_n = 100, gen_d = 2, gen_paths = 3, gen_len = 5;
    uint64_t gen_seed = 1;
    gen->add_option("--kind", gen_kind, "uniform | gaussian-clusters | parallel-paths");
    gen->add_option("--n", gen_n, "point count");
    gen->add_option("--d", gen_d, "dimension");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--paths", gen_paths, "parallel-paths: extra path copies");
    gen->add_option("--path-length", gen_len, "parallel-paths: points per path");
    gen->add_option("--out", gen_out, "output file");

    auto* runc = app.add_subcommand("run", "run the pipeline on a point file");
    runc->set_help_flag("--help", "print help");
    std::string run_input, run_out = ".";
    bool with_oracle = true, dump_spanner = false, dump_hierarchy = false;
    ConfigFlags run_flags;
    runc->add_option("--input", run_input, "point file")->required();
    runc->add_option("--out-dir", run_out, "output directory");
    runc->add_flag("--oracle,!--no-oracle", with_oracle,
                   "compare against the exact MST (n <= 5000)");
    runc->add_flag("--dump-spanner", dump_spanner, "also write spanner.txt");
    runc->add_flag("--dump-hierarchy", dump_hierarchy, "also write hierarchy.txt");
    run_flags.attach(runc);

    auto* verifyc = app.add_subcommand("verify", "run invariant suites");
    verifyc->set_help_flag("--help", "print help");
    std::vector<std::string> suites;
    int trials = 2000, joins = 100;
    ConfigFlags verify_flags;
    verifyc->add_option("--suite", suites,
                        "instances | joins | decay | cuts | none (default: all)");
    verifyc->add_option("--trials", trials, "Monte-Carlo trials per cell");
    verifyc->add_option("--joins", joins, "random join instances");
    verify_flags.attach(verifyc);

    auto* benchc = app.add_subcommand("bench", "CSV benchmark over a size grid");
    benchc->set_help_flag("--help", "print help");
    std::vector<int> bench_ns{64, 128, 256};
    int bench_d = 8, bench_seeds = 3;
    std::string bench_out;
    ConfigFlags bench_flags;
    benchc->add_option("--n", bench_ns, "point counts");
    benchc->add_option("--d", bench_d, "dimension");
    benchc->add_option("--seeds", bench_seeds, "seeds per size");
    benchc->add_option("--out", bench_out, "CSV path (default stdout)");
    bench_flags.attach(benchc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed())
            return run_gen(gen_kind, gen_n, gen_d, gen_seed, gen_paths, gen_len, gen_out);
        if (runc->parsed())
            return run_run(run_input, run_out, run_flags.resolve(), with_oracle,
                           dump_spanner, dump_hierarchy);
        if (verifyc->parsed())
            return run_verify(suites, trials, joins, verify_flags.resolve());
        if (benchc->parsed())
            return run_bench(bench_ns, bench_d, bench_seeds, bench_flags.resolve(),
                             bench_out);
    } catch (const io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 1;
    } catch (const consistency_error& e) {
        std::fprintf(stderr, "consistency error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    }
    return 0;
}
