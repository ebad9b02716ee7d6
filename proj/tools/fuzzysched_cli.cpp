#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fuzzysched/bench.hpp"
#include "fuzzysched/deadline.hpp"
#include "fuzzysched/error.hpp"
#include "fuzzysched/optimizers.hpp"
#include "fuzzysched/platform.hpp"
#include "fuzzysched/workflow.hpp"

namespace fs = std::filesystem;
using namespace fuzzysched;

namespace {

constexpr const char* kOutDirEnv = "FUZZYSCHED_OUT_DIR";

enum Exit { kOk = 0, kInfeasible = 2, kFailure = 1 };

std::string default_out_dir() {
    const char* env = std::getenv(kOutDirEnv);
    return env && *env ? env : "results";
}

PlatformConfig platform_from(const std::string& path) {
    return path.empty() ? reference_platform_config() : load_platform_config(path);
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + path.string());
    out << text;
}

struct ScheduleArgs {
    std::string workflow;
    std::string platform;
    std::string algo = "adpso";
    std::uint64_t seed = 1;
    std::size_t iterations = 1000;
    std::size_t population = 100;
    double quantum = 0.0;
    std::string out;
};

int run_schedule(const ScheduleArgs& a) {
    const Workflow w = load_workflow(a.workflow);
    validate(w);
    const PlatformConfig pc = platform_from(a.platform);
    const double quantum = a.quantum > 0 ? a.quantum : pc.quantum;
    const ProblemInstance inst = build_campaign_instance(w, pc, quantum, a.seed, 0, 0);

    AdpsoParams params = AdpsoParams::defaults_for(w.size());
    params.population = a.population;
    params.iterations = a.iterations;
    params.seed = a.seed;
    const Algorithm algo = parse_algorithm(a.algo);
    const OptimizerResult res = run_algorithm(algo, inst, params);
    const FuzzySchedule sched = decode_schedule(inst, res.best);

    const fs::path out = a.out.empty() ? fs::path(default_out_dir()) : fs::path(a.out);
    fs::create_directories(out);
    write_file(out / "schedule.json", schedule_to_json(inst, sched));
    write_file(out / "gantt.csv", schedule_to_gantt_csv(inst, sched));
    RunRecord rec;
    rec.workflow = w.name();
    rec.num_tasks = w.size();
    rec.algorithm = algo;
    rec.seed = a.seed;
    rec.trace = res.trace;
    write_file(out / "trace.csv", traces_csv({rec}));

    std::cout << "workflow   " << w.name() << " (" << w.size() << " tasks)\n"
              << "algorithm  " << to_string(algo) << "\n"
              << "deadline   " << format_number(inst.deadline()) << " s\n"
              << "makespan   " << sched.makespan << " s\n"
              << "cost       " << sched.cost << " $\n"
              << "fitness    " << format_number(res.best_eval.fitness.value)
              << (sched.feasible ? "" : " *") << "\n"
              << "output     " << out.string() << "\n";
    if (!sched.feasible) {
        std::cerr << "no feasible schedule found within the deadline\n";
        return kInfeasible;
    }
    return kOk;
}

int run_bench(const std::string& config, const std::string& out) {
    ExperimentConfig cfg = load_experiment_config(config);
    if (!out.empty()) cfg.output_dir = out;
    const double eta = cfg.platform.empty() ? reference_platform_config().fuzz.eta
                                            : load_platform_config(cfg.platform).fuzz.eta;
    const auto records = run_experiment(cfg);
    const OutputFiles files = emit_outputs(records, cfg, eta);
    std::size_t infeasible = 0;
    for (const auto& r : records) infeasible += !r.feasible();
    std::cout << records.size() << " runs, " << infeasible << " infeasible\n"
              << files.summary.string() << "\n"
              << files.variance.string() << "\n"
              << files.traces.string() << "\n"
              << files.json.string() << "\n";
    return kOk;
}

int run_deadline(const std::string& workflow, const std::string& platform) {
    const Workflow w = load_workflow(workflow);
    validate(w);
    const CrispInstance ci = build_crisp_instance(w, platform_from(platform).platform);
    const double h = heft_makespan(ci);
    std::cout << "H(W) = " << format_number(h) << "\n"
              << "D(W) = " << format_number(kDeadlineFactor * h) << "\n";
    return kOk;
}

int run_validate(const std::string& workflow) {
    const Workflow w = load_workflow(workflow);
    validate(w);
    std::size_t entries = 0;
    for (std::size_t v = 0; v < w.size(); ++v) entries += w.is_entry(v);
    std::cout << w.name() << ": " << w.size() << " tasks, " << w.edges().size() << " edges, " << entries
              << " entry tasks\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuzzy deadline-constrained workflow scheduling on edge-cloud platforms"};
    app.require_subcommand(1);

    ScheduleArgs sa;
    auto* schedule = app.add_subcommand("schedule", "optimize one workflow and write the best schedule");
    schedule->add_option("workflow", sa.workflow, "DAX or fixture file")->required()->check(CLI::ExistingFile);
    schedule->add_option("--platform", sa.platform, "platform config JSON (default: reference platform)");
    schedule->add_option("--algo", sa.algo, "adpso|pso|ga|rs")->capture_default_str();
    schedule->add_option("--seed", sa.seed)->capture_default_str();
    schedule->add_option("--iters", sa.iterations)->capture_default_str()->check(CLI::PositiveNumber);
    schedule->add_option("--pop", sa.population)->capture_default_str()->check(CLI::PositiveNumber);
    schedule->add_option("--quantum", sa.quantum, "billing quantum in seconds");
    schedule->add_option("--out", sa.out, std::string("output directory (default: $") + kOutDirEnv + " or ./results)");

    std::string bench_cfg, bench_out;
    auto* bench = app.add_subcommand("bench", "run an experiment campaign");
    bench->add_option("config", bench_cfg, "experiment config JSON")->required()->check(CLI::ExistingFile);
    bench->add_option("--out", bench_out, "override the configured output directory");

    std::string dl_wf, dl_platform;
    auto* dl = app.add_subcommand("deadline", "print the HEFT makespan H(W) and deadline D(W)");
    dl->add_option("workflow", dl_wf)->required()->check(CLI::ExistingFile);
    dl->add_option("--platform", dl_platform);

    std::string val_wf;
    auto* val = app.add_subcommand("validate", "check that a workflow parses and is acyclic");
    val->add_option("workflow", val_wf)->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*schedule) return run_schedule(sa);
        if (*bench) return run_bench(bench_cfg, bench_out);
        if (*dl) return run_deadline(dl_wf, dl_platform);
        if (*val) return run_validate(val_wf);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
