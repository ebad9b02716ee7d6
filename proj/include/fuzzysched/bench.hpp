#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fuzzysched/optimizers.hpp"
#include "fuzzysched/platform.hpp"

namespace fuzzysched {

struct ExperimentConfig {
    std::vector<std::filesystem::path> workflows;
    std::filesystem::path platform;  // empty: reference platform
    std::vector<Algorithm> algorithms{Algorithm::Adpso, Algorithm::Pso, Algorithm::Ga, Algorithm::Rs};
    std::size_t repeats = 10;
    std::uint64_t base_seed = 1;
    std::size_t population = 100;
    std::size_t iterations = 1000;
    double quantum = 0.0;  // <= 0: take the platform config's quantum
    std::filesystem::path output_dir = "results";

    /// Throws Error(ConfigInvalid) unless repeats >= 2 and algorithms/workflows are non-empty.
    void validate() const;
};

/// Relative paths in the document are resolved against `base_dir`.
ExperimentConfig parse_experiment_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct RunRecord {
    std::string workflow;
    std::size_t num_tasks = 0;
    Algorithm algorithm = Algorithm::Adpso;
    std::uint64_t seed = 0;
    std::size_t repeat = 0;
    Tfn cost;
    Fitness fitness;
    Tfn makespan;
    double deadline = 0.0;
    double wall_seconds = 0.0;
    std::vector<TracePoint> trace;
    Particle best;

    bool feasible() const noexcept { return fitness.feasible; }
};

/// Builds the instance for one (workflow, repeat) pair: HEFT deadline plus a
/// fuzzified realization shared by every algorithm.
ProblemInstance build_campaign_instance(const Workflow& w, const PlatformConfig& platform, double quantum,
                                        std::uint64_t base_seed, std::size_t workflow_index, std::size_t repeat);

/// Records ordered by (workflow, algorithm, seed).
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg);

/// Unbiased sample variance; throws Error(TooFewSamples) for fewer than two values.
double sample_variance(std::span<const double> values);
/// Divides by the Euclidean norm; throws Error(AllZero) for an all-zero vector.
std::vector<double> normalize_variances(std::span<const double> variances);

/// "Tiny" (<= 40 tasks), "Small" (<= 75) or "Medium".
std::string size_class(std::size_t num_tasks);

struct SummaryRow {
    std::string workflow;
    std::string size;
    Algorithm algorithm = Algorithm::Adpso;
    std::size_t runs = 0;
    std::size_t infeasible_runs = 0;
    Tfn best_cost;
    double best_fitness = 0.0;
    bool best_feasible = false;
    Tfn mean_cost;          // componentwise mean over runs
    double mean_fitness = 0.0;  // defuzzified mean cost
};

struct VarianceRow {
    std::string size;
    std::string workflow;
    std::vector<Algorithm> algorithms;
    std::vector<double> normalized;  // unit norm, or all zero if every variance is zero
};

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records, double eta = 1.0);
std::vector<VarianceRow> variance_table(const std::vector<RunRecord>& records, double eta = 1.0);

/// CSV bodies. Each starts with a `# generated_at=...` line only when `timestamp` is non-empty.
std::string traces_csv(const std::vector<RunRecord>& records, const std::string& timestamp = {});
std::string summary_csv(const std::vector<SummaryRow>& rows, const std::string& timestamp = {});
std::string variance_csv(const std::vector<VarianceRow>& rows, const std::string& timestamp = {});
std::string results_json(const std::vector<RunRecord>& records, const std::vector<SummaryRow>& summary,
                         const std::vector<VarianceRow>& variances, const std::string& timestamp = {});

struct OutputFiles {
    std::filesystem::path traces;
    std::filesystem::path summary;
    std::filesystem::path variance;
    std::filesystem::path json;
};

/// Writes traces.csv, summary.csv, variance.csv and results.json into cfg.output_dir.
OutputFiles emit_outputs(const std::vector<RunRecord>& records, const ExperimentConfig& cfg, double eta = 1.0);

/// Fixed 6-significant-digit rendering used in every CSV.
std::string format_number(double x);

}  // namespace fuzzysched
