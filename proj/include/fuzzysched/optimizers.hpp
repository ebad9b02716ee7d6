#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzysched/rng.hpp"
#include "fuzzysched/simulator.hpp"

namespace fuzzysched {

/// Swarm/evolution settings shared by all four optimizers.
struct AdpsoParams {
    std::size_t population = 100;
    std::size_t iterations = 1000;
    double w_max = 0.9;
    double w_min = 0.4;
    std::size_t k_max = 1;
    std::size_t k_min = 1;
    double c1_start = 0.9;
    double c1_end = 0.2;
    double c2_start = 0.4;
    double c2_end = 0.9;
    std::uint64_t seed = 0;

    /// Standard settings for a workflow with `num_tasks` tasks: k_max = ceil(|V| / 10).
    static AdpsoParams defaults_for(std::size_t num_tasks);

    /// Throws Error(BadParams) when an invariant is violated.
    void validate(std::size_t num_tasks) const;
};

/// GA-only knobs.
struct GaSettings {
    double crossover_prob = 0.8;
    double mutation_prob = 0.1;
    std::size_t mutation_points = 1;
};

struct TracePoint {
    double best_cost = 0.0;        // defuzzified cost of the best-so-far particle
    double best_upper_time = 0.0;  // its completion time upper bound
    bool feasible_found = false;
};

struct OptimizerResult {
    Particle best;
    Evaluation best_eval;
    std::vector<TracePoint> trace;  // one point per iteration
};

enum class Algorithm { Adpso, Pso, Ga, Rs };

std::string_view to_string(Algorithm a) noexcept;
/// Accepts adpso|pso|ga|rs (case-insensitive); throws Error(ConfigInvalid).
Algorithm parse_algorithm(std::string_view name);

// ---------------------------------------------------------------- operators

/// Order values uniform in [0, |V|), servers uniform in [0, |S|).
Particle random_particle(std::size_t num_tasks, std::size_t num_servers, Rng& rng);
std::vector<Particle> init_population(const ProblemInstance& inst, std::size_t population, std::uint64_t seed);

/// Number of slots (order or server) on which the particles differ, out of 2|V|.
std::size_t divergence(const Particle& a, const Particle& b);

/// Inertia weight from the normalized divergence between p and the global best.
double adaptive_inertia(const Particle& p, const Particle& global_best, double w_max, double w_min);
double inertia_from_divergence(double d, double w_max, double w_min);

/// Mutation count growing linearly with w from k_min (at w_min) to k_max (at w_max).
std::size_t mutation_count(double w, double w_max, double w_min, std::size_t k_max, std::size_t k_min);

/// Linear schedules c1: c1_start -> c1_end and c2: c2_start -> c2_end over [0, iterations].
std::pair<double, double> accel_coefficients(std::size_t t, std::size_t iterations, const AdpsoParams& params);

/// Neighborhood mutation on three order slots (a uniformly chosen arrangement
/// of their values) followed by redrawing k distinct server slots.
Particle dual_mutation(const Particle& p, std::size_t k, std::size_t num_servers, Rng& rng);

/// Copy of `a` with task positions [first, last] (both slots) taken from `b`.
Particle crossover_segment(const Particle& a, const Particle& b, std::size_t first, std::size_t last);
Particle two_point_crossover(const Particle& a, const Particle& b, Rng& rng);

// --------------------------------------------------------------- optimizers

OptimizerResult adpso_run(const ProblemInstance& inst, const AdpsoParams& params);
OptimizerResult pso_run(const ProblemInstance& inst, const AdpsoParams& params);
OptimizerResult ga_run(const ProblemInstance& inst, const AdpsoParams& params, const GaSettings& ga = {});
OptimizerResult rs_run(const ProblemInstance& inst, const AdpsoParams& params);

OptimizerResult run_algorithm(Algorithm algo, const ProblemInstance& inst, const AdpsoParams& params);

/// Server slot of a continuous PSO position: round, then clamp into [0, |S| - 1].
int decode_server_position(double position, std::size_t num_servers) noexcept;

}  // namespace fuzzysched
