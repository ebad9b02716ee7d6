#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "fuzzysched/platform.hpp"
#include "fuzzysched/tfn.hpp"

namespace fuzzysched {

/// Order-server nesting encoding: task j runs on server[j]; among independent
/// tasks pending on one server, the larger order[j] runs first.
struct Particle {
    std::vector<double> order;
    std::vector<int> server;

    std::size_t num_tasks() const noexcept { return order.size(); }
    friend bool operator==(const Particle&, const Particle&) = default;
};

/// True iff the shape matches and every slot is in range and finite.
bool is_valid(const Particle& p, std::size_t num_tasks, std::size_t num_servers);

struct TaskTiming {
    std::size_t task = 0;
    std::size_t server = 0;
    Tfn start;
    Tfn end;
};

struct ServerSpan {
    bool used = false;
    Tfn boot;      // first start, or readiness of the first task
    Tfn shutdown;  // end of the last task
};

struct FuzzySchedule {
    std::vector<TaskTiming> tasks;  // indexed by task
    std::vector<std::size_t> dispatch_order;
    std::vector<ServerSpan> servers;
    Tfn makespan;
    Tfn computation_cost;
    Tfn transfer_cost;
    Tfn cost;
    bool feasible = false;
};

/// Decodes a particle into a fuzzy schedule by event-driven list scheduling.
/// Throws Error(ShapeMismatch) if the particle does not fit the instance.
FuzzySchedule decode_schedule(const ProblemInstance& inst, const Particle& p);

/// Feasible particles carry their defuzzified cost; infeasible ones their
/// completion time upper bound.
struct Fitness {
    bool feasible = false;
    double value = 0.0;

    friend bool operator==(const Fitness&, const Fitness&) = default;
};

/// Feasible < infeasible; otherwise the smaller value wins.
std::weak_ordering compare_fitness(const Fitness& a, const Fitness& b) noexcept;
inline bool better(const Fitness& a, const Fitness& b) noexcept { return compare_fitness(a, b) < 0; }

Fitness fitness_of(const FuzzySchedule& s, double eta) noexcept;
Fitness evaluate_fitness(const ProblemInstance& inst, const Particle& p);

/// Fitness plus the summary values the optimizers trace.
struct Evaluation {
    Fitness fitness;
    Tfn cost;
    Tfn makespan;
};
Evaluation evaluate(const ProblemInstance& inst, const Particle& p);

/// {"tasks":[{task, server, start:[l,m,u], end:[l,m,u]}...], "summary":{makespan, cost, fitness, feasible}}
std::string schedule_to_json(const ProblemInstance& inst, const FuzzySchedule& s);
/// One row per task with modal times: task,server,start,end
std::string schedule_to_gantt_csv(const ProblemInstance& inst, const FuzzySchedule& s);

}  // namespace fuzzysched
