#pragma once

#include <string>
#include <vector>

#include "fuzzysched/platform.hpp"
#include "fuzzysched/rng.hpp"
#include "fuzzysched/workflow.hpp"

namespace testutil {

using namespace fuzzysched;

inline std::string data_path(const std::string& rel) { return std::string(FUZZYSCHED_TEST_DATA) + "/" + rel; }

inline Workflow chain(std::vector<double> runtimes, std::uint64_t bytes = 0) {
    std::vector<Task> tasks;
    std::vector<DataDependency> edges;
    for (std::size_t i = 0; i < runtimes.size(); ++i) {
        tasks.push_back({"v" + std::to_string(i + 1), i, runtimes[i]});
        if (i > 0) edges.push_back({i - 1, i, bytes});
    }
    return Workflow("chain", std::move(tasks), std::move(edges));
}

inline Workflow independent(std::vector<double> runtimes) {
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < runtimes.size(); ++i) tasks.push_back({"v" + std::to_string(i + 1), i, runtimes[i]});
    return Workflow("independent", std::move(tasks), {});
}

// Random DAG: edges only go from lower to higher index.
inline Workflow random_dag(std::size_t n, double edge_prob, Rng& rng) {
    std::vector<Task> tasks;
    std::vector<DataDependency> edges;
    for (std::size_t i = 0; i < n; ++i) {
        tasks.push_back({"t" + std::to_string(i), i, 1.0 + static_cast<double>(rng.below(100))});
        for (std::size_t j = 0; j < i; ++j) {
            if (rng.uniform01() < edge_prob) edges.push_back({j, i, rng.below(20) * 500000ULL});
        }
    }
    return Workflow("random", std::move(tasks), std::move(edges));
}

// Cloud servers with the given capacity ratios, cost 15.5 $/h per unit ratio.
inline Platform cloud_platform(std::vector<double> ratios, double quantum = 60.0) {
    Platform p = build_reference_platform(quantum);
    p.servers.clear();
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        Server s;
        s.index = i;
        s.id = "c" + std::to_string(i);
        s.capacity_ratio = ratios[i];
        s.cost_per_hour = 15.5 * ratios[i];
        s.billing_quantum = quantum;
        s.tier = Tier::Cloud;
        p.servers.push_back(s);
    }
    return p;
}

}  // namespace testutil
