#pragma once

#include <cstddef>
#include <vector>

#include "fuzzysched/platform.hpp"

namespace fuzzysched {

inline constexpr double kDeadlineFactor = 1.5;

struct HeftSlot {
    std::size_t server = 0;
    double start = 0.0;
    double finish = 0.0;
};

struct HeftResult {
    std::vector<double> upward_rank;       // per task
    std::vector<std::size_t> order;        // tasks by non-increasing rank
    std::vector<HeftSlot> slots;           // per task
    double makespan = 0.0;
};

/// Crisp HEFT with insertion: upward ranks from mean computation and mean
/// cross-server communication costs, then earliest-finish-time placement.
HeftResult heft_schedule(const CrispInstance& ci);
double heft_makespan(const CrispInstance& ci);

/// 1.5 x HEFT makespan, in seconds.
double deadline(const CrispInstance& ci);

}  // namespace fuzzysched
