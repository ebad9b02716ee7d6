#include "fuzzysched/deadline.hpp"

#include <algorithm>
#include <numeric>

#include "fuzzysched/workflow.hpp"

namespace fuzzysched {

namespace {

double mean_communication(const CrispInstance& ci, std::size_t edge) {
    const std::size_t m = ci.platform.size();
    if (m < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t t = 0; t < m; ++t) {
            if (r != t) sum += ci.transfer_time(edge, r, t);
        }
    }
    return sum / static_cast<double>(m * (m - 1));
}

struct Busy {
    double start;
    double finish;
};

// Earliest start >= ready in an idle gap of `timeline` (sorted by start) that fits `length`.
double earliest_gap(const std::vector<Busy>& timeline, double ready, double length) {
    double candidate = ready;
    for (const Busy& b : timeline) {
        if (candidate + length <= b.start) return candidate;
        candidate = std::max(candidate, b.finish);
    }
    return candidate;
}

}  // namespace

HeftResult heft_schedule(const CrispInstance& ci) {
    const Workflow& w = ci.workflow;
    const std::size_t n = w.size();
    const std::size_t m = ci.platform.size();
    HeftResult out;
    out.upward_rank.assign(n, 0.0);
    out.slots.resize(n);
    if (n == 0) return out;

    const auto topo = topological_order(w);
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        const std::size_t v = *it;
        double mean_cost = 0.0;
        for (std::size_t s = 0; s < m; ++s) mean_cost += ci.processing_time(v, s);
        mean_cost /= static_cast<double>(m);
        double tail = 0.0;
        for (std::size_t k : w.out_edges(v)) {
            tail = std::max(tail, mean_communication(ci, k) + out.upward_rank[w.edges()[k].to]);
        }
        out.upward_rank[v] = mean_cost + tail;
    }

    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), 0);
    // Position in topological order breaks rank ties so parents always precede children.
    std::vector<std::size_t> topo_pos(n);
    for (std::size_t i = 0; i < n; ++i) topo_pos[topo[i]] = i;
    std::sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
        if (out.upward_rank[a] != out.upward_rank[b]) return out.upward_rank[a] > out.upward_rank[b];
        return topo_pos[a] < topo_pos[b];
    });

    std::vector<std::vector<Busy>> timelines(m);
    for (std::size_t v : out.order) {
        double best_finish = 0.0;
        double best_start = 0.0;
        std::size_t best_server = m;
        for (std::size_t s = 0; s < m; ++s) {
            double ready = 0.0;
            for (std::size_t k : w.in_edges(v)) {
                const std::size_t parent = w.edges()[k].from;
                const HeftSlot& ps = out.slots[parent];
                ready = std::max(ready, ps.finish + ci.transfer_time(k, ps.server, s));
            }
            const double length = ci.processing_time(v, s);
            const double start = earliest_gap(timelines[s], ready, length);
            const double finish = start + length;
            if (best_server == m || finish < best_finish) {
                best_finish = finish;
                best_start = start;
                best_server = s;
            }
        }
        out.slots[v] = {best_server, best_start, best_finish};
        auto& tl = timelines[best_server];
        tl.insert(std::upper_bound(tl.begin(), tl.end(), best_start,
                                   [](double x, const Busy& b) { return x < b.start; }),
                  Busy{best_start, best_finish});
        out.makespan = std::max(out.makespan, best_finish);
    }
    return out;
}

double heft_makespan(const CrispInstance& ci) { return heft_schedule(ci).makespan; }

double deadline(const CrispInstance& ci) { return kDeadlineFactor * heft_makespan(ci); }

}  // namespace fuzzysched
