#include "fuzzysched/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fuzzysched/error.hpp"

namespace fuzzysched {

bool is_valid(const Particle& p, std::size_t num_tasks, std::size_t num_servers) {
    if (p.order.size() != num_tasks || p.server.size() != num_tasks) return false;
    for (std::size_t j = 0; j < num_tasks; ++j) {
        if (!std::isfinite(p.order[j])) return false;
        if (p.server[j] < 0 || static_cast<std::size_t>(p.server[j]) >= num_servers) return false;
    }
    return true;
}

namespace {

struct Pending {
    double order;
    std::size_t seq;
    std::size_t task;
};

// Larger order first, then earlier queue entry.
bool runs_before(const Pending& a, const Pending& b) {
    if (a.order != b.order) return a.order > b.order;
    return a.seq < b.seq;
}

struct Completion {
    Tfn time;
    std::size_t task;
};

struct LaterCompletion {
    bool operator()(const Completion& a, const Completion& b) const {
        const auto c = compare(a.time, b.time);
        if (c != 0) return c > 0;
        return a.task > b.task;
    }
};

// Busy span of a server. Ranking-based starts can, in rare wide-spread cases,
// leave the shutdown time below the boot time in one component; the span is
// then clamped to stay a valid non-negative TFN.
Tfn busy_span(const Tfn& shutdown, const Tfn& boot) {
    if (shutdown.lower >= boot.lower && shutdown.modal >= boot.modal && shutdown.upper >= boot.upper) {
        return sub_componentwise(shutdown, boot);
    }
    Tfn d;
    d.lower = std::max(0.0, shutdown.lower - boot.lower);
    d.modal = std::max(d.lower, shutdown.modal - boot.modal);
    d.upper = std::max(d.modal, shutdown.upper - boot.upper);
    return d;
}

}  // namespace

FuzzySchedule decode_schedule(const ProblemInstance& inst, const Particle& p) {
    const std::size_t n = inst.num_tasks();
    const std::size_t m = inst.num_servers();
    if (!is_valid(p, n, m)) {
        std::ostringstream msg;
        msg << "particle with " << p.order.size() << '/' << p.server.size() << " slots does not fit " << n
            << " tasks on " << m << " servers";
        throw Error(ErrorKind::ShapeMismatch, msg.str());
    }
    const Workflow& w = inst.workflow();
    auto server_of = [&](std::size_t v) { return static_cast<std::size_t>(p.server[v]); };

    FuzzySchedule out;
    out.tasks.resize(n);
    out.servers.resize(m);
    out.dispatch_order.reserve(n);

    std::vector<std::size_t> waiting_parents(n);
    std::vector<Tfn> ready(n);
    std::vector<std::vector<Pending>> queues(m);
    std::vector<bool> busy(m, false);
    std::priority_queue<Completion, std::vector<Completion>, LaterCompletion> events;
    std::size_t seq = 0;

    auto enqueue = [&](std::size_t v) { queues[server_of(v)].push_back({p.order[v], seq++, v}); };

    auto dispatch = [&](std::size_t s) {
        auto& q = queues[s];
        if (busy[s] || q.empty()) return;
        auto best = std::min_element(q.begin(), q.end(), runs_before);
        const std::size_t v = best->task;
        q.erase(best);

        ServerSpan& span = out.servers[s];
        if (!span.used) {
            span.used = true;
            span.boot = ready[v];
            span.shutdown = ready[v];
        }
        TaskTiming& t = out.tasks[v];
        t.task = v;
        t.server = s;
        t.start = fmax(ready[v], span.shutdown);
        t.end = t.start + inst.processing(v, s);
        span.shutdown = t.end;
        busy[s] = true;
        out.dispatch_order.push_back(v);
        events.push({t.end, v});
    };

    for (std::size_t v = 0; v < n; ++v) {
        waiting_parents[v] = w.in_edges(v).size();
        if (waiting_parents[v] == 0) enqueue(v);
    }
    for (std::size_t s = 0; s < m; ++s) dispatch(s);

    std::vector<std::size_t> released;
    while (!events.empty()) {
        const Tfn now = events.top().time;
        released.clear();
        // Every completion ranked equal to `now` is handled before any dispatch.
        while (!events.empty() && compare(events.top().time, now) == 0) {
            const std::size_t v = events.top().task;
            events.pop();
            busy[server_of(v)] = false;
            for (std::size_t k : w.out_edges(v)) {
                const std::size_t c = w.edges()[k].to;
                if (--waiting_parents[c] == 0) released.push_back(c);
            }
        }
        std::sort(released.begin(), released.end());
        for (std::size_t c : released) {
            Tfn max_t{};
            for (std::size_t k : w.in_edges(c)) {
                const std::size_t parent = w.edges()[k].from;
                max_t = fmax(max_t, out.tasks[parent].end + inst.transfer_time(k, server_of(parent), server_of(c)));
            }
            ready[c] = max_t;
            enqueue(c);
        }
        for (std::size_t s = 0; s < m; ++s) dispatch(s);
    }

    for (std::size_t v = 0; v < n; ++v) out.makespan = fmax(out.makespan, out.tasks[v].end);

    for (std::size_t s = 0; s < m; ++s) {
        const ServerSpan& span = out.servers[s];
        if (!span.used) continue;
        const Server& srv = inst.platform().servers[s];
        const double per_quantum = srv.cost_per_hour * srv.billing_quantum / 3600.0;
        out.computation_cost =
            out.computation_cost + scale(ceil_div(busy_span(span.shutdown, span.boot), srv.billing_quantum), per_quantum);
    }
    for (std::size_t k = 0; k < w.edges().size(); ++k) {
        const auto& e = w.edges()[k];
        const std::size_t r = server_of(e.from);
        const std::size_t t = server_of(e.to);
        if (r != t) out.transfer_cost = out.transfer_cost + inst.transfer_cost(k, r, t);
    }
    out.cost = out.computation_cost + out.transfer_cost;
    out.feasible = out.makespan.upper <= inst.deadline();
    return out;
}

std::weak_ordering compare_fitness(const Fitness& a, const Fitness& b) noexcept {
    if (a.feasible != b.feasible) {
        return a.feasible ? std::weak_ordering::less : std::weak_ordering::greater;
    }
    if (a.value < b.value) return std::weak_ordering::less;
    if (a.value > b.value) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
}

Fitness fitness_of(const FuzzySchedule& s, double eta) noexcept {
    if (s.feasible) return {true, defuzzify(s.cost, eta)};
    return {false, s.makespan.upper};
}

Fitness evaluate_fitness(const ProblemInstance& inst, const Particle& p) {
    return fitness_of(decode_schedule(inst, p), inst.eta());
}

Evaluation evaluate(const ProblemInstance& inst, const Particle& p) {
    const FuzzySchedule s = decode_schedule(inst, p);
    return {fitness_of(s, inst.eta()), s.cost, s.makespan};
}

namespace {

nlohmann::json tfn_json(const Tfn& a) { return nlohmann::json::array({a.lower, a.modal, a.upper}); }

}  // namespace

std::string schedule_to_json(const ProblemInstance& inst, const FuzzySchedule& s) {
    nlohmann::json j;
    j["tasks"] = nlohmann::json::array();
    for (const auto& t : s.tasks) {
        j["tasks"].push_back({{"task", inst.workflow().task(t.task).id},
                              {"server", inst.platform().servers[t.server].id},
                              {"start", tfn_json(t.start)},
                              {"end", tfn_json(t.end)}});
    }
    const Fitness f = fitness_of(s, inst.eta());
    j["summary"] = {{"makespan", tfn_json(s.makespan)},
                    {"cost", tfn_json(s.cost)},
                    {"computationCost", tfn_json(s.computation_cost)},
                    {"transferCost", tfn_json(s.transfer_cost)},
                    {"fitness", f.value},
                    {"feasible", s.feasible},
                    {"deadline", inst.deadline()}};
    return j.dump(2);
}

std::string schedule_to_gantt_csv(const ProblemInstance& inst, const FuzzySchedule& s) {
    std::string out = "task,server,start,end\n";
    char buf[128];
    for (const auto& t : s.tasks) {
        std::snprintf(buf, sizeof buf, ",%.6g,%.6g\n", t.start.modal, t.end.modal);
        out += inst.workflow().task(t.task).id + ',' + inst.platform().servers[t.server].id + buf;
    }
    return out;
}

}  // namespace fuzzysched
