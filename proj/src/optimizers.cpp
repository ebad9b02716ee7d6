#include "fuzzysched/optimizers.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>

#include "fuzzysched/error.hpp"

namespace fuzzysched {

namespace {

// Substream tags; every (purpose, iteration, particle) triple owns its stream.
enum StreamTag : std::uint64_t {
    kInitStream = 11,
    kAdpsoStream = 12,
    kPsoStream = 13,
    kGaStream = 14,
    kRsStream = 15,
};

// k distinct positions out of n, uniformly (partial Fisher-Yates).
std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    k = std::min(k, n);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

// Index of the best evaluation, earliest on ties.
std::size_t argbest(const std::vector<Evaluation>& evals) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < evals.size(); ++i) {
        if (better(evals[i].fitness, evals[best].fitness)) best = i;
    }
    return best;
}

class Tracker {
public:
    Tracker(const ProblemInstance& inst, std::size_t iterations) : eta_(inst.eta()) {
        result_.trace.reserve(iterations);
    }

    // Strict improvement only: ties keep the incumbent.
    void offer(const Particle& p, const Evaluation& e) {
        if (!has_best_ || better(e.fitness, result_.best_eval.fitness)) {
            result_.best = p;
            result_.best_eval = e;
            has_best_ = true;
        }
    }

    void record() {
        const Evaluation& b = result_.best_eval;
        result_.trace.push_back({defuzzify(b.cost, eta_), b.makespan.upper, b.fitness.feasible});
    }

    const Particle& best() const { return result_.best; }
    const Evaluation& best_eval() const { return result_.best_eval; }
    OptimizerResult take() { return std::move(result_); }

private:
    double eta_;
    bool has_best_ = false;
    OptimizerResult result_;
};

std::vector<Evaluation> evaluate_all(const ProblemInstance& inst, const std::vector<Particle>& pop) {
    std::vector<Evaluation> evals;
    evals.reserve(pop.size());
    for (const auto& p : pop) evals.push_back(evaluate(inst, p));
    return evals;
}

}  // namespace

AdpsoParams AdpsoParams::defaults_for(std::size_t num_tasks) {
    AdpsoParams p;
    p.k_min = 1;
    p.k_max = std::max<std::size_t>(1, (num_tasks + 9) / 10);
    return p;
}

void AdpsoParams::validate(std::size_t num_tasks) const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::BadParams, msg); };
    if (population < 1) fail("population must be >= 1");
    if (iterations < 1) fail("iterations must be >= 1");
    if (!(w_min >= 0.0 && w_min < w_max && w_max <= 1.0)) fail("need 0 <= w_min < w_max <= 1");
    if (k_min < 1 || k_min > k_max) fail("need 1 <= k_min <= k_max");
    if (num_tasks > 0 && k_max > num_tasks) fail("k_max exceeds the number of tasks");
    for (double c : {c1_start, c1_end, c2_start, c2_end}) {
        if (!(c >= 0.0 && c <= 1.0)) fail("acceleration coefficients must lie in [0, 1]");
    }
}

std::string_view to_string(Algorithm a) noexcept {
    switch (a) {
        case Algorithm::Adpso: return "ADPSO";
        case Algorithm::Pso: return "PSO";
        case Algorithm::Ga: return "GA";
        case Algorithm::Rs: return "RS";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "adpso") return Algorithm::Adpso;
    if (s == "pso") return Algorithm::Pso;
    if (s == "ga") return Algorithm::Ga;
    if (s == "rs") return Algorithm::Rs;
    throw Error(ErrorKind::ConfigInvalid, "unknown algorithm '" + std::string(name) + "'");
}

Particle random_particle(std::size_t num_tasks, std::size_t num_servers, Rng& rng) {
    Particle p;
    p.order.resize(num_tasks);
    p.server.resize(num_tasks);
    for (std::size_t j = 0; j < num_tasks; ++j) {
        p.order[j] = rng.uniform01() * static_cast<double>(num_tasks);
        p.server[j] = static_cast<int>(rng.below(num_servers));
    }
    return p;
}

std::vector<Particle> init_population(const ProblemInstance& inst, std::size_t population, std::uint64_t seed) {
    std::vector<Particle> pop;
    pop.reserve(population);
    for (std::size_t i = 0; i < population; ++i) {
        Rng rng = Rng::derive(seed, {kInitStream, i});
        pop.push_back(random_particle(inst.num_tasks(), inst.num_servers(), rng));
    }
    return pop;
}

std::size_t divergence(const Particle& a, const Particle& b) {
    if (a.order.size() != b.order.size() || a.server.size() != b.server.size()) {
        throw Error(ErrorKind::ShapeMismatch, "particles differ in length");
    }
    std::size_t diff = 0;
    for (std::size_t j = 0; j < a.order.size(); ++j) {
        diff += a.order[j] != b.order[j];
        diff += a.server[j] != b.server[j];
    }
    return diff;
}

double inertia_from_divergence(double d, double w_max, double w_min) {
    if (d == 0.0) return w_min;
    return w_max - (w_max - w_min) * std::exp(d / (d - 1.01));
}

double adaptive_inertia(const Particle& p, const Particle& global_best, double w_max, double w_min) {
    const std::size_t slots = 2 * p.order.size();
    const std::size_t diff = divergence(global_best, p);
    const double d = slots == 0 ? 0.0 : static_cast<double>(diff) / static_cast<double>(slots);
    return inertia_from_divergence(d, w_max, w_min);
}

std::size_t mutation_count(double w, double w_max, double w_min, std::size_t k_max, std::size_t k_min) {
    const double ratio = (w - w_min) / (w_max - w_min);
    const double k = std::round(static_cast<double>(k_min) + static_cast<double>(k_max - k_min) * ratio);
    return std::clamp(static_cast<std::size_t>(std::max(k, 0.0)), k_min, k_max);
}

std::pair<double, double> accel_coefficients(std::size_t t, std::size_t iterations, const AdpsoParams& params) {
    const double frac = iterations == 0 ? 0.0 : static_cast<double>(t) / static_cast<double>(iterations);
    return {params.c1_start + (params.c1_end - params.c1_start) * frac,
            params.c2_start + (params.c2_end - params.c2_start) * frac};
}

Particle dual_mutation(const Particle& p, std::size_t k, std::size_t num_servers, Rng& rng) {
    if (k == 0) throw Error(ErrorKind::BadParams, "mutation count must be >= 1");
    Particle out = p;
    const std::size_t n = p.order.size();
    if (n == 0) return out;

    // Neighborhood part: pick one of the arrangements of up to three order values.
    auto positions = sample_distinct(n, 3, rng);
    std::sort(positions.begin(), positions.end());
    std::vector<std::size_t> perm(positions.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t arrangements = 1;
    for (std::size_t i = 2; i <= perm.size(); ++i) arrangements *= i;
    for (std::size_t choice = rng.below(arrangements); choice > 0; --choice) {
        std::next_permutation(perm.begin(), perm.end());
    }
    for (std::size_t i = 0; i < positions.size(); ++i) {
        out.order[positions[i]] = p.order[positions[perm[i]]];
    }

    // Multi-point part: redraw k distinct server slots.
    for (std::size_t j : sample_distinct(n, k, rng)) {
        out.server[j] = static_cast<int>(rng.below(num_servers));
    }
    return out;
}

Particle crossover_segment(const Particle& a, const Particle& b, std::size_t first, std::size_t last) {
    if (a.order.size() != b.order.size() || a.server.size() != b.server.size()) {
        throw Error(ErrorKind::ShapeMismatch, "crossover parents differ in length");
    }
    Particle out = a;
    last = std::min(last, a.order.size() == 0 ? 0 : a.order.size() - 1);
    for (std::size_t j = first; j <= last && j < a.order.size(); ++j) {
        out.order[j] = b.order[j];
        out.server[j] = b.server[j];
    }
    return out;
}

Particle two_point_crossover(const Particle& a, const Particle& b, Rng& rng) {
    if (a.order.size() != b.order.size() || a.server.size() != b.server.size()) {
        throw Error(ErrorKind::ShapeMismatch, "crossover parents differ in length");
    }
    const std::size_t n = a.order.size();
    if (n == 0) return a;
    std::size_t l1 = rng.below(n);
    std::size_t l2 = rng.below(n);
    if (l1 > l2) std::swap(l1, l2);
    return crossover_segment(a, b, l1, l2);
}

int decode_server_position(double position, std::size_t num_servers) noexcept {
    const double hi = static_cast<double>(num_servers) - 1.0;
    if (!(position > 0.0)) return 0;  // also catches NaN
    const double r = std::round(position);
    return static_cast<int>(std::min(r, hi));
}

OptimizerResult adpso_run(const ProblemInstance& inst, const AdpsoParams& params) {
    params.validate(inst.num_tasks());
    const std::size_t m = inst.num_servers();

    std::vector<Particle> pop = init_population(inst, params.population, params.seed);
    std::vector<Evaluation> evals = evaluate_all(inst, pop);
    std::vector<Particle> personal = pop;
    std::vector<Evaluation> personal_eval = evals;

    Tracker tracker(inst, params.iterations);
    const std::size_t first = argbest(evals);
    tracker.offer(pop[first], evals[first]);

    std::vector<Particle> next(pop.size());
    for (std::size_t t = 0; t < params.iterations; ++t) {
        const auto [c1, c2] = accel_coefficients(t, params.iterations, params);
        const Particle global = tracker.best();
        for (std::size_t i = 0; i < pop.size(); ++i) {
            Rng rng = Rng::derive(params.seed, {kAdpsoStream, t, i});
            const double w = adaptive_inertia(pop[i], global, params.w_max, params.w_min);
            Particle cur = pop[i];
            if (rng.uniform01() < w) {
                const std::size_t k = mutation_count(w, params.w_max, params.w_min, params.k_max, params.k_min);
                cur = dual_mutation(cur, k, m, rng);
            }
            if (rng.uniform01() < c1) cur = two_point_crossover(cur, personal[i], rng);
            if (rng.uniform01() < c2) cur = two_point_crossover(cur, global, rng);
            next[i] = std::move(cur);
        }
        pop.swap(next);
        evals = evaluate_all(inst, pop);
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (better(evals[i].fitness, personal_eval[i].fitness)) {
                personal[i] = pop[i];
                personal_eval[i] = evals[i];
                tracker.offer(pop[i], evals[i]);
            }
        }
        tracker.record();
    }
    return tracker.take();
}

OptimizerResult pso_run(const ProblemInstance& inst, const AdpsoParams& params) {
    params.validate(inst.num_tasks());
    const std::size_t n = inst.num_tasks();
    const std::size_t m = inst.num_servers();
    const std::size_t dims = 2 * n;  // [order_0..order_{n-1}, server_0..server_{n-1}]

    auto decode = [&](const std::vector<double>& x) {
        Particle p;
        p.order.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
        p.server.resize(n);
        for (std::size_t j = 0; j < n; ++j) p.server[j] = decode_server_position(x[n + j], m);
        return p;
    };

    const auto init = init_population(inst, params.population, params.seed);
    std::vector<std::vector<double>> pos(init.size(), std::vector<double>(dims));
    std::vector<std::vector<double>> vel(init.size(), std::vector<double>(dims, 0.0));
    for (std::size_t i = 0; i < init.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            pos[i][j] = init[i].order[j];
            pos[i][n + j] = static_cast<double>(init[i].server[j]);
        }
    }
    std::vector<Evaluation> evals = evaluate_all(inst, init);
    auto personal = pos;
    auto personal_eval = evals;

    Tracker tracker(inst, params.iterations);
    std::size_t global_idx = argbest(evals);
    std::vector<double> global = pos[global_idx];
    tracker.offer(init[global_idx], evals[global_idx]);

    const double order_vmax = static_cast<double>(std::max<std::size_t>(n, 1));
    const double server_vmax = static_cast<double>(m);

    std::vector<Particle> decoded(pos.size());
    for (std::size_t t = 0; t < params.iterations; ++t) {
        const auto [c1, c2] = accel_coefficients(t, params.iterations, params);
        const double w = params.w_max - (params.w_max - params.w_min) * static_cast<double>(t) /
                                            static_cast<double>(params.iterations);
        for (std::size_t i = 0; i < pos.size(); ++i) {
            Rng rng = Rng::derive(params.seed, {kPsoStream, t, i});
            for (std::size_t d = 0; d < dims; ++d) {
                const double r1 = rng.uniform01();
                const double r2 = rng.uniform01();
                const double vmax = d < n ? order_vmax : server_vmax;
                double v = w * vel[i][d] + c1 * r1 * (personal[i][d] - pos[i][d]) + c2 * r2 * (global[d] - pos[i][d]);
                vel[i][d] = std::clamp(v, -vmax, vmax);
                pos[i][d] += vel[i][d];
            }
            decoded[i] = decode(pos[i]);
        }
        evals = evaluate_all(inst, decoded);
        for (std::size_t i = 0; i < pos.size(); ++i) {
            if (better(evals[i].fitness, personal_eval[i].fitness)) {
                personal[i] = pos[i];
                personal_eval[i] = evals[i];
                if (better(evals[i].fitness, tracker.best_eval().fitness)) {
                    global = pos[i];
                    tracker.offer(decoded[i], evals[i]);
                }
            }
        }
        tracker.record();
    }
    return tracker.take();
}

OptimizerResult ga_run(const ProblemInstance& inst, const AdpsoParams& params, const GaSettings& ga) {
    params.validate(inst.num_tasks());
    const std::size_t m = inst.num_servers();
    const std::size_t size = params.population;

    std::vector<Particle> pop = init_population(inst, size, params.seed);
    std::vector<Evaluation> evals = evaluate_all(inst, pop);

    Tracker tracker(inst, params.iterations);
    std::size_t elite = argbest(evals);
    tracker.offer(pop[elite], evals[elite]);

    std::vector<Particle> next;
    next.reserve(size);
    for (std::size_t t = 0; t < params.iterations; ++t) {
        Rng rng = Rng::derive(params.seed, {kGaStream, t});

        // Binary tournament fills the mating pool.
        std::vector<std::size_t> pool(size);
        for (auto& slot : pool) {
            const std::size_t a = rng.below(size);
            const std::size_t b = rng.below(size);
            slot = better(evals[b].fitness, evals[a].fitness) ? b : a;
        }

        next.clear();
        next.push_back(pop[elite]);
        for (std::size_t k = 0; next.size() < size; k += 2) {
            const Particle& pa = pop[pool[k % size]];
            const Particle& pb = pop[pool[(k + 1) % size]];
            Particle ca = pa;
            Particle cb = pb;
            if (rng.uniform01() < ga.crossover_prob && pa.num_tasks() > 0) {
                std::size_t l1 = rng.below(pa.num_tasks());
                std::size_t l2 = rng.below(pa.num_tasks());
                if (l1 > l2) std::swap(l1, l2);
                ca = crossover_segment(pa, pb, l1, l2);
                cb = crossover_segment(pb, pa, l1, l2);
            }
            for (Particle* child : {&ca, &cb}) {
                if (rng.uniform01() < ga.mutation_prob) *child = dual_mutation(*child, ga.mutation_points, m, rng);
            }
            next.push_back(std::move(ca));
            if (next.size() < size) next.push_back(std::move(cb));
        }
        pop.swap(next);
        evals = evaluate_all(inst, pop);
        elite = argbest(evals);
        tracker.offer(pop[elite], evals[elite]);
        tracker.record();
    }
    return tracker.take();
}

OptimizerResult rs_run(const ProblemInstance& inst, const AdpsoParams& params) {
    params.validate(inst.num_tasks());
    Tracker tracker(inst, params.iterations);
    for (std::size_t t = 0; t < params.iterations; ++t) {
        for (std::size_t i = 0; i < params.population; ++i) {
            Rng rng = Rng::derive(params.seed, {kRsStream, t, i});
            Particle p = random_particle(inst.num_tasks(), inst.num_servers(), rng);
            const Evaluation e = evaluate(inst, p);
            tracker.offer(p, e);
        }
        tracker.record();
    }
    return tracker.take();
}

OptimizerResult run_algorithm(Algorithm algo, const ProblemInstance& inst, const AdpsoParams& params) {
    switch (algo) {
        case Algorithm::Adpso: return adpso_run(inst, params);
        case Algorithm::Pso: return pso_run(inst, params);
        case Algorithm::Ga: return ga_run(inst, params);
        case Algorithm::Rs: return rs_run(inst, params);
    }
    throw Error(ErrorKind::ConfigInvalid, "unknown algorithm");
}

}  // namespace fuzzysched
