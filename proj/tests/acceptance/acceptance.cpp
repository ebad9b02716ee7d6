// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fuzzysched/bench.hpp"
#include "fuzzysched/deadline.hpp"
#include "fuzzysched/optimizers.hpp"
#include "fuzzysched/platform.hpp"
#include "fuzzysched/simulator.hpp"
#include "fuzzysched/tfn.hpp"

using namespace fuzzysched;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail, double seconds) {
    std::printf("[%s] %2d %s: %s (%.2fs)\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

template <class Fn>
void criterion(int id, const std::string& title, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, title, ok, detail, secs);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ------------------------------------------------------------ crisp oracle

// Raw description of a crisp instance, independent of the library types.
struct CrispCase {
    std::vector<double> runtime;        // reference seconds
    std::vector<double> ratio;          // per server
    std::vector<double> cost_per_hour;  // per server
    std::vector<int> tier;              // 0 cloud, 1 edge
    struct Edge {
        std::size_t from, to;
        std::uint64_t bytes;
    };
    std::vector<Edge> edges;
    double rate[3] = {2.5, 1.0, 12.5};
    double price[3] = {0.4, 0.16, 0.8};
    double quantum = 60.0;
};

struct OracleResult {
    double makespan = 0.0;
    double cost = 0.0;
};

// Event-driven list scheduling: a task is pending once all parents are done; an
// idle server runs its pending task with the largest priority (earliest arrival
// on ties). Completions at the same instant are handled together and the
// children they release join the queues in ascending index.
OracleResult oracle_simulate(const CrispCase& c, const std::vector<double>& prio, const std::vector<int>& srv) {
    const std::size_t n = c.runtime.size();
    const std::size_t m = c.ratio.size();
    std::vector<std::vector<std::size_t>> parents(n), children(n);
    for (std::size_t k = 0; k < c.edges.size(); ++k) {
        parents[c.edges[k].to].push_back(k);
        children[c.edges[k].from].push_back(c.edges[k].to);
    }
    auto xfer = [&](std::size_t k) {
        const auto& e = c.edges[k];
        const int a = srv[e.from], b = srv[e.to];
        if (a == b) return 0.0;
        return (static_cast<double>(e.bytes) / 1e6) / c.rate[c.tier[a] + c.tier[b]];
    };

    std::vector<double> ready(n, 0.0), finish(n, 0.0);
    std::vector<std::size_t> missing(n);
    std::vector<std::size_t> arrival(n, 0);
    std::vector<std::vector<std::size_t>> pending(m);
    std::vector<long> running(m, -1);
    std::vector<bool> booted(m, false);
    std::vector<double> boot(m, 0.0), last_end(m, 0.0);
    std::size_t counter = 0;

    for (std::size_t v = 0; v < n; ++v) {
        missing[v] = parents[v].size();
        if (missing[v] == 0) {
            arrival[v] = counter++;
            pending[srv[v]].push_back(v);
        }
    }
    for (;;) {
        for (std::size_t s = 0; s < m; ++s) {
            if (running[s] >= 0 || pending[s].empty()) continue;
            std::size_t pick = 0;
            for (std::size_t i = 1; i < pending[s].size(); ++i) {
                const std::size_t a = pending[s][i], b = pending[s][pick];
                if (prio[a] > prio[b] || (prio[a] == prio[b] && arrival[a] < arrival[b])) pick = i;
            }
            const std::size_t v = pending[s][pick];
            pending[s].erase(pending[s].begin() + static_cast<long>(pick));
            if (!booted[s]) {
                booted[s] = true;
                boot[s] = last_end[s] = ready[v];
            }
            const double start = std::max(ready[v], last_end[s]);
            finish[v] = start + c.runtime[v] / c.ratio[s];
            last_end[s] = finish[v];
            running[s] = static_cast<long>(v);
        }
        double now = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < m; ++s) {
            if (running[s] >= 0) now = std::min(now, finish[running[s]]);
        }
        if (std::isinf(now)) break;
        std::vector<std::size_t> released;
        for (std::size_t s = 0; s < m; ++s) {
            if (running[s] < 0 || finish[running[s]] != now) continue;
            const auto v = static_cast<std::size_t>(running[s]);
            running[s] = -1;
            for (std::size_t ch : children[v]) {
                if (--missing[ch] == 0) released.push_back(ch);
            }
        }
        std::sort(released.begin(), released.end());
        for (std::size_t ch : released) {
            double r = 0.0;
            for (std::size_t k : parents[ch]) r = std::max(r, finish[c.edges[k].from] + xfer(k));
            ready[ch] = r;
            arrival[ch] = counter++;
            pending[srv[ch]].push_back(ch);
        }
    }

    OracleResult out;
    for (double f : finish) out.makespan = std::max(out.makespan, f);
    for (std::size_t s = 0; s < m; ++s) {
        if (!booted[s]) continue;
        out.cost += std::ceil((last_end[s] - boot[s]) / c.quantum) * (c.cost_per_hour[s] * c.quantum / 3600.0);
    }
    for (std::size_t k = 0; k < c.edges.size(); ++k) {
        const auto& e = c.edges[k];
        const int a = srv[e.from], b = srv[e.to];
        if (a != b) out.cost += c.price[c.tier[a] + c.tier[b]] * (static_cast<double>(e.bytes) / 1e9);
    }
    return out;
}

CrispCase random_case(std::size_t n, std::size_t m, Rng& rng) {
    const Platform ref = build_reference_platform();
    CrispCase c;
    std::vector<std::size_t> pick(ref.size());
    std::iota(pick.begin(), pick.end(), 0);
    for (std::size_t i = 0; i < m; ++i) std::swap(pick[i], pick[i + rng.below(ref.size() - i)]);
    for (std::size_t i = 0; i < m; ++i) {
        const Server& s = ref.servers[pick[i]];
        c.ratio.push_back(s.capacity_ratio);
        c.cost_per_hour.push_back(s.cost_per_hour);
        c.tier.push_back(static_cast<int>(s.tier));
    }
    for (std::size_t v = 0; v < n; ++v) {
        c.runtime.push_back(1.0 + static_cast<double>(rng.below(600)) / 10.0);
        for (std::size_t u = 0; u < v; ++u) {
            if (rng.uniform01() < 0.4) c.edges.push_back({u, v, rng.below(400) * 100'000ULL});
        }
    }
    return c;
}

ProblemInstance to_instance(const CrispCase& c) {
    std::vector<Task> tasks;
    for (std::size_t v = 0; v < c.runtime.size(); ++v) tasks.push_back({"t" + std::to_string(v), v, c.runtime[v]});
    std::vector<DataDependency> deps;
    for (const auto& e : c.edges) deps.push_back({e.from, e.to, e.bytes});
    const Workflow w("oracle", tasks, deps);
    Platform p = build_reference_platform(c.quantum);
    p.servers.clear();
    for (std::size_t s = 0; s < c.ratio.size(); ++s) {
        Server srv;
        srv.index = s;
        srv.id = "s" + std::to_string(s);
        srv.capacity_ratio = c.ratio[s];
        srv.cost_per_hour = c.cost_per_hour[s];
        srv.billing_quantum = c.quantum;
        srv.tier = static_cast<Tier>(c.tier[s]);
        p.servers.push_back(srv);
    }
    for (int k = 0; k < 3; ++k) {
        p.classes[static_cast<std::size_t>(k)].mb_per_sec = c.rate[k];
        p.classes[static_cast<std::size_t>(k)].dollars_per_gb = c.price[k];
    }
    const double d = deadline(build_crisp_instance(w, p));
    return build_problem_instance(w, p, FuzzificationParams::zero_fuzz(), c.quantum, 1).with_deadline(d);
}

// Exhaustive optimum over all priority permutations x server assignments.
Fitness oracle_optimum(const CrispCase& c, double deadline_s) {
    const std::size_t n = c.runtime.size();
    const std::size_t m = c.ratio.size();
    std::size_t combos = 1;
    for (std::size_t i = 0; i < n; ++i) combos *= m;
    std::vector<double> prio(n);
    std::iota(prio.begin(), prio.end(), 0.0);
    Fitness best{false, std::numeric_limits<double>::infinity()};
    do {
        std::vector<int> srv(n);
        for (std::size_t code = 0; code < combos; ++code) {
            for (std::size_t i = 0, x = code; i < n; ++i, x /= m) srv[i] = static_cast<int>(x % m);
            const OracleResult r = oracle_simulate(c, prio, srv);
            const Fitness f = r.makespan <= deadline_s ? Fitness{true, r.cost} : Fitness{false, r.makespan};
            if (better(f, best)) best = f;
        }
    } while (std::next_permutation(prio.begin(), prio.end()));
    return best;
}

// ------------------------------------------------------------ campaign helpers

std::string slurp_without_stamp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    if (text.rfind("# generated_at=", 0) == 0) text = text.substr(text.find('\n') + 1);
    return text;
}

struct Campaign {
    ExperimentConfig cfg;
    PlatformConfig platform;
    std::vector<RunRecord> records;
    double seconds = 0.0;
};

Campaign run_campaign(const fs::path& out) {
    Campaign c;
    c.cfg = load_experiment_config(fs::path(FUZZYSCHED_TEST_DATA) / "experiments/tiny.json");
    c.cfg.output_dir = out;
    c.platform = load_platform_config(c.cfg.platform);
    const auto t0 = std::chrono::steady_clock::now();
    c.records = run_experiment(c.cfg);
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_outputs(c.records, c.cfg, c.platform.fuzz.eta);
    return c;
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");

    criterion(1, "defuzzification ground truth", [](std::string& d) {
        const double a = defuzzify({38.61, 38.84, 39.6}, 1.0);
        const double b = defuzzify({28.41, 29.84, 32.79}, 1.0);
        d = fmt("%.4f vs 39.14, %.4f vs 30.93, tol 0.01", a, b);
        return std::abs(a - 39.14) <= 0.01 && std::abs(b - 30.93) <= 0.01;
    });

    criterion(2, "fuzzification contract", [](std::string& d) {
        Rng rng = Rng::derive(2024, {2});
        const FuzzificationParams p{0.85, 1.2, 1.0};
        int bad = 0;
        for (int i = 0; i < 10000; ++i) {
            const Tfn f = fuzzify(100.0, p, rng);
            const bool ok = f.modal == 100.0 && f.lower >= 85.0 && f.lower <= 100.0 && f.upper >= 200.0 - f.lower &&
                            f.upper <= 120.0 && f.upper - f.modal >= f.modal - f.lower && mean(f) >= 100.0;
            bad += !ok;
        }
        d = fmt("%d of 10000 draws violate the bounds", bad);
        return bad == 0;
    });

    criterion(3, "TFN algebra properties", [](std::string& d) {
        Rng rng = Rng::derive(2024, {3});
        std::vector<Tfn> xs;
        for (int i = 0; i < 1000; ++i) {
            double v[3] = {rng.uniform01() * 1000, rng.uniform01() * 1000, rng.uniform01() * 1000};
            std::sort(v, v + 3);
            if (i % 10 == 0) v[2] = v[1] = v[0];  // include crisp values
            xs.push_back({v[0], v[1], v[2]});
        }
        for (int i = 0; i < 50; ++i) xs[static_cast<std::size_t>(i * 7)] = xs[static_cast<std::size_t>(i * 11)];
        long violations = 0;
        // Totality and antisymmetry over all pairs; transitivity over sampled triples.
        for (const Tfn& a : xs) {
            if (compare(a, a) != 0 || !(fmax(a, a) == a)) ++violations;
            for (const Tfn& b : xs) {
                const auto ab = compare(a, b), ba = compare(b, a);
                if ((ab < 0) != (ba > 0) || (ab == 0) != (ba == 0)) ++violations;
                if (compare(fmax(a, b), fmax(b, a)) != 0) ++violations;
                if (!(a + b).valid()) ++violations;
            }
            if (!scale(a, rng.uniform01() * 5).valid()) ++violations;
            if (!ceil_div(a, 1 + rng.uniform01() * 120).valid()) ++violations;
        }
        for (int t = 0; t < 1'000'000; ++t) {
            const Tfn& a = xs[rng.below(xs.size())];
            const Tfn& b = xs[rng.below(xs.size())];
            const Tfn& c = xs[rng.below(xs.size())];
            if (compare(a, b) <= 0 && compare(b, c) <= 0 && compare(a, c) > 0) ++violations;
            if (compare(fmax(fmax(a, b), c), fmax(a, fmax(b, c))) != 0) ++violations;
        }
        auto sorted = xs;
        std::sort(sorted.begin(), sorted.end(), [](const Tfn& a, const Tfn& b) { return compare(a, b) < 0; });
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            for (std::size_t j = i + 1; j < sorted.size(); ++j) violations += compare(sorted[i], sorted[j]) > 0;
        }
        d = fmt("%ld violations over 1000 triples (pairs, 1e6 sampled triples, sorted chain)", violations);
        return violations == 0;
    });

    criterion(4, "inertia weight endpoints", [](std::string& d) {
        const double w0 = inertia_from_divergence(0.0, 0.9, 0.4);
        const double w1 = inertia_from_divergence(1.0, 0.9, 0.4);
        bool monotone = true;
        double prev = -1.0;
        for (int i = 0; i <= 100; ++i) {
            const double w = inertia_from_divergence(i / 100.0, 0.9, 0.4);
            monotone = monotone && w >= prev;
            prev = w;
        }
        d = fmt("w(0)=%.17g, w(1)=%.17g, monotone over 101 points: %s", w0, w1, monotone ? "yes" : "no");
        return w0 == 0.4 && w1 >= 0.9 - 1e-4 && w1 <= 0.9 && monotone;
    });

    criterion(5, "oracle equivalence on small crisp instances", [](std::string& d) {
        Rng rng = Rng::derive(2024, {5});
        int instances_ok = 0;
        std::string per;
        for (int inst_id = 0; inst_id < 10; ++inst_id) {
            const std::size_t n = 3 + rng.below(3);
            const std::size_t m = 2 + rng.below(2);
            const CrispCase c = random_case(n, m, rng);
            const ProblemInstance inst = to_instance(c);
            const Fitness opt = oracle_optimum(c, inst.deadline());
            int hits = 0;
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                AdpsoParams params = AdpsoParams::defaults_for(n);
                params.population = 50;
                params.iterations = 200;
                params.seed = seed;
                const Fitness got = adpso_run(inst, params).best_eval.fitness;
                hits += got.feasible == opt.feasible && std::abs(got.value - opt.value) <= 1e-9;
            }
            instances_ok += hits >= 9;
            per += (per.empty() ? "" : " ") + std::to_string(hits);
        }
        d = fmt("instances with >= 9/10 seeds at the optimum: %d/10 (hits per instance: %s)", instances_ok, per.c_str());
        return instances_ok == 10;
    });

    const fs::path out_a = fs::temp_directory_path() / "fuzzysched_acceptance_a";
    const fs::path out_b = fs::temp_directory_path() / "fuzzysched_acceptance_b";
    fs::remove_all(out_a);
    fs::remove_all(out_b);
    Campaign first;
    bool campaign_ok = true;
    std::string campaign_error;
    try {
        first = run_campaign(out_a);
    } catch (const std::exception& e) {
        campaign_ok = false;
        campaign_error = e.what();
    }

    criterion(6, "tiny-workflow comparative ordering", [&](std::string& d) {
        if (!campaign_ok) throw std::runtime_error(campaign_error);
        const auto rows = summarize(first.records, first.platform.fuzz.eta);
        auto row = [&](const std::string& wf, Algorithm a) -> const SummaryRow& {
            for (const auto& r : rows) {
                if (r.workflow == wf && r.algorithm == a) return r;
            }
            throw std::runtime_error("missing summary row");
        };
        auto no_worse = [](const SummaryRow& a, const SummaryRow& b) { return a.mean_fitness <= b.mean_fitness; };
        int vs_rs = 0, vs_pso = 0, vs_ga = 0, workflows = 0;
        std::string table;
        std::vector<std::string> seen;
        for (const auto& r : rows) {
            if (std::find(seen.begin(), seen.end(), r.workflow) != seen.end()) continue;
            seen.push_back(r.workflow);
            ++workflows;
            const auto& a = row(r.workflow, Algorithm::Adpso);
            const auto& rs = row(r.workflow, Algorithm::Rs);
            const auto& pso = row(r.workflow, Algorithm::Pso);
            const auto& ga = row(r.workflow, Algorithm::Ga);
            vs_rs += no_worse(a, rs);
            vs_pso += no_worse(a, pso);
            vs_ga += no_worse(a, ga);
            table += fmt(" %s[A %.4g/%zu P %.4g/%zu G %.4g/%zu R %.4g/%zu]", r.workflow.c_str(), a.mean_fitness,
                         a.infeasible_runs, pso.mean_fitness, pso.infeasible_runs, ga.mean_fitness,
                         ga.infeasible_runs, rs.mean_fitness, rs.infeasible_runs);
        }
        d = fmt("ADPSO <= RS %d/%d, <= PSO %d/%d, <= GA %d/%d in %.0fs;", vs_rs, workflows, vs_pso, workflows, vs_ga,
                workflows, first.seconds) +
            table;
        return workflows == 5 && vs_rs == 5 && vs_pso >= 3 && vs_ga >= 3 && first.seconds < 1800;
    });

    criterion(7, "feasibility soundness", [&](std::string& d) {
        if (!campaign_ok) throw std::runtime_error(campaign_error);
        const double quantum = first.cfg.quantum > 0 ? first.cfg.quantum : first.platform.quantum;
        std::vector<Workflow> workflows;
        for (const auto& p : first.cfg.workflows) workflows.push_back(load_workflow(p));
        std::size_t checked = 0, bad = 0, feasible = 0;
        std::vector<std::pair<std::string, Algorithm>> infeasible_best;
        for (const auto& rec : first.records) {
            std::size_t wi = 0;
            while (workflows[wi].name() != rec.workflow) ++wi;
            const ProblemInstance inst =
                build_campaign_instance(workflows[wi], first.platform, quantum, first.cfg.base_seed, wi, rec.repeat);
            const FuzzySchedule s = decode_schedule(inst, rec.best);
            const bool meets = s.makespan.upper <= inst.deadline();
            ++checked;
            feasible += rec.feasible();
            if (rec.feasible() != meets || !(s.makespan == rec.makespan) || !(s.cost == rec.cost)) ++bad;
        }
        // Every starred best in the summary must come from a run that misses the deadline.
        std::size_t starred = 0;
        for (const auto& row : summarize(first.records, first.platform.fuzz.eta)) {
            if (row.best_feasible) continue;
            ++starred;
            for (const auto& rec : first.records) {
                if (rec.workflow == row.workflow && rec.algorithm == row.algorithm && rec.cost == row.best_cost &&
                    rec.makespan.upper <= rec.deadline) {
                    ++bad;
                }
            }
        }
        // Rows starred on the mean must contain at least one run that misses the deadline on recomputation.
        std::size_t mean_starred = 0;
        for (const auto& row : summarize(first.records, first.platform.fuzz.eta)) {
            if (row.infeasible_runs == 0) continue;
            ++mean_starred;
            std::size_t late = 0;
            for (std::size_t i = 0; i < first.records.size(); ++i) {
                const auto& rec = first.records[i];
                if (rec.workflow == row.workflow && rec.algorithm == row.algorithm && !rec.feasible()) ++late;
            }
            if (late != row.infeasible_runs) ++bad;
        }
        d = fmt("%zu runs recomputed (%zu feasible, %zu best-starred and %zu mean-starred rows), %zu inconsistencies",
                checked, feasible, starred, mean_starred, bad);
        return checked == first.records.size() && checked > 0 && bad == 0;
    });

    criterion(8, "determinism of campaign outputs", [&](std::string& d) {
        if (!campaign_ok) throw std::runtime_error(campaign_error);
        const Campaign second = run_campaign(out_b);
        bool same = true;
        std::string which;
        for (const char* name : {"traces.csv", "summary.csv", "variance.csv"}) {
            const bool eq = slurp_without_stamp(out_a / name) == slurp_without_stamp(out_b / name);
            if (!eq) which += std::string(" ") + name;
            same = same && eq;
        }
        d = same ? "traces.csv, summary.csv and variance.csv byte-identical after the timestamp line"
                 : "differences in" + which;
        return same;
    });

    criterion(9, "crisp degeneration against an independent simulator", [](std::string& d) {
        Rng rng = Rng::derive(2024, {9});
        int mismatches = 0, compared = 0;
        for (int inst_id = 0; inst_id < 50; ++inst_id) {
            const CrispCase c = random_case(5, 5, rng);
            const ProblemInstance inst = to_instance(c);
            for (int k = 0; k < 20; ++k) {
                Particle p = random_particle(5, 5, rng);
                if (k % 4 == 0) {
                    for (auto& o : p.order) o = static_cast<double>(rng.below(2));  // force order ties
                }
                const FuzzySchedule s = decode_schedule(inst, p);
                const OracleResult r = oracle_simulate(c, p.order, p.server);
                ++compared;
                if (!(s.makespan == Tfn::crisp(r.makespan))) ++mismatches;
            }
        }
        d = fmt("%d of %d decoded makespans differ from the oracle (exact comparison)", mismatches, compared);
        return mismatches == 0;
    });

    criterion(10, "HEFT diamond fixture", [](std::string& d) {
        const Workflow w = load_workflow(fs::path(FUZZYSCHED_TEST_DATA) / "fixtures/diamond.txt");
        const PlatformConfig pc = load_platform_config(fs::path(FUZZYSCHED_TEST_DATA) / "fixtures/diamond_platform.json");
        const CrispInstance ci = build_crisp_instance(w, pc.platform);
        const double h = heft_makespan(ci);
        const double dl = deadline(ci);
        d = fmt("H = %.17g (expected 43), D = %.17g (expected 64.5)", h, dl);
        return h == 43.0 && dl == 64.5;
    });

    fs::remove_all(out_a);
    fs::remove_all(out_b);
    std::printf("%d criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
