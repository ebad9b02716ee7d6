#include "fuzzysched/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fuzzysched/deadline.hpp"
#include "fuzzysched/error.hpp"

namespace fuzzysched {

using nlohmann::json;

namespace {

constexpr std::uint64_t kInstanceStream = 21;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty()) return base / path;
    return path;
}

json tfn_json(const Tfn& a) { return json::array({a.lower, a.modal, a.upper}); }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw Error(ErrorKind::IoFailure, "write failed for " + path.string());
}

std::string header_line(const std::string& timestamp) {
    return timestamp.empty() ? std::string() : "# generated_at=" + timestamp + "\n";
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

}  // namespace

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void ExperimentConfig::validate() const {
    if (workflows.empty()) throw Error(ErrorKind::ConfigInvalid, "no workflows listed");
    if (algorithms.empty()) throw Error(ErrorKind::ConfigInvalid, "no algorithms listed");
    if (repeats < 2) throw Error(ErrorKind::ConfigInvalid, "repeats must be >= 2 for sample variances");
    if (population < 1 || iterations < 1) {
        throw Error(ErrorKind::ConfigInvalid, "population and iterations must be >= 1");
    }
}

ExperimentConfig parse_experiment_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    ExperimentConfig cfg;
    try {
        const json j = json::parse(json_text);
        cfg.workflows.clear();
        for (const auto& w : j.at("workflows")) cfg.workflows.push_back(resolve(base_dir, w.get<std::string>()));
        if (j.contains("platform") && !j.at("platform").is_null()) {
            cfg.platform = resolve(base_dir, j.at("platform").get<std::string>());
        }
        if (j.contains("algorithms")) {
            cfg.algorithms.clear();
            for (const auto& a : j.at("algorithms")) cfg.algorithms.push_back(parse_algorithm(a.get<std::string>()));
        }
        cfg.repeats = j.value("repeats", cfg.repeats);
        cfg.base_seed = j.value("baseSeed", cfg.base_seed);
        cfg.population = j.value("population", cfg.population);
        cfg.iterations = j.value("iterations", cfg.iterations);
        cfg.quantum = j.value("quantum", cfg.quantum);
        if (j.contains("outputDir")) cfg.output_dir = resolve(base_dir, j.at("outputDir").get<std::string>());
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigInvalid, e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::FileNotFound, path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str(), path.parent_path());
}

ProblemInstance build_campaign_instance(const Workflow& w, const PlatformConfig& platform, double quantum,
                                        std::uint64_t base_seed, std::size_t workflow_index, std::size_t repeat) {
    Platform p = platform.platform;
    for (auto& s : p.servers) s.billing_quantum = quantum;
    const double limit = deadline(build_crisp_instance(w, p));
    const std::uint64_t seed = Rng::derive(base_seed, {kInstanceStream, workflow_index, repeat}).next_u64();
    return build_problem_instance(w, p, platform.fuzz, quantum, seed).with_deadline(limit);
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const PlatformConfig platform = cfg.platform.empty() ? reference_platform_config()
                                                         : load_platform_config(cfg.platform);
    const double quantum = cfg.quantum > 0.0 ? cfg.quantum : platform.quantum;

    std::vector<RunRecord> records;
    for (std::size_t wi = 0; wi < cfg.workflows.size(); ++wi) {
        const Workflow w = load_workflow(cfg.workflows[wi]);
        validate(w);
        std::vector<ProblemInstance> instances;
        for (std::size_t r = 0; r < cfg.repeats; ++r) {
            instances.push_back(build_campaign_instance(w, platform, quantum, cfg.base_seed, wi, r));
        }
        AdpsoParams params = AdpsoParams::defaults_for(w.size());
        params.population = cfg.population;
        params.iterations = cfg.iterations;
        for (Algorithm algo : cfg.algorithms) {
            for (std::size_t r = 0; r < cfg.repeats; ++r) {
                params.seed = cfg.base_seed + r;
                const auto t0 = std::chrono::steady_clock::now();
                OptimizerResult res = run_algorithm(algo, instances[r], params);
                const auto t1 = std::chrono::steady_clock::now();

                RunRecord rec;
                rec.workflow = w.name();
                rec.num_tasks = w.size();
                rec.algorithm = algo;
                rec.seed = params.seed;
                rec.repeat = r;
                rec.cost = res.best_eval.cost;
                rec.fitness = res.best_eval.fitness;
                rec.makespan = res.best_eval.makespan;
                rec.deadline = instances[r].deadline();
                rec.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
                rec.trace = std::move(res.trace);
                rec.best = std::move(res.best);
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

double sample_variance(std::span<const double> values) {
    if (values.size() < 2) {
        throw Error(ErrorKind::TooFewSamples, "sample variance needs at least two values");
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(values.size() - 1);
}

std::vector<double> normalize_variances(std::span<const double> variances) {
    double norm = 0.0;
    for (double v : variances) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw Error(ErrorKind::AllZero, "all variances are zero");
    std::vector<double> out;
    out.reserve(variances.size());
    for (double v : variances) out.push_back(v / norm);
    return out;
}

std::string size_class(std::size_t num_tasks) {
    if (num_tasks <= 40) return "Tiny";
    if (num_tasks <= 75) return "Small";
    return "Medium";
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records, double eta) {
    std::vector<SummaryRow> rows;
    std::map<std::pair<std::string, Algorithm>, std::size_t> index;
    std::vector<const RunRecord*> best;
    for (const auto& r : records) {
        auto [it, inserted] = index.try_emplace({r.workflow, r.algorithm}, rows.size());
        if (inserted) {
            SummaryRow row;
            row.workflow = r.workflow;
            row.size = size_class(r.num_tasks);
            row.algorithm = r.algorithm;
            rows.push_back(row);
            best.push_back(&r);
        }
        SummaryRow& row = rows[it->second];
        ++row.runs;
        row.infeasible_runs += !r.feasible();
        row.mean_cost = row.mean_cost + r.cost;
        if (better(r.fitness, best[it->second]->fitness)) best[it->second] = &r;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        SummaryRow& row = rows[i];
        row.mean_cost = scale(row.mean_cost, 1.0 / static_cast<double>(row.runs));
        row.mean_fitness = defuzzify(row.mean_cost, eta);
        row.best_cost = best[i]->cost;
        row.best_fitness = defuzzify(row.best_cost, eta);
        row.best_feasible = best[i]->feasible();
    }
    return rows;
}

std::vector<VarianceRow> variance_table(const std::vector<RunRecord>& records, double eta) {
    // workflow -> algorithm -> fitness samples, in first-seen order.
    std::vector<std::string> workflows;
    std::map<std::string, std::size_t> sizes;
    std::map<std::string, std::vector<Algorithm>> algos;
    std::map<std::pair<std::string, Algorithm>, std::vector<double>> samples;
    for (const auto& r : records) {
        if (!sizes.count(r.workflow)) {
            workflows.push_back(r.workflow);
            sizes[r.workflow] = r.num_tasks;
        }
        auto& list = algos[r.workflow];
        if (std::find(list.begin(), list.end(), r.algorithm) == list.end()) list.push_back(r.algorithm);
        samples[{r.workflow, r.algorithm}].push_back(defuzzify(r.cost, eta));
    }
    std::vector<VarianceRow> rows;
    for (const auto& wname : workflows) {
        VarianceRow row;
        row.size = size_class(sizes[wname]);
        row.workflow = wname;
        row.algorithms = algos[wname];
        std::vector<double> vars;
        for (Algorithm a : row.algorithms) vars.push_back(sample_variance(samples[{wname, a}]));
        try {
            row.normalized = normalize_variances(vars);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::AllZero) throw;
            row.normalized.assign(vars.size(), 0.0);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string traces_csv(const std::vector<RunRecord>& records, const std::string& timestamp) {
    std::string out = header_line(timestamp);
    out += "workflow,algorithm,seed,iteration,best_cost,best_upper_time,feasible\n";
    for (const auto& r : records) {
        const std::string prefix = r.workflow + ',' + std::string(to_string(r.algorithm)) + ',' +
                                   std::to_string(r.seed) + ',';
        for (std::size_t t = 0; t < r.trace.size(); ++t) {
            const auto& p = r.trace[t];
            out += prefix + std::to_string(t + 1) + ',' + format_number(p.best_cost) + ',' +
                   format_number(p.best_upper_time) + ',' + (p.feasible_found ? "1" : "0") + '\n';
        }
    }
    return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows, const std::string& timestamp) {
    std::string out = header_line(timestamp);
    out +=
        "workflow,size,algorithm,runs,infeasible_runs,best_cost_l,best_cost_m,best_cost_u,best_fitness,"
        "best_mark,mean_cost_l,mean_cost_m,mean_cost_u,mean_fitness,mean_mark\n";
    for (const auto& r : rows) {
        out += r.workflow + ',' + r.size + ',' + std::string(to_string(r.algorithm)) + ',' +
               std::to_string(r.runs) + ',' + std::to_string(r.infeasible_runs) + ',' +
               format_number(r.best_cost.lower) + ',' + format_number(r.best_cost.modal) + ',' +
               format_number(r.best_cost.upper) + ',' + format_number(r.best_fitness) + ',' +
               (r.best_feasible ? "" : "*") + ',' + format_number(r.mean_cost.lower) + ',' +
               format_number(r.mean_cost.modal) + ',' + format_number(r.mean_cost.upper) + ',' +
               format_number(r.mean_fitness) + ',' + (r.infeasible_runs == 0 ? "" : "*") + '\n';
    }
    return out;
}

std::string variance_csv(const std::vector<VarianceRow>& rows, const std::string& timestamp) {
    std::string out = header_line(timestamp);
    // Columns follow the first row's algorithm order; rows missing an algorithm leave it blank.
    std::vector<Algorithm> columns;
    for (const auto& r : rows) {
        for (Algorithm a : r.algorithms) {
            if (std::find(columns.begin(), columns.end(), a) == columns.end()) columns.push_back(a);
        }
    }
    out += "size,workflow";
    for (Algorithm a : columns) out += ',' + std::string(to_string(a));
    out += '\n';
    for (const auto& r : rows) {
        out += r.size + ',' + r.workflow;
        for (Algorithm a : columns) {
            out += ',';
            auto it = std::find(r.algorithms.begin(), r.algorithms.end(), a);
            if (it != r.algorithms.end()) out += format_number(r.normalized[static_cast<std::size_t>(it - r.algorithms.begin())]);
        }
        out += '\n';
    }
    return out;
}

std::string results_json(const std::vector<RunRecord>& records, const std::vector<SummaryRow>& summary,
                         const std::vector<VarianceRow>& variances, const std::string& timestamp) {
    json j;
    if (!timestamp.empty()) j["generatedAt"] = timestamp;
    j["runs"] = json::array();
    for (const auto& r : records) {
        json trace = json::array();
        for (const auto& p : r.trace) trace.push_back({p.best_cost, p.best_upper_time, p.feasible_found});
        j["runs"].push_back({{"workflow", r.workflow},
                             {"tasks", r.num_tasks},
                             {"algorithm", to_string(r.algorithm)},
                             {"seed", r.seed},
                             {"repeat", r.repeat},
                             {"cost", tfn_json(r.cost)},
                             {"fitness", r.fitness.value},
                             {"feasible", r.fitness.feasible},
                             {"makespan", tfn_json(r.makespan)},
                             {"deadline", r.deadline},
                             {"wallSeconds", r.wall_seconds},
                             {"trace", trace}});
    }
    j["summary"] = json::array();
    for (const auto& s : summary) {
        j["summary"].push_back({{"workflow", s.workflow},
                                {"size", s.size},
                                {"algorithm", to_string(s.algorithm)},
                                {"runs", s.runs},
                                {"infeasibleRuns", s.infeasible_runs},
                                {"bestCost", tfn_json(s.best_cost)},
                                {"bestFitness", s.best_fitness},
                                {"bestFeasible", s.best_feasible},
                                {"meanCost", tfn_json(s.mean_cost)},
                                {"meanFitness", s.mean_fitness}});
    }
    j["variance"] = json::array();
    for (const auto& v : variances) {
        json cols = json::object();
        for (std::size_t i = 0; i < v.algorithms.size(); ++i) cols[std::string(to_string(v.algorithms[i]))] = v.normalized[i];
        j["variance"].push_back({{"size", v.size}, {"workflow", v.workflow}, {"normalized", cols}});
    }
    return j.dump(2);
}

OutputFiles emit_outputs(const std::vector<RunRecord>& records, const ExperimentConfig& cfg, double eta) {
    if (records.empty()) throw Error(ErrorKind::IoFailure, "no records to write");
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw Error(ErrorKind::IoFailure, "cannot create " + cfg.output_dir.string() + ": " + ec.message());

    const std::string stamp = utc_timestamp();
    const auto summary = summarize(records, eta);
    const auto variances = variance_table(records, eta);
    OutputFiles files{cfg.output_dir / "traces.csv", cfg.output_dir / "summary.csv", cfg.output_dir / "variance.csv",
                      cfg.output_dir / "results.json"};
    write_text(files.traces, traces_csv(records, stamp));
    write_text(files.summary, summary_csv(summary, stamp));
    write_text(files.variance, variance_csv(variances, stamp));
    write_text(files.json, results_json(records, summary, variances, stamp));
    return files;
}

}  // namespace fuzzysched
