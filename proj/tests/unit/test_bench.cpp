#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fuzzysched/bench.hpp"
#include "fuzzysched/deadline.hpp"
#include "fuzzysched/error.hpp"
#include "helpers.hpp"

using namespace fuzzysched;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::IoFailure;
}

ExperimentConfig small_config(const fs::path& out) {
    ExperimentConfig cfg;
    cfg.workflows = {testutil::data_path("workflows/montage_25.xml")};
    cfg.algorithms = {Algorithm::Adpso, Algorithm::Rs};
    cfg.repeats = 3;
    cfg.population = 8;
    cfg.iterations = 12;
    cfg.output_dir = out;
    return cfg;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string without_stamp(const std::string& text) {
    return text.rfind("# generated_at=", 0) == 0 ? text.substr(text.find('\n') + 1) : text;
}

fs::path temp_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fuzzysched_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("sample variance") {
    const std::vector<double> a{1, 2, 3}, b{5, 5, 5, 5}, c{2, 4, 4, 4, 5, 5, 7, 9};
    CHECK(sample_variance(a) == Approx(1.0));
    CHECK(sample_variance(b) == 0.0);
    CHECK(sample_variance(c) == Approx(32.0 / 7.0));
    const std::vector<double> one{3};
    CHECK(kind_of([&] { sample_variance(one); }) == ErrorKind::TooFewSamples);
}

TEST_CASE("normalize variances") {
    const std::vector<double> a{3, 4}, b{1, 0, 0, 0}, c{2, 2}, z{0, 0};
    auto na = normalize_variances(a);
    CHECK(na[0] == Approx(0.6));
    CHECK(na[1] == Approx(0.8));
    CHECK(normalize_variances(b) == std::vector<double>{1, 0, 0, 0});
    auto nc = normalize_variances(c);
    CHECK(nc[0] == Approx(std::sqrt(0.5)));
    CHECK(nc[1] == Approx(std::sqrt(0.5)));
    CHECK(kind_of([&] { normalize_variances(z); }) == ErrorKind::AllZero);
}

TEST_CASE("size classes") {
    CHECK(size_class(30) == "Tiny");
    CHECK(size_class(50) == "Small");
    CHECK(size_class(100) == "Medium");
}

TEST_CASE("experiment config") {
    const auto cfg = parse_experiment_config(
        R"({"workflows":["w/a.xml","/abs/b.xml"],"platform":"p.json","algorithms":["adpso","GA"],
            "repeats":4,"baseSeed":9,"population":20,"iterations":30,"quantum":3600,"outputDir":"out"})",
        "/base");
    REQUIRE(cfg.workflows.size() == 2);
    CHECK(cfg.workflows[0] == fs::path("/base/w/a.xml"));
    CHECK(cfg.workflows[1] == fs::path("/abs/b.xml"));
    CHECK(cfg.platform == fs::path("/base/p.json"));
    CHECK(cfg.algorithms == std::vector<Algorithm>{Algorithm::Adpso, Algorithm::Ga});
    CHECK(cfg.repeats == 4);
    CHECK(cfg.base_seed == 9);
    CHECK(cfg.quantum == 3600);
    CHECK(cfg.output_dir == fs::path("/base/out"));

    CHECK(kind_of([] { parse_experiment_config(R"({"workflows":["a"],"repeats":1})"); }) == ErrorKind::ConfigInvalid);
    CHECK(kind_of([] { parse_experiment_config(R"({"workflows":[]})"); }) == ErrorKind::ConfigInvalid);
    CHECK(kind_of([] { parse_experiment_config(R"({"workflows":["a"],"algorithms":[]})"); }) ==
          ErrorKind::ConfigInvalid);
    CHECK(kind_of([] { parse_experiment_config(R"({"workflows":["a"],"algorithms":["sa"]})"); }) ==
          ErrorKind::ConfigInvalid);
    CHECK(kind_of([] { load_experiment_config("/nonexistent/cfg.json"); }) == ErrorKind::FileNotFound);

    const auto bundled = load_experiment_config(testutil::data_path("experiments/tiny.json"));
    CHECK(bundled.workflows.size() == 5);
    for (const auto& w : bundled.workflows) CHECK(fs::exists(w));
    CHECK(bundled.repeats == 10);
    CHECK(bundled.population == 100);
    CHECK(bundled.iterations == 300);
}

TEST_CASE("campaign instances share one realization per repeat") {
    const Workflow w = load_workflow(testutil::data_path("workflows/ligo_24.xml"));
    const PlatformConfig pc = reference_platform_config();
    const ProblemInstance a = build_campaign_instance(w, pc, 60, 1, 0, 0);
    const ProblemInstance b = build_campaign_instance(w, pc, 60, 1, 0, 0);
    const ProblemInstance c = build_campaign_instance(w, pc, 60, 1, 0, 1);
    CHECK(a.processing(3, 1) == b.processing(3, 1));
    CHECK_FALSE(a.processing(3, 1) == c.processing(3, 1));
    CHECK(a.deadline() == Approx(deadline(build_crisp_instance(w, pc.platform))));
    CHECK(a.deadline() == c.deadline());
}

TEST_CASE("run_experiment records and outputs") {
    const fs::path out = temp_dir("bench");
    const ExperimentConfig cfg = small_config(out);
    const auto records = run_experiment(cfg);
    REQUIRE(records.size() == 6);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        CHECK(r.algorithm == (i < 3 ? Algorithm::Adpso : Algorithm::Rs));
        CHECK(r.seed == cfg.base_seed + i % 3);
        CHECK(r.trace.size() == cfg.iterations);
        CHECK(r.feasible() == (r.makespan.upper <= r.deadline));
        if (r.feasible()) CHECK(r.fitness.value == Approx(defuzzify(r.cost, 1.0)));
        else CHECK(r.fitness.value == r.makespan.upper);
    }

    const auto again = run_experiment(cfg);
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(again[i].cost == records[i].cost);
        CHECK(again[i].fitness == records[i].fitness);
    }

    const auto summary = summarize(records);
    REQUIRE(summary.size() == 2);
    for (const auto& s : summary) {
        CHECK(s.runs == 3);
        CHECK(s.size == "Tiny");
        CHECK(s.best_fitness == Approx(defuzzify(s.best_cost, 1.0)));
        CHECK(s.mean_fitness == Approx(defuzzify(s.mean_cost, 1.0)));
    }
    const auto variances = variance_table(records);
    REQUIRE(variances.size() == 1);
    double ss = 0.0;
    for (double v : variances[0].normalized) ss += v * v;
    CHECK(ss == Approx(1.0));

    const OutputFiles files = emit_outputs(records, cfg);
    for (const auto& f : {files.traces, files.summary, files.variance, files.json}) CHECK(fs::exists(f));

    std::istringstream traces(without_stamp(slurp(files.traces)));
    std::string line;
    std::getline(traces, line);
    CHECK(line == "workflow,algorithm,seed,iteration,best_cost,best_upper_time,feasible");
    std::size_t rows = 0;
    while (std::getline(traces, line)) ++rows;
    CHECK(rows == 6 * cfg.iterations);

    const auto j = nlohmann::json::parse(slurp(files.json));
    CHECK(j["runs"].size() == 6);
    CHECK(j["summary"].size() == 2);
    CHECK(j["variance"].size() == 1);

    emit_outputs(again, cfg);
    const OutputFiles second = emit_outputs(run_experiment(cfg), cfg);
    CHECK(without_stamp(slurp(second.traces)) == without_stamp(slurp(files.traces)));
    fs::remove_all(out);
}

TEST_CASE("summary marks infeasible rows") {
    RunRecord feasible_run;
    feasible_run.workflow = "w";
    feasible_run.num_tasks = 30;
    feasible_run.algorithm = Algorithm::Ga;
    feasible_run.cost = {28.41, 29.84, 32.79};
    feasible_run.fitness = {true, defuzzify(feasible_run.cost, 1.0)};
    RunRecord late = feasible_run;
    late.fitness = {false, 9000};
    late.cost = {10, 11, 12};

    const auto rows = summarize({feasible_run, late});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].infeasible_runs == 1);
    CHECK(rows[0].best_feasible);
    CHECK(rows[0].best_fitness == Approx(30.93).epsilon(0.0005));
    const std::string csv = summary_csv(rows);
    CHECK(csv.find("w,Tiny,GA,2,1,28.41,29.84,32.79,") != std::string::npos);
    CHECK(csv.back() == '\n');
    CHECK(csv.substr(csv.size() - 3) == ",*\n");

    const auto only_late = summarize({late, late});
    CHECK_FALSE(only_late[0].best_feasible);
    CHECK(summary_csv(only_late).find(",*,") != std::string::npos);
}

TEST_CASE("variance table handles zero spread and algorithm order") {
    RunRecord r;
    r.workflow = "w";
    r.num_tasks = 60;
    r.cost = Tfn::crisp(2);
    std::vector<RunRecord> recs;
    for (Algorithm a : {Algorithm::Ga, Algorithm::Rs}) {
        for (int i = 0; i < 3; ++i) {
            r.algorithm = a;
            r.cost = Tfn::crisp(a == Algorithm::Ga ? 2.0 : 1.0 + i);
            recs.push_back(r);
        }
    }
    auto rows = variance_table(recs);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].size == "Small");
    CHECK(rows[0].normalized == std::vector<double>{0.0, 1.0});

    std::reverse(recs.begin(), recs.end());
    rows = variance_table(recs);
    CHECK(rows[0].algorithms == std::vector<Algorithm>{Algorithm::Rs, Algorithm::Ga});
    CHECK(rows[0].normalized == std::vector<double>{1.0, 0.0});

    for (auto& rec : recs) rec.cost = Tfn::crisp(5);
    CHECK(variance_table(recs)[0].normalized == std::vector<double>{0.0, 0.0});
    CHECK(variance_csv(variance_table(recs)) == "size,workflow,RS,GA\nSmall,w,0,0\n");
}

TEST_CASE("format_number") {
    CHECK(format_number(30.9312345) == "30.9312");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(1234567.0) == "1.23457e+06");
}

TEST_CASE("emit_outputs errors") {
    ExperimentConfig cfg = small_config(temp_dir("empty"));
    CHECK(kind_of([&] { emit_outputs({}, cfg); }) == ErrorKind::IoFailure);
}
