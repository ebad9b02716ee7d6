#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "fuzzysched/bench.hpp"
#include "fuzzysched/deadline.hpp"
#include "fuzzysched/error.hpp"
#include "fuzzysched/optimizers.hpp"
#include "fuzzysched/platform.hpp"
#include "fuzzysched/simulator.hpp"
#include "fuzzysched/tfn.hpp"
#include "fuzzysched/workflow.hpp"

namespace py = pybind11;
using namespace fuzzysched;

namespace {

int ordering(std::weak_ordering o) { return o < 0 ? -1 : (o > 0 ? 1 : 0); }

py::tuple as_tuple(const Tfn& a) { return py::make_tuple(a.lower, a.modal, a.upper); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fuzzy workflow scheduling on cloud-edge platforms";

    static py::exception<Error> error_type(m, "FuzzySchedError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error_type, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
        }
    });

    py::class_<Tfn>(m, "Tfn")
        .def(py::init<>())
        .def(py::init([](double l, double mo, double u) { return Tfn{l, mo, u}; }), py::arg("lower"),
             py::arg("modal"), py::arg("upper"))
        .def_static("crisp", &Tfn::crisp)
        .def_readwrite("lower", &Tfn::lower)
        .def_readwrite("modal", &Tfn::modal)
        .def_readwrite("upper", &Tfn::upper)
        .def("valid", &Tfn::valid)
        .def("is_crisp", &Tfn::is_crisp)
        .def("as_tuple", &as_tuple)
        .def("__add__", [](const Tfn& a, const Tfn& b) { return a + b; })
        .def("__eq__", [](const Tfn& a, const Tfn& b) { return a == b; })
        .def("__repr__", [](const Tfn& a) {
            std::ostringstream os;
            os << "Tfn" << a;
            return os.str();
        });

    py::class_<FuzzificationParams>(m, "FuzzificationParams")
        .def(py::init([](double d1, double d2, double eta) { return FuzzificationParams{d1, d2, eta}; }),
             py::arg("delta1") = 0.85, py::arg("delta2") = 1.2, py::arg("eta") = 1.0)
        .def_static("zero_fuzz", &FuzzificationParams::zero_fuzz, py::arg("eta") = 1.0)
        .def_readwrite("delta1", &FuzzificationParams::delta1)
        .def_readwrite("delta2", &FuzzificationParams::delta2)
        .def_readwrite("eta", &FuzzificationParams::eta);

    m.def("scale", [](const Tfn& a, double k) { return fuzzysched::scale(a, k); });
    m.def("ceil_div", &ceil_div);
    m.def("mean", [](const Tfn& a) { return fuzzysched::mean(a); });
    m.def("stddev", &stddev);
    m.def("defuzzify", &defuzzify, py::arg("a"), py::arg("eta") = 1.0);
    m.def("compare", [](const Tfn& a, const Tfn& b) { return ordering(compare(a, b)); });
    m.def("fmax", [](const Tfn& a, const Tfn& b) { return fuzzysched::fmax(a, b); });
    m.def("fuzzify", [](double t, const FuzzificationParams& p, std::uint64_t seed) {
        Rng rng(seed);
        return fuzzify(t, p, rng);
    });

    py::class_<Task>(m, "Task")
        .def_readonly("id", &Task::id)
        .def_readonly("index", &Task::index)
        .def_readonly("reference_runtime", &Task::reference_runtime);
    py::class_<DataDependency>(m, "DataDependency")
        .def_readonly("source", &DataDependency::from)
        .def_readonly("target", &DataDependency::to)
        .def_readonly("size_bytes", &DataDependency::size_bytes);
    py::class_<Workflow>(m, "Workflow")
        .def_property_readonly("name", &Workflow::name)
        .def_property_readonly("tasks", &Workflow::tasks)
        .def_property_readonly("edges", &Workflow::edges)
        .def("__len__", &Workflow::size);
    m.def("load_workflow", &load_workflow);
    m.def("parse_dax", [](const std::string& doc) { return parse_dax(doc); });
    m.def("parse_fixture", [](const std::string& text) { return parse_fixture(text); });
    m.def("validate_workflow", [](const Workflow& w) { validate(w); });
    m.def("topological_order", &topological_order);

    py::class_<Platform>(m, "Platform")
        .def("__len__", &Platform::size)
        .def_property_readonly("server_ids", [](const Platform& p) {
            std::vector<std::string> ids;
            for (const auto& s : p.servers) ids.push_back(s.id);
            return ids;
        });
    py::class_<PlatformConfig>(m, "PlatformConfig")
        .def_readonly("platform", &PlatformConfig::platform)
        .def_readonly("fuzz", &PlatformConfig::fuzz)
        .def_readonly("quantum", &PlatformConfig::quantum);
    m.def("reference_platform_config", &reference_platform_config);
    m.def("load_platform_config", &load_platform_config);

    py::class_<ProblemInstance>(m, "ProblemInstance")
        .def(py::init<>())
        .def_property_readonly("num_tasks", &ProblemInstance::num_tasks)
        .def_property_readonly("num_servers", &ProblemInstance::num_servers)
        .def_property_readonly("deadline", &ProblemInstance::deadline)
        .def("processing", &ProblemInstance::processing)
        .def("with_deadline", &ProblemInstance::with_deadline);
    m.def(
        "build_problem_instance",
        [](const Workflow& w, const PlatformConfig& pc, double quantum, std::uint64_t seed) {
            return build_problem_instance(w, pc.platform, pc.fuzz, quantum, seed);
        },
        py::arg("workflow"), py::arg("platform"), py::arg("quantum") = 60.0, py::arg("seed") = 0);
    m.def("build_campaign_instance", &build_campaign_instance, py::arg("workflow"), py::arg("platform"),
          py::arg("quantum") = 60.0, py::arg("base_seed") = 1, py::arg("workflow_index") = 0, py::arg("repeat") = 0);

    m.def("heft_makespan", [](const Workflow& w, const PlatformConfig& pc) {
        return heft_makespan(build_crisp_instance(w, pc.platform));
    });
    m.def("deadline", [](const Workflow& w, const PlatformConfig& pc) {
        return deadline(build_crisp_instance(w, pc.platform));
    });

    py::class_<Particle>(m, "Particle")
        .def(py::init([](std::vector<double> order, std::vector<int> server) {
                 return Particle{std::move(order), std::move(server)};
             }),
             py::arg("order"), py::arg("server"))
        .def_readwrite("order", &Particle::order)
        .def_readwrite("server", &Particle::server);

    py::class_<TaskTiming>(m, "TaskTiming")
        .def_readonly("task", &TaskTiming::task)
        .def_readonly("server", &TaskTiming::server)
        .def_readonly("start", &TaskTiming::start)
        .def_readonly("end", &TaskTiming::end);
    py::class_<FuzzySchedule>(m, "FuzzySchedule")
        .def_readonly("tasks", &FuzzySchedule::tasks)
        .def_readonly("dispatch_order", &FuzzySchedule::dispatch_order)
        .def_readonly("makespan", &FuzzySchedule::makespan)
        .def_readonly("computation_cost", &FuzzySchedule::computation_cost)
        .def_readonly("transfer_cost", &FuzzySchedule::transfer_cost)
        .def_readonly("cost", &FuzzySchedule::cost)
        .def_readonly("feasible", &FuzzySchedule::feasible);
    py::class_<Fitness>(m, "Fitness")
        .def_readonly("feasible", &Fitness::feasible)
        .def_readonly("value", &Fitness::value)
        .def("__repr__", [](const Fitness& f) {
            return std::string("Fitness(") + (f.feasible ? "feasible" : "infeasible") + ", " +
                   format_number(f.value) + ")";
        });
    m.def("decode_schedule", &decode_schedule);
    m.def("evaluate_fitness", &evaluate_fitness);
    m.def("schedule_to_json", &schedule_to_json);

    py::class_<TracePoint>(m, "TracePoint")
        .def_readonly("best_cost", &TracePoint::best_cost)
        .def_readonly("best_upper_time", &TracePoint::best_upper_time)
        .def_readonly("feasible_found", &TracePoint::feasible_found);
    py::class_<OptimizerResult>(m, "OptimizerResult")
        .def_readonly("best", &OptimizerResult::best)
        .def_property_readonly("fitness", [](const OptimizerResult& r) { return r.best_eval.fitness; })
        .def_property_readonly("cost", [](const OptimizerResult& r) { return r.best_eval.cost; })
        .def_property_readonly("makespan", [](const OptimizerResult& r) { return r.best_eval.makespan; })
        .def_readonly("trace", &OptimizerResult::trace);
    m.def(
        "run_algorithm",
        [](const std::string& algo, const ProblemInstance& inst, std::size_t population, std::size_t iterations,
           std::uint64_t seed) {
            AdpsoParams params = AdpsoParams::defaults_for(inst.num_tasks());
            params.population = population;
            params.iterations = iterations;
            params.seed = seed;
            py::gil_scoped_release release;
            return run_algorithm(parse_algorithm(algo), inst, params);
        },
        py::arg("algorithm"), py::arg("instance"), py::arg("population") = 100, py::arg("iterations") = 1000,
        py::arg("seed") = 0);

    py::class_<SummaryRow>(m, "SummaryRow")
        .def_readonly("workflow", &SummaryRow::workflow)
        .def_readonly("size", &SummaryRow::size)
        .def_property_readonly("algorithm", [](const SummaryRow& r) { return std::string(to_string(r.algorithm)); })
        .def_readonly("runs", &SummaryRow::runs)
        .def_readonly("infeasible_runs", &SummaryRow::infeasible_runs)
        .def_readonly("best_cost", &SummaryRow::best_cost)
        .def_readonly("best_fitness", &SummaryRow::best_fitness)
        .def_readonly("mean_cost", &SummaryRow::mean_cost)
        .def_readonly("mean_fitness", &SummaryRow::mean_fitness);
    m.def(
        "run_experiment",
        [](const std::filesystem::path& config, bool write_outputs) {
            const ExperimentConfig cfg = load_experiment_config(config);
            const double eta = cfg.platform.empty() ? 1.0 : load_platform_config(cfg.platform).fuzz.eta;
            std::vector<RunRecord> records;
            {
                py::gil_scoped_release release;
                records = run_experiment(cfg);
            }
            if (write_outputs) emit_outputs(records, cfg, eta);
            return summarize(records, eta);
        },
        py::arg("config"), py::arg("write_outputs") = false);
}
