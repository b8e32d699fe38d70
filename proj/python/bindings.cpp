#include "forgetting/bounds.hpp"
#include "forgetting/checks.hpp"
#include "forgetting/constructions.hpp"
#include "forgetting/errors.hpp"
#include "forgetting/experiment.hpp"
#include "forgetting/learner.hpp"
#include "forgetting/metrics.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace forgetting;

namespace {

// Python-facing ordering: task indices are 1-based, as in config files.
Ordering make_ordering(const std::string& kind, std::size_t task_count,
                       std::optional<std::uint64_t> seed,
                       std::optional<std::vector<std::size_t>> sequence) {
  if (kind == "identity") return Ordering::identity(task_count);
  if (kind == "cyclic") return Ordering::cyclic(task_count);
  if (kind == "random") {
    if (!seed) throw InvalidInput("random ordering needs a seed");
    return Ordering::random(task_count, *seed);
  }
  if (kind == "explicit") {
    if (!sequence) throw InvalidInput("explicit ordering needs a sequence");
    std::vector<std::size_t> zero_based;
    for (const std::size_t m : *sequence) {
      if (m < 1) throw InvalidInput("explicit ordering entries are 1-based");
      zero_based.push_back(m - 1);
    }
    return Ordering::explicit_sequence(task_count, std::move(zero_based));
  }
  throw InvalidInput("unknown ordering kind " + kind);
}

std::vector<std::size_t> one_based(const std::vector<std::size_t>& seq) {
  std::vector<std::size_t> out(seq);
  for (auto& m : out) ++m;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Forgetting dynamics of sequentially fitted linear regression tasks";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<Infeasible>(m, "Infeasible", PyExc_RuntimeError);
  py::register_exception<ValidationFailure>(m, "ValidationFailure", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  // linalg
  m.def("pseudo_inverse", py::overload_cast<const Matrix&>(&pseudo_inverse), py::arg("m"));
  m.def("null_projection", py::overload_cast<const Matrix&>(&null_projection), py::arg("m"));
  m.def("principal_angles", &principal_angles, py::arg("a"), py::arg("b"));
  m.def("friedrichs_angle", &friedrichs_angle, py::arg("angles"));
  m.def(
      "svd",
      [](const Matrix& a) {
        const SvdResult s = svd(a);
        return py::make_tuple(s.left_basis, s.singular_values, s.right_basis, s.numerical_rank);
      },
      py::arg("m"), "Returns (U, s, V, numerical_rank).");

  // tasks
  py::class_<Task>(m, "Task")
      .def(py::init<Matrix, Vector>(), py::arg("data"), py::arg("labels"))
      .def_property_readonly("data", &Task::data)
      .def_property_readonly("labels", &Task::labels)
      .def_property_readonly("projection", &Task::projection)
      .def_property_readonly("rank", &Task::rank)
      .def("loss", &Task::loss, py::arg("w"));

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("max_spectral_norm", &ValidationReport::max_spectral_norm)
      .def_readonly("realizable", &ValidationReport::realizable)
      .def_readonly("solution_norm", &ValidationReport::solution_norm)
      .def_readonly("per_task_residuals", &ValidationReport::per_task_residuals)
      .def_readonly("rank_deficient", &ValidationReport::rank_deficient)
      .def_readonly("passed", &ValidationReport::passed);

  py::class_<TaskCollection, std::shared_ptr<TaskCollection>>(m, "TaskCollection")
      .def(py::init([](std::vector<Task> tasks) {
             return std::const_pointer_cast<TaskCollection>(TaskCollection::create(std::move(tasks)));
           }),
           py::arg("tasks"))
      .def_static(
          "from_solution",
          [](const std::vector<Matrix>& matrices, const Vector& w_star) {
            return std::const_pointer_cast<TaskCollection>(collection_from_solution(matrices, w_star));
          },
          py::arg("matrices"), py::arg("w_star"))
      .def_property_readonly("tasks", &TaskCollection::tasks)
      .def_property_readonly("dimension", &TaskCollection::dimension)
      .def_property_readonly("offline_solution", &TaskCollection::offline_solution)
      .def_property_readonly("validation", &TaskCollection::validation)
      .def("__len__", &TaskCollection::size)
      .def("to_json", [](const TaskCollection& s) { return collection_to_json(s).dump(); });

  m.def("min_norm_solution", &min_norm_solution, py::arg("collection"));
  m.def("labels_from_solution", &labels_from_solution, py::arg("matrices"), py::arg("w_star"));

  // learner
  m.def("fit_step", &fit_step, py::arg("w"), py::arg("task"));
  m.def(
      "run",
      [](const std::shared_ptr<TaskCollection>& s, std::size_t k, const std::string& ordering,
         std::optional<std::uint64_t> seed, std::optional<std::vector<std::size_t>> sequence) {
        const Trajectory tr = run(s, make_ordering(ordering, s->size(), seed, sequence), k);
        py::dict out;
        out["iterates"] = tr.iterates();
        out["sequence"] = one_based(tr.sequence());
        out["full_average"] = k > 0 ? py::cast(average_iterates(tr, AverageKind::full)) : py::none();
        out["end_of_cycle_average"] = k > 0 && k % s->size() == 0
                                          ? py::cast(average_iterates(tr, AverageKind::end_of_cycle))
                                          : py::none();
        if (k > 0 && s->offline_solution()) {
          const ForgettingRecord r = forgetting::forgetting(tr);
          out["forgetting"] = r.forgetting;
          out["residual_bound"] = r.residual_bound;
          out["distance_sq"] = r.distance_sq;
        }
        return out;
      },
      py::arg("collection"), py::arg("k"), py::arg("ordering") = "cyclic",
      py::arg("seed") = py::none(), py::arg("sequence") = py::none(),
      "Fits k tasks from w_0 = 0. Returned sequence is 1-based.");
  m.def(
      "run_projected",
      [](const Vector& w_star, const std::vector<Matrix>& projections,
         const std::vector<std::size_t>& sequence) {
        std::vector<std::size_t> zero_based;
        for (const std::size_t t : sequence) zero_based.push_back(t - 1);
        return run_projected(w_star, projections, zero_based);
      },
      py::arg("w_star"), py::arg("projections"), py::arg("sequence"));

  // metrics
  m.def(
      "forgetting_at",
      [](const Vector& w, const std::vector<std::size_t>& sequence, const TaskCollection& s) {
        std::vector<std::size_t> zero_based;
        for (const std::size_t t : sequence) zero_based.push_back(t - 1);
        return forgetting_at(w, zero_based, s);
      },
      py::arg("w"), py::arg("sequence"), py::arg("collection"));
  m.def(
      "expected_forgetting",
      [](const std::shared_ptr<TaskCollection>& s, std::size_t k, std::size_t trials,
         std::uint64_t seed_base) {
        const auto e = expected_forgetting(s, k, trials, seed_base);
        return py::make_tuple(e.mean, e.std_dev);
      },
      py::arg("collection"), py::arg("k"), py::arg("trials"), py::arg("seed_base") = 0,
      "Monte Carlo (mean, std) of forgetting under the uniform random ordering.");

  // constructions
  m.def(
      "planar_collection",
      [](const std::vector<double>& angles, Eigen::Index dimension, double solution_norm,
         Eigen::Index shared_data_dims) {
        PlanarSpec spec;
        spec.dimension = dimension;
        spec.solution_angles = angles;
        spec.solution_norm = solution_norm;
        spec.shared_data_dims = shared_data_dims;
        return std::const_pointer_cast<TaskCollection>(planar_collection(spec));
      },
      py::arg("angles"), py::arg("dimension") = 2, py::arg("solution_norm") = 1.0,
      py::arg("shared_data_dims") = 0);
  m.def(
      "two_task_collection",
      [](double theta) { return std::const_pointer_cast<TaskCollection>(two_task_collection(theta)); },
      py::arg("theta"));
  m.def(
      "adversarial_identity",
      [](double epsilon) {
        return std::const_pointer_cast<TaskCollection>(adversarial_identity(epsilon).collection);
      },
      py::arg("epsilon"), "Tasks to be visited in identity order.");
  m.def(
      "back_and_forth",
      [](std::size_t task_count, std::size_t horizon) {
        return std::const_pointer_cast<TaskCollection>(back_and_forth(task_count, horizon).collection);
      },
      py::arg("task_count"), py::arg("horizon"));
  m.def("fig5_collection",
        [] { return std::const_pointer_cast<TaskCollection>(fig5_collection()); });

  // bounds
  m.def("two_task_forgetting_bound", &two_task_forgetting_bound, py::arg("k"), py::arg("angles"));
  m.def(
      "two_task_worst_case",
      [](std::size_t k) {
        const WorstCase w = two_task_worst_case(k);
        return py::make_tuple(w.value, w.argmax_angle);
      },
      py::arg("k"));
  m.def(
      "cyclic_bounds",
      [](std::size_t t, std::size_t k, std::size_t d, std::size_t r_max) {
        const CyclicBounds b = cyclic_bounds(t, k, d, r_max);
        return py::make_tuple(b.lower, b.upper);
      },
      py::arg("task_count"), py::arg("k"), py::arg("dimension"), py::arg("max_rank"));
  m.def("random_expected_bound", &random_expected_bound, py::arg("k"), py::arg("dimension"),
        py::arg("average_rank"));
  m.def("distance_bound", &distance_bound, py::arg("k"), py::arg("friedrichs"),
        py::arg("w_star_norm"));
  m.def("cyclic_symmetric_upper", &cyclic_symmetric_upper, py::arg("task_count"), py::arg("k"));
  m.def(
      "average_iterate_bound",
      [](std::size_t t, std::size_t k, const std::string& kind) {
        if (kind != "cyclic" && kind != "random") {
          throw InvalidInput("average_iterate_bound: kind must be \"cyclic\" or \"random\"");
        }
        return average_iterate_bound(
            t, k, kind == "cyclic" ? AverageBoundKind::cyclic : AverageBoundKind::random);
      },
      py::arg("task_count"), py::arg("k"), py::arg("kind") = "cyclic");

  // experiments
  m.def(
      "simulate_csv",
      [](const std::string& config_json) {
        nlohmann::ordered_json doc;
        try {
          doc = nlohmann::ordered_json::parse(config_json);
        } catch (const nlohmann::json::parse_error& e) {
          throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        const auto config = parse_config(doc);
        std::ostringstream out;
        write_csv(out, simulate(config));
        return out.str();
      },
      py::arg("config_json"), "Runs an experiment config (JSON text) and returns the CSV.");
  m.def(
      "figure_csv",
      [](const std::string& name) {
        std::ostringstream out;
        write_figure(name, out);
        return out.str();
      },
      py::arg("name"));
  m.def(
      "run_checks",
      [](const std::string& suite) {
        if (suite != "quick" && suite != "all") throw InvalidInput("suite must be quick or all");
        py::list out;
        for (const CheckResult& r :
             run_checks(checks(suite == "all" ? CheckSuite::all : CheckSuite::quick))) {
          py::dict d;
          d["id"] = r.id;
          d["title"] = r.title;
          d["passed"] = r.passed;
          d["measured"] = r.measured;
          d["limit"] = r.limit;
          d["detail"] = r.detail;
          d["seconds"] = r.seconds;
          out.append(d);
        }
        return out;
      },
      py::arg("suite") = "quick");
}
