#include "forgetting/experiment.hpp"

#include "forgetting/bounds.hpp"
#include "forgetting/errors.hpp"
#include "forgetting/metrics.hpp"
#include "forgetting/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace forgetting {

using json = nlohmann::ordered_json;

namespace {

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : it->template get<T>();
}

std::size_t positive_count(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(std::string("missing \"") + key + "\"");
  if (!it->is_number_integer() || it->get<long long>() < 1) {
    throw ConfigError(std::string("\"") + key + "\" must be a positive integer");
  }
  return it->get<std::size_t>();
}

OrderingKind parse_kind(const std::string& name) {
  if (name == "identity") return OrderingKind::identity;
  if (name == "cyclic") return OrderingKind::cyclic;
  if (name == "random") return OrderingKind::random;
  if (name == "explicit") return OrderingKind::explicit_sequence;
  throw ConfigError("unknown ordering kind \"" + name + "\"");
}

OrderingSpec parse_ordering(const json& o) {
  if (!o.is_object()) throw ConfigError("\"ordering\" must be an object");
  OrderingSpec spec;
  spec.kind = parse_kind(o.at("kind").get<std::string>());
  if (o.contains("seed")) spec.seed = o.at("seed").get<std::uint64_t>();
  if (spec.kind == OrderingKind::explicit_sequence) {
    if (!o.contains("sequence") || !o.at("sequence").is_array()) {
      throw ConfigError("explicit ordering needs a \"sequence\" array");
    }
    for (const auto& v : o.at("sequence")) {
      const long long m = v.get<long long>();
      if (m < 1) throw ConfigError("explicit ordering entries are 1-based task indices");
      spec.sequence.push_back(static_cast<std::size_t>(m - 1));
    }
  }
  return spec;
}

Ordering make_ordering(const OrderingSpec& spec, std::size_t task_count, std::uint64_t seed_base) {
  switch (spec.kind) {
    case OrderingKind::identity: return Ordering::identity(task_count);
    case OrderingKind::cyclic: return Ordering::cyclic(task_count);
    case OrderingKind::random: return Ordering::random(task_count, spec.seed.value_or(seed_base));
    case OrderingKind::explicit_sequence: return Ordering::explicit_sequence(task_count, spec.sequence);
  }
  throw ConfigError("unknown ordering kind");
}

// Non-zero principal angles between the row spaces of a two-task collection.
Vector two_task_angles(const TaskCollection& s) {
  const Vector all = principal_angles(s.task(0).data().transpose(), s.task(1).data().transpose());
  std::vector<double> kept;
  for (const double a : all) {
    if (a > kAngleZeroTolerance) kept.push_back(a);
  }
  return Eigen::Map<const Vector>(kept.data(), static_cast<Eigen::Index>(kept.size()));
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------- config ---

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  try {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    if (get_or<std::string>(doc, "schema", "") != kConfigSchema) {
      throw ConfigError(std::string("config \"schema\" must be \"") + kConfigSchema + "\"");
    }
    ExperimentConfig c;
    c.experiment_name = get_or<std::string>(doc, "experiment_name", "");
    c.horizon = positive_count(doc, "horizon");

    const json& src = doc.at("collection");
    if (!src.is_object()) throw ConfigError("\"collection\" must be an object");
    if (src.contains("file")) {
      std::filesystem::path file = src.at("file").get<std::string>();
      c.collection.file = file.is_relative() && !base_dir.empty() ? base_dir / file : file;
    } else if (src.contains("construction")) {
      c.collection.construction = src.at("construction").get<std::string>();
      c.collection.parameters = src;
      c.collection.parameters.erase("construction");
      if (c.collection.construction == "back_and_forth" && !src.contains("horizon")) {
        c.collection.parameters["horizon"] = c.horizon;
      }
    } else {
      throw ConfigError("\"collection\" needs either \"file\" or \"construction\"");
    }

    if (doc.contains("ordering")) c.ordering = parse_ordering(doc.at("ordering"));
    if (doc.contains("record_every")) c.record_every = positive_count(doc, "record_every");
    if (doc.contains("trials")) c.trials = positive_count(doc, "trials");
    c.seed_base = get_or<std::uint64_t>(doc, "seed_base", 0);
    if (doc.contains("bounds_overlay")) {
      for (const auto& v : doc.at("bounds_overlay")) {
        const auto name = v.get<std::string>();
        const auto& known = overlay_names();
        if (std::find(known.begin(), known.end(), name) == known.end()) {
          throw ConfigError("unknown bound overlay \"" + name + "\"");
        }
        c.bounds_overlay.push_back(name);
      }
    }
    c.output_path = get_or<std::string>(doc, "output_path", "");
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

// ------------------------------------------------------------ collections ---

json collection_to_json(const TaskCollection& s) {
  json doc;
  doc["schema"] = kCollectionSchema;
  doc["dimension"] = s.dimension();
  json tasks = json::array();
  for (const Task& t : s.tasks()) {
    json entry;
    entry["rows"] = t.sample_count();
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(t.data().size()));
    for (Eigen::Index i = 0; i < t.data().rows(); ++i) {
      for (Eigen::Index j = 0; j < t.data().cols(); ++j) data.push_back(t.data()(i, j));
    }
    entry["data"] = data;
    entry["labels"] = std::vector<double>(t.labels().begin(), t.labels().end());
    tasks.push_back(std::move(entry));
  }
  doc["tasks"] = std::move(tasks);
  if (s.offline_solution()) {
    doc["w_star"] = std::vector<double>(s.offline_solution()->begin(), s.offline_solution()->end());
  }
  return doc;
}

CollectionPtr collection_from_json(const json& doc) {
  try {
    if (get_or<std::string>(doc, "schema", "") != kCollectionSchema) {
      throw ConfigError(std::string("collection \"schema\" must be \"") + kCollectionSchema + "\"");
    }
    const auto d = doc.at("dimension").get<Eigen::Index>();
    if (d < 1) throw ConfigError("collection dimension must be positive");
    std::vector<Task> tasks;
    for (const auto& entry : doc.at("tasks")) {
      const auto rows = entry.at("rows").get<Eigen::Index>();
      const auto data = entry.at("data").get<std::vector<double>>();
      const auto labels = entry.at("labels").get<std::vector<double>>();
      if (rows < 1 || static_cast<Eigen::Index>(data.size()) != rows * d) {
        throw ConfigError("collection task data must hold rows x dimension entries");
      }
      Matrix x(rows, d);
      for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = data[static_cast<std::size_t>(i * d + j)];
      }
      Vector y = Eigen::Map<const Vector>(labels.data(), static_cast<Eigen::Index>(labels.size()));
      tasks.emplace_back(std::move(x), std::move(y));
    }
    return TaskCollection::create(std::move(tasks));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("collection: ") + e.what());
  }
}

void save_collection(const TaskCollection& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << collection_to_json(s).dump(2) << "\n";
}

CollectionPtr load_collection(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open collection " + path.string());
  try {
    return collection_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

OrderedCollection build_construction(const std::string& name, const json& p) {
  try {
    if (name == "two_task") {
      auto s = two_task_collection(p.at("theta").get<double>());
      return {s, Ordering::cyclic(2), std::nullopt};
    }
    if (name == "planar") {
      PlanarSpec spec;
      spec.dimension = get_or<Eigen::Index>(p, "dimension", 2);
      spec.solution_angles = p.at("angles").get<std::vector<double>>();
      spec.solution_norm = get_or<double>(p, "solution_norm", 1.0);
      spec.shared_data_dims = get_or<Eigen::Index>(p, "shared_data_dims", 0);
      if (p.contains("solution_angle")) spec.solution_angle = p.at("solution_angle").get<double>();
      auto s = planar_collection(spec);
      return {s, Ordering::cyclic(s->size()), std::nullopt};
    }
    if (name == "adversarial_identity") return adversarial_identity(p.at("epsilon").get<double>());
    if (name == "back_and_forth") {
      return back_and_forth(p.at("tasks").get<std::size_t>(), p.at("horizon").get<std::size_t>());
    }
    if (name == "fig5") {
      auto s = fig5_collection();
      return {s, Ordering::cyclic(s->size()), kFig5TaskCount * kFig5TaskCount};
    }
  } catch (const json::exception& e) {
    throw ConfigError("construction \"" + name + "\": " + e.what());
  } catch (const InvalidInput& e) {
    throw ConfigError("construction \"" + name + "\": " + e.what());
  }
  throw ConfigError("unknown construction \"" + name + "\"");
}

// --------------------------------------------------------------- overlays ---

const std::vector<std::string>& overlay_names() {
  static const std::vector<std::string> names = {
      "two_task",     "two_task_worst_case",    "distance",     "cyclic_lower",
      "cyclic_upper", "cyclic_symmetric_upper", "random_upper", "average_cyclic",
      "average_random_surrogate"};
  return names;
}

std::optional<double> overlay_value(const std::string& name, const TaskCollection& s,
                                    OrderingKind kind, std::size_t k,
                                    std::optional<std::size_t> tuned_horizon) {
  const std::size_t t = s.size();
  const auto d = static_cast<std::size_t>(s.dimension());
  const bool cyclic = kind == OrderingKind::cyclic;
  const bool two_task_regime = cyclic && t == 2 && k >= 2 && k % 2 == 0;
  const bool many_task_regime = cyclic && t >= 3 && k % t == 0 && k >= t * t &&
                                static_cast<std::size_t>(s.max_rank()) < d;

  if (name == "two_task" && two_task_regime) {
    const Vector angles = two_task_angles(s);
    return angles.size() == 0 ? 0.0 : two_task_forgetting_bound(k, angles);
  }
  if (name == "two_task_worst_case" && two_task_regime) return two_task_worst_case(k).value;
  if (name == "distance" && two_task_regime && s.offline_solution()) {
    const auto friedrichs = friedrichs_angle(two_task_angles(s));
    return friedrichs ? distance_bound(k, *friedrichs, s.offline_solution()->norm()) : 0.0;
  }
  if (name == "cyclic_lower" && many_task_regime && tuned_horizon == k) {
    return cyclic_bounds(t, k, d, static_cast<std::size_t>(s.max_rank())).lower;
  }
  if (name == "cyclic_upper" && many_task_regime) {
    return cyclic_bounds(t, k, d, static_cast<std::size_t>(s.max_rank())).upper;
  }
  if (name == "cyclic_symmetric_upper" && many_task_regime) return cyclic_symmetric_upper(t, k);
  if (name == "random_upper" && kind == OrderingKind::random && s.average_rank() < double(d)) {
    return random_expected_bound(k, d, s.average_rank());
  }
  if (name == "average_cyclic" && cyclic && k % t == 0) {
    return average_iterate_bound(t, k, AverageBoundKind::cyclic);
  }
  if (name == "average_random_surrogate" && kind == OrderingKind::random) {
    return average_iterate_bound(t, k, AverageBoundKind::random);
  }
  return std::nullopt;
}

// ------------------------------------------------------------- simulation ---

SimulationResult simulate(const ExperimentConfig& config) {
  OrderedCollection built = config.collection.file
                                ? OrderedCollection{load_collection(*config.collection.file),
                                                    Ordering::cyclic(1), std::nullopt}
                                : build_construction(config.collection.construction,
                                                     config.collection.parameters);
  const CollectionPtr& s = built.collection;
  if (config.collection.file) built.ordering = Ordering::cyclic(s->size());

  const ValidationReport& report = s->validation();
  if (!report.realizable) {
    throw Infeasible("collection is not jointly realizable", report.per_task_residuals.maxCoeff());
  }
  if (!report.passed) {
    std::ostringstream why;
    why << "collection fails validation: max spectral norm " << report.max_spectral_norm
        << ", solution norm " << report.solution_norm
        << (report.rank_deficient ? "" : ", a task has full rank");
    throw ValidationFailure(why.str());
  }

  Ordering ordering = built.ordering;
  try {
    if (config.ordering) ordering = make_ordering(*config.ordering, s->size(), config.seed_base);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  const OrderingKind kind = ordering.kind();

  const std::size_t stride =
      config.record_every.value_or(kind == OrderingKind::cyclic ? s->size() : 1);
  std::vector<std::size_t> record;
  for (std::size_t k = stride; k <= config.horizon; k += stride) record.push_back(k);
  if (record.empty() || record.back() != config.horizon) record.push_back(config.horizon);

  if (kind == OrderingKind::identity && config.horizon > s->size()) {
    throw ConfigError("identity ordering: horizon exceeds the number of tasks");
  }
  if (kind == OrderingKind::explicit_sequence && config.horizon > ordering.sequence().size()) {
    throw ConfigError("explicit ordering: horizon exceeds the sequence length");
  }

  SimulationResult result;
  result.overlay_columns = config.bounds_overlay;
  if (kind == OrderingKind::random) {
    const auto curve = expected_forgetting_curve(s, record, config.trials,
                                                 ordering.seed().value_or(config.seed_base));
    for (const CurveSummary& c : curve) {
      ResultRow row;
      row.iteration = c.iteration;
      row.forgetting = c.forgetting_mean;
      row.forgetting_std = c.forgetting_std;
      row.distance_sq = c.distance_sq_mean;
      row.residual_bound = c.residual_bound_mean;
      result.rows.push_back(std::move(row));
    }
  } else {
    for (const CurvePoint& p : forgetting_curve(s, ordering, record)) {
      ResultRow row;
      row.iteration = p.iteration;
      row.forgetting = p.forgetting;
      row.distance_sq = p.distance_sq;
      row.residual_bound = p.residual_bound;
      result.rows.push_back(std::move(row));
    }
  }
  for (ResultRow& row : result.rows) {
    for (const std::string& name : config.bounds_overlay) {
      row.analytic_bounds.push_back(overlay_value(name, *s, kind, row.iteration, built.tuned_horizon));
    }
  }
  return result;
}

void write_csv_header(std::ostream& out, const std::vector<std::string>& prefix_columns,
                      const std::vector<std::string>& overlay_columns) {
  for (const auto& c : prefix_columns) out << c << ',';
  out << "iteration,forgetting,forgetting_std,distance_sq,residual_bound";
  for (const auto& c : overlay_columns) out << ',' << c;
  out << '\n';
}

void write_csv_rows(std::ostream& out, const std::vector<std::string>& prefix_values,
                    const SimulationResult& result) {
  for (const ResultRow& row : result.rows) {
    for (const auto& v : prefix_values) out << v << ',';
    out << row.iteration << ',' << format_number(row.forgetting) << ','
        << (row.forgetting_std ? format_number(*row.forgetting_std) : "") << ','
        << format_number(row.distance_sq) << ',' << format_number(row.residual_bound);
    for (const auto& b : row.analytic_bounds) out << ',' << (b ? format_number(*b) : "");
    out << '\n';
  }
}

void write_csv(std::ostream& out, const SimulationResult& result) {
  write_csv_header(out, {}, result.overlay_columns);
  write_csv_rows(out, {}, result);
}

// ---------------------------------------------------------------- figures ---

namespace {

void write_fig3a(std::ostream& out) {
  constexpr int kAngles = 1000;
  out << "theta,k,forgetting_factor\n";
  for (std::size_t k = 2; k <= 40; k += 2) {
    for (int j = 1; j <= kAngles; ++j) {
      const double theta = (std::numbers::pi / 2) * j / kAngles;
      const double c2 = std::cos(theta) * std::cos(theta);
      out << format_number(theta) << ',' << k << ','
          << format_number(std::pow(c2, static_cast<double>(k - 1)) * (1.0 - c2)) << '\n';
    }
  }
}

void write_fig3b(std::ostream& out) {
  constexpr double kPi = std::numbers::pi;
  const std::vector<double> thetas = {kPi / 24, kPi / 12, kPi / 8, kPi / 6, kPi / 4, kPi / 3};
  std::vector<std::size_t> record;
  for (std::size_t k = 2; k <= 200; k += 2) record.push_back(k);

  std::vector<std::vector<CurvePoint>> curves(thetas.size());
  parallel_for(thetas.size(), [&](std::size_t i) {
    curves[i] = forgetting_curve(two_task_collection(thetas[i]), Ordering::cyclic(2), record);
  });

  out << "iteration";
  for (const double theta : thetas) {
    char name[32];
    std::snprintf(name, sizeof name, ",theta_%.4f", theta);
    out << name;
  }
  out << ",worst_case\n";
  for (std::size_t j = 0; j < record.size(); ++j) {
    out << record[j];
    for (const auto& curve : curves) out << ',' << format_number(curve[j].forgetting);
    out << ',' << format_number(two_task_worst_case(record[j]).value) << '\n';
  }
}

void write_fig5(std::ostream& out) {
  const auto s = fig5_collection();
  const std::size_t t = s->size();
  const std::size_t horizon = 8 * t * t;
  const std::size_t stride = t / 8;
  std::vector<std::size_t> record;
  for (std::size_t k = stride; k <= horizon; k += stride) record.push_back(k);

  const auto cyclic = forgetting_curve(s, Ordering::cyclic(t), record);
  const auto random = expected_forgetting_curve(s, record, 5, 0);

  const std::vector<std::string> overlays = {"cyclic_lower", "cyclic_upper",
                                             "cyclic_symmetric_upper"};
  out << "iteration,cyclic_forgetting,random_mean,random_std";
  for (const auto& o : overlays) out << ',' << o;
  out << ",random_upper\n";
  for (std::size_t j = 0; j < record.size(); ++j) {
    const std::size_t k = record[j];
    out << k << ',' << format_number(cyclic[j].forgetting) << ','
        << format_number(random[j].forgetting_mean) << ','
        << format_number(random[j].forgetting_std);
    for (const auto& o : overlays) {
      const auto v = overlay_value(o, *s, OrderingKind::cyclic, k, t * t);
      out << ',' << (v ? format_number(*v) : "");
    }
    const auto r = overlay_value("random_upper", *s, OrderingKind::random, k);
    out << ',' << (r ? format_number(*r) : "") << '\n';
  }
}

}  // namespace

void write_figure(const std::string& name, std::ostream& out) {
  if (name == "fig3a") return write_fig3a(out);
  if (name == "fig3b") return write_fig3b(out);
  if (name == "fig5") return write_fig5(out);
  throw ConfigError("unknown figure \"" + name + "\" (expected fig3a, fig3b or fig5)");
}

// ------------------------------------------------------------------ sweep ---

namespace {

json::json_pointer dotted_pointer(const std::string& path) {
  std::string pointer = "/" + path;
  std::replace(pointer.begin(), pointer.end(), '.', '/');
  return json::json_pointer(pointer);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"") == std::string::npos) return text;
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

void run_sweep(const json& doc, const std::filesystem::path& base_dir, std::ostream& out) {
  if (!doc.is_object() || !doc.contains("sweep") || !doc.at("sweep").is_object()) {
    throw ConfigError("sweep config needs a \"sweep\" object of path -> [values]");
  }
  const json& axes = doc.at("sweep");
  std::vector<std::string> paths;
  std::vector<std::vector<json>> values;
  for (auto it = axes.begin(); it != axes.end(); ++it) {
    if (!it.value().is_array() || it.value().empty()) {
      throw ConfigError("sweep axis \"" + it.key() + "\" must be a non-empty array");
    }
    if (it.key().rfind("bounds_overlay", 0) == 0) {
      throw ConfigError("bounds_overlay cannot be swept");
    }
    paths.push_back(it.key());
    values.emplace_back(it.value().begin(), it.value().end());
  }

  // Row-major cartesian product: the last axis varies fastest.
  std::size_t total = 1;
  for (const auto& v : values) total *= v.size();
  std::vector<ExperimentConfig> configs;
  std::vector<std::vector<std::string>> labels;
  for (std::size_t index = 0; index < total; ++index) {
    json point = doc;
    point.erase("sweep");
    std::vector<std::string> label = {std::to_string(index)};
    std::size_t rem = index;
    std::vector<std::size_t> pick(paths.size());
    for (std::size_t a = paths.size(); a-- > 0;) {
      pick[a] = rem % values[a].size();
      rem /= values[a].size();
    }
    for (std::size_t a = 0; a < paths.size(); ++a) {
      const json& v = values[a][pick[a]];
      point[dotted_pointer(paths[a])] = v;
      label.push_back(csv_field(v.dump()));
    }
    configs.push_back(parse_config(point, base_dir));
    labels.push_back(std::move(label));
  }

  std::vector<SimulationResult> results(total);
  parallel_for(total, [&](std::size_t i) { results[i] = simulate(configs[i]); });

  std::vector<std::string> prefix = {"config_index"};
  for (const auto& p : paths) prefix.push_back(p);
  write_csv_header(out, prefix, configs.front().bounds_overlay);
  for (std::size_t i = 0; i < total; ++i) write_csv_rows(out, labels[i], results[i]);
}

}  // namespace forgetting
