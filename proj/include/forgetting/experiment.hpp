#pragma once

#include "forgetting/constructions.hpp"
#include "forgetting/orderings.hpp"
#include "forgetting/tasks.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace forgetting {

inline constexpr const char* kConfigSchema = "forgetting-lab/config/v1";
inline constexpr const char* kCollectionSchema = "forgetting-lab/collection/v1";

/// Malformed or unsupported experiment configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Where the task collection comes from: a collection file, or a named
/// construction with its JSON parameters.
struct CollectionSource {
  std::optional<std::filesystem::path> file;
  std::string construction;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
};

struct OrderingSpec {
  OrderingKind kind = OrderingKind::cyclic;
  std::optional<std::uint64_t> seed;
  /// 0-based; the file stores 1-based entries.
  std::vector<std::size_t> sequence;
};

struct ExperimentConfig {
  std::string experiment_name;
  CollectionSource collection;
  /// Absent: the construction's natural ordering, else cyclic.
  std::optional<OrderingSpec> ordering;
  std::size_t horizon = 0;
  /// Absent: T for cyclic orderings, 1 otherwise.
  std::optional<std::size_t> record_every;
  std::size_t trials = 1;
  std::uint64_t seed_base = 0;
  std::vector<std::string> bounds_overlay;
  std::filesystem::path output_path;
};

/// Throws ConfigError. Relative collection paths resolve against base_dir.
ExperimentConfig parse_config(const nlohmann::ordered_json& doc,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Collection file I/O (JSON, row-major task data).
nlohmann::ordered_json collection_to_json(const TaskCollection& s);
CollectionPtr collection_from_json(const nlohmann::ordered_json& doc);
void save_collection(const TaskCollection& s, const std::filesystem::path& path);
CollectionPtr load_collection(const std::filesystem::path& path);

/// Builds a named construction ("two_task", "planar", "adversarial_identity",
/// "back_and_forth", "fig5") and its natural ordering.
OrderedCollection build_construction(const std::string& name,
                                     const nlohmann::ordered_json& parameters);

/// Overlay names accepted in bounds_overlay.
const std::vector<std::string>& overlay_names();

/// Value of an analytic overlay at iteration k, or nothing outside its regime.
/// cyclic_lower only bounds an adversarial construction at the horizon it was
/// built for, so it needs tuned_horizon == k.
std::optional<double> overlay_value(const std::string& name, const TaskCollection& s,
                                    OrderingKind kind, std::size_t k,
                                    std::optional<std::size_t> tuned_horizon = {});

/// One CSV row.
struct ResultRow {
  std::size_t iteration = 0;
  double forgetting = 0.0;
  std::optional<double> forgetting_std;
  double distance_sq = 0.0;
  double residual_bound = 0.0;
  std::vector<std::optional<double>> analytic_bounds;
};

struct SimulationResult {
  std::vector<std::string> overlay_columns;
  std::vector<ResultRow> rows;
};

/// Runs the configured simulation. Throws Infeasible for a non-realizable
/// collection and ValidationFailure for other assumption violations.
SimulationResult simulate(const ExperimentConfig& config);

/// iteration,forgetting,forgetting_std,distance_sq,residual_bound,<overlays>
void write_csv(std::ostream& out, const SimulationResult& result);

/// The same layout with extra leading columns, for sweeps.
void write_csv_header(std::ostream& out, const std::vector<std::string>& prefix_columns,
                      const std::vector<std::string>& overlay_columns);
void write_csv_rows(std::ostream& out, const std::vector<std::string>& prefix_values,
                    const SimulationResult& result);

/// Shortest round-trip representation, so CSVs are byte-stable.
std::string format_number(double v);

/// Figure data: "fig3a", "fig3b" or "fig5". Throws ConfigError for other names.
void write_figure(const std::string& name, std::ostream& out);

/// Expands the "sweep" object (dotted config path -> array of values) into a
/// cartesian product, runs every point in parallel and writes one CSV with
/// config_index and the swept values as leading columns.
void run_sweep(const nlohmann::ordered_json& doc, const std::filesystem::path& base_dir,
               std::ostream& out);

}  // namespace forgetting
