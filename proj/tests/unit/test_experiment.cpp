#include "forgetting/bounds.hpp"
#include "forgetting/constructions.hpp"
#include "forgetting/errors.hpp"
#include "forgetting/experiment.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace forgetting;
using json = nlohmann::ordered_json;

namespace {

json base_config() {
  return json::parse(R"({
    "schema": "forgetting-lab/config/v1",
    "experiment_name": "t",
    "collection": {"construction": "two_task", "theta": 0.7853981633974483},
    "ordering": {"kind": "cyclic"},
    "horizon": 40,
    "bounds_overlay": ["two_task", "distance"]
  })");
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string csv_of(const ExperimentConfig& c) {
  std::ostringstream out;
  write_csv(out, simulate(c));
  return out.str();
}

std::string figure(const std::string& name) {
  std::ostringstream out;
  write_figure(name, out);
  return out.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("forgetting_lab_test_" + std::to_string(std::rand()) + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("parse_config accepts a complete config") {
  const ExperimentConfig c = parse_config(base_config());
  CHECK(c.experiment_name == "t");
  CHECK(c.horizon == 40);
  CHECK(c.collection.construction == "two_task");
  CHECK_FALSE(c.collection.parameters.contains("construction"));
  REQUIRE(c.ordering.has_value());
  CHECK(c.ordering->kind == OrderingKind::cyclic);
  CHECK(c.trials == 1);
  CHECK(c.bounds_overlay == std::vector<std::string>{"two_task", "distance"});
}

TEST_CASE("parse_config rejects malformed configs") {
  auto broken = [](auto mutate) {
    json doc = base_config();
    mutate(doc);
    return doc;
  };
  CHECK_THROWS_AS(parse_config(broken([](json& d) { d["schema"] = "v0"; })), ConfigError);
  CHECK_THROWS_AS(parse_config(broken([](json& d) { d.erase("schema"); })), ConfigError);
  CHECK_THROWS_AS(parse_config(broken([](json& d) { d["horizon"] = 0; })), ConfigError);
  CHECK_THROWS_AS(parse_config(broken([](json& d) { d["horizon"] = -3; })), ConfigError);
  CHECK_THROWS_AS(parse_config(broken([](json& d) { d["horizon"] = "ten"; })), ConfigError);
  CHECK_THROWS_AS(parse_config(broken([](json& d) { d["trials"] = 0; })), ConfigError);
  CHECK_THROWS_AS(parse_config(broken([](json& d) { d["record_every"] = 0; })), ConfigError);
  CHECK_THROWS_AS(parse_config(broken([](json& d) { d.erase("collection"); })), ConfigError);
  CHECK_THROWS_AS(parse_config(broken([](json& d) { d["collection"] = json::object(); })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(broken([](json& d) { d["ordering"]["kind"] = "zigzag"; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(broken([](json& d) { d["ordering"]["kind"] = "explicit"; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(broken([](json& d) { d["bounds_overlay"] = {"nope"}; })),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
}

TEST_CASE("explicit orderings are 1-based in the file") {
  json doc = base_config();
  doc["ordering"] = json::parse(R"({"kind": "explicit", "sequence": [1, 2, 2, 1]})");
  doc["horizon"] = 4;
  const ExperimentConfig c = parse_config(doc);
  CHECK(c.ordering->sequence == std::vector<std::size_t>{0, 1, 1, 0});

  doc["ordering"]["sequence"] = {0, 1};
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  doc["ordering"]["sequence"] = {1, 3};
  doc["horizon"] = 2;
  CHECK_THROWS_AS(simulate(parse_config(doc)), ConfigError);
}

TEST_CASE("simulate rejects horizons the ordering cannot cover") {
  json doc = base_config();
  doc["ordering"]["kind"] = "identity";
  doc["horizon"] = 3;
  CHECK_THROWS_AS(simulate(parse_config(doc)), ConfigError);
}

TEST_CASE("unknown constructions and bad construction parameters are config errors") {
  json doc = base_config();
  doc["collection"] = json::parse(R"({"construction": "spiral"})");
  CHECK_THROWS_AS(simulate(parse_config(doc)), ConfigError);
  doc["collection"] = json::parse(R"({"construction": "adversarial_identity", "epsilon": 2})");
  CHECK_THROWS_AS(simulate(parse_config(doc)), ConfigError);
  doc["collection"] = json::parse(R"({"construction": "two_task"})");
  CHECK_THROWS_AS(simulate(parse_config(doc)), ConfigError);
}

TEST_CASE("collection JSON round trip and relative file paths") {
  const TempDir dir;
  const auto s = back_and_forth(3, 9).collection;
  save_collection(*s, dir.path / "c.json");
  const auto back = load_collection(dir.path / "c.json");
  REQUIRE(back->size() == s->size());
  for (std::size_t m = 0; m < s->size(); ++m) {
    CHECK(back->task(m).data() == s->task(m).data());
    CHECK(back->task(m).labels() == s->task(m).labels());
  }
  CHECK(*back->offline_solution() == *s->offline_solution());

  json doc = base_config();
  doc["collection"] = json::parse(R"({"file": "c.json"})");
  doc["bounds_overlay"] = json::array();
  doc["horizon"] = 9;
  {
    std::ofstream f(dir.path / "cfg.json");
    f << doc.dump(2);
  }
  const ExperimentConfig c = load_config(dir.path / "cfg.json");
  CHECK(*c.collection.file == dir.path / "c.json");
  CHECK(simulate(c).rows.size() == 3);

  json bad = collection_to_json(*s);
  bad["schema"] = "other";
  CHECK_THROWS_AS(collection_from_json(bad), ConfigError);
  bad = collection_to_json(*s);
  bad["tasks"][0]["data"] = {1.0};
  CHECK_THROWS_AS(collection_from_json(bad), ConfigError);
  CHECK_THROWS_AS(load_config(dir.path / "missing.json"), ConfigError);
}

TEST_CASE("simulate surfaces validation and feasibility failures") {
  const TempDir dir;
  auto config_for = [&](const json& collection, const std::string& name) {
    std::ofstream(dir.path / name) << collection.dump();
    ExperimentConfig cfg = parse_config(base_config());
    cfg.collection = {};
    cfg.collection.file = dir.path / name;
    cfg.bounds_overlay.clear();
    return cfg;
  };
  json big = collection_to_json(*two_task_collection(0.4));
  big["tasks"][0]["data"] = {0.0, 2.0};
  big["tasks"][0]["labels"] = {0.0};
  CHECK_THROWS_AS(simulate(config_for(big, "big.json")), ValidationFailure);

  json clash = collection_to_json(*two_task_collection(0.4));
  clash["tasks"][1] = clash["tasks"][0];
  clash["tasks"][1]["labels"] = {1.0};
  CHECK_THROWS_AS(simulate(config_for(clash, "clash.json")), Infeasible);
}

TEST_CASE("two-task config tracks the two-task bound at every even k") {
  const SimulationResult r = simulate(parse_config(base_config()));
  REQUIRE(r.overlay_columns.size() == 2);
  REQUIRE(r.rows.size() == 20);
  for (const ResultRow& row : r.rows) {
    CHECK(row.iteration % 2 == 0);
    CHECK_FALSE(row.forgetting_std.has_value());
    REQUIRE(row.analytic_bounds[0].has_value());
    CHECK(std::abs(row.forgetting - *row.analytic_bounds[0]) < 1e-8);
    CHECK(std::abs(row.distance_sq - *row.analytic_bounds[1]) < 1e-8);
  }
}

TEST_CASE("record_every subsamples and always keeps the horizon") {
  json doc = base_config();
  doc["record_every"] = 7;
  const SimulationResult r = simulate(parse_config(doc));
  std::vector<std::size_t> its;
  for (const auto& row : r.rows) its.push_back(row.iteration);
  CHECK(its == std::vector<std::size_t>{7, 14, 21, 28, 35, 40});
}

TEST_CASE("fig5 cyclic config stays inside the cyclic sandwich") {
  json doc = base_config();
  doc["collection"] = json::parse(R"({"construction": "fig5"})");
  doc["horizon"] = 128 * 128;
  doc["bounds_overlay"] = {"cyclic_lower", "cyclic_upper", "cyclic_symmetric_upper"};
  const SimulationResult r = simulate(parse_config(doc));
  REQUIRE(r.rows.size() == 128);
  const ResultRow& last = r.rows.back();
  REQUIRE(last.analytic_bounds[0].has_value());
  CHECK(last.forgetting >= *last.analytic_bounds[0]);
  for (const ResultRow& row : r.rows) {
    for (std::size_t j = 1; j < 3; ++j) {
      if (row.analytic_bounds[j]) CHECK(row.forgetting <= *row.analytic_bounds[j]);
    }
    if (row.iteration != last.iteration) CHECK_FALSE(row.analytic_bounds[0].has_value());
  }
}

TEST_CASE("fig5 random config reports mean and std below the random bound") {
  json doc = base_config();
  doc["collection"] = json::parse(R"({"construction": "fig5"})");
  doc["ordering"] = json::parse(R"({"kind": "random"})");
  doc["horizon"] = 2048;
  doc["record_every"] = 128;
  doc["trials"] = 5;
  doc["seed_base"] = 7000;
  doc["bounds_overlay"] = {"random_upper"};
  const SimulationResult r = simulate(parse_config(doc));
  REQUIRE(r.rows.size() == 16);
  for (const ResultRow& row : r.rows) {
    REQUIRE(row.forgetting_std.has_value());
    REQUIRE(row.analytic_bounds[0].has_value());
    CHECK(*row.analytic_bounds[0] == doctest::Approx(9.0 / double(row.iteration)));
    CHECK(row.forgetting <= *row.analytic_bounds[0]);
  }
}

TEST_CASE("CSV output is byte-identical across runs and worker counts") {
  json doc = base_config();
  doc["collection"] = json::parse(R"({"construction": "back_and_forth", "tasks": 4})");
  doc["ordering"] = json::parse(R"({"kind": "random"})");
  doc["horizon"] = 64;
  doc["trials"] = 9;
  doc["seed_base"] = 31;
  doc["bounds_overlay"] = {"random_upper", "average_random_surrogate"};
  const ExperimentConfig c = parse_config(doc);

  ::setenv("FORGETTING_LAB_THREADS", "1", 1);
  const std::string one = csv_of(c);
  ::setenv("FORGETTING_LAB_THREADS", "5", 1);
  const std::string five = csv_of(c);
  ::unsetenv("FORGETTING_LAB_THREADS");
  const std::string dflt = csv_of(c);
  CHECK(one == five);
  CHECK(one == dflt);

  const auto rows = parse_csv(one);
  REQUIRE(rows.size() == 65);
  CHECK(rows[0] == std::vector<std::string>{"iteration", "forgetting", "forgetting_std",
                                            "distance_sq", "residual_bound", "random_upper",
                                            "average_random_surrogate"});
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].size() == 7);
}

TEST_CASE("deterministic orderings leave the std column empty") {
  const auto rows = parse_csv(csv_of(parse_config(base_config())));
  REQUIRE(rows.size() > 1);
  CHECK(rows[1][2].empty());
}

TEST_CASE("format_number round-trips") {
  for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, 1e-300, 6.02e23, -2.5}) {
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(0.125) == "0.125");
}

TEST_CASE("overlay regimes") {
  const auto pair = two_task_collection(0.5);
  CHECK(overlay_value("two_task", *pair, OrderingKind::cyclic, 4).has_value());
  CHECK_FALSE(overlay_value("two_task", *pair, OrderingKind::cyclic, 3).has_value());
  CHECK_FALSE(overlay_value("two_task", *pair, OrderingKind::random, 4).has_value());
  const auto bf = back_and_forth(4, 32);
  CHECK_FALSE(overlay_value("cyclic_upper", *bf.collection, OrderingKind::cyclic, 12).has_value());
  CHECK(overlay_value("cyclic_upper", *bf.collection, OrderingKind::cyclic, 20).has_value());
  CHECK_FALSE(overlay_value("cyclic_lower", *bf.collection, OrderingKind::cyclic, 20).has_value());
  CHECK_FALSE(overlay_value("cyclic_lower", *bf.collection, OrderingKind::cyclic, 32, 16).has_value());
  CHECK(overlay_value("cyclic_lower", *bf.collection, OrderingKind::cyclic, 32, 32).has_value());
  CHECK(overlay_value("random_upper", *bf.collection, OrderingKind::random, 7).has_value());
  for (const auto& name : overlay_names()) CHECK_FALSE(name.empty());
}

TEST_CASE("figure fig3a: the maximizing angle has sin^2 near 1/k") {
  const auto rows = parse_csv(figure("fig3a"));
  REQUIRE(rows[0] == std::vector<std::string>{"theta", "k", "forgetting_factor"});
  const double step = (std::numbers::pi / 2) / 1000.0;
  std::map<int, std::pair<double, double>> best;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double theta = std::stod(rows[i][0]);
    const int k = std::stoi(rows[i][1]);
    const double v = std::stod(rows[i][2]);
    auto& b = best[k];
    if (v > b.second) b = {theta, v};
  }
  CHECK(best.size() == 20);
  for (const auto& [k, b] : best) {
    const double expected = std::asin(std::sqrt(1.0 / k));
    CHECK(std::abs(b.first - expected) <= step);
  }
}

TEST_CASE("figure fig3b: every curve stays under the worst-case envelope") {
  const auto rows = parse_csv(figure("fig3b"));
  REQUIRE(rows[0].front() == "iteration");
  REQUIRE(rows[0].back() == "worst_case");
  CHECK(rows.size() == 101);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double envelope = std::stod(rows[i].back());
    for (std::size_t j = 1; j + 1 < rows[i].size(); ++j) {
      CHECK(std::stod(rows[i][j]) <= envelope + 1e-15);
    }
  }
}

TEST_CASE("figure fig5: random ordering beats cyclic at end-of-cycle points") {
  const auto rows = parse_csv(figure("fig5"));
  REQUIRE(rows[0] == std::vector<std::string>{"iteration", "cyclic_forgetting", "random_mean",
                                              "random_std", "cyclic_lower", "cyclic_upper",
                                              "cyclic_symmetric_upper", "random_upper"});
  std::size_t compared = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::size_t k = std::stoul(rows[i][0]);
    const double cyclic = std::stod(rows[i][1]);
    const double random = std::stod(rows[i][2]);
    CHECK(random <= std::stod(rows[i][7]));
    if (k % 128 == 0) {
      CHECK(random <= cyclic);
      ++compared;
    }
    if (!rows[i][4].empty()) CHECK(cyclic >= std::stod(rows[i][4]));
    if (!rows[i][5].empty()) CHECK(cyclic <= std::stod(rows[i][5]));
  }
  CHECK(compared == 8 * 128);
  CHECK_THROWS_AS(figure("fig4"), ConfigError);
}

TEST_CASE("sweep expands the cartesian product in order") {
  json doc = base_config();
  doc["collection"] = json::parse(R"({"construction": "back_and_forth", "tasks": 3})");
  doc["horizon"] = 9;
  doc["bounds_overlay"] = {"cyclic_lower"};
  doc["sweep"] = json::parse(R"({"collection.tasks": [3], "horizon": [9, 18]})");
  std::ostringstream out;
  run_sweep(doc, {}, out);
  const auto rows = parse_csv(out.str());
  REQUIRE(rows[0] == std::vector<std::string>{"config_index", "collection.tasks", "horizon",
                                              "iteration", "forgetting", "forgetting_std",
                                              "distance_sq", "residual_bound", "cyclic_lower"});
  REQUIRE(rows.size() == 1 + 3 + 6);
  CHECK(rows[1][0] == "0");
  CHECK(rows[3][3] == "9");
  CHECK(rows[4][0] == "1");
  CHECK(rows[4][2] == "18");
  CHECK_FALSE(rows[3][8].empty());
  CHECK(rows[9][3] == "18");
  CHECK_FALSE(rows[9][8].empty());

  std::ostringstream again;
  run_sweep(doc, {}, again);
  CHECK(again.str() == out.str());

  doc["sweep"] = json::parse(R"({"bounds_overlay": [["cyclic_lower"]]})");
  std::ostringstream bad;
  CHECK_THROWS_AS(run_sweep(doc, {}, bad), ConfigError);
  doc.erase("sweep");
  CHECK_THROWS_AS(run_sweep(doc, {}, bad), ConfigError);
}
