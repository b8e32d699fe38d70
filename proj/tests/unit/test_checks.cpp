#include "forgetting/checks.hpp"
#include "forgetting/constructions.hpp"
#include "forgetting/learner.hpp"
#include "forgetting/metrics.hpp"

#include <doctest.h>

#include <chrono>
#include <sstream>
#include <thread>

using namespace forgetting;

TEST_CASE("suites register the expected checks") {
  std::vector<int> quick, all;
  for (const Check& c : checks(CheckSuite::quick)) quick.push_back(c.id);
  for (const Check& c : checks(CheckSuite::all)) all.push_back(c.id);
  CHECK(quick == std::vector<int>{1, 2, 4});
  CHECK(all == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
}

TEST_CASE("failing, throwing and slow checks are reported as failures") {
  const std::vector<Check> synthetic = {
      {90, "passes", 10.0, [] { return CheckResult{0, "", true, 0.1, 1.0, "fine"}; }},
      {91, "fails", 10.0, [] { return CheckResult{0, "", false, 2.0, 1.0, "too big"}; }},
      {92, "throws", 10.0, []() -> CheckResult { throw std::runtime_error("boom"); }},
      {93, "slow", 0.0,
       [] {
         std::this_thread::sleep_for(std::chrono::milliseconds(5));
         return CheckResult{0, "", true, 0.0, 1.0, ""};
       }},
  };
  const auto results = run_checks(synthetic);
  REQUIRE(results.size() == 4);
  CHECK(results[0].passed);
  CHECK(results[0].id == 90);
  CHECK(results[0].title == "passes");
  CHECK_FALSE(results[1].passed);
  CHECK_FALSE(results[2].passed);
  CHECK(results[2].detail.find("boom") != std::string::npos);
  CHECK_FALSE(results[3].passed);
  CHECK(results[3].detail.find("time limit") != std::string::npos);

  std::ostringstream out;
  CHECK_FALSE(print_report(out, results));
  const std::string text = out.str();
  CHECK(text.find("[PASS]") != std::string::npos);
  CHECK(text.find("[FAIL]") != std::string::npos);
  CHECK(text.find("some checks FAILED") != std::string::npos);

  std::ostringstream ok;
  CHECK(print_report(ok, {results[0]}));
  CHECK(ok.str().find("all checks passed") != std::string::npos);
}

TEST_CASE("enumerate_expected_forgetting on hand-computable cases") {
  // Two identical tasks never forget; one task never forgets.
  PlanarSpec same;
  same.solution_angles = {0.4, 0.4};
  CHECK(enumerate_expected_forgetting(*planar_collection(same), 4) < 1e-28);

  // Orthogonal pair at k = 2: sequences 11, 22 and both mixed orders all give 0.
  PlanarSpec orth;
  orth.solution_angles = {0.0, 1.5707963267948966};
  CHECK(enumerate_expected_forgetting(*planar_collection(orth), 2) < 1e-28);

  // k = 2 on a general pair: average of the four sequences, computed via runs.
  PlanarSpec pair;
  pair.solution_angles = {0.0, 0.6};
  const auto s = planar_collection(pair);
  double total = 0.0;
  for (const std::vector<std::size_t>& seq :
       {std::vector<std::size_t>{0, 0}, {0, 1}, {1, 0}, {1, 1}}) {
    total += forgetting::forgetting(run(s, Ordering::explicit_sequence(2, seq), 2)).forgetting;
  }
  CHECK(enumerate_expected_forgetting(*s, 2) == doctest::Approx(total / 4.0).epsilon(1e-12));
}
