#include "forgetting/checks.hpp"

#include "forgetting/bounds.hpp"
#include "forgetting/constructions.hpp"
#include "forgetting/learner.hpp"
#include "forgetting/metrics.hpp"
#include "forgetting/parallel.hpp"
#include "forgetting/random_instances.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

namespace forgetting {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

// Tracks the worst value of some error quantity against a threshold.
struct Worst {
  double value = 0.0;
  std::string where;

  void update(double v, const std::string& at) {
    if (v > value || where.empty()) {
      value = std::max(value, v);
      where = at;
    }
  }
};

std::vector<std::size_t> even_iterations(std::size_t last) {
  std::vector<std::size_t> out;
  for (std::size_t k = 2; k <= last; k += 2) out.push_back(k);
  return out;
}

double two_task_value(double theta, std::size_t k) {
  const double c2 = std::cos(theta) * std::cos(theta);
  return 0.5 * std::pow(c2, static_cast<double>(k - 1)) * (1.0 - c2);
}

// --- 1: two tasks whose principal angles are all 0 or pi/2 never forget ---
CheckResult check_no_forgetting() {
  CheckResult r;
  r.limit = 1e-12;
  RandomStream rng(20220101);
  Worst worst;
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index d = random_between(rng, 2, 8);
    const Matrix q = random_orthonormal(rng, d);
    const Eigen::Index r1 = random_between(rng, 1, d - 1);
    const Matrix x1 = random_rows_in_span(rng, q.leftCols(r1), r1);
    Matrix x2;
    switch (i % 4) {
      case 0: {  // range(X2^T) inside range(X1^T)
        const Eigen::Index r2 = random_between(rng, 1, r1);
        x2 = random_rows_in_span(rng, q.leftCols(r2), r2);
        break;
      }
      case 1: {  // range(X2^T) contains range(X1^T)
        const Eigen::Index r2 = random_between(rng, r1, d - 1);
        x2 = random_rows_in_span(rng, q.leftCols(r2), r2);
        break;
      }
      case 2: {  // range(X2^T) inside null(X1)
        const Eigen::Index r2 = random_between(rng, 1, d - r1);
        x2 = random_rows_in_span(rng, q.middleCols(r1, r2), r2);
        break;
      }
      default: {  // range(X2^T) contains null(X1)
        const Eigen::Index start = random_between(rng, 1, r1);
        x2 = random_rows_in_span(rng, q.rightCols(d - start), d - start);
        break;
      }
    }
    const auto s = collection_from_solution({x1, x2}, random_unit_ball(rng, d));
    const Trajectory tr = run(s, Ordering::identity(2), 2);
    worst.update(forgetting(tr).forgetting, "instance " + std::to_string(i));
  }
  r.measured = worst.value;
  r.passed = worst.value <= r.limit;
  r.detail = "max F(2) over 200 collections, worst at " + worst.where;
  return r;
}

// --- 2: the saturating two-task construction meets the two-task bound ---
CheckResult check_two_task_tightness() {
  CheckResult r;
  r.limit = 1e-8;
  Worst worst;
  for (const double theta : {kPi / 12, kPi / 6, kPi / 4, kPi / 3}) {
    const auto s = two_task_collection(theta);
    const auto curve = forgetting_curve(s, Ordering::cyclic(2), even_iterations(40));
    for (const CurvePoint& p : curve) {
      worst.update(std::abs(p.forgetting - two_task_value(theta, p.iteration)),
                   format("theta=%.4f k=%.0f", theta, static_cast<double>(p.iteration)));
    }
  }
  r.measured = worst.value;
  r.passed = worst.value <= r.limit;
  r.detail = "max |F(k) - 1/2 (cos^2)^(k-1) sin^2| at " + worst.where;
  return r;
}

// --- 3: grid search over theta recovers the two-task worst case ---
CheckResult check_two_task_worst_case() {
  CheckResult r;
  r.limit = 1e-6;
  constexpr std::size_t kGrid = 10000;
  std::ostringstream detail;
  double worst = 0.0;
  bool asymptotic_ok = true;
  for (const std::size_t k : {std::size_t{2}, std::size_t{10}, std::size_t{100}}) {
    std::vector<double> values(kGrid);
    parallel_for(kGrid, [&](std::size_t j) {
      const double theta = (kPi / 2) * static_cast<double>(j + 1) / kGrid;
      RunOptions options;
      options.store_iterates = false;
      values[j] = forgetting(run(two_task_collection(theta), Ordering::cyclic(2), k, options))
                      .forgetting;
    });
    const double best = *std::max_element(values.begin(), values.end());
    const double closed = two_task_worst_case(k).value;
    worst = std::max(worst, std::abs(best - closed));
    detail << "k=" << k << " grid max " << best << " closed form " << closed << "; ";
    if (k == 100) {
      const double asymptote = 1.0 / (2.0 * std::numbers::e * static_cast<double>(k - 1));
      const double rel = std::abs(best - asymptote) / asymptote;
      asymptotic_ok = rel <= 0.05;
      detail << "relative gap to 1/(2e(k-1)) " << rel;
    }
  }
  r.measured = worst;
  r.passed = worst <= r.limit && asymptotic_ok;
  r.detail = detail.str();
  return r;
}

// --- 4: distance to w* meets the Friedrichs-angle bound with equality ---
CheckResult check_distance_tightness() {
  CheckResult r;
  r.limit = 1e-8;
  Worst worst;
  for (const double theta : {kPi / 6, kPi / 4}) {
    const auto s = two_task_collection(theta);
    const Vector angles =
        principal_angles(s->task(0).data().transpose(), s->task(1).data().transpose());
    const double friedrichs = friedrichs_angle(angles).value_or(0.0);
    worst.update(std::abs(friedrichs - theta), format("theta_F mismatch at %.4f", theta));
    const double norm = s->offline_solution()->norm();
    const auto curve = forgetting_curve(s, Ordering::cyclic(2), even_iterations(40));
    for (const CurvePoint& p : curve) {
      worst.update(std::abs(p.distance_sq - distance_bound(p.iteration, friedrichs, norm)),
                   format("theta_F=%.4f k=%.0f", theta, static_cast<double>(p.iteration)));
    }
  }
  r.measured = worst.value;
  r.passed = worst.value <= r.limit;
  r.detail = "max | ||w_k - w*||^2 - (cos^2 theta_F)^(k-1) ||w*||^2 | at " + worst.where;
  return r;
}

// --- 5: the adversarial identity sequence forgets more than 1 - eps ---
CheckResult check_adversarial() {
  CheckResult r;
  std::ostringstream detail;
  bool ok = true;
  double margin = 1.0;
  for (const double eps : {0.3, 0.5}) {
    const auto [s, ordering, tuned] = adversarial_identity(eps);
    RunOptions options;
    options.store_iterates = false;
    const double f = forgetting(run(s, ordering, s->size(), options)).forgetting;
    ok = ok && f > 1.0 - eps;
    margin = std::min(margin, f - (1.0 - eps));
    detail << "eps=" << eps << " T=k=" << s->size() << " F=" << f << "; ";
  }
  r.measured = margin;
  r.limit = 0.0;
  r.passed = ok;
  r.detail = detail.str() + "measured = min F - (1 - eps)";
  return r;
}

// --- 6: back-and-forth cyclic forgetting sits between the cyclic bounds ---
CheckResult check_cyclic_sandwich() {
  CheckResult r;
  std::ostringstream detail;
  bool ok = true;
  double worst_ratio = 0.0;  // max of F / upper and lower / F
  for (const std::size_t t : {std::size_t{3}, std::size_t{4}, std::size_t{6}}) {
    for (const std::size_t n : {t, 2 * t, 4 * t}) {
      const std::size_t k = n * t;
      const auto [s, ordering, tuned] = back_and_forth(t, k);
      RunOptions options;
      options.store_iterates = false;
      const double f = forgetting(run(s, ordering, k, options)).forgetting;
      const CyclicBounds b = cyclic_bounds(t, k, static_cast<std::size_t>(s->dimension()),
                                           static_cast<std::size_t>(s->max_rank()));
      const double symmetric = cyclic_symmetric_upper(t, k);
      const Matrix m = cyclic_operator(*s);
      const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
      const bool here = f >= b.lower && f <= b.upper && f <= symmetric && asym <= 1e-9;
      ok = ok && here;
      worst_ratio = std::max({worst_ratio, f / b.upper, b.lower / f});
      if (!here) {
        detail << "FAIL T=" << t << " k=" << k << " F=" << f << " in [" << b.lower << ", "
               << b.upper << "] asym=" << asym << "; ";
      }
    }
  }
  r.measured = worst_ratio;
  r.limit = 1.0;
  r.passed = ok;
  r.detail = detail.str() + "measured = max(F/upper, lower/F) over 9 configurations";
  return r;
}

// --- 7: random orderings on the 128-task collection stay under 9(d-r)/k ---
CheckResult check_random_bound() {
  CheckResult r;
  const auto s = fig5_collection();
  constexpr std::size_t kTrials = 20;
  std::ostringstream detail;
  bool ok = true;
  double worst = 0.0;
  for (const std::size_t k : {std::size_t{128}, std::size_t{512}, std::size_t{2048}}) {
    const auto est = expected_forgetting(s, k, kTrials, 7000);
    const double bound = random_expected_bound(k, 2, s->average_rank());
    const double upper = est.mean + 3.0 * est.std_dev / std::sqrt(static_cast<double>(kTrials));
    ok = ok && est.mean <= bound && upper <= bound;
    worst = std::max(worst, upper / bound);
    detail << "k=" << k << " mean=" << est.mean << " +3se=" << upper << " bound=" << bound << "; ";
  }
  r.measured = worst;
  r.limit = 1.0;
  r.passed = ok;
  r.detail = detail.str() + "measured = max (mean + 3 se)/bound";
  return r;
}

// --- 8: Monte Carlo expectation agrees with exhaustive enumeration ---
CheckResult check_enumeration() {
  CheckResult r;
  PlanarSpec spec;
  spec.solution_angles = {0.0, 0.6};
  const auto s = planar_collection(spec);
  std::ostringstream detail;
  bool ok = true;
  double worst = 0.0;  // |mc - exact| in standard errors
  for (std::size_t k = 1; k <= 8; ++k) {
    const double exact = enumerate_expected_forgetting(*s, k);
    const auto est = expected_forgetting(s, k, 100000, 900 + 1000000 * k);
    const double se = est.std_dev / std::sqrt(static_cast<double>(est.trials));
    const double gap = std::abs(est.mean - exact);
    const bool here = gap <= std::max(3.0 * se, 1e-12);
    ok = ok && here;
    if (se > 0.0) worst = std::max(worst, gap / se);
    detail << "k=" << k << " exact=" << exact << " mc=" << est.mean << "; ";
  }
  r.measured = worst;
  r.limit = 3.0;
  r.passed = ok;
  r.detail = detail.str() + "measured = max |mc - exact| / se";
  return r;
}

// --- 9: iterating the update equals the closed-form projection product ---
CheckResult check_projected_route() {
  CheckResult r;
  r.limit = kOracleTolerance;
  RandomStream rng(99);
  Worst worst;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index d = random_between(rng, 2, 6);
    const auto t = static_cast<std::size_t>(random_between(rng, 1, 4));
    const auto k = static_cast<std::size_t>(random_between(rng, 1, 40));
    const auto s = random_collection(rng, d, t);
    const Trajectory tr = run(s, Ordering::random(t, rng.next_u64()), k);
    std::vector<Matrix> projections;
    for (const Task& task : s->tasks()) projections.push_back(task.projection());
    const Vector closed = run_projected(*s->offline_solution(), projections, tr.sequence());
    worst.update((closed - tr.final_iterate()).norm(), "instance " + std::to_string(i));
  }
  r.measured = worst.value;
  r.passed = worst.value <= r.limit;
  r.detail = "max ||w_k - closed form|| over 100 instances, worst at " + worst.where;
  return r;
}

// --- 10: end-of-cycle average iterate obeys (T - 1)/(2n) ---
CheckResult check_average_iterate() {
  CheckResult r;
  constexpr std::size_t kTasks = 4;
  std::ostringstream detail;
  bool ok = true;
  double worst = 0.0;
  for (const std::size_t n : {std::size_t{4}, std::size_t{16}, std::size_t{64}}) {
    const std::size_t k = n * kTasks;
    const auto [s, ordering, tuned] = back_and_forth(kTasks, k);
    RunOptions options;
    options.store_iterates = false;
    const Trajectory tr = run(s, ordering, k, options);
    const double f = forgetting_at(average_iterates(tr, AverageKind::end_of_cycle), tr.sequence(), *s);
    const double bound = average_iterate_bound(kTasks, k, AverageBoundKind::cyclic);
    ok = ok && f <= bound + 1e-9;
    worst = std::max(worst, f / bound);
    detail << "n=" << n << " F(avg)=" << f << " bound=" << bound << "; ";
  }
  r.measured = worst;
  r.limit = 1.0;
  r.passed = ok;
  r.detail = detail.str() + "measured = max F(avg)/bound";
  return r;
}

// --- 11: randomized invariants ---
CheckResult check_properties() {
  CheckResult r;
  RandomStream rng(1234);
  int failures = 0;
  int cases = 0;
  std::ostringstream detail;
  const auto expect = [&](bool ok, const char* what) {
    ++cases;
    if (!ok) {
      ++failures;
      detail << what << " failed; ";
    }
  };

  for (int i = 0; i < 60; ++i) {
    const Eigen::Index rows = random_between(rng, 1, 6);
    const Eigen::Index d = random_between(rng, 1, 8);
    Matrix m = random_gaussian(rng, rows, d);
    if (i % 3 == 0 && rows > 1) m.row(rows - 1) = m.row(0) * 0.5;  // rank deficiency

    const Matrix p = null_projection(m);
    expect((p * p - p).cwiseAbs().maxCoeff() <= 1e-9, "projection idempotence");
    expect((p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-12, "projection symmetry");
    const Vector v = random_gaussian(rng, d, 1);
    expect((p * v).norm() <= v.norm() + 1e-12, "projection contraction");

    const Matrix pinv = pseudo_inverse(m);
    expect((m * pinv * m - m).cwiseAbs().maxCoeff() <= 1e-8, "Penrose 1");
    expect((pinv * m * pinv - pinv).cwiseAbs().maxCoeff() <= 1e-8, "Penrose 2");
    const Matrix mp = m * pinv;
    const Matrix pm = pinv * m;
    expect((mp - mp.transpose()).cwiseAbs().maxCoeff() <= 1e-8, "Penrose 3");
    expect((pm - pm.transpose()).cwiseAbs().maxCoeff() <= 1e-8, "Penrose 4");
  }

  for (int i = 0; i < 60; ++i) {
    const Eigen::Index d = random_between(rng, 2, 8);
    const Matrix a = random_gaussian(rng, d, random_between(rng, 1, d));
    const Matrix b = random_gaussian(rng, d, random_between(rng, 1, d));
    const Vector ab = principal_angles(a, b);
    const Vector ba = principal_angles(b, a);
    expect((ab - ba).cwiseAbs().maxCoeff() <= 1e-8, "principal angle symmetry");
    const Matrix mix = random_gaussian(rng, a.cols(), a.cols());
    expect((principal_angles(a * mix, b) - ab).cwiseAbs().maxCoeff() <= 1e-8,
           "principal angle basis invariance");
  }

  for (int i = 0; i < 60; ++i) {
    const Eigen::Index d = random_between(rng, 2, 8);
    const Matrix x1 = random_gaussian(rng, random_between(rng, 1, d - 1), d);
    const Matrix x2 = random_gaussian(rng, random_between(rng, 1, d - 1), d);
    const auto nonzero = [](const Vector& angles) {
      std::vector<double> out;
      for (const double a : angles) {
        if (a > 1e-6) out.push_back(a);
      }
      return out;
    };
    const auto rows = nonzero(principal_angles(x1.transpose(), x2.transpose()));
    const auto nulls = nonzero(principal_angles(null_projection(x1), null_projection(x2)));
    bool same = rows.size() == nulls.size();
    for (std::size_t j = 0; same && j < rows.size(); ++j) same = std::abs(rows[j] - nulls[j]) <= 1e-8;
    expect(same, "row-space / null-space angle equality");
  }

  for (int i = 0; i < 40; ++i) {
    const Eigen::Index d = random_between(rng, 2, 6);
    const auto t = static_cast<std::size_t>(random_between(rng, 1, 4));
    const auto s = random_collection(rng, d, t);
    const auto k = static_cast<std::size_t>(random_between(rng, 1, 40));
    const Trajectory tr = run(s, Ordering::random(t, rng.next_u64()), k);
    const Vector& w_star = *s->offline_solution();
    bool monotone = true;
    for (std::size_t j = 1; j <= k; ++j) {
      monotone = monotone && (tr.iterates()[j] - w_star).norm() <=
                                 (tr.iterates()[j - 1] - w_star).norm() + 1e-10;
    }
    expect(monotone, "trajectory contraction");
    const ForgettingRecord rec = forgetting(tr);
    expect(rec.forgetting <= rec.residual_bound + 1e-10, "forgetting <= residual bound");
  }

  r.measured = failures;
  r.limit = 0.0;
  r.passed = failures == 0;
  r.detail = std::to_string(cases) + " randomized cases, " + std::to_string(failures) +
             " failures" + (failures ? ": " + detail.str() : std::string());
  return r;
}

}  // namespace

double enumerate_expected_forgetting(const TaskCollection& s, std::size_t k) {
  const std::size_t t = s.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= t;

  // Walk every sequence in T-ary counting order, refitting from scratch.
  double sum = 0.0;
  std::vector<std::size_t> sequence(k);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < k; ++i) {
      sequence[i] = c % t;
      c /= t;
    }
    Vector w = Vector::Zero(s.dimension());
    for (const std::size_t m : sequence) {
      const Task& task = s.task(m);
      w += task.pseudo_inverse() * (task.labels() - task.data() * w);
    }
    double loss = 0.0;
    for (const std::size_t m : sequence) loss += (s.task(m).data() * w - s.task(m).labels()).squaredNorm();
    sum += loss / static_cast<double>(k);
  }
  return sum / static_cast<double>(total);
}

std::vector<Check> checks(CheckSuite suite) {
  std::vector<Check> all = {
      {1, "no forgetting when principal angles are 0 or pi/2", 5.0, check_no_forgetting},
      {2, "two-task cyclic forgetting is tight", 5.0, check_two_task_tightness},
      {3, "two-task worst case over the angle", 30.0, check_two_task_worst_case},
      {4, "distance bound via the Friedrichs angle is tight", 5.0, check_distance_tightness},
      {5, "adversarial identity ordering forgets > 1 - eps", 60.0, check_adversarial},
      {6, "back-and-forth cyclic forgetting within cyclic bounds", 60.0, check_cyclic_sandwich},
      {7, "random ordering expected forgetting <= 9(d - r_avg)/k", 120.0, check_random_bound},
      {8, "Monte Carlo matches exact enumeration", 60.0, check_enumeration},
      {9, "update rule matches projection-product closed form", 10.0, check_projected_route},
      {10, "end-of-cycle average iterate bound", 10.0, check_average_iterate},
      {11, "randomized invariants", 20.0, check_properties},
  };
  if (suite == CheckSuite::all) return all;
  std::vector<Check> quick;
  for (auto& c : all) {
    if (c.id == 1 || c.id == 2 || c.id == 4) quick.push_back(std::move(c));
  }
  return quick;
}

std::vector<CheckResult> run_checks(const std::vector<Check>& selected) {
  std::vector<CheckResult> results;
  for (const Check& c : selected) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("threw: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.id = c.id;
    r.title = c.title;
    r.time_limit = c.time_limit;
    if (r.seconds > c.time_limit) {
      r.passed = false;
      r.detail += " [over time limit]";
    }
    results.push_back(std::move(r));
  }
  return results;
}

bool print_report(std::ostream& out, const std::vector<CheckResult>& results) {
  bool all = true;
  for (const CheckResult& r : results) {
    all = all && r.passed;
    char head[160];
    std::snprintf(head, sizeof head, "[%s] %2d %-56s measured=%.6g limit=%.6g (%.2fs / %.0fs)",
                  r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.measured, r.limit,
                  r.seconds, r.time_limit);
    out << head << "\n       " << r.detail << "\n";
  }
  out << (all ? "all checks passed" : "some checks FAILED") << "\n";
  return all;
}

}  // namespace forgetting
