#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rankshadow/linalg.hpp"
#include "rankshadow/nuclear.hpp"
#include "rankshadow/oracle.hpp"

using namespace rankshadow;

namespace {

Matrix random_matrix(int m, int p, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix z(m, p);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < p; ++j) z(i, j) = gauss(rng);
  return z;
}

// Scan a single free entry by grid plus ternary refinement. The objective is
// convex in the entry, so the refinement bracket is trustworthy.
double scan_single_free_entry(const ObservationInstance& inst, int fi, int fj,
                              double* arg_out = nullptr) {
  auto value_at = [&](double x) {
    Matrix z = Matrix::Zero(inst.m, inst.p);
    for (size_t t = 0; t < inst.omega.size(); ++t)
      z(inst.omega[t].first - 1, inst.omega[t].second - 1) = inst.values[t];
    z(fi - 1, fj - 1) = x;
    return nuclear_norm(z);
  };
  double best_x = 0.0, best = value_at(0.0);
  for (double x = -50.0; x <= 50.0; x += 0.01) {
    const double v = value_at(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  double lo = best_x - 0.02, hi = best_x + 0.02;
  for (int it = 0; it < 300; ++it) {
    const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
    if (value_at(a) < value_at(b))
      hi = b;
    else
      lo = a;
  }
  const double x_star = 0.5 * (lo + hi);
  if (arg_out) *arg_out = x_star;
  return value_at(x_star);
}

}  // namespace

TEST_CASE("observation instances validate their shape") {
  ObservationInstance inst;
  inst.m = 0;
  inst.p = 2;
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);

  inst.m = 2;
  inst.omega = {{1, 1}};
  inst.values = {1.0, 2.0};
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);

  inst.values = {1.0};
  CHECK_NOTHROW(inst.validate());

  inst.omega = {{1, 3}};
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
  inst.omega = {{0, 1}};
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);

  inst.omega = {{1, 1}, {1, 1}};
  inst.values = {1.0, 1.0};
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);

  inst.omega = {{1, 1}};
  inst.values = {1.0};
  inst.truth = Matrix::Zero(3, 3);
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
  inst.truth = Matrix::Zero(2, 2);
  CHECK_NOTHROW(inst.validate());
}

TEST_CASE("the observation set lifts to a loopless bipartite pattern") {
  ObservationInstance inst;
  inst.m = 2;
  inst.p = 2;
  inst.omega = {{1, 1}, {1, 2}, {2, 1}};
  inst.values = {0.5, 1.0, 1.0};
  auto g = omega_to_pattern(inst);
  CHECK(g.order() == 4);
  CHECK(g.edge_count() == 3);
  CHECK(g.loopless());
  CHECK(g.has_edge(1, 3));
  CHECK(g.has_edge(1, 4));
  CHECK(g.has_edge(2, 3));
  CHECK_FALSE(g.has_edge(2, 4));
  CHECK_FALSE(g.has_edge(1, 2));
  CHECK_FALSE(g.has_edge(3, 4));

  auto a = instance_to_partial(inst);
  CHECK(a.order() == 4);
  CHECK(a.at(1, 3) == 0.5);
  CHECK(a.at(1, 4) == 1.0);
  CHECK(a.at(2, 3) == 1.0);
  CHECK_FALSE(a.at(2, 4).has_value());
}

TEST_CASE("nuclear norm on known matrices") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;
  CHECK(nuclear_norm(d) == Catch::Approx(7.0).margin(1e-12));

  Matrix flip(2, 2);
  flip << 0.0, 1.0, 1.0, 0.0;
  CHECK(nuclear_norm(flip) == Catch::Approx(2.0).margin(1e-12));

  Matrix zero = Matrix::Zero(3, 5);
  CHECK(nuclear_norm(zero) == 0.0);
}

TEST_CASE("the symmetric lift certifies the nuclear norm") {
  std::mt19937_64 rng(20240217);
  for (int trial = 0; trial < 12; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 4);
    const int p = 2 + static_cast<int>(rng() % 4);
    Matrix z = random_matrix(m, p, rng);
    Matrix y = lift_to_sdp(z);
    REQUIRE(y.rows() == m + p);
    CHECK(is_psd(y, 1e-9));
    CHECK((y.topRightCorner(m, p) - z).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(0.5 * y.trace() ==
          Catch::Approx(nuclear_norm(z)).margin(1e-10 * (1.0 + y.trace())));
  }
}

TEST_CASE("full observation reproduces the plant") {
  std::mt19937_64 rng(7);
  Vector u = Vector::Zero(4), v = Vector::Zero(4);
  for (int i = 0; i < 4; ++i) {
    u(i) = 0.5 + 0.25 * static_cast<double>(i);
    v(i) = 1.5 - 0.25 * static_cast<double>(i);
  }
  ObservationInstance inst;
  inst.m = inst.p = 4;
  Matrix t = u * v.transpose();
  inst.truth = t;
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      inst.omega.emplace_back(i, j);
      inst.values.push_back(t(i - 1, j - 1));
    }
  auto rep = nuclear_min_complete(inst);
  CHECK(rep.converged);
  CHECK(rep.rank == 1);
  REQUIRE(rep.truth_error.has_value());
  CHECK(*rep.truth_error < 1e-7);
  CHECK(rep.nuclear == Catch::Approx(u.norm() * v.norm()).margin(1e-6));
  CHECK(rep.lift_trace == Catch::Approx(rep.nuclear).margin(1e-9));
  REQUIRE(rep.avg_residual_trace.size() == static_cast<size_t>(rep.iterations));
  CHECK(rep.avg_residual_trace.back() <= rep.avg_residual_trace.front());
}

TEST_CASE("one missing entry of the all-ones matrix is restored") {
  ObservationInstance inst;
  inst.m = inst.p = 2;
  inst.omega = {{1, 1}, {1, 2}, {2, 1}};
  inst.values = {1.0, 1.0, 1.0};
  auto rep = nuclear_min_complete(inst);
  CHECK(rep.converged);
  // Objective sqrt((1-x)^2 + 4) for x <= 1, then 1 + x: the floor sits at 1.
  CHECK(rep.nuclear == Catch::Approx(2.0).margin(2e-3));
  CHECK(rep.nuclear >= 2.0 - 1e-6);
  CHECK(std::abs(rep.z_hat(1, 1) - 1.0) < 0.05);
  CHECK(rep.residual <= 1e-8 * (1.0 + std::sqrt(3.0)) + 1e-15);
}

TEST_CASE("spiked corner pulls the surrogate away from the plant") {
  const double eps = 0.05;
  ObservationInstance inst;
  inst.m = inst.p = 2;
  inst.omega = {{1, 1}, {1, 2}, {2, 1}};
  inst.values = {eps, 1.0, 1.0};
  Matrix t(2, 2);
  t << eps, 1.0, 1.0, 1.0 / eps;
  inst.truth = t;

  auto rep = nuclear_min_complete(inst);
  CHECK(rep.converged);

  double x_star = 0.0;
  const double scanned = scan_single_free_entry(inst, 2, 2, &x_star);
  CHECK(scanned == Catch::Approx(2.0).margin(1e-6));
  CHECK(x_star == Catch::Approx(eps).margin(1e-3));
  CHECK(rep.nuclear == Catch::Approx(scanned).margin(1e-4));
  CHECK(std::abs(rep.z_hat(1, 1) - eps) < 1e-2);

  // The surrogate misses the plant badly even though a rank-one completion
  // that matches the data exists.
  REQUIRE(rep.truth_error.has_value());
  CHECK(*rep.truth_error > 0.5);
  auto feasible = rank1_completable(instance_to_partial(inst));
  CHECK(feasible.answer == Answer::Yes);
}

TEST_CASE("an exhausted iteration budget throws with the report attached") {
  ObservationInstance inst;
  inst.m = inst.p = 2;
  inst.omega = {{1, 1}, {1, 2}, {2, 1}};
  inst.values = {0.05, 1.0, 1.0};
  NuclearConfig cfg;
  cfg.max_iters = 3;
  try {
    nuclear_min_complete(inst, cfg);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK_FALSE(std::string(e.what()).empty());
    CHECK(e.report.iterations == 3);
    CHECK_FALSE(e.report.converged);
    CHECK(e.report.avg_residual_trace.size() == 3);
    CHECK(e.report.z_hat.rows() == 2);
    CHECK(e.report.z_hat.cols() == 2);
  }
}

TEST_CASE("step size changes do not change the answer") {
  ObservationInstance inst;
  inst.m = inst.p = 2;
  inst.omega = {{1, 1}, {1, 2}, {2, 1}};
  inst.values = {1.0, 1.0, 1.0};
  NuclearConfig cfg;
  cfg.gamma = 0.5;
  auto rep = nuclear_min_complete(inst, cfg);
  CHECK(rep.converged);
  CHECK(rep.nuclear == Catch::Approx(2.0).margin(2e-3));
}

TEST_CASE("the sweep separates recovering families from failing ones") {
  const std::vector<std::string> families = {"full", "missing_one", "diagonal",
                                             "adversarial:0.1"};
  auto rows = failure_sweep(families, 3, 99, {}, 4, 4);
  REQUIRE(rows.size() == 12);

  for (size_t t = 0; t < rows.size(); ++t)
    CHECK(rows[t].family == families[t / 3]);

  for (size_t t = 0; t < 3; ++t) {
    INFO("full row " << t);
    CHECK(rows[t].recovered);
    CHECK(rows[t].rank == 1);
    CHECK(rows[t].error <= 1e-6);
  }
  for (size_t t = 3; t < 6; ++t) {
    INFO("missing_one row " << t);
    CHECK(std::isfinite(rows[t].error));
  }
  for (size_t t = 6; t < 9; ++t) {
    INFO("diagonal row " << t);
    CHECK_FALSE(rows[t].recovered);
    CHECK(rows[t].error > 1e-3);
  }
  for (size_t t = 9; t < 12; ++t) {
    INFO("adversarial row " << t);
    CHECK_FALSE(rows[t].recovered);
    CHECK(rows[t].error > 0.5);
  }

  // Seeds are distinct so trials do not repeat each other.
  for (size_t a = 0; a < rows.size(); ++a)
    for (size_t b = a + 1; b < rows.size(); ++b) CHECK(rows[a].seed != rows[b].seed);
}

TEST_CASE("unknown sweep families are rejected") {
  CHECK_THROWS_AS(failure_sweep({"himalayan"}, 1, 1), std::invalid_argument);
}
