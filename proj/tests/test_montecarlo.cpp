#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "robustik/error.hpp"
#include "robustik/montecarlo.hpp"
#include "robustik/robust_select.hpp"

using namespace robustik;

namespace {

const JointVector kTheta{0.1, 0.5, 0.2, -1.0, 0.3, 0.7, 0.0};

Scenario clearance(const KinematicChain& c, double value, std::string id = "c") {
  return {DirectionalClearance{{0, 1, 0}, value}, fk_pose(c, kTheta), std::move(id)};
}

}  // namespace

TEST_SUITE("montecarlo") {
  TEST_CASE("sampling the joint error") {
    std::mt19937_64 rng(71);
    for (double x : sample_joint_error(JointErrorModel(0.0, 2.0), 7, rng)) CHECK(x == 0.0);

    const JointErrorModel m(0.0045, 2.0);
    double s2 = 0;
    std::size_t n = 0, in_ball = 0;
    for (int t = 0; t < 1000000 / 7; ++t) {
      const auto d = sample_joint_error(m, 7, rng);
      double r2 = 0;
      for (double x : d) {
        s2 += x * x;
        r2 += x * x;
        ++n;
      }
      if (r2 <= m.c()) ++in_ball;
    }
    CHECK(std::sqrt(s2 / n) == doctest::Approx(0.0045).epsilon(0.01));
    // ‖δΘ‖²/σ² ~ χ²₇, and the ball is ‖δΘ‖² <= (2σ)².
    const double expected = oracle::chi2_cdf_odd(7, 4.0);
    CHECK(static_cast<double>(in_ball) / (1000000 / 7) == doctest::Approx(expected).epsilon(0.01));
  }

  TEST_CASE("chi-square oracle sanity") {
    CHECK(oracle::chi2_cdf_odd(1, 1.0) == doctest::Approx(0.6826894921370859));
    CHECK(oracle::chi2_cdf_odd(3, 7.814727903251178) == doctest::Approx(0.95));
  }

  TEST_CASE("scenario validation") {
    const auto d = reference::desk7();
    CHECK_THROWS_AS(clearance(d, 0.0).validate(), Error);
    Scenario peg{PegInHole{0.1, 0.010, 0.012}, fk_pose(d, kTheta), "peg"};
    CHECK_THROWS_AS(peg.validate(), Error);
    peg.kind = PegInHole{0.1, 0.024, 0.010};
    CHECK(peg.clearance() == doctest::Approx(0.007));
  }

  TEST_CASE("trivial rates") {
    const auto d = reference::desk7();
    const auto r = run_trials(d, kTheta, clearance(d, 0.001), JointErrorModel(0.0, 2.0), 200, 1);
    CHECK(r.rate == 1.0);
    const auto z = run_trials(d, kTheta, clearance(d, 1e-12), JointErrorModel(0.0045, 2.0), 200, 1);
    CHECK(z.rate == 0.0);
  }

  TEST_CASE("wilson interval") {
    const auto w = wilson_interval(50, 100, 1.96);
    CHECK(w.lo == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(w.hi == doctest::Approx(0.5962).epsilon(1e-3));
    const auto all = wilson_interval(10, 10, 3.0);
    CHECK(all.hi == doctest::Approx(1.0));
    CHECK(all.lo < 1.0);
  }

  TEST_CASE("sweep shapes and determinism") {
    const auto d = reference::desk7();
    const JointErrorModel m(0.0045, 2.0);
    const auto one = sweep(d, {kTheta}, {clearance(d, 0.005)}, m, 100, 9);
    REQUIRE(one.size() == 1);
    const auto direct = run_trials(d, kTheta, clearance(d, 0.005), m, 100, 9);
    CHECK(one[0].result.successes == direct.successes);

    const auto two = sweep(d, {kTheta, kTheta}, {clearance(d, 0.004), clearance(d, 0.006)}, m, 300, 9);
    REQUIRE(two.size() == 4);
    CHECK(two[0].result.successes == two[2].result.successes);
    CHECK(two[1].result.successes == two[3].result.successes);
    CHECK(two[0].result.successes <= two[1].result.successes);

    std::ostringstream a, b;
    write_sweep_csv(a, two);
    write_sweep_csv(b, sweep(d, {kTheta, kTheta}, {clearance(d, 0.004), clearance(d, 0.006)}, m, 300, 9));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("solution_index,scenario_id,clearance_m,trials,successes,rate,wilson_lo,wilson_hi\n", 0) == 0);
    CHECK(a.str().find("0.0040000000000000001") != std::string::npos);
  }

  TEST_CASE("peg tip error never exceeds its bound") {
    std::mt19937_64 rng(72);
    std::normal_distribution<double> g(0.0, 0.05);
    const auto d = reference::desk7();
    for (int t = 0; t < 10000; ++t) {
      const Pose desired = fk_pose(d, oracle::random_theta(d, rng));
      const auto c = oracle::random_sphere(4, 1.0, rng);
      const Pose realized{desired.position + Vec3{g(rng), g(rng), g(rng)},
                          UnitQuaternion::normalized({c[0], c[1], c[2], c[3]})};
      CHECK(peg_tip_error(realized, desired, 0.10) <= peg_tip_error_bound(realized, desired, 0.10));
    }
  }

  TEST_CASE("linearization audit stays under one percent on desk7") {
    const auto d = reference::desk7();
    const auto a = audit_linearization(d, kTheta, {0, 1, 0}, JointErrorModel(0.0045, 2.0), 20000, 3);
    CHECK(a.trials == 20000);
    CHECK(a.in_ball > 0);
    CHECK(a.fraction() < 0.01);
  }

  TEST_CASE("peg sweep on desk7: best IK rate falls as clearance shrinks") {
    const auto d = reference::desk7();
    const JointErrorModel m(0.0045, 2.0);
    const Pose target{{0.6165, 0.077, 0.4025}, UnitQuaternion::normalized({0.6839, 0.7174, 0.0799, -0.1064})};
    TaskMetric tm;
    tm.lambda = 0.10;
    IKRequest req;
    req.target = target;
    req.seed = 1;
    const auto r = robust_ik(d, m, tm, req);
    std::vector<Scenario> grid;
    for (int dp = 4; dp <= 18; ++dp) grid.push_back({PegInHole{0.10, 0.024, dp * 1e-3}, target, ""});
    const auto rows = sweep(d, {r.report.entries[r.report.best_index].theta}, grid, m, 1000, 5);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& a = rows[i - 1].result;
      const auto& b = rows[i].result;
      CHECK(b.rate <= a.rate + 3.0 * std::max(binomial_sigma(a), binomial_sigma(b)));
    }
    // d_P = 10 mm leaves 7 mm clearance.
    CHECK(rows[6].clearance == doctest::Approx(0.007));
    CHECK(rows[6].result.rate > 0.8);
  }
}
