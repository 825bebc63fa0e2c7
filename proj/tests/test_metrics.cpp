#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "gpf/errors.hpp"
#include "gpf/metrics.hpp"
#include "oracles.hpp"

using namespace gpf;

namespace {

void expect_close(double got, double want, double rel, const std::string& what) {
  if (want == 0.0)
    EXPECT_LE(std::abs(got), 1e-9) << what;
  else
    EXPECT_LE(std::abs(got - want), rel * std::abs(want)) << what << ": got " << got << " want " << want;
}

}  // namespace

TEST(Metrics, AnalyticTrajectoriesAt1kHz) {
  const auto cases = oracle::analytic_trajectories();
  ASSERT_GE(cases.size(), 5u);
  for (const auto& a : cases) {
    const auto log = oracle::sample(a, 1000.0);
    const MetricsReport m = compute_metrics(log);
    expect_close(m.t_tot, a.expected.t_tot, 1e-12, a.name + " t_tot");
    expect_close(m.d_acc, a.expected.d_acc, 0.01, a.name + " d_acc");
    expect_close(m.c_chg, a.expected.c_chg, 0.01, a.name + " c_chg");
    expect_close(m.j_acc, a.expected.j_acc, 0.01, a.name + " j_acc");
    expect_close(m.r_obs, a.expected.r_obs, 0.01, a.name + " r_obs");
  }
}

TEST(Metrics, HalvingTheIntervalBarelyMoves) {
  for (const auto& a : oracle::analytic_trajectories()) {
    const MetricsReport coarse = compute_metrics(oracle::sample(a, 50.0));
    const MetricsReport fine = compute_metrics(oracle::sample(a, 100.0));
    for (auto f : {&MetricsReport::t_tot, &MetricsReport::d_acc, &MetricsReport::c_chg,
                   &MetricsReport::j_acc, &MetricsReport::r_obs}) {
      const double c = coarse.*f, d = fine.*f;
      EXPECT_LE(std::abs(c - d), 0.02 * std::abs(d) + 1e-12) << a.name;
    }
  }
}

TEST(Metrics, InvariantUnderRigidMotion) {
  for (const auto& a : oracle::analytic_trajectories()) {
    auto log = oracle::sample(a, 100.0);
    const MetricsReport base = compute_metrics(log);
    const double phi = 1.1, c = std::cos(phi), s = std::sin(phi);
    for (auto& p : log) {
      const double x = p.x, y = p.y;
      p.x = 3.0 + c * x - s * y;
      p.y = -7.0 + s * x + c * y;
      p.heading = wrap_angle(p.heading + phi);
    }
    const MetricsReport moved = compute_metrics(log);
    EXPECT_NEAR(moved.d_acc, base.d_acc, 1e-9 * base.d_acc + 1e-12);
    EXPECT_EQ(moved.c_chg, base.c_chg);
    EXPECT_EQ(moved.j_acc, base.j_acc);
    EXPECT_EQ(moved.r_obs, base.r_obs);
  }
}

TEST(Metrics, SpeedFloorCapsCurvature) {
  std::vector<TrajectorySample> log;
  for (int i = 0; i < 11; ++i) {
    TrajectorySample s;
    s.t = 0.1 * i;
    s.v = 0.0;
    s.w = i < 5 ? 0.0 : 0.5;  // turning on the spot from t = 0.5
    s.r_min = 1.0;
    log.push_back(s);
  }
  const MetricsReport m = compute_metrics(log);
  // k jumps from 0 to 0.5 / 0.05 = 10 once; the total variation is about 10.
  EXPECT_TRUE(std::isfinite(m.c_chg));
  EXPECT_NEAR(m.c_chg * m.t_tot, 10.0, 1.0);
}

TEST(Metrics, RejectsBadLogs) {
  std::vector<TrajectorySample> log(3);
  EXPECT_THROW(compute_metrics(log), InvalidInput);
  log.resize(5);
  for (int i = 0; i < 5; ++i) {
    log[i].t = i;
    log[i].r_min = 1.0;
  }
  EXPECT_NO_THROW(compute_metrics(log));
  log[2].t = 2.5;
  EXPECT_THROW(compute_metrics(log), InvalidInput);
  log[2].t = 2.0;
  log[3].r_min = 0.0;
  EXPECT_THROW(compute_metrics(log), InvalidInput);
}

TEST(Metrics, TurnReversalsCountedNearAPoint) {
  std::vector<TrajectorySample> log;
  for (int i = 0; i < 30; ++i) {
    TrajectorySample s;
    s.t = 0.2 * i;
    s.x = 0.01 * (i % 3);
    s.w = (i % 2 == 0) ? 1.0 : -1.0;
    log.push_back(s);
  }
  EXPECT_EQ(max_local_turn_reversals(log), 29);
  // Spread out along a line, no window of 1 m sees more than a few flips.
  for (int i = 0; i < 30; ++i) log[static_cast<std::size_t>(i)].x = 2.0 * i;
  EXPECT_EQ(max_local_turn_reversals(log), 0);
  // Tiny yaw rates are ignored.
  for (auto& s : log) {
    s.x = 0.0;
    s.w *= 1e-5;
  }
  EXPECT_EQ(max_local_turn_reversals(log), 0);
}

TEST(Metrics, SummaryOverSuccessfulRuns) {
  std::vector<MetricsReport> r(3);
  r[0].d_acc = 10.0;
  r[0].success = true;
  r[1].d_acc = 14.0;
  r[1].success = true;
  r[2].d_acc = 100.0;  // failed, ignored
  const MetricsSummary s = summarize(r);
  EXPECT_EQ(s.runs, 3);
  EXPECT_EQ(s.successes, 2);
  EXPECT_DOUBLE_EQ(s.mean.d_acc, 12.0);
  EXPECT_DOUBLE_EQ(s.stddev.d_acc, std::sqrt(8.0));
  EXPECT_FALSE(s.mean.success);
}

TEST(Metrics, TrajectoryCsvRoundTrip) {
  const auto log = oracle::sample(oracle::analytic_trajectories()[1], 20.0);
  std::stringstream buf;
  write_trajectory_csv(buf, log);
  const std::string text = buf.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), kTrajectoryHeader);
  const auto back = read_trajectory_csv(buf);
  ASSERT_EQ(back.size(), log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    EXPECT_EQ(back[i].t, log[i].t);
    EXPECT_EQ(back[i].x, log[i].x);
    EXPECT_EQ(back[i].heading, log[i].heading);
    EXPECT_TRUE(std::isnan(back[i].cost));
  }
  std::istringstream bad("t,x\n1,2\n");
  EXPECT_THROW(read_trajectory_csv(bad), ConfigError);
}
