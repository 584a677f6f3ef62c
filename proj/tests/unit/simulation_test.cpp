#include "perchsim/report.hpp"
#include "perchsim/simulation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

using namespace perch;

namespace {

ScenarioConfig withVariant(Variant v)
{
  ScenarioConfig c;
  c.variant = v;
  return c;
}

bool hasEvent(const RunResult& r, EventKind kind, const std::string& detail = {})
{
  return std::any_of(r.events.begin(), r.events.end(), [&](const Event& e) {
    return e.kind == kind && (detail.empty() || e.detail == detail);
  });
}

}  // namespace

TEST(Simulation, HoverRegulationWithoutEvents)
{
  ScenarioConfig cfg;
  cfg.events.clear();
  cfg.duration = 10.0;
  cfg.plan.approach_start = 100.0;
  const RunResult run = runScenario(cfg);
  ASSERT_EQ(run.status, RunStatus::Completed);
  EXPECT_EQ(run.logs.size(), 10001u);
  for (const auto& r : run.logs) {
    ASSERT_LT(r.position_error, 0.01) << r.t;
    ASSERT_EQ(r.mode, Mode::F);
  }
  EXPECT_TRUE(run.events.empty());
}

TEST(Simulation, ProposedPerchesAndReleases)
{
  const RunResult run = runScenario(ScenarioConfig{});
  const Metrics& m = run.metrics;
  EXPECT_TRUE(m.perch_achieved);
  EXPECT_TRUE(m.unperch_achieved);
  ASSERT_TRUE(m.min_clearance);
  EXPECT_GT(*m.min_clearance, 0.0);
  EXPECT_TRUE(m.failure.empty());
  for (const char* change : {"F->F2P", "F2P->P", "P->P2F", "P2F->F"})
    EXPECT_TRUE(hasEvent(run, EventKind::ModeChange, change)) << change;
  EXPECT_TRUE(hasEvent(run, EventKind::PerchTargetEdge, "0->1"));
  EXPECT_TRUE(hasEvent(run, EventKind::PerchTargetEdge, "1->0"));
  EXPECT_TRUE(hasEvent(run, EventKind::Attach));
  EXPECT_TRUE(hasEvent(run, EventKind::Release) || hasEvent(run, EventKind::ForcedDetach));
  EXPECT_FALSE(hasEvent(run, EventKind::WallRecontact));
}

TEST(Simulation, EventsCarryTickTimestamps)
{
  const RunResult run = runScenario(ScenarioConfig{});
  for (const auto& e : run.events) {
    const double ticks = e.t / run.config.dt;
    EXPECT_NEAR(ticks, std::round(ticks), 1e-6) << toString(e.kind);
  }
}

TEST(Simulation, LogsAreConsistentWithAttachment)
{
  const RunResult run = runScenario(ScenarioConfig{});
  // The attach tick logs the pre-integration state; the pose is locked from the next row on.
  int attached_rows = 0;
  for (std::size_t i = 2; i < run.logs.size(); ++i) {
    const auto& r = run.logs[i];
    if (!r.attached) continue;
    ++attached_rows;
    EXPECT_LE(r.gap, 1e-3);
    if (run.logs[i - 1].attached && run.logs[i - 2].attached) {
      ASSERT_EQ(r.position, run.logs[i - 1].position) << r.t;
      ASSERT_EQ(r.velocity, Vec3::Zero()) << r.t;
    }
  }
  EXPECT_GT(attached_rows, 1000);
}

TEST(Simulation, RejectionEstimatorFrozenOutsideFreeFlight)
{
  const RunResult run = runScenario(ScenarioConfig{});
  for (std::size_t i = 1; i < run.logs.size(); ++i) {
    const auto& prev = run.logs[i - 1];
    const auto& cur = run.logs[i];
    if (prev.mode != Mode::F && cur.mode != Mode::F)
      ASSERT_EQ(cur.disturbance_estimate, prev.disturbance_estimate) << cur.t;
  }
}

TEST(Simulation, NoTransitionsDropsMore)
{
  const RunResult proposed = runScenario(ScenarioConfig{});
  const RunResult b = runScenario(withVariant(Variant::NoTransitionsRho0));
  ASSERT_TRUE(b.metrics.unperch_achieved);
  EXPECT_GT(b.metrics.z_drop, proposed.metrics.z_drop);
  for (const auto& r : b.logs) ASSERT_TRUE(r.mode == Mode::F || r.mode == Mode::P);
}

TEST(Simulation, DeterministicCsv)
{
  const std::string a = toCsv(runScenario(ScenarioConfig{}).logs);
  const std::string b = toCsv(runScenario(ScenarioConfig{}).logs);
  EXPECT_EQ(a, b);
}

TEST(Simulation, GoldenHashGuardsTickOrder)
{
  std::ifstream in(PERCHSIM_GOLDEN_FILE);
  std::string golden;
  in >> golden;
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0')
       << fnv1a(toCsv(runScenario(ScenarioConfig{}).logs));
  EXPECT_EQ(hash.str(), golden);
}

TEST(Simulation, NoiseIsSeeded)
{
  ScenarioConfig cfg;
  cfg.duration = 2.0;
  cfg.position_noise = 1e-3;
  cfg.velocity_noise = 1e-3;
  cfg.seed = 7;
  const std::string a = toCsv(runScenario(cfg).logs);
  EXPECT_EQ(a, toCsv(runScenario(cfg).logs));
  cfg.seed = 8;
  EXPECT_NE(a, toCsv(runScenario(cfg).logs));
}

TEST(Simulation, GroundContactEndsRun)
{
  ScenarioConfig cfg;
  cfg.events.clear();
  DisturbanceWindow push;
  push.start = 0.5;
  push.end = 100.0;
  push.value.force = Vec3(0, 0, -200.0);
  cfg.disturbances = {push};
  const RunResult run = runScenario(cfg);
  EXPECT_EQ(run.status, RunStatus::GroundContact);
  EXPECT_EQ(run.metrics.failure, "ground_contact");
  EXPECT_TRUE(hasEvent(run, EventKind::GroundContact));
  EXPECT_LT(run.logs.back().t, cfg.duration);
}

TEST(Simulation, NumericalAbortKeepsPartialLogs)
{
  ScenarioConfig cfg;
  cfg.events.clear();
  DisturbanceWindow blow;
  blow.start = 1.0;
  blow.end = 2.0;
  blow.value.angular_accel = Vec3(1e308, 1e308, 0);
  cfg.disturbances = {blow};
  const RunResult run = runScenario(cfg);
  EXPECT_EQ(run.status, RunStatus::NumericalAbort);
  EXPECT_EQ(run.metrics.failure, "numerical_abort");
  EXPECT_TRUE(hasEvent(run, EventKind::NumericalAbort));
  EXPECT_NEAR(run.logs.back().t, 1.0, 1e-9);
}

TEST(Simulation, InvalidConfigRejected)
{
  ScenarioConfig cfg;
  cfg.dt = 0.5;
  EXPECT_THROW(runScenario(cfg), ScenarioError);
}

TEST(Simulation, StepwiseMatchesBatch)
{
  ScenarioConfig cfg;
  cfg.duration = 1.0;
  Simulation sim(cfg);
  int ticks = 0;
  while (sim.step()) ++ticks;
  EXPECT_EQ(ticks, 1001);
  EXPECT_EQ(toCsv(sim.logs()), toCsv(runScenario(cfg).logs));
}

TEST(Compare, IdenticalRunsHaveZeroDeltas)
{
  const RunResult run = runScenario(ScenarioConfig{});
  const ComparisonReport rep = compare(run, run);
  ASSERT_FALSE(rep.deltas.empty());
  for (const auto& d : rep.deltas)
    if (!std::isnan(d.a)) EXPECT_EQ(d.delta, 0.0) << d.name;
}

TEST(Compare, AblationOrderings)
{
  const RunResult proposed = runScenario(ScenarioConfig{});
  const ComparisonReport b = compareAblation(proposed, runScenario(withVariant(Variant::NoTransitionsRho0)));
  ASSERT_EQ(b.checks.size(), 1u);
  EXPECT_NE(b.checks[0].description.find("z_drop"), std::string::npos);
  EXPECT_TRUE(b.allPassed());
  const ComparisonReport c = compareAblation(proposed, runScenario(withVariant(Variant::NoTransitionsRho05)));
  EXPECT_NE(c.checks[0].description.find("min_clearance"), std::string::npos);
  EXPECT_TRUE(c.allPassed());
}

TEST(Report, MetricsJsonUsesNullForMissing)
{
  ScenarioConfig cfg;
  cfg.events.clear();
  cfg.duration = 0.5;
  const nlohmann::json j = toJson(runScenario(cfg).metrics);
  EXPECT_TRUE(j["min_clearance"].is_null());
  EXPECT_TRUE(j["failure"].is_null());
  EXPECT_EQ(j["perch_achieved"], false);
  EXPECT_EQ(j["saturation_fraction"]["P"], 0.0);
}

TEST(Telemetry, CsvHeaderOrder)
{
  std::ostringstream out;
  writeCsvHeader(out);
  EXPECT_EQ(out.str(),
            "t,px,py,pz,vx,vy,vz,pitch,qw,qx,qy,qz,wx,wy,wz,mode,attached,eta_d,eta,"
            "T1,T2,T3,T4,Tcmd1,Tcmd2,Tcmd3,Tcmd4,nu1,nu2,nu3,nu4,dhatx,dhaty,dhatz,"
            "lambda_hat,lambda_true,eR_norm,ep_norm,sat_any\n");
  LogRecord r;
  std::ostringstream row;
  writeCsvRow(row, r);
  const std::string line = row.str();
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 38);
}

TEST(Telemetry, NumbersRoundTrip)
{
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 1e300}) EXPECT_EQ(std::stod(formatNumber(v)), v);
}
