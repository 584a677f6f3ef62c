#include "perchsim/scenario.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace perch;

namespace {

ScenarioConfig parse(const std::string& text)
{
  std::istringstream in(text);
  return parseScenario(in);
}

std::string dump(const ScenarioConfig& cfg)
{
  std::ostringstream out;
  writeScenario(out, cfg);
  return out.str();
}

void expectError(const std::string& text, const std::string& fragment)
{
  try {
    parse(text);
    FAIL() << "accepted: " << text;
  } catch (const ScenarioError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(Scenario, DefaultFileMatchesBuiltInDefaults)
{
  const ScenarioConfig file = loadScenario(PERCHSIM_SOURCE_DIR "/scenarios/default.scn");
  EXPECT_EQ(dump(file), dump(ScenarioConfig{}));
}

TEST(Scenario, RoundTrip)
{
  ScenarioConfig cfg;
  cfg.variant = Variant::NoFreeze;
  cfg.dt = 2e-3;
  cfg.seed = 12345678901234ULL;
  cfg.vehicle.mass = 1.7;
  cfg.vehicle.inertia << 0.01, 0.001, 0, 0.001, 0.02, 0, 0, 0, 0.03;
  cfg.wall.magnet_capacity = 33.3;
  cfg.plan.hover_rotation = rotZ(0.25);
  cfg.events = {{1.5, OperatorSignal::PerchRequest}, {2.5, OperatorSignal::UnperchRequest}};
  DisturbanceWindow d;
  d.start = 1.0;
  d.end = 2.0;
  d.value.force = Vec3(1, 2, 3);
  d.value.angular_accel = Vec3(0.1, 0.2, 0.3);
  cfg.disturbances = {d};
  cfg.position_noise = 0.001;
  const std::string text = dump(cfg);
  EXPECT_EQ(dump(parse(text)), text);
}

TEST(Scenario, CommentsBlankLinesAndPartialFiles)
{
  const ScenarioConfig cfg = parse(
      "# leading comment\n\n"
      "perchsim-scenario 1   # header\n"
      "dt = 0.002\n"
      "variant = no-transitions-rho0.5\n"
      "event = 1 S_f2p\n"
      "event = 2 S_p2f\n");
  EXPECT_EQ(cfg.dt, 0.002);
  EXPECT_EQ(cfg.variant, Variant::NoTransitionsRho05);
  ASSERT_EQ(cfg.events.size(), 2u);
  EXPECT_EQ(cfg.events[1].signal, OperatorSignal::UnperchRequest);
  EXPECT_EQ(cfg.duration, ScenarioConfig{}.duration);
}

TEST(Scenario, NoEventsMeansNone)
{
  EXPECT_TRUE(parse("perchsim-scenario 1\n").events.empty());
}

TEST(Scenario, SchemaErrors)
{
  expectError("", "header");
  expectError("dt = 0.001\n", "header");
  expectError("perchsim-scenario 2\n", "version");
  expectError("perchsim-scenario 1\nbogus = 1\n", "unknown key");
  expectError("perchsim-scenario 1\ndt = 0.001\ndt = 0.001\n", "duplicate");
  expectError("perchsim-scenario 1\ndt = fast\n", "not a finite number");
  expectError("perchsim-scenario 1\ndt = 0.001 0.002\n", "expects 1");
  expectError("perchsim-scenario 1\nwall.point = 1 2\n", "expects 3");
  expectError("perchsim-scenario 1\ndt = 0.02\n", "dt");
  expectError("perchsim-scenario 1\nduration = 0\n", "duration");
  expectError("perchsim-scenario 1\nevent = 2 S_f2p\nevent = 1 S_p2f\n", "sorted");
  expectError("perchsim-scenario 1\nevent = 2 jump\n", "S_f2p");
  expectError("perchsim-scenario 1\nvariant = fancy\n", "variant");
  expectError("perchsim-scenario 1\nseed = -3\n", "seed");
  expectError("perchsim-scenario 1\nline without equals\n", "key = value");
  expectError("perchsim-scenario 1\nvehicle.mass = -1\n", "mass");
  expectError("perchsim-scenario 1\nwall.normal = 1 1 0\n", "normal");
  expectError("perchsim-scenario 1\nswitch.perch_fraction = 1\n", "fraction");
  expectError("perchsim-scenario 1\nestimator.rejection_gain = 1 -1 1\n", "positive definite");
  expectError("perchsim-scenario 1\nvehicle.arm_length = 0\n", "");
  expectError("perchsim-scenario 1\nline 3 = 1\n", "line 2");
}

TEST(Scenario, MissingFile)
{
  EXPECT_THROW(loadScenario("/nonexistent/scenario.scn"), ScenarioError);
}

TEST(Scenario, DisturbanceSchedule)
{
  const ScenarioConfig cfg = parse(
      "perchsim-scenario 1\n"
      "disturbance = 1 2 1 0 0 0 0 0\n"
      "disturbance = 1.5 3 0 2 0 0 0 0.5\n");
  EXPECT_EQ(cfg.disturbanceAt(0.5).force, Vec3::Zero());
  EXPECT_EQ(cfg.disturbanceAt(1.0).force, Vec3(1, 0, 0));
  EXPECT_EQ(cfg.disturbanceAt(1.7).force, Vec3(1, 2, 0));
  EXPECT_EQ(cfg.disturbanceAt(2.0).force, Vec3(0, 2, 0));
  EXPECT_EQ(cfg.disturbanceAt(2.0).angular_accel, Vec3(0, 0, 0.5));
}

TEST(Scenario, SchemaListsEveryWrittenKey)
{
  std::ostringstream schema;
  printSchema(schema);
  std::istringstream written(dump(ScenarioConfig{}));
  std::string line;
  std::getline(written, line);
  while (std::getline(written, line)) {
    const std::string key = line.substr(0, line.find(' '));
    EXPECT_NE(schema.str().find(key + "  ("), std::string::npos) << key;
  }
}
