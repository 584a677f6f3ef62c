#include "perchsim/scenario.hpp"

#include "perchsim/telemetry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace perch {

void ScenarioConfig::validate() const
{
  auto check = [](bool ok, const char* what) {
    if (!ok) throw ScenarioError(what);
  };
  check(dt > 0.0 && dt <= 0.01, "dt must lie in (0, 0.01]");
  check(duration > 0.0, "duration must be positive");
  check(integral_bound > 0.0, "gains.integral_bound must be positive");
  check(position_noise >= 0.0 && velocity_noise >= 0.0, "noise levels must be non-negative");
  for (std::size_t i = 1; i < events.size(); ++i)
    check(events[i - 1].time <= events[i].time, "events must be sorted by time");
  for (const auto& d : disturbances)
    check(d.start <= d.end && d.value.force.allFinite() && d.value.angular_accel.allFinite(),
          "disturbance windows need start <= end and finite values");
  for (const Mat3* k : {&rejection_gain, &contact_gain})
    check((*k - k->transpose()).norm() <= 1e-12 && k->llt().info() == Eigen::Success,
          "estimator gains must be symmetric positive definite");
  try {
    vehicle.validate();
    wall.validate();
    gains.validate();
    switching.validate();
    plan.validate();
    buildAllocation(vehicle.rotors);
    const auto sp = perchSetpoints(wall, plan);
    minAccelRotation(sp[0].rotation, sp[1].rotation, Vec3::Zero(), Vec3::Zero(), 1.0);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }
}

Disturbances ScenarioConfig::disturbanceAt(double t) const
{
  Disturbances total;
  for (const auto& d : disturbances) {
    if (t >= d.start && t < d.end) {
      total.force += d.value.force;
      total.angular_accel += d.value.angular_accel;
    }
  }
  return total;
}

namespace {

using Tokens = std::vector<std::string>;

double toDouble(const std::string& s, const std::string& key)
{
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ScenarioError("key '" + key + "': '" + s + "' is not a finite number");
  return v;
}

void requireCount(const Tokens& t, std::size_t n, const std::string& key)
{
  if (t.size() != n)
    throw ScenarioError("key '" + key + "' expects " + std::to_string(n) + " value(s), got " +
                        std::to_string(t.size()));
}

double scalar(const Tokens& t, const std::string& key)
{
  requireCount(t, 1, key);
  return toDouble(t[0], key);
}

Vec3 vec3(const Tokens& t, const std::string& key)
{
  requireCount(t, 3, key);
  return {toDouble(t[0], key), toDouble(t[1], key), toDouble(t[2], key)};
}

/// 3 values: diagonal, 9 values: row-major full matrix.
Mat3 mat3(const Tokens& t, const std::string& key)
{
  if (t.size() == 3) return vec3(t, key).asDiagonal();
  if (t.size() != 9) throw ScenarioError("key '" + key + "' expects 3 (diagonal) or 9 values");
  Mat3 m;
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = toDouble(t[i], key);
  return m;
}

std::string fmt(double v) { return formatNumber(v); }
std::string fmt(const Vec3& v) { return fmt(v.x()) + " " + fmt(v.y()) + " " + fmt(v.z()); }
std::string fmt(const Mat3& m)
{
  if (m.isDiagonal(0.0)) return fmt(Vec3(m.diagonal()));
  std::string out;
  for (int i = 0; i < 9; ++i) out += (i ? " " : "") + fmt(m(i / 3, i % 3));
  return out;
}

struct Field {
  std::string key;
  std::string shape;
  std::string description;
  std::function<void(ScenarioConfig&, const Tokens&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <typename Member>
Field scalarField(std::string key, std::string desc, Member member)
{
  return {key, "real", std::move(desc),
          [member](ScenarioConfig& c, const Tokens& t, const std::string& k) {
            member(c) = scalar(t, k);
          },
          [member](const ScenarioConfig& c) { return fmt(member(c)); }};
}

template <typename Member>
Field vecField(std::string key, std::string desc, Member member)
{
  return {key, "real[3]", std::move(desc),
          [member](ScenarioConfig& c, const Tokens& t, const std::string& k) {
            member(c) = vec3(t, k);
          },
          [member](const ScenarioConfig& c) { return fmt(member(c)); }};
}

template <typename Member>
Field matField(std::string key, std::string desc, Member member)
{
  return {key, "real[3] | real[9]", std::move(desc),
          [member](ScenarioConfig& c, const Tokens& t, const std::string& k) {
            member(c) = mat3(t, k);
          },
          [member](const ScenarioConfig& c) { return fmt(member(c)); }};
}

#define PERCH_MEMBER(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<Field>& fields()
{
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"variant", "name",
                 "controller variant: proposed | no-transitions-rho0 | no-transitions-rho0.5 | "
                 "no-freeze",
                 [](ScenarioConfig& c, const Tokens& t, const std::string& k) {
                   requireCount(t, 1, k);
                   try {
                     c.variant = parseVariant(t[0]);
                   } catch (const std::invalid_argument& e) {
                     throw ScenarioError(e.what());
                   }
                 },
                 [](const ScenarioConfig& c) { return std::string(toString(c.variant)); }});
    f.push_back(scalarField("dt", "control and physics step (s), in (0, 0.01]", PERCH_MEMBER(dt)));
    f.push_back(scalarField("duration", "simulated time (s)", PERCH_MEMBER(duration)));
    f.push_back({"seed", "u64", "measurement-noise seed",
                 [](ScenarioConfig& c, const Tokens& t, const std::string& k) {
                   requireCount(t, 1, k);
                   std::uint64_t v = 0;
                   const auto* end = t[0].data() + t[0].size();
                   auto [ptr, ec] = std::from_chars(t[0].data(), end, v);
                   if (ec != std::errc() || ptr != end)
                     throw ScenarioError("key 'seed': '" + t[0] + "' is not an unsigned integer");
                   c.seed = v;
                 },
                 [](const ScenarioConfig& c) { return std::to_string(c.seed); }});

    f.push_back(scalarField("vehicle.mass", "total mass (kg)", PERCH_MEMBER(vehicle.mass)));
    f.push_back(matField("vehicle.inertia", "body inertia (kg m^2)", PERCH_MEMBER(vehicle.inertia)));
    f.push_back(scalarField("vehicle.gravity", "gravitational acceleration (m/s^2)",
                            PERCH_MEMBER(vehicle.gravity)));
    f.push_back({"vehicle.arm_length", "real", "rotor distance from the yaw axis, X layout (m)",
                 [](ScenarioConfig& c, const Tokens& t, const std::string& k) {
                   c.vehicle.rotors =
                       RotorGeometry::symmetricX(scalar(t, k), c.vehicle.rotors.drag_ratio);
                 },
                 [](const ScenarioConfig& c) {
                   return fmt(c.vehicle.rotors.position[0].head<2>().norm());
                 }});
    f.push_back(scalarField("vehicle.drag_ratio", "rotor yaw moment per unit thrust (m)",
                            PERCH_MEMBER(vehicle.rotors.drag_ratio)));
    f.push_back(scalarField("vehicle.max_thrust", "per-rotor thrust limit (N)",
                            PERCH_MEMBER(vehicle.max_thrust)));
    f.push_back(scalarField("vehicle.rotor_time_constant", "thrust lag (s)",
                            PERCH_MEMBER(vehicle.rotor_time_constant)));
    f.push_back(scalarField("vehicle.max_tilt_rate", "tilt servo rate limit (rad/s)",
                            PERCH_MEMBER(vehicle.max_tilt_rate)));
    f.push_back(scalarField("vehicle.perch_servo_travel", "magnet servo full-travel time (s)",
                            PERCH_MEMBER(vehicle.perch_servo_travel)));

    f.push_back(vecField("wall.point", "perch site on the wall plane (m)", PERCH_MEMBER(wall.point)));
    f.push_back(vecField("wall.normal", "unit wall normal pointing into free space",
                         PERCH_MEMBER(wall.normal)));
    f.push_back(scalarField("wall.magnet_capacity", "magnet pull-off force (N)",
                            PERCH_MEMBER(wall.magnet_capacity)));
    f.push_back(scalarField("wall.magnet_range", "near-field attraction range (m)",
                            PERCH_MEMBER(wall.magnet_range)));
    f.push_back(scalarField("wall.attach_tolerance", "gap at which the magnet latches (m)",
                            PERCH_MEMBER(wall.attach_tolerance)));
    f.push_back(vecField("wall.interface_offset", "magnet face in the body frame (m)",
                         PERCH_MEMBER(wall.interface_offset)));

    f.push_back(matField("gains.position", "position gain (1/s^2)", PERCH_MEMBER(gains.position)));
    f.push_back(matField("gains.velocity", "velocity gain (1/s)", PERCH_MEMBER(gains.velocity)));
    f.push_back(matField("gains.attitude", "attitude gain (1/s^2)", PERCH_MEMBER(gains.attitude)));
    f.push_back(matField("gains.body_rate", "body-rate gain (1/s)", PERCH_MEMBER(gains.body_rate)));
    f.push_back(matField("gains.attitude_integral", "attitude integral gain (1/s^3)",
                         PERCH_MEMBER(gains.attitude_integral)));
    f.push_back(scalarField("gains.integral_bound", "attitude integral clamp (rad s)",
                            PERCH_MEMBER(integral_bound)));

    f.push_back(scalarField("switch.perch_threshold", "contact force declaring a perch (N)",
                            PERCH_MEMBER(switching.perch_threshold)));
    f.push_back(scalarField("switch.unperch_threshold", "contact force allowing release (N)",
                            PERCH_MEMBER(switching.unperch_threshold)));
    f.push_back(scalarField("switch.perch_fraction", "weight share carried while perched",
                            PERCH_MEMBER(switching.perch_fraction)));

    f.push_back(scalarField("plan.standoff", "standoff face-to-wall distance (m)",
                            PERCH_MEMBER(plan.standoff)));
    f.push_back(scalarField("plan.penetration", "contact setpoint depth behind the wall (m)",
                            PERCH_MEMBER(plan.penetration)));
    f.push_back(scalarField("plan.approach_duration", "hover -> standoff (s)",
                            PERCH_MEMBER(plan.approach_duration)));
    f.push_back(scalarField("plan.insertion_duration", "standoff -> contact (s)",
                            PERCH_MEMBER(plan.insertion_duration)));
    f.push_back(scalarField("plan.retreat_duration", "contact -> standoff (s)",
                            PERCH_MEMBER(plan.retreat_duration)));
    f.push_back(scalarField("plan.approach_start", "start of the approach segment (s)",
                            PERCH_MEMBER(plan.approach_start)));
    f.push_back(vecField("plan.hover_position", "initial hover position (m)",
                         PERCH_MEMBER(plan.hover_position)));
    f.push_back({"plan.hover_yaw", "real", "initial hover heading (rad)",
                 [](ScenarioConfig& c, const Tokens& t, const std::string& k) {
                   c.plan.hover_rotation = rotZ(scalar(t, k));
                 },
                 [](const ScenarioConfig& c) {
                   return fmt(std::atan2(c.plan.hover_rotation(1, 0), c.plan.hover_rotation(0, 0)));
                 }});

    f.push_back(matField("estimator.rejection_gain", "disturbance observer gain (1/s)",
                         PERCH_MEMBER(rejection_gain)));
    f.push_back(matField("estimator.contact_gain", "contact-force observer gain (1/s)",
                         PERCH_MEMBER(contact_gain)));
    f.push_back(scalarField("noise.position", "measured position std dev (m)",
                            PERCH_MEMBER(position_noise)));
    f.push_back(scalarField("noise.velocity", "measured velocity std dev (m/s)",
                            PERCH_MEMBER(velocity_noise)));
    return f;
  }();
  return table;
}

#undef PERCH_MEMBER

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Tokens split(const std::string& s)
{
  Tokens out;
  std::istringstream is(s);
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

std::string signalName(OperatorSignal s)
{
  return s == OperatorSignal::PerchRequest ? "S_f2p" : "S_p2f";
}

}  // namespace

ScenarioConfig parseScenario(std::istream& in)
{
  ScenarioConfig cfg;
  cfg.events.clear();
  std::map<std::string, const Field*> by_key;
  for (const auto& f : fields()) by_key[f.key] = &f;

  std::set<std::string> seen;
  bool header = false;
  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";

    if (!header) {
      const Tokens t = split(line);
      if (t.size() != 2 || t[0] != "perchsim-scenario")
        throw ScenarioError(where + "expected header 'perchsim-scenario " +
                            std::to_string(kScenarioFormatVersion) + "'");
      if (t[1] != std::to_string(kScenarioFormatVersion))
        throw ScenarioError(where + "unsupported scenario format version " + t[1]);
      header = true;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ScenarioError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const Tokens values = split(line.substr(eq + 1));
    try {
      if (key == "event") {
        requireCount(values, 2, key);
        OperatorEvent ev{toDouble(values[0], key), OperatorSignal::PerchRequest};
        if (values[1] == "S_p2f")
          ev.signal = OperatorSignal::UnperchRequest;
        else if (values[1] != "S_f2p")
          throw ScenarioError("event signal must be S_f2p or S_p2f");
        cfg.events.push_back(ev);
        continue;
      }
      if (key == "disturbance") {
        requireCount(values, 8, key);
        DisturbanceWindow d;
        d.start = toDouble(values[0], key);
        d.end = toDouble(values[1], key);
        for (int i = 0; i < 3; ++i) {
          d.value.force(i) = toDouble(values[2 + i], key);
          d.value.angular_accel(i) = toDouble(values[5 + i], key);
        }
        cfg.disturbances.push_back(d);
        continue;
      }
      const auto it = by_key.find(key);
      if (it == by_key.end()) throw ScenarioError("unknown key '" + key + "'");
      if (!seen.insert(key).second) throw ScenarioError("duplicate key '" + key + "'");
      it->second->set(cfg, values, key);
    } catch (const ScenarioError& e) {
      throw ScenarioError(where + e.what());
    }
  }
  if (!header) throw ScenarioError("empty scenario: missing 'perchsim-scenario' header");
  cfg.validate();
  return cfg;
}

ScenarioConfig loadScenario(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  return parseScenario(in);
}

void writeScenario(std::ostream& out, const ScenarioConfig& cfg)
{
  out << "perchsim-scenario " << kScenarioFormatVersion << "\n";
  for (const auto& f : fields()) out << f.key << " = " << f.get(cfg) << "\n";
  for (const auto& e : cfg.events)
    out << "event = " << fmt(e.time) << " " << signalName(e.signal) << "\n";
  for (const auto& d : cfg.disturbances)
    out << "disturbance = " << fmt(d.start) << " " << fmt(d.end) << " " << fmt(d.value.force)
        << " " << fmt(d.value.angular_accel) << "\n";
}

void printSchema(std::ostream& out)
{
  const ScenarioConfig defaults;
  out << "perchsim-scenario " << kScenarioFormatVersion << "\n\n"
      << "First non-comment line is the header above. '#' starts a comment.\n"
      << "Each further line is 'key = value...'. Unlisted keys keep their default.\n\n";
  for (const auto& f : fields())
    out << f.key << "  (" << f.shape << ", default " << f.get(defaults) << ")\n    "
        << f.description << "\n";
  out << "event  (real time, S_f2p | S_p2f; repeatable, time-sorted)\n"
      << "    operator perch / unperch request\n"
      << "disturbance  (start end fx fy fz ax ay az; repeatable)\n"
      << "    world force (N) and body angular acceleration (rad/s^2) on [start, end)\n"
      << "\nWhen a file lists no events the run has none.\n";
}

}  // namespace perch
