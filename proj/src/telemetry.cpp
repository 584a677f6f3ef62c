#include "perchsim/telemetry.hpp"

#include <charconv>
#include <ostream>
#include <sstream>

namespace perch {

std::string formatNumber(double v)
{
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string_view toString(EventKind k)
{
  switch (k) {
    case EventKind::Signal: return "signal";
    case EventKind::ModeChange: return "mode_change";
    case EventKind::PerchTargetEdge: return "eta_d_edge";
    case EventKind::Attach: return "attach";
    case EventKind::Release: return "release";
    case EventKind::ForcedDetach: return "forced_detach";
    case EventKind::WallRecontact: return "wall_recontact";
    case EventKind::GroundContact: return "ground_contact";
    case EventKind::NumericalAbort: return "numerical_abort";
  }
  return "?";
}

const std::vector<std::string>& csvColumns()
{
  static const std::vector<std::string> cols = {
      "t",      "px",     "py",     "pz",    "vx",    "vy",    "vz",    "pitch",
      "qw",     "qx",     "qy",     "qz",    "wx",    "wy",    "wz",    "mode",
      "attached", "eta_d", "eta",   "T1",    "T2",    "T3",    "T4",    "Tcmd1",
      "Tcmd2",  "Tcmd3",  "Tcmd4",  "nu1",   "nu2",   "nu3",   "nu4",   "dhatx",
      "dhaty",  "dhatz",  "lambda_hat", "lambda_true", "eR_norm", "ep_norm", "sat_any"};
  return cols;
}

void writeCsvHeader(std::ostream& out)
{
  const auto& cols = csvColumns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

void writeCsvRow(std::ostream& out, const LogRecord& r)
{
  auto num = [&out](double v) { out << ',' << formatNumber(v); };
  out << formatNumber(r.t);
  for (int i = 0; i < 3; ++i) num(r.position(i));
  for (int i = 0; i < 3; ++i) num(r.velocity(i));
  num(r.pitch);
  for (int i = 0; i < 4; ++i) num(r.quaternion(i));
  for (int i = 0; i < 3; ++i) num(r.body_rate(i));
  out << ',' << toString(r.mode) << ',' << (r.attached ? 1 : 0);
  num(r.perch_target);
  num(r.perch);
  for (int i = 0; i < kNumRotors; ++i) num(r.thrust(i));
  for (int i = 0; i < kNumRotors; ++i) num(r.thrust_cmd(i));
  for (int i = 0; i < kNumRotors; ++i) num(r.tilt(i));
  for (int i = 0; i < 3; ++i) num(r.disturbance_estimate(i));
  num(r.contact_estimate);
  num(r.contact_true);
  num(r.attitude_error);
  num(r.position_error);
  out << ',' << (r.saturated ? 1 : 0) << '\n';
}

void writeCsv(std::ostream& out, const std::vector<LogRecord>& logs)
{
  writeCsvHeader(out);
  for (const auto& r : logs) writeCsvRow(out, r);
}

std::string toCsv(const std::vector<LogRecord>& logs)
{
  std::ostringstream os;
  writeCsv(os, logs);
  return os.str();
}

void writeEventsCsv(std::ostream& out, const std::vector<Event>& events)
{
  out << "t,kind,detail\n";
  for (const auto& e : events)
    out << formatNumber(e.t) << ',' << toString(e.kind) << ',' << e.detail << '\n';
}

std::uint64_t fnv1a(std::string_view bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace perch
