#include "linkcharge/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "linkcharge/error.hpp"

namespace linkcharge {

namespace {

json number_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be an array of numbers");
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be an array of numbers");
    const double x = e.get<double>();
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be finite");
    v.push_back(x);
  }
  return v;
}

void append_row(std::string& out, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += format_number(row[i]);
  }
  out += '\n';
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const Linkage& l) { return number_array(l.sides()); }

json to_json(const Configuration& p) {
  json a = json::array();
  for (const auto& v : p.vertices) a.push_back({v.x, v.y});
  return a;
}

json to_json(const ChargeVector& q) { return number_array(q.values()); }

json to_json(const DiagonalCoords& x) { return number_array({x.begin(), x.end()}); }

json to_json(const FixedCharges& f) { return {{"q1", f.q1}, {"q2", f.q2}, {"q4", f.q4}}; }

json to_json(const Minimum& m) {
  return {{"configuration", to_json(m.configuration)},
          {"E", m.E},
          {"diagonals", to_json(diagonals(m.configuration))},
          {"b2", m.b2},
          {"b4", m.b4},
          {"residual", m.residual}};
}

json to_json(const StabilizingSolution& s) {
  return {{"s", s.s},
          {"t", s.t},
          {"residual", s.residual},
          {"other_root", s.other_root},
          {"charges", to_json(s.charges)},
          {"coeffs", {{"A", s.coeffs.A}, {"B", s.coeffs.B}, {"C", s.coeffs.C}}}};
}

json to_json(const QuadStabilization& s) { return {{"t", s.t}, {"residual", s.residual}}; }

json to_json(const Trajectory& t, const Linkage& l, const FixedCharges& fixed) {
  json steps = json::array();
  for (const auto& s : t.steps)
    steps.push_back({{"s", s.control.s}, {"t", s.control.t}, {"E", s.E}, {"vertices", to_json(s.configuration)}});
  return {{"meta",
           {{"linkage", to_json(l)},
            {"fixed_charges", to_json(fixed)},
            {"steps", t.steps.size()},
            {"retries", t.retries},
            {"endpoint_error", t.endpoint_error}}},
          {"steps", steps}};
}

json to_json(const PolarCurve& c) {
  json pts = json::array();
  for (const auto& p : c.points) pts.push_back({{"k", p.k}, {"x2", p.x2}, {"E", p.E}, {"on_boundary", p.on_boundary}});
  json comps = json::array();
  for (const auto& [b, e] : c.components) comps.push_back({b, e});
  return {{"points", pts}, {"components", comps}};
}

Linkage linkage_from_json(const json& j) {
  if (j.is_object()) {
    if (!j.contains("sides")) throw Error(ErrorCode::InvalidArgument, "linkage object needs \"sides\"");
    return Linkage(numbers(j.at("sides"), "sides"));
  }
  return Linkage(numbers(j, "linkage"));
}

Configuration configuration_from_json(const json& j) {
  const json& v = j.is_object() && j.contains("vertices") ? j.at("vertices") : j;
  if (!v.is_array()) throw Error(ErrorCode::InvalidArgument, "configuration must be a list of [x, y] pairs");
  Configuration c;
  for (const auto& p : v) {
    const auto xy = numbers(p, "vertex");
    if (xy.size() != 2) throw Error(ErrorCode::InvalidArgument, "vertex must be [x, y]");
    c.vertices.push_back({xy[0], xy[1]});
  }
  if (c.size() < 3) throw Error(ErrorCode::InvalidArgument, "configuration needs at least three vertices");
  return c;
}

ChargeVector charges_from_json(const json& j) { return ChargeVector(numbers(j, "charges")); }

json parse_json_argument(const std::string& text_or_path) {
  json j = json::parse(text_or_path, nullptr, false);
  if (!j.is_discarded()) return j;
  std::ifstream in(text_or_path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "not JSON and not a readable file: " + text_or_path);
  std::stringstream ss;
  ss << in.rdbuf();
  j = json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::InvalidArgument, "file does not hold valid JSON: " + text_or_path);
  return j;
}

std::string minimum_csv(const Minimum& m) {
  std::string out = "E,b2,b4,residual";
  for (std::size_t i = 1; i <= m.configuration.size(); ++i) out += ",x" + std::to_string(i) + ",y" + std::to_string(i);
  out += '\n';
  std::vector<double> row{m.E, m.b2, m.b4, m.residual};
  for (const auto& v : m.configuration.vertices) row.insert(row.end(), {v.x, v.y});
  append_row(out, row);
  return out;
}

std::string stabilization_csv(const StabilizingSolution& s) {
  std::string out = "s,t,residual,A,B,C\n";
  append_row(out, {s.s, s.t, s.residual, s.coeffs.A, s.coeffs.B, s.coeffs.C});
  return out;
}

std::string trajectory_csv(const Trajectory& t) {
  std::string out = "step,s,t,E,x1,y1,x2,y2,x3,y3,x4,y4,x5,y5\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& s = t.steps[i];
    out += std::to_string(i) + ',';
    std::vector<double> row{s.control.s, s.control.t, s.E};
    for (const auto& v : s.configuration.vertices) row.insert(row.end(), {v.x, v.y});
    append_row(out, row);
  }
  return out;
}

std::string polar_curve_csv(const PolarCurve& c) {
  std::string out = "k,x2,E,on_boundary\n";
  for (const auto& p : c.points) {
    out += format_number(p.k) + ',' + format_number(p.x2) + ',' + format_number(p.E) + ',' +
           (p.on_boundary ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace linkcharge
