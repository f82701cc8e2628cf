#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "linkcharge/control.hpp"
#include "linkcharge/error.hpp"
#include "linkcharge/io.hpp"
#include "linkcharge/moduli.hpp"
#include "linkcharge/potential.hpp"
#include "linkcharge/service.hpp"
#include "linkcharge/stabilizer.hpp"
#include "linkcharge/verify.hpp"

namespace {

using namespace linkcharge;

struct Options {
  std::string linkage;
  std::string charges;
  std::string config;
  std::string target;
  std::optional<double> b2;
  std::optional<double> b4;
  std::size_t steps = 100;
  std::size_t grid = 0;
  std::uint64_t seed = verify::kDefaultSeed;
  std::string format = "json";
  std::string out;
  int port = 8765;
  bool all_interfaces = false;
  std::string suite;
};

void write_output(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + o.out);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

Linkage require_linkage(const Options& o) {
  if (o.linkage.empty()) throw Error(ErrorCode::InvalidArgument, "--linkage is required");
  return linkage_from_json(parse_json_argument(o.linkage));
}

// Vertices, or {"b2": .., "b4": ..} reconstructed on the linkage.
Configuration configuration_spec(const json& j, const std::optional<Linkage>& l) {
  if (j.is_object() && j.contains("b2") && j.contains("b4")) {
    if (!l) throw Error(ErrorCode::InvalidArgument, "(b2, b4) input needs --linkage");
    const auto& b2 = j.at("b2");
    const auto& b4 = j.at("b4");
    if (!b2.is_number() || !b4.is_number()) throw Error(ErrorCode::InvalidArgument, "b2 and b4 must be numbers");
    Reconstruction r = reconstruct_pentagon(*l, b2.get<double>(), b4.get<double>());
    if (r.status != ShapeStatus::StrictlyConvex)
      throw Error(ErrorCode::NotConvex, "configuration not strictly convex");
    return r.configuration;
  }
  return configuration_from_json(j);
}

std::optional<Linkage> optional_linkage(const Options& o) {
  if (o.linkage.empty()) return std::nullopt;
  return require_linkage(o);
}

Configuration start_configuration(const Options& o, const std::optional<Linkage>& l) {
  if (!o.config.empty()) {
    if (o.b2 || o.b4) throw Error(ErrorCode::InvalidArgument, "give either --config or --b2/--b4");
    return configuration_spec(parse_json_argument(o.config), l);
  }
  if (o.b2 && o.b4) return configuration_spec(json{{"b2", *o.b2}, {"b4", *o.b4}}, l);
  throw Error(ErrorCode::InvalidArgument, "a configuration is required (--config or --b2 with --b4)");
}

// [q1, q2, q4] or {"q1", "q2", "q4"}; all ones when absent.
FixedCharges fixed_charges(const Options& o) {
  if (o.charges.empty()) return {};
  const json j = parse_json_argument(o.charges);
  auto number = [](const json& v) {
    if (!v.is_number()) throw Error(ErrorCode::InvalidArgument, "fixed charges must be numbers");
    return v.get<double>();
  };
  if (j.is_array() && j.size() == 3) return {number(j[0]), number(j[1]), number(j[2])};
  if (j.is_object() && j.contains("q1") && j.contains("q2") && j.contains("q4"))
    return {number(j.at("q1")), number(j.at("q2")), number(j.at("q4"))};
  throw Error(ErrorCode::InvalidArgument, "fixed charges must be [q1, q2, q4] or {\"q1\", \"q2\", \"q4\"}");
}

// Five vertex charges, or {"q1", "q2", "q4", "s", "t"}.
ChargeVector pentagon_charge_spec(const Options& o) {
  if (o.charges.empty()) throw Error(ErrorCode::InvalidArgument, "--charges is required");
  const json j = parse_json_argument(o.charges);
  if (j.is_object()) {
    for (const char* key : {"q1", "q2", "q4", "s", "t"})
      if (!j.contains(key) || !j.at(key).is_number())
        throw Error(ErrorCode::InvalidArgument, std::string("charge object needs numeric \"") + key + "\"");
    return pentagon_charges(j.at("q1").get<double>(), j.at("q2").get<double>(), j.at("q4").get<double>(),
                            j.at("s").get<double>(), j.at("t").get<double>());
  }
  return charges_from_json(j);
}

void cmd_minimize(const Options& o) {
  const Linkage l = require_linkage(o);
  const ChargeVector q = pentagon_charge_spec(o);
  const Minimum m = global_min_convex(l, q);
  if (o.format == "csv") return write_output(o, minimum_csv(m));
  json out = to_json(m);
  if (o.grid > 0) {
    const UniquenessReport r = verify_unique_min(l, q, o.grid);
    out["uniqueness"] = {{"grid", r.grid},
                         {"grid_minima", r.grid_minima},
                         {"local_minima", r.local_minima},
                         {"max_component_extrema", r.max_component_extrema}};
  }
  write_output(o, out.dump(2));
}

void cmd_stabilize(const Options& o) {
  const std::optional<Linkage> given = optional_linkage(o);
  const Configuration p = start_configuration(o, given);
  if (p.size() == 4) {
    const QuadStabilization s = stabilize_quad(given ? *given : linkage_of(p), p);
    if (o.format == "csv") {
      std::string out = "t,residual\n" + format_number(s.t) + "," + format_number(s.residual) + "\n";
      return write_output(o, out);
    }
    return write_output(o, to_json(s).dump(2));
  }
  if (given && !realizes(*given, canonicalize(p.vertices), 1e-6))
    throw Error(ErrorCode::InvalidArgument, "configuration does not realize the linkage");
  const FixedCharges f = fixed_charges(o);
  const StabilizingSolution s = stabilize_pentagon(p, f.q1, f.q2, f.q4);
  if (o.format == "csv") return write_output(o, stabilization_csv(s));
  write_output(o, to_json(s).dump(2));
}

void cmd_navigate(const Options& o) {
  const std::optional<Linkage> given = optional_linkage(o);
  const Configuration from = start_configuration(o, given);
  if (o.target.empty()) throw Error(ErrorCode::InvalidArgument, "--target is required");
  const Configuration to = configuration_spec(parse_json_argument(o.target), given);
  const Linkage l = given ? *given : linkage_of(from);
  const FixedCharges f = fixed_charges(o);
  const Trajectory t = navigate(l, from, to, f, o.steps);
  write_output(o, o.format == "csv" ? trajectory_csv(t) : to_json(t, l, f).dump(2));
  std::fprintf(stderr, "navigate: %zu frames, %zu retries, endpoint error %s\n", t.steps.size(), t.retries,
               format_number(t.endpoint_error).c_str());
}

int cmd_verify(const Options& o) {
  std::vector<std::string> names = verify::suite_names();
  if (!o.suite.empty()) names = {o.suite};
  std::string text;
  json report = json::array();
  bool all = true;
  for (const auto& name : names) {
    const verify::SuiteResult r = verify::run_suite(name, o.seed);
    all = all && r.passed();
    text += r.line() + "\n";
    report.push_back({{"criterion", r.criterion},
                      {"suite", r.name},
                      {"passed", r.passed()},
                      {"checks", r.checks},
                      {"failures", r.failures},
                      {"detail", r.detail}});
  }
  write_output(o, o.format == "json" ? json{{"seed", o.seed}, {"suites", report}}.dump(2) : text);
  return all ? 0 : 1;
}

void cmd_serve(const Options& o) {
  Server server;
  const unsigned port = server.bind(static_cast<std::uint16_t>(o.port), o.all_interfaces);
  std::fprintf(stderr, "listening on port %u\n", port);
  server.run();
}

int fail(ErrorCode code, const std::string& message) {
  const json e{{"error", {{"code", std::string(to_string(code))}, {"message", message}}}};
  std::cerr << e.dump() << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Charged polygonal linkages: minima, stabilizing charges and navigation"};
  app.require_subcommand(1);

  auto add_io = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    c->add_option("--out", o.out, "Write output to a file instead of stdout");
  };
  auto add_configuration = [&](CLI::App* c) {
    c->add_option("--linkage", o.linkage, "Side lengths: JSON list, {\"sides\": [...]}, or a file");
    c->add_option("--config", o.config, "Vertices [[x, y], ...], {\"b2\", \"b4\"}, or a file");
    c->add_option("--b2", o.b2, "Diagonal |A1A3|");
    c->add_option("--b4", o.b4, "Diagonal |A3A5|");
    c->add_option("--charges", o.charges, "Fixed charges [q1, q2, q4] (default all 1)");
  };

  CLI::App* minimize = app.add_subcommand("minimize", "Unique convex minimum of the potential");
  minimize->add_option("--linkage", o.linkage, "Side lengths: JSON list, {\"sides\": [...]}, or a file");
  minimize->add_option("--charges", o.charges, "Five vertex charges, or {\"q1\", \"q2\", \"q4\", \"s\", \"t\"}");
  minimize->add_option("--grid", o.grid, "Also scan a grid x grid lattice for other minima");
  add_io(minimize);

  CLI::App* stabilize = app.add_subcommand("stabilize", "Charges that make a convex configuration critical");
  add_configuration(stabilize);
  add_io(stabilize);

  CLI::App* nav = app.add_subcommand("navigate", "Steer between two convex configurations");
  add_configuration(nav);
  nav->add_option("--target", o.target, "Target configuration, same forms as --config");
  nav->add_option("--steps", o.steps, "Steps along the charge segment");
  add_io(nav);

  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the verification suites");
  verify_cmd->add_option("--suite", o.suite, "Run one suite only")->check(CLI::IsMember(verify::suite_names()));
  verify_cmd->add_option("--seed", o.seed, "Base seed");
  verify_cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "text"}));
  verify_cmd->add_option("--out", o.out, "Write the report to a file");

  CLI::App* serve = app.add_subcommand("serve", "Line-delimited JSON control service over TCP");
  serve->add_option("--port", o.port, "TCP port, 0 picks a free one")->check(CLI::Range(0, 65535));
  serve->add_flag("--all-interfaces", o.all_interfaces, "Listen on every interface instead of loopback");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(ErrorCode::InvalidArgument, e.what());
  }

  if (verify_cmd->parsed() && verify_cmd->count("--format") == 0) o.format = "text";
  try {
    if (minimize->parsed()) cmd_minimize(o);
    if (stabilize->parsed()) cmd_stabilize(o);
    if (nav->parsed()) cmd_navigate(o);
    if (verify_cmd->parsed()) return cmd_verify(o);
    if (serve->parsed()) cmd_serve(o);
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail(ErrorCode::InvalidArgument, e.what());
  }
  return 0;
}
