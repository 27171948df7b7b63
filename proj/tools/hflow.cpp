#include "hflow/acceptance.hpp"
#include "hflow/hflow.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <set>

using hflow::io::json;

namespace {

struct RunConfig {
  std::string algebra_name;
  hflow::LieBracket mu;
  std::optional<hflow::GeometricStructure> gamma;
  hflow::FlowSpec flow;
  double t_end = 1.0;
  hflow::IntegratorControls controls;
  std::string csv, jsonl;
};

json default_config() {
  const hflow::IntegratorControls c;
  return {{"algebra", "n_xy"},
          {"params", json::array({1.0, 1.0})},
          {"structure", "default"},
          {"flow", "laplacian_g2"},
          {"t_end", 1.0},
          {"integrator",
           {{"dt", c.dt},
            {"rtol", c.rtol},
            {"atol", c.atol},
            {"dt_min", c.dt_min},
            {"blowup_threshold", c.blowup_factor},
            {"stride", c.stride},
            {"adaptive", c.adaptive}}},
          {"outputs", {{"csv", "trajectory.csv"}, {"jsonl", ""}}}};
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw hflow::ConfigError("unknown key '" + it.key() + "' in " + where);
}

RunConfig parse_config(const json& j, bool need_flow_run) {
  if (!j.is_object()) throw hflow::ConfigError("config must be a JSON object");
  reject_unknown(j, {"algebra", "params", "structure", "flow", "t_end", "integrator", "outputs"}, "config");
  RunConfig rc;
  try {
    const json& alg = j.at("algebra");
    std::vector<double> params;
    if (j.contains("params")) params = j.at("params").get<std::vector<double>>();
    std::optional<hflow::GeometricStructure> default_structure;
    if (alg.is_string()) {
      const auto entry = hflow::catalog_entry(alg.get<std::string>(), params);
      rc.algebra_name = entry.name;
      rc.mu = entry.mu;
      default_structure = entry.gamma;
    } else {
      rc.algebra_name = "inline";
      rc.mu = hflow::io::bracket_from_json(alg);
    }
    const json st = j.value("structure", json("default"));
    if (st.is_string()) {
      if (st.get<std::string>() != "default") throw hflow::ConfigError("structure must be \"default\" or an object");
      if (!default_structure) throw hflow::ConfigError("inline algebras need an explicit structure");
      rc.gamma = *default_structure;
    } else {
      rc.gamma = hflow::io::structure_from_json(st);
    }
    rc.flow = hflow::flow_by_name(j.at("flow").get<std::string>());
    rc.t_end = j.value("t_end", 1.0);
    if (!(rc.t_end >= 0.0)) throw hflow::ConfigError("t_end must be >= 0");
    if (j.contains("integrator")) {
      const json& in = j.at("integrator");
      reject_unknown(in, {"dt", "rtol", "atol", "dt_min", "blowup_threshold", "stride", "adaptive"}, "integrator");
      auto& c = rc.controls;
      c.dt = in.value("dt", c.dt);
      c.rtol = in.value("rtol", c.rtol);
      c.atol = in.value("atol", c.atol);
      c.dt_min = in.value("dt_min", c.dt_min);
      c.blowup_factor = in.value("blowup_threshold", c.blowup_factor);
      c.stride = in.value("stride", c.stride);
      c.adaptive = in.value("adaptive", c.adaptive);
    }
    rc.controls.validate();
    if (j.contains("outputs")) {
      const json& out = j.at("outputs");
      reject_unknown(out, {"csv", "jsonl"}, "outputs");
      rc.csv = out.value("csv", "");
      rc.jsonl = out.value("jsonl", "");
    }
  } catch (const json::exception& e) {
    throw hflow::ConfigError(std::string("config: ") + e.what());
  }
  if (need_flow_run && rc.csv.empty() && rc.jsonl.empty()) throw hflow::ConfigError("outputs: give a csv or jsonl path");
  if (rc.mu.space().dim() != rc.gamma->dim() + rc.mu.space().q)
    throw hflow::ConfigError("structure dimension does not match dim p of the algebra");
  return rc;
}

int cmd_catalog() {
  int bad = 0;
  for (const auto& e : hflow::catalog()) {
    const auto adm = hflow::check_admissible(e.mu, e.gamma);
    const bool ok = adm.h1_ok && adm.h3_ok && adm.h4_ok;
    if (!ok) ++bad;
    std::cout << e.name << "  (q=" << e.mu.space().q << ", n=" << e.mu.space().n << ", "
              << hflow::to_string(e.gamma.kind()) << ")  " << e.summary << "\n    flows:";
    if (e.flows.empty()) std::cout << " none";
    for (const auto& f : e.flows) std::cout << ' ' << f;
    std::cout << "\n    admissible: " << (ok ? "yes" : "NO") << " (jacobi " << adm.jacobi << ", h2 " << adm.h2 << ")\n";
  }
  return bad == 0 ? 0 : 3;
}

int cmd_run(const std::string& path) {
  const RunConfig rc = parse_config(hflow::io::read_json_file(path), true);
  const auto br = hflow::integrate_bracket_flow(rc.mu, *rc.gamma, rc.flow, rc.t_end, rc.controls);
  const auto ge = hflow::integrate_geometric_flow(rc.mu, *rc.gamma, rc.flow, rc.t_end, rc.controls);
  if (!rc.csv.empty()) hflow::io::write_file(rc.csv, hflow::io::trajectory_csv(br));
  if (!rc.jsonl.empty()) hflow::io::write_file(rc.jsonl, hflow::io::trajectory_jsonl(br));
  const auto eq = hflow::check_equivalence(br, ge, rc.mu, *rc.gamma);
  json report{{"algebra", rc.algebra_name},
              {"flow", rc.flow.name},
              {"samples", br.samples.size()},
              {"t_final", br.samples.empty() ? 0.0 : br.samples.back().t},
              {"termination", hflow::to_string(br.reason)},
              {"geometric_termination", hflow::to_string(ge.reason)},
              {"equivalence",
               {{"gamma_deviation", eq.gamma_deviation}, {"mu_deviation", eq.mu_deviation}, {"pass", eq.pass}}}};
  if (!br.message.empty()) report["message"] = br.message;
  if (br.reason == hflow::Termination::blowup) {
    const auto b = hflow::blowup_bounds(br, rc.flow);
    report["blowup"] = {{"T_estimate", b.T_estimate},
                        {"fitted_rate", b.fitted_rate},
                        {"lower_rate", b.lower_rate},
                        {"best_constant", b.best_constant},
                        {"q_times_gap", b.q_times_gap}};
  }
  std::cout << report.dump(2) << '\n';
  return 0;
}

int cmd_soliton(const std::string& path) {
  const RunConfig rc = parse_config(hflow::io::read_json_file(path), false);
  const auto cert = hflow::soliton_solve(rc.mu, *rc.gamma, rc.flow);
  json j = hflow::io::certificate_to_json(cert);
  j["algebra"] = rc.algebra_name;
  j["flow"] = rc.flow.name;
  const std::string why = rc.flow.applicable(rc.mu, *rc.gamma);
  j["flow_applicable"] = why.empty();
  if (!why.empty()) j["flow_note"] = why;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_verify(const std::string& filter) {
  const auto chosen = hflow::acceptance::select(filter);
  if (chosen.empty()) throw hflow::ConfigError("no acceptance criterion matches '" + filter + "'");
  int failed = 0;
  for (const auto& c : chosen) {
    const auto r = hflow::acceptance::run(c);
    if (!r.pass) ++failed;
    std::cout << hflow::acceptance::format(r) << std::endl;
  }
  std::cout << (chosen.size() - failed) << "/" << chosen.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hflow: bracket flows on homogeneous spaces"};
  app.require_subcommand(0, 1);
  bool print_config = false;
  app.add_flag("--print-config", print_config, "Print a run config with every default filled in");

  auto* catalog = app.add_subcommand("catalog", "List built-in algebras and check them");
  std::string run_path, soliton_path, filter;
  auto* run = app.add_subcommand("run", "Integrate bracket and geometric flows from a config");
  run->add_option("config", run_path, "JSON config")->required();
  auto* soliton = app.add_subcommand("soliton", "Print the algebraic soliton certificate for a config");
  soliton->add_option("config", soliton_path, "JSON config")->required();
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--filter", filter, "Criterion number or name substring");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (print_config) {
      std::cout << default_config().dump(2) << '\n';
      return 0;
    }
    if (*catalog) return cmd_catalog();
    if (*run) return cmd_run(run_path);
    if (*soliton) return cmd_soliton(soliton_path);
    if (*verify) return cmd_verify(filter);
    std::cout << app.help();
    return 2;
  } catch (const hflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const hflow::PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << '\n';
    return 3;
  } catch (const hflow::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
