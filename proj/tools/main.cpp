// Command-line front end: validate models, synthesize initial and
// follow-up deployments, and analyze platform degradation.
//
// Exit codes: 0 success, 1 constraint violations, 2 I/O or schema errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "failop/failop.hpp"

namespace {

using failop::Json;

enum : int { kExitOk = 0, kExitViolations = 1, kExitError = 2 };

struct Options {
  std::string model_path;
  std::string config_path;
  std::vector<std::string> isolate;
  int max_faults = 3;
  std::string format = "text";
  std::string out_path;
  std::string dot_path;
  std::string smtlib_dir;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw failop::SchemaError("cannot open '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw failop::SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
  return doc;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw failop::SchemaError("cannot write '" + path + "'");
  out << content;
}

failop::SystemModel load_model_or_exit(const std::string& path, const std::string& format,
                                       std::vector<failop::Violation>* violations_out = nullptr) {
  failop::SystemModel model = failop::parse_model(read_json_file(path));
  auto violations = failop::validate_model(model);
  if (violations_out) {
    *violations_out = violations;
    return model;
  }
  if (!violations.empty()) {
    Json v = failop::violations_to_json(violations);
    if (format == "json")
      std::cout << Json{{"error", "model invalid"}, {"violations", v}}.dump(2) << "\n";
    else
      std::cerr << failop::render_violations_text(v);
    std::exit(kExitViolations);
  }
  return model;
}

void emit(const Json& doc, const std::string& format, const std::string& rendered_text) {
  if (format == "json")
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << rendered_text;
}

void dump_smtlib_scripts(const std::string& dir, const std::string& stem,
                         const failop::SolveRequest& request,
                         const std::vector<std::pair<int, bool>>& targets) {
  std::filesystem::create_directories(dir);
  for (const auto& [target, sat] : targets) {
    (void)sat;
    std::string name = stem.empty() ? "" : stem + "_";
    write_file(dir + "/" + name + "target_" + std::to_string(target) + ".smt2",
               failop::emit_smtlib(request, target));
  }
}

int cmd_validate(const Options& opt) {
  std::vector<failop::Violation> violations;
  failop::SystemModel model = load_model_or_exit(opt.model_path, opt.format, &violations);
  Json v = failop::violations_to_json(violations);
  if (opt.format == "json") {
    Json doc;
    doc["valid"] = violations.empty();
    doc["violations"] = v;
    if (violations.empty()) {
      doc["clusters"] = Json::array();
      for (const auto& sc : model.clusters) {
        Json cj;
        cj["id"] = sc.id;
        cj["members"] = sc.members;
        cj["asil"] = sc.asil;
        cj["fail_op"] = sc.fail_op;
        cj["sum_wcets_us"] = sc.sum_wcets;
        cj["min_ftt_us"] = sc.min_ftt;
        cj["hot_standby_slave_req"] = sc.hot_standby_slave_req;
        cj["prio_points_master"] = sc.prio_master();
        cj["prio_points_hot_slave"] = sc.prio_hot_slave();
        doc["clusters"].push_back(cj);
      }
    }
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << failop::render_violations_text(v);
    if (violations.empty()) {
      std::cout << "model: " << model.aswcs.size() << " aswcs, " << model.features.size()
                << " features, " << model.clusters.size() << " clusters, "
                << model.central_count() << " central nodes\n";
      for (const auto& sc : model.clusters) {
        std::cout << "  " << sc.id << " {";
        for (std::size_t i = 0; i < sc.members.size(); ++i)
          std::cout << (i ? "," : "") << sc.members[i];
        std::cout << "} asil=" << sc.asil << " fail_op=" << sc.fail_op
                  << " wcets=" << sc.sum_wcets << "us prio=" << sc.prio_master() << "/"
                  << sc.prio_hot_slave() << "\n";
      }
    }
  }
  return violations.empty() ? kExitOk : kExitViolations;
}

int run_solve_like(const Options& opt, bool transition) {
  failop::SystemModel model = load_model_or_exit(opt.model_path, opt.format);

  failop::SolveRequest request;
  request.model = &model;

  if (transition) {
    failop::ConfigDocument prev = failop::parse_config_document(read_json_file(opt.config_path));
    request.scenario = prev.scenario;
    for (const auto& node : opt.isolate) {
      const failop::ExecutionNode* e = model.find_node(node);
      if (!e || e->kind != failop::NodeKind::central)
        throw failop::SchemaError("--isolate: unknown central node '" + node + "'");
      if (!request.scenario.isolated_nodes.insert(node).second)
        throw failop::SchemaError("--isolate: node '" + node + "' is already isolated");
    }
    request.scenario.fault_count = prev.scenario.fault_count + 1;
    request.previous = std::move(prev.config);
  }

  failop::SolveResult result = failop::solve(request);
  std::cerr << "solved in " << result.stats.elapsed_us << " us, " << result.stats.nodes_explored
            << " search nodes\n";

  auto violations = failop::check_config(model, request.scenario, result.config,
                                         request.previous ? &*request.previous : nullptr);
  Json report = failop::deployment_report(model, request.scenario, result.config, violations,
                                          &result.checked_targets);
  emit(report, opt.format, failop::render_deployment_text(report));

  if (!opt.out_path.empty()) {
    failop::ConfigDocument doc{request.scenario, result.config};
    write_file(opt.out_path, failop::config_document_to_json(doc).dump(2) + "\n");
  }
  if (!opt.smtlib_dir.empty())
    dump_smtlib_scripts(opt.smtlib_dir, "", request, result.checked_targets);
  return violations.empty() ? kExitOk : kExitViolations;
}

int cmd_pag(const Options& opt) {
  failop::SystemModel model = load_model_or_exit(opt.model_path, opt.format);
  failop::Pag pag = failop::build_pag(model, opt.max_faults);
  Json doc = failop::pag_to_json(pag);
  emit(doc, opt.format, failop::render_pag_text(doc));
  if (!opt.dot_path.empty()) write_file(opt.dot_path, failop::to_dot(pag));
  return kExitOk;
}

int cmd_analyze(const Options& opt) {
  failop::SystemModel model = load_model_or_exit(opt.model_path, opt.format);

  std::optional<failop::DeploymentConfig> initial;
  if (!opt.config_path.empty())
    initial = failop::parse_config_document(read_json_file(opt.config_path)).config;

  failop::Pag pag;
  try {
    pag = failop::analyze(model, opt.max_faults, initial);
  } catch (const failop::ConfigError& e) {
    Json v = failop::violations_to_json(e.violations);
    if (opt.format == "json")
      std::cout << Json{{"error", e.what()}, {"violations", v}}.dump(2) << "\n";
    else
      std::cerr << e.what() << "\n" << failop::render_violations_text(v);
    return kExitViolations;
  }

  Json report = failop::degradation_report(model, pag);
  emit(report, opt.format, failop::render_pag_text(report));
  if (!opt.dot_path.empty()) write_file(opt.dot_path, failop::to_dot(pag));
  if (!opt.smtlib_dir.empty()) {
    for (std::size_t vi = 0; vi < pag.vertices.size(); ++vi) {
      const failop::PagVertex& v = pag.vertices[vi];
      failop::SolveRequest request;
      request.model = &model;
      request.scenario = failop::vertex_scenario(pag, v);
      if (const failop::PagVertex* parent = failop::analysis_parent(pag, vi))
        request.previous = parent->result->config;
      dump_smtlib_scripts(opt.smtlib_dir, v.id, request, v.result->checked_targets);
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deployment synthesis and degradation analysis for fail-operational platforms"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* cmd, bool with_model = true) {
    if (with_model)
      cmd->add_option("model", opt.model_path, "model JSON file")->required();
    cmd->add_option("--format", opt.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  };

  auto* validate = app.add_subcommand("validate", "check a model against the type invariants");
  add_common(validate);

  auto* solve = app.add_subcommand("solve", "compute an optimal initial deployment");
  add_common(solve);
  solve->add_option("--out", opt.out_path, "write the deployment as a config JSON file");
  solve->add_option("--smtlib-dir", opt.smtlib_dir, "dump one SMT-LIB script per probed target");

  auto* transition =
      app.add_subcommand("transition", "compute the follow-up deployment after isolations");
  add_common(transition);
  transition->add_option("--config", opt.config_path, "previous deployment (config JSON)")
      ->required();
  transition->add_option("--isolate", opt.isolate, "node id to isolate (repeatable)")->required();
  transition->add_option("--out", opt.out_path, "write the deployment as a config JSON file");
  transition->add_option("--smtlib-dir", opt.smtlib_dir,
                         "dump one SMT-LIB script per probed target");

  auto* pag = app.add_subcommand("pag", "build the availability graph (structure only)");
  add_common(pag);
  pag->add_option("--max-faults", opt.max_faults, "depth bound")->capture_default_str();
  pag->add_option("--dot", opt.dot_path, "write the graph as DOT");

  auto* analyze = app.add_subcommand("analyze", "resolve a deployment at every graph vertex");
  add_common(analyze);
  analyze->add_option("--max-faults", opt.max_faults, "depth bound")->capture_default_str();
  analyze->add_option("--config", opt.config_path, "initial deployment (default: solve)");
  analyze->add_option("--dot", opt.dot_path, "write the resolved graph as DOT");
  analyze->add_option("--smtlib-dir", opt.smtlib_dir,
                      "dump one SMT-LIB script per vertex and probed target");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(opt);
    if (solve->parsed()) return run_solve_like(opt, false);
    if (transition->parsed()) return run_solve_like(opt, true);
    if (pag->parsed()) return cmd_pag(opt);
    if (analyze->parsed()) return cmd_analyze(opt);
  } catch (const std::exception& e) {
    if (opt.format == "json")
      std::cout << Json{{"error", e.what()}}.dump(2) << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
