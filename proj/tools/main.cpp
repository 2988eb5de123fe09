#include "copolab/cli.hpp"

#include <CLI11.hpp>

#include <string>
#include <vector>

int main(int argc, char** argv) {
  CLI::App app{"copolab - numerical analysis of isometric group actions"};
  app.require_subcommand(1);

  copolab::RunConfig config;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"analyze", "orbit/isotropy dimensions and a regularity certificate"},
      {"copolarity", "canonical section, copolarity and fat Weyl dimension"},
      {"reduce", "reduction data, stability and regularity equivalence"},
      {"slice", "slice representations and the copolarity bound"},
      {"verify", "section axioms, D/E decomposition, shape invariance"},
      {"sympair", "Cartan decomposition and triple-system copolarity"},
      {"resolution", "resolution criteria or invariant-metric feasibility"},
      {"gauge", "Gram-matrix evidence for the gauge-action dichotomy"},
  };

  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--input", config.input_path, "input JSON file")->required();
    sub->add_option("--output", config.output_path, "report JSON file (default: report.json)");
    sub->add_option("--seed", config.seed, "seed for all randomness");
    sub->add_option("--samples", config.samples, "Monte-Carlo sample count");
    sub->add_option("--budget", config.budget, "restarts for orbit-distance estimates");
    sub->add_option("--terms", config.terms, "Gram family size (gauge)");
    sub->add_option("--rel-rank-tol", [&config](const std::vector<std::string>& v) {
      config.rel_rank_tol = std::stod(v[0]);
      return true;
    }, "relative rank tolerance override");
    sub->add_option("--abs-zero-tol", [&config](const std::vector<std::string>& v) {
      config.abs_zero_tol = std::stod(v[0]);
      return true;
    }, "absolute zero tolerance override");
    sub->add_option("--containment-tol", [&config](const std::vector<std::string>& v) {
      config.containment_tol = std::stod(v[0]);
      return true;
    }, "containment tolerance override");
    sub->callback([&config, name = name] { config.command = name; });
  }

  CLI11_PARSE(app, argc, argv);
  if (config.output_path.empty()) config.output_path = "report.json";
  return copolab::run(config);
}
