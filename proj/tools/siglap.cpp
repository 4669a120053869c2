#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "siglap/cli.hpp"

namespace {

siglap::NodePair parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--pair", "expected u,v");
  return {std::stoul(text.substr(0, comma)), std::stoul(text.substr(comma + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Definiteness, effective resistance and consensus analysis for signed graphs"};
  app.require_subcommand(1);

  siglap::cli::RunConfig cfg;
  double tol = 0.0;
  std::string x0_path;
  std::string out_path;
  std::string clusters_path;
  std::vector<std::string> pairs;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"signature", "signatures of L, L_ess and R W R'"},
      {"resistance", "effective resistances (pairs, or negative edges over G+)"},
      {"threshold", "largest admissible |w| per negative edge"},
      {"check-psd", "classify L as PSD (interior/boundary) or indefinite"},
      {"simulate", "integrate x' = -L x and write the trajectory CSV"},
      {"predict-clusters", "cluster count and null vector for a single-cycle boundary graph"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("graph", cfg.input_path, "edge-list graph file")->required();
    sub->add_option("--tol", tol, "zero tolerance for eigenvalue counts");
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    if (name == "resistance") {
      sub->add_option("--pair", pairs, "node pair u,v (repeatable)");
    }
    if (name == "simulate") {
      sub->add_option("--t-final", cfg.t_final, "final time")->check(CLI::PositiveNumber);
      sub->add_option("--step", cfg.step, "RK4 step size")->check(CLI::PositiveNumber);
      sub->add_option("--stride", cfg.stride, "record every n-th step")->check(CLI::PositiveNumber);
      sub->add_option("--seed", cfg.seed, "seed for the random initial state");
      sub->add_option("--x0", x0_path, "initial state file")->check(CLI::ExistingFile);
      sub->add_option("--cluster-tol", cfg.cluster_tol, "cluster detection tolerance");
      sub->add_option("--clusters", clusters_path, "write node,cluster,value report here");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every usage error maps to the generic failure code
    return app.exit(e) == 0 ? siglap::cli::Ok : siglap::cli::Failure;
  }

  const auto* chosen = app.get_subcommands().front();
  cfg.command = *siglap::cli::parse_command(chosen->get_name());
  if (chosen->count("--tol")) cfg.tol = tol;
  if (!x0_path.empty()) cfg.x0_path = x0_path;
  if (!out_path.empty()) cfg.output_path = out_path;
  if (!clusters_path.empty()) cfg.clusters_path = clusters_path;
  try {
    for (const auto& p : pairs) cfg.pairs.push_back(parse_pair(p));
  } catch (const std::exception& e) {
    std::cerr << "error: bad --pair: " << e.what() << '\n';
    return siglap::cli::Failure;
  }
  return siglap::cli::run(cfg);
}
