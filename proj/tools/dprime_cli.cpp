// dprime_cli verify|design|converge|diagnose [--config PATH] [--out DIR] [--seed N] [--parallel N]

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dprime/experiment.hpp"
#include "dprime/kernels.hpp"

int main(int argc, char** argv) {
  CLI::App app{"delta-prime approximation lab"};
  app.require_subcommand(1);
  std::string config_path, out;
  long long seed = -1;
  int threads = 0;
  app.add_option("--config", config_path, "JSON experiment config");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber);
  app.add_option("--parallel", threads, "OpenMP threads")->check(CLI::PositiveNumber);
  auto* verify = app.add_subcommand("verify", "check the pair, half-bound states and BVP solver");
  auto* design = app.add_subcommand("design", "synthesize q for (alpha, beta)");
  auto* converge = app.add_subcommand("converge", "eps-sweep of the resolvent gap and rate fit");
  auto* diagnose = app.add_subcommand("diagnose", "approximate solution diagnostics over the eps list");
  for (auto* s : {verify, design, converge, diagnose}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    dprime::ExperimentConfig c = config_path.empty() ? dprime::config_from_json(nlohmann::json::object())
                                                     : dprime::load_config(config_path);
    if (!out.empty()) c.out = out;
    if (seed >= 0) c.seed = static_cast<std::uint64_t>(seed);
    dprime::kernels::set_threads(threads);
    if (verify->parsed()) return dprime::cmd_verify(c, std::cout);
    if (design->parsed()) return dprime::cmd_design(c, std::cout);
    if (converge->parsed()) return dprime::cmd_converge(c, std::cout);
    return dprime::cmd_diagnose(c, std::cout);
  } catch (const dprime::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
