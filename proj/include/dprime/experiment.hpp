#pragma once
// Experiment configuration and the four commands behind the CLI.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "dprime/diagnostics.hpp"

namespace dprime {

struct ExperimentConfig {
  std::string pair = "sine";  // "sine", "eta_csv" (columns x, eta1, eta2) or "pair_csv" (x, phi1, phi2)
  std::string pair_path;
  double alpha = 2.0;
  double beta = 1.0;
  std::vector<Complex> zetas{Complex(0.0, 1.0)};
  std::vector<double> eps{0.2, 0.1, 0.05, 0.025, 0.0125};
  std::size_t n = 4001;       // points on [-1, 1]
  int points_per_eps = 64;    // K, line spacing h = eps / K
  double half_width = 15.0;   // L
  std::string window = "quartic";
  std::string forcing = "gaussian";  // or "zero"
  std::string out = "out";
  std::uint64_t seed = 42;
  int max_iterations = 30;
  double rel_tol = 1e-3;
  std::optional<double> alpha_override;  // diagnose: limit solved with this alpha instead
  std::optional<std::pair<double, double>> synthetic;  // converge: replay gaps C eps^p

  void check() const;  // throws ConfigError
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);

// pieces shared by the commands, the tests and the acceptance run
PerturbationPair make_pair(const ExperimentConfig& c);
std::function<Complex(double)> make_forcing(const std::string& name);
RealFn random_smooth_rhs(const Grid& g, std::mt19937_64& rng);  // unit node norm

struct BvpSuiteResult {
  double max_boundary = 0;     // max |v(-1)|, |v(1)|
  double max_residual = 0;     // max residual / ||h||
  double max_consistency = 0;  // max |g1 - g2| / (1 + ||h||)
  double max_w2_ratio = 0;     // max ||v||_W2 / ||h||
};
BvpSuiteResult bvp_suite(const PerturbationPair& pair, int count, std::uint64_t seed);

int cmd_verify(const ExperimentConfig& c, std::ostream& log);
int cmd_design(const ExperimentConfig& c, std::ostream& log);
int cmd_converge(const ExperimentConfig& c, std::ostream& log);
int cmd_diagnose(const ExperimentConfig& c, std::ostream& log);

}  // namespace dprime
