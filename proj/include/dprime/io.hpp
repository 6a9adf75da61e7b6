#pragma once
// CSV import/export. Numbers are written with %.17g so files round-trip and
// identical runs give identical bytes.

#include <string>
#include <utility>
#include <vector>

#include "dprime/design.hpp"
#include "dprime/diagnostics.hpp"
#include "dprime/resolvent.hpp"

namespace dprime::io {

std::string num(double v);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t column(const std::string& name) const;  // throws ConfigError when missing
};

Table read_csv(const std::string& path);
void write_csv(const std::string& path, const Table& t);

// columns x, phi1, phi2, omega
void write_pair_csv(const std::string& path, const PerturbationPair& pair);
// reads x, phi1, phi2; the pair is taken as given (no orthonormalization)
PerturbationPair read_pair_csv(const std::string& path);
// reads x, eta1, eta2 and runs build_pair
PerturbationPair read_eta_csv(const std::string& path);

void write_q_csv(const std::string& path, const RealFn& q);            // x, q
void write_bvp_csv(const std::string& path, const RealFn& v);          // t, v
void write_sweep_csv(const std::string& path, const ConvergenceReport& r);  // epsilon, gap, iterations, warn
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticRow>& rows);
void write_scattering_csv(const std::string& path, const PointInteraction& in, const std::vector<double>& ks);

}  // namespace dprime::io
