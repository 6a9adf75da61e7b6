#include "dprime/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dprime::io {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ConfigError("csv: missing column '" + name + "'");
}

static std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("csv: cannot open " + path);
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv: empty file " + path);
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(trim(cell));
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        const std::string c = trim(cell);
        row.push_back(std::stod(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        throw ConfigError("csv: bad number on line " + std::to_string(lineno) + " of " + path);
      }
    }
    if (row.size() != t.header.size())
      throw ConfigError("csv: wrong field count on line " + std::to_string(lineno) + " of " + path);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_csv(const std::string& path, const Table& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("csv: cannot write " + path);
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << num(r[i]);
    out << '\n';
  }
}

namespace {

// uniform grid on [-1, 1] recovered from the x column
Grid grid_from_column(const Table& t, std::size_t cx, const std::string& path) {
  const std::size_t n = t.rows.size();
  if (n < 3 || n % 2 == 0) throw ConfigError("csv: " + path + " needs an odd number (>= 3) of rows");
  const Grid g = Grid::make(-1.0, 1.0, n);
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(t.rows[i][cx] - g.x(i)) > 1e-9) throw ConfigError("csv: " + path + " x column is not a uniform grid on [-1, 1]");
  return g;
}

std::pair<RealFn, RealFn> two_columns(const std::string& path, const std::string& a, const std::string& b) {
  const Table t = read_csv(path);
  const Grid g = grid_from_column(t, t.column("x"), path);
  const std::size_t ca = t.column(a), cb = t.column(b);
  RealFn fa = zeros(g), fb = zeros(g);
  for (std::size_t i = 0; i < g.n; ++i) {
    fa.values[i] = t.rows[i][ca];
    fb.values[i] = t.rows[i][cb];
  }
  fa.detect_support();
  fb.detect_support();
  return {fa, fb};
}

}  // namespace

void write_pair_csv(const std::string& path, const PerturbationPair& p) {
  Table t{{"x", "phi1", "phi2", "omega"}, {}};
  for (std::size_t i = 0; i < p.phi1.size(); ++i)
    t.rows.push_back({p.grid().x(i), p.phi1.values[i], p.phi2.values[i], p.omega.values[i]});
  write_csv(path, t);
}

PerturbationPair read_pair_csv(const std::string& path) {
  const auto [a, b] = two_columns(path, "phi1", "phi2");
  return pair_from_profiles(a, b);
}

PerturbationPair read_eta_csv(const std::string& path) {
  const auto [a, b] = two_columns(path, "eta1", "eta2");
  return build_pair(a, b);
}

void write_q_csv(const std::string& path, const RealFn& q) {
  Table t{{"x", "q"}, {}};
  for (std::size_t i = 0; i < q.size(); ++i) t.rows.push_back({q.grid.x(i), q.values[i]});
  write_csv(path, t);
}

void write_bvp_csv(const std::string& path, const RealFn& v) {
  Table t{{"t", "v"}, {}};
  for (std::size_t i = 0; i < v.size(); ++i) t.rows.push_back({v.grid.x(i), v.values[i]});
  write_csv(path, t);
}

void write_sweep_csv(const std::string& path, const ConvergenceReport& r) {
  Table t{{"epsilon", "gap", "iterations", "warn"}, {}};
  for (const auto& e : r.entries)
    t.rows.push_back({e.eps, e.gap.gap, double(e.gap.iterations), e.gap.warn ? 1.0 : 0.0});
  write_csv(path, t);
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticRow>& rows) {
  Table t{{"epsilon", "jump_sum", "xi", "eta", "residual", "y_minus_u"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.eps, r.jump_sum, r.xi, r.eta, r.residual, r.y_minus_u});
  write_csv(path, t);
}

void write_scattering_csv(const std::string& path, const PointInteraction& in, const std::vector<double>& ks) {
  Table t{{"k", "re_r", "im_r", "re_t", "im_t", "unitarity_defect"}, {}};
  for (double k : ks) {
    const auto [r, tr] = scattering_coeffs(in, k);
    t.rows.push_back({k, r.real(), r.imag(), tr.real(), tr.imag(), std::norm(r) + std::norm(tr) - 1.0});
  }
  write_csv(path, t);
}

}  // namespace dprime::io
