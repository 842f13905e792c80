#include "vcc/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <regex>
#include <sstream>
#include <thread>

#include "vcc/fcidump.hpp"
#include "vcc/reference.hpp"

#ifndef VCC_DEFAULT_DATA_DIR
#define VCC_DEFAULT_DATA_DIR "data"
#endif

namespace vcc {

namespace fs = std::filesystem;

fs::path default_data_dir() {
  if (const char* env = std::getenv("VCC_DATA_DIR"); env && *env) return env;
  return VCC_DEFAULT_DATA_DIR;
}

fs::path fixture_path(const fs::path& dir, const std::string& system, double r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%.2f.fcidump", system.c_str(), r);
  return dir / buf;
}

std::optional<FixtureInfo> parse_fixture_name(const fs::path& path) {
  static const std::regex re(R"(([A-Za-z0-9]+)_([0-9]+(?:\.[0-9]+)?)\.fcidump)");
  std::smatch m;
  const std::string name = path.filename().string();
  if (!std::regex_match(name, m, re)) return std::nullopt;
  return FixtureInfo{path, m[1].str(), std::stod(m[2].str())};
}

namespace {

bool wildcard_match(const std::string& pattern, const std::string& text) {
  std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string method_column(const AnsatzSpec& spec) {
  std::string s = to_string(spec.method);
  const bool uses_ucc = spec.method == Method::trotter_vcc || spec.method == Method::ducc ||
                        spec.method == Method::hcvcc || spec.method == Method::hcvcc_circuit;
  if (uses_ucc && spec.ucc_mode == UccMode::disentangled_product) s += ":disentangled";
  if (spec.method == Method::hcvcc_circuit && spec.combine_mode == CombineMode::even_odd)
    s += ":even-odd";
  return s;
}

}  // namespace

std::vector<FixtureInfo> glob_fixtures(const std::string& pattern) {
  const fs::path p(pattern);
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  const std::string name = p.filename().string();
  std::vector<FixtureInfo> out;
  if (name.find_first_of("*?") == std::string::npos) {
    if (fs::exists(p)) {
      auto info = parse_fixture_name(p);
      out.push_back(info ? *info : FixtureInfo{p, p.stem().string(), 0.0});
    }
    return out;
  }
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (!wildcard_match(name, entry.path().filename().string())) continue;
    if (auto info = parse_fixture_name(entry.path())) out.push_back(*info);
  }
  std::sort(out.begin(), out.end(), [](const FixtureInfo& a, const FixtureInfo& b) {
    return std::tie(a.system, a.r) < std::tie(b.system, b.r);
  });
  return out;
}

std::vector<ReferenceRow> read_references(const fs::path& csv) {
  std::ifstream in(csv);
  if (!in) throw std::runtime_error("cannot open " + csv.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("system,R,E_HF,E_FCI,E_CISD", 0) != 0)
    throw std::runtime_error(csv.string() + ": unexpected header");
  std::vector<ReferenceRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 6)
      throw std::runtime_error(csv.string() + ":" + std::to_string(lineno) + ": expected 6 fields");
    ReferenceRow row;
    row.system = f[0];
    row.r = std::stod(f[1]);
    row.e_hf = std::stod(f[2]);
    row.e_fci = std::stod(f[3]);
    row.e_cisd = std::stod(f[4]);
    if (f[5] != "NA") row.e_ccsd = std::stod(f[5]);
    rows.push_back(row);
  }
  return rows;
}

const ReferenceRow& find_reference(const std::vector<ReferenceRow>& rows, const std::string& system,
                                   double r) {
  for (const auto& row : rows)
    if (row.system == system && std::abs(row.r - r) < 5e-3) return row;
  throw std::out_of_range("no reference row for " + system + " at R=" + format_g12(r));
}

double electronic_energy(const VccSystem& sys, const AnsatzSpec& spec, const Eigen::VectorXd& t) {
  return energy_rayleigh(prepare_state(sys, spec, t), sys.hamiltonian()).energy;
}

OptResult optimize_ansatz(const VccSystem& sys, const AnsatzSpec& spec,
                          std::optional<Eigen::VectorXd> x0, const DriverOptions& options) {
  spec.validate(sys.n_parameters());
  const double core = sys.core_energy();
  if (spec.method == Method::hf) {
    OptResult r;
    r.x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.n_parameters()));
    r.value = electronic_energy(sys, spec, r.x) + core;
    r.converged = true;
    r.history = {r.value};
    return r;
  }
  Eigen::VectorXd start =
      x0 ? *x0 : Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.n_parameters()));
  sys.check_amplitudes(start);

  auto f = [&](const Eigen::VectorXd& t) {
    try {
      return electronic_energy(sys, spec, t);
    } catch (const NormCollapse& e) {
      if (t == start) throw OptimizationError(e.what(), t);
      return std::numeric_limits<double>::infinity();
    }
  };
  auto g = [&](const Eigen::VectorXd& t) { return finite_diff_gradient(f, t, options.fd_step); };
  OptResult r = lbfgs_minimize(f, g, start, options.lbfgs);
  r.value += core;
  for (double& e : r.history) e += core;
  return r;
}

OptResult optimize_ansatz(const AnsatzSpec& spec, const IntegralSet& set,
                          std::optional<Eigen::VectorXd> x0, const DriverOptions& options) {
  return optimize_ansatz(VccSystem(set), spec, std::move(x0), options);
}

bool ScanResult::all_converged() const {
  return std::all_of(rows.begin(), rows.end(), [](const ScanRow& r) { return r.converged; });
}

bool ScanResult::any_failed() const {
  return std::any_of(rows.begin(), rows.end(), [](const ScanRow& r) { return !r.failure.empty(); });
}

namespace {

template <typename Job>
void run_pool(std::size_t n_jobs, int workers, Job&& job) {
  const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), n_jobs);
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n_jobs; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < n_threads; ++k)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n_jobs; i = next++) job(i);
    });
  for (auto& th : pool) th.join();
}

struct Geometry {
  FixtureInfo info;
  std::unique_ptr<VccSystem> sys;
  double e_hf = 0.0;
  double e_fci = 0.0;
};

}  // namespace

ScanResult scan_pec(const std::vector<fs::path>& fixtures, const std::vector<AnsatzSpec>& specs,
                    const ScanOptions& options) {
  if (fixtures.empty()) throw std::invalid_argument("no fixtures to scan");
  if (options.workers < 1) throw std::invalid_argument("worker count must be >= 1");
  std::string missing;
  for (const auto& p : fixtures)
    if (!fs::exists(p)) missing += "\n  " + p.string();
  if (!missing.empty()) throw std::invalid_argument("missing fixtures:" + missing);

  std::vector<Geometry> geoms;
  for (const auto& p : fixtures) {
    auto info = parse_fixture_name(p);
    if (!info) throw std::invalid_argument("cannot read R from fixture name " + p.string());
    geoms.push_back({*info, nullptr, 0.0, 0.0});
  }
  std::stable_sort(geoms.begin(), geoms.end(),
                   [](const Geometry& a, const Geometry& b) { return a.info.r < b.info.r; });

  run_pool(geoms.size(), options.workers, [&](std::size_t i) {
    const IntegralSet set = read_fcidump(geoms[i].info.path);
    geoms[i].sys = std::make_unique<VccSystem>(set, options.system);
    geoms[i].e_hf = hf_energy(set);
    geoms[i].e_fci = fci_energy(set);
  });

  // Exact VCC runs as an extra chain when it was not requested.
  std::vector<AnsatzSpec> chains = specs;
  std::size_t exact_chain = chains.size();
  for (std::size_t s = 0; s < specs.size(); ++s)
    if (specs[s].method == Method::exact_vcc && exact_chain == chains.size()) exact_chain = s;
  if (exact_chain == chains.size()) chains.push_back(AnsatzSpec{Method::exact_vcc, {}, {}, {}, {}});
  for (const auto& s : chains) s.validate(geoms.front().sys->n_parameters());

  const std::size_t n_geom = geoms.size();
  std::vector<ScanRow> cells(n_geom * chains.size());
  auto run_cell = [&](std::size_t g, std::size_t s, std::optional<Eigen::VectorXd> x0) {
    ScanRow& row = cells[g * chains.size() + s];
    row.r = geoms[g].info.r;
    row.spec = chains[s];
    row.e_hf = geoms[g].e_hf;
    row.e_fci = geoms[g].e_fci;
    try {
      OptResult res = optimize_ansatz(*geoms[g].sys, chains[s], std::move(x0), options.driver);
      row.energy = res.value;
      row.iterations = res.iterations;
      row.converged = res.converged;
      return std::optional<Eigen::VectorXd>(std::move(res.x));
    } catch (const std::exception& e) {
      row.energy = std::numeric_limits<double>::quiet_NaN();
      row.failure = e.what();
      return std::optional<Eigen::VectorXd>();
    }
  };

  if (options.warm_start) {
    run_pool(chains.size(), options.workers, [&](std::size_t s) {
      std::optional<Eigen::VectorXd> x;
      for (std::size_t g = 0; g < n_geom; ++g) {
        auto next = run_cell(g, s, x);
        if (next) x = std::move(next);
      }
    });
  } else {
    run_pool(cells.size(), options.workers,
             [&](std::size_t k) { run_cell(k / chains.size(), k % chains.size(), std::nullopt); });
  }

  ScanResult result;
  for (std::size_t g = 0; g < n_geom; ++g) {
    const double exact = cells[g * chains.size() + exact_chain].energy;
    for (std::size_t s = 0; s < specs.size(); ++s) {
      ScanRow row = cells[g * chains.size() + s];
      row.e_exact_vcc = exact;
      row.error = row.energy - exact;
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

void write_scan_csv(std::ostream& out, const ScanResult& result) {
  out << "R,method,d,energy,e_fci,e_exact_vcc,error\n";
  for (const auto& row : result.rows) {
    char r[32];
    std::snprintf(r, sizeof r, "%.2f", row.r);
    out << r << ',' << method_column(row.spec) << ','
        << (row.spec.degree ? std::to_string(*row.spec.degree) : std::string()) << ','
        << format_g12(row.energy) << ',' << format_g12(row.e_fci) << ','
        << format_g12(row.e_exact_vcc) << ',' << format_g12(row.error) << '\n';
  }
}

}  // namespace vcc
