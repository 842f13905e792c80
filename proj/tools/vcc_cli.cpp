#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vcc/driver.hpp"
#include "vcc/qsvt.hpp"
#include "vcc/reference.hpp"

namespace fs = std::filesystem;
using namespace vcc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Relative paths that do not exist are looked up in the data directory.
fs::path resolve_fixture(const std::string& arg) {
  const fs::path p(arg);
  if (fs::exists(p)) return p;
  if (p.is_relative()) {
    const fs::path alt = default_data_dir() / p.filename();
    if (fs::exists(alt)) return alt;
  }
  throw UsageError("fixture not found: " + arg);
}

// "name" or "name:d"
AnsatzSpec parse_method(const std::string& text, std::optional<int> degree, UccMode ucc,
                        CombineMode combine) {
  AnsatzSpec spec;
  std::string name = text;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    name = text.substr(0, colon);
    try {
      std::size_t used = 0;
      degree = std::stoi(text.substr(colon + 1), &used);
      if (used != text.size() - colon - 1) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw UsageError("bad degree in method '" + text + "'");
    }
  }
  try {
    spec.method = method_from_string(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (AnsatzSpec::needs_degree(spec.method)) {
    if (!degree) throw UsageError(name + " needs a degree (--degree or " + name + ":d)");
    if (*degree < 0) throw UsageError("degree must be >= 0");
    spec.degree = degree;
  }
  spec.ucc_mode = ucc;
  spec.combine_mode = combine;
  return spec;
}

std::string g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Common {
  std::string ucc_mode = "exact";
  std::string combine_mode = "per-term";
  double gtol = 1e-7;
  int max_iter = 2000;
  double h = 1e-6;

  DriverOptions driver() const {
    if (!(gtol > 0)) throw UsageError("--gtol must be positive");
    if (max_iter < 0) throw UsageError("--max-iter must be >= 0");
    if (!(h > 0)) throw UsageError("--h must be positive");
    DriverOptions o;
    o.lbfgs.gtol = gtol;
    o.lbfgs.max_iter = max_iter;
    o.fd_step = h;
    return o;
  }
  UccMode ucc() const {
    try {
      return ucc_mode_from_string(ucc_mode);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  CombineMode combine() const {
    try {
      return combine_mode_from_string(combine_mode);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--ucc-mode", c.ucc_mode, "exact | disentangled")->capture_default_str();
  cmd->add_option("--combine-mode", c.combine_mode, "per-term | even-odd")->capture_default_str();
  cmd->add_option("--gtol", c.gtol, "gradient infinity-norm tolerance")->capture_default_str();
  cmd->add_option("--max-iter", c.max_iter, "L-BFGS iteration limit")->capture_default_str();
  cmd->add_option("--h", c.h, "finite-difference step")->capture_default_str();
}

int cmd_energy(const std::string& fixture, const std::string& method, std::optional<int> degree,
               const Common& common) {
  const AnsatzSpec spec = parse_method(method, degree, common.ucc(), common.combine());
  const DriverOptions options = common.driver();
  const fs::path path = resolve_fixture(fixture);
  IntegralSet set = [&] {
    try {
      return read_fcidump(path);
    } catch (const std::exception& e) {
      throw UsageError(path.string() + ": " + e.what());
    }
  }();
  const VccSystem sys(set);
  const OptResult res = optimize_ansatz(sys, spec, std::nullopt, options);
  std::cout << "method,d,energy,e_hf,e_fci,iterations,converged\n"
            << to_string(spec.method) << ',' << (spec.degree ? std::to_string(*spec.degree) : "")
            << ',' << g12(res.value) << ',' << g12(hf_energy(set)) << ',' << g12(fci_energy(set))
            << ',' << res.iterations << ',' << (res.converged ? "true" : "false") << '\n';
  if (!res.converged) {
    std::cerr << "not converged: gradient norm " << res.gradient_norm << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_scan(const std::vector<std::string>& patterns, const std::vector<std::string>& methods,
             std::optional<int> degree, const Common& common, const std::string& output,
             int workers, bool cold) {
  if (workers < 1) throw UsageError("--workers must be >= 1");
  std::vector<AnsatzSpec> specs;
  for (const auto& m : methods) specs.push_back(parse_method(m, degree, common.ucc(), common.combine()));
  std::vector<fs::path> fixtures;
  for (const auto& pat : patterns) {
    auto found = glob_fixtures(pat);
    if (found.empty() && pat.find_first_of("*?") != std::string::npos && fs::path(pat).is_relative())
      found = glob_fixtures((default_data_dir() / fs::path(pat).filename()).string());
    if (found.empty()) throw UsageError("no fixtures match '" + pat + "'");
    for (const auto& f : found) fixtures.push_back(f.path);
  }
  ScanOptions options;
  options.driver = common.driver();
  options.workers = workers;
  options.warm_start = !cold;
  const ScanResult result = scan_pec(fixtures, specs, options);

  std::ofstream out(output);
  if (!out) throw UsageError("cannot write " + output);
  write_scan_csv(out, result);

  std::map<std::string, double> worst;
  std::vector<std::string> order;
  for (const auto& row : result.rows) {
    const std::string key = row.spec.label();
    if (!worst.count(key)) order.push_back(key);
    worst[key] = std::max(worst[key], std::abs(row.error));
  }
  std::printf("%-24s %s\n", "method", "max |E - E_exactVCC|");
  for (const auto& k : order) std::printf("%-24s %.3e\n", k.c_str(), worst[k]);

  bool bad = false;
  for (const auto& row : result.rows) {
    if (!row.failure.empty()) {
      std::cerr << "failed: R=" << row.r << ' ' << row.spec.label() << ": " << row.failure << '\n';
      bad = true;
    } else if (!row.converged) {
      std::cerr << "not converged: R=" << row.r << ' ' << row.spec.label() << '\n';
      bad = true;
    }
  }
  return bad ? kExitNumerical : kExitOk;
}

int cmd_qsvt_verify(const std::string& fixture, int degree, std::uint64_t seed, double scale,
                    const Common& common) {
  if (degree < 0) throw UsageError("degree must be >= 0");
  const fs::path path = resolve_fixture(fixture);
  const IntegralSet set = read_fcidump(path);
  const VccSystem sys(set);
  if (sys.space().n_spin_orbitals > kMaxCircuitQubits)
    throw UsageError("qsvt-verify needs at most " + std::to_string(kMaxCircuitQubits) + " qubits");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd t(static_cast<Eigen::Index>(sys.n_parameters()));
  for (auto& v : t) v = normal(rng);

  const UccMode ucc = common.ucc();
  bool ok = true;
  std::cout << "combine,d,lambda,ancillas,lcu_qubits,block_residual,phase_residual,success_amplitude,"
               "state_distance\n";
  for (CombineMode mode : {CombineMode::per_term, CombineMode::even_odd}) {
    CircuitResult res;
    try {
      res = assemble_hcvcc_circuit(sys, t, degree, mode, ucc);
    } catch (const PhaseFindingError& e) {
      std::cerr << e.what() << '\n';
      return kExitNumerical;
    }
    StateVector oracle = state_hcvcc(sys, t, degree, ucc, {}, res.lambda);
    oracle.normalize();
    const double dist = (res.state - oracle).norm();
    std::cout << to_string(mode) << ',' << degree << ',' << g12(res.lambda) << ',' << res.n_ancillas
              << ',' << res.n_lcu_qubits << ',' << g12(res.block_residual) << ','
              << g12(res.phase_residual) << ',' << g12(res.success_amplitude) << ',' << g12(dist)
              << '\n';
    ok = ok && res.block_residual <= 1e-7 && dist <= 1e-7;
  }
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational coupled cluster with Chebyshev-approximated exponentials"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  Common common;
  std::string fixture;
  std::string method;
  std::optional<int> degree;

  auto* energy = app.add_subcommand("energy", "optimize one ansatz at one geometry");
  energy->add_option("--fixture", fixture, "FCIDUMP file")->required();
  energy->add_option("--method", method, "hf | exact-vcc | cvcc | trotter | ducc | hcvcc | hcvcc-circuit")
      ->required();
  energy->add_option("--degree", degree, "Chebyshev degree");
  add_common(energy, common);

  std::vector<std::string> patterns;
  std::vector<std::string> methods;
  std::string output = "scan.csv";
  int workers = 1;
  bool cold = false;
  auto* scan = app.add_subcommand("scan", "potential energy curve scan");
  scan->add_option("--fixture", patterns, "FCIDUMP file or glob (repeatable)")->required();
  scan->add_option("--method", methods, "method or method:degree (repeatable, comma separated)")
      ->required()
      ->delimiter(',');
  scan->add_option("--degree", degree, "degree for methods given without one");
  scan->add_option("--output", output, "CSV output path")->capture_default_str();
  scan->add_option("--workers", workers, "worker threads")->capture_default_str();
  scan->add_flag("--cold-start,!--warm-start", cold, "start every R from zero amplitudes (default: seed each R with the previous optimum)");
  add_common(scan, common);

  std::uint64_t seed = 42;
  double amp_scale = 0.2;
  int qdegree = 3;
  auto* verify = app.add_subcommand("qsvt-verify", "check the emulated circuit against the matrix ansatz");
  verify->add_option("--fixture", fixture, "FCIDUMP file (at most 8 spin orbitals)")->required();
  verify->add_option("--degree", qdegree, "Chebyshev degree")->capture_default_str();
  verify->add_option("--seed", seed, "amplitude RNG seed")->capture_default_str();
  verify->add_option("--amplitude-scale", amp_scale, "standard deviation of random amplitudes")
      ->capture_default_str();
  add_common(verify, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (energy->parsed()) return cmd_energy(fixture, method, degree, common);
    if (scan->parsed()) return cmd_scan(patterns, methods, degree, common, output, workers, cold);
    if (verify->parsed()) return cmd_qsvt_verify(fixture, qdegree, seed, amp_scale, common);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
