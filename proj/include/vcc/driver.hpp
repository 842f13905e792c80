#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vcc/ansatz.hpp"
#include "vcc/optimize.hpp"

namespace vcc {

/// Data directory: $VCC_DATA_DIR when set, else the build-time default.
std::filesystem::path default_data_dir();

/// `<dir>/<system>_<R with 2 decimals>.fcidump`
std::filesystem::path fixture_path(const std::filesystem::path& dir, const std::string& system,
                                   double r);

struct FixtureInfo {
  std::filesystem::path path;
  std::string system;
  double r = 0.0;
};

/// Parses `<system>_<R>.fcidump` file names.
std::optional<FixtureInfo> parse_fixture_name(const std::filesystem::path& path);

/// Expands `*` / `?` in the file-name part of a pattern; sorted by (system, R).
std::vector<FixtureInfo> glob_fixtures(const std::string& pattern);

struct ReferenceRow {
  std::string system;
  double r = 0.0;
  double e_hf = 0.0;
  double e_fci = 0.0;
  double e_cisd = 0.0;
  std::optional<double> e_ccsd;  ///< NA when the generator's CCSD failed
};

std::vector<ReferenceRow> read_references(const std::filesystem::path& csv);
const ReferenceRow& find_reference(const std::vector<ReferenceRow>& rows, const std::string& system,
                                   double r);

struct DriverOptions {
  LbfgsOptions lbfgs;
  double fd_step = 1e-6;
};

/// Thrown when the ansatz norm collapses during optimization.
class OptimizationError : public std::runtime_error {
 public:
  OptimizationError(const std::string& what, Eigen::VectorXd t)
      : std::runtime_error(what), amplitudes(std::move(t)) {}
  Eigen::VectorXd amplitudes;
};

/// Electronic energy (no core) of the ansatz at t; the optimization objective.
double electronic_energy(const VccSystem& sys, const AnsatzSpec& spec, const Eigen::VectorXd& t);

/// Minimizes the ansatz energy from x0 (zero vector when omitted). The result's
/// value and history are total energies.
OptResult optimize_ansatz(const VccSystem& sys, const AnsatzSpec& spec,
                          std::optional<Eigen::VectorXd> x0 = std::nullopt,
                          const DriverOptions& options = {});
OptResult optimize_ansatz(const AnsatzSpec& spec, const IntegralSet& set,
                          std::optional<Eigen::VectorXd> x0 = std::nullopt,
                          const DriverOptions& options = {});

struct ScanRow {
  double r = 0.0;
  AnsatzSpec spec;
  double energy = 0.0;
  double e_hf = 0.0;
  double e_fci = 0.0;
  double e_exact_vcc = 0.0;
  double error = 0.0;  ///< energy - e_exact_vcc
  int iterations = 0;
  bool converged = false;
  std::string failure;  ///< non-empty when the optimization threw
};

struct ScanResult {
  std::vector<ScanRow> rows;  ///< sorted by (R, position in the spec list)
  bool all_converged() const;
  bool any_failed() const;
};

struct ScanOptions {
  DriverOptions driver;
  bool warm_start = true;
  int workers = 1;
  SystemOptions system;
};

/// Optimizes every spec at every fixture geometry. Exact VCC is always
/// optimized as well (it fills the e_exact_vcc column). Throws
/// std::invalid_argument listing missing files when a fixture does not exist.
ScanResult scan_pec(const std::vector<std::filesystem::path>& fixtures,
                    const std::vector<AnsatzSpec>& specs, const ScanOptions& options = {});

/// CSV with header `R,method,d,energy,e_fci,e_exact_vcc,error`, 12 significant
/// digits.
void write_scan_csv(std::ostream& out, const ScanResult& result);

}  // namespace vcc
