#pragma once

#include <array>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vcc {

/// Raised for malformed FCIDUMP input. The message carries the line number
/// when the problem is tied to a specific line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Molecular integrals over spatial orbitals, 1-based indices, chemists'
/// notation (pq|rs). Only canonical keys are stored; use the accessors to read
/// any symmetry-equivalent ordering.
class IntegralSet {
 public:
  using OneKey = std::array<int, 2>;
  using TwoKey = std::array<int, 4>;

  IntegralSet() = default;
  IntegralSet(int n_orbitals, int n_electrons, int ms2);

  int n_orbitals() const { return n_orbitals_; }
  int n_electrons() const { return n_electrons_; }
  int ms2() const { return ms2_; }
  double core_energy() const { return core_energy_; }
  void set_core_energy(double e) { core_energy_ = e; }

  double one(int p, int q) const;
  double two(int p, int q, int r, int s) const;
  void set_one(int p, int q, double value);
  void set_two(int p, int q, int r, int s, double value);

  /// Canonically keyed storage, ascending key order.
  const std::map<OneKey, double>& one_body() const { return h1_; }
  const std::map<TwoKey, double>& two_body() const { return h2_; }

  static OneKey canonical(int p, int q);
  static TwoKey canonical(int p, int q, int r, int s);

 private:
  void check_index(int p) const;

  int n_orbitals_ = 0;
  int n_electrons_ = 0;
  int ms2_ = 0;
  double core_energy_ = 0.0;
  std::map<OneKey, double> h1_;
  std::map<TwoKey, double> h2_;
};

enum class IntegralKind { one, two };

IntegralSet parse_fcidump(std::istream& in);
IntegralSet parse_fcidump(std::string_view text);
IntegralSet read_fcidump(const std::string& path);

/// Symmetry-aware lookup; `indices` holds 2 or 4 entries depending on `kind`.
double integral_lookup(const IntegralSet& set, IntegralKind kind,
                       std::initializer_list<int> indices);

/// Writes the set back as FCIDUMP text with round-trip precision.
std::string write_fcidump(const IntegralSet& set);

}  // namespace vcc
