#include "vcc/fcidump.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <regex>
#include <sstream>
#include <vector>

namespace vcc {

IntegralSet::IntegralSet(int n_orbitals, int n_electrons, int ms2)
    : n_orbitals_(n_orbitals), n_electrons_(n_electrons), ms2_(ms2) {
  if (n_orbitals < 1) throw std::invalid_argument("n_orbitals must be >= 1");
  if (n_electrons < 1) throw std::invalid_argument("n_electrons must be >= 1");
  if (n_electrons > 2 * n_orbitals)
    throw std::invalid_argument("more electrons than spin orbitals");
  if (std::abs(ms2) > n_electrons || (n_electrons + ms2) % 2 != 0)
    throw std::invalid_argument("ms2 inconsistent with n_electrons");
}

void IntegralSet::check_index(int p) const {
  if (p < 1 || p > n_orbitals_)
    throw std::out_of_range("orbital index " + std::to_string(p) +
                            " outside [1, " + std::to_string(n_orbitals_) + "]");
}

IntegralSet::OneKey IntegralSet::canonical(int p, int q) {
  return {std::min(p, q), std::max(p, q)};
}

IntegralSet::TwoKey IntegralSet::canonical(int p, int q, int r, int s) {
  const std::array<TwoKey, 8> perms = {{{p, q, r, s},
                                        {q, p, r, s},
                                        {p, q, s, r},
                                        {q, p, s, r},
                                        {r, s, p, q},
                                        {s, r, p, q},
                                        {r, s, q, p},
                                        {s, r, q, p}}};
  return *std::min_element(perms.begin(), perms.end());
}

double IntegralSet::one(int p, int q) const {
  check_index(p);
  check_index(q);
  auto it = h1_.find(canonical(p, q));
  return it == h1_.end() ? 0.0 : it->second;
}

double IntegralSet::two(int p, int q, int r, int s) const {
  check_index(p);
  check_index(q);
  check_index(r);
  check_index(s);
  auto it = h2_.find(canonical(p, q, r, s));
  return it == h2_.end() ? 0.0 : it->second;
}

void IntegralSet::set_one(int p, int q, double value) {
  check_index(p);
  check_index(q);
  h1_[canonical(p, q)] = value;
}

void IntegralSet::set_two(int p, int q, int r, int s, double value) {
  check_index(p);
  check_index(q);
  check_index(r);
  check_index(s);
  h2_[canonical(p, q, r, s)] = value;
}

double integral_lookup(const IntegralSet& set, IntegralKind kind,
                       std::initializer_list<int> indices) {
  const std::vector<int> idx(indices);
  if (kind == IntegralKind::one) {
    if (idx.size() != 2) throw std::invalid_argument("one-body lookup needs 2 indices");
    return set.one(idx[0], idx[1]);
  }
  if (idx.size() != 4) throw std::invalid_argument("two-body lookup needs 4 indices");
  return set.two(idx[0], idx[1], idx[2], idx[3]);
}

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::optional<int> header_int(const std::string& header, const std::string& key) {
  const std::regex re("(^|[^A-Z0-9_])" + key + R"(\s*=\s*([-+]?\d+))");
  std::smatch m;
  if (!std::regex_search(header, m, re)) return std::nullopt;
  return std::stoi(m[2].str());
}

// Fortran writers may use D as the exponent marker.
std::optional<double> parse_real(std::string token) {
  std::replace_if(token.begin(), token.end(),
                  [](char c) { return c == 'D' || c == 'd'; }, 'E');
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<int> parse_int(const std::string& token) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

}  // namespace

IntegralSet parse_fcidump(std::istream& in) {
  std::string header;
  std::string line;
  std::string remainder;
  int line_no = 0;
  bool started = false;
  bool terminated = false;

  while (std::getline(in, line)) {
    ++line_no;
    std::string up = upper(line);
    if (!started) {
      auto pos = up.find("&FCI");
      if (pos == std::string::npos) {
        if (up.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected &FCI namelist header");
      }
      started = true;
      up = up.substr(pos + 4);
      line = line.substr(pos + 4);
    }
    auto end_pos = up.find("&END");
    std::size_t end_len = 4;
    if (end_pos == std::string::npos) {
      end_pos = up.find('/');
      end_len = 1;
    }
    if (end_pos != std::string::npos) {
      header += up.substr(0, end_pos);
      remainder = line.substr(end_pos + end_len);
      terminated = true;
      break;
    }
    header += up + " ";
  }
  if (!started) throw ParseError("missing &FCI namelist header");
  if (!terminated) throw ParseError("unterminated &FCI namelist (no &END or /)");

  const auto norb = header_int(header, "NORB");
  const auto nelec = header_int(header, "NELEC");
  if (!norb) throw ParseError("missing NORB in &FCI namelist");
  if (!nelec) throw ParseError("missing NELEC in &FCI namelist");
  const int ms2 = header_int(header, "MS2").value_or(0);

  IntegralSet set;
  try {
    set = IntegralSet(*norb, *nelec, ms2);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid &FCI namelist: ") + e.what());
  }

  auto handle = [&](const std::string& text, int number) {
    std::istringstream ss(text);
    std::vector<std::string> tokens;
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    if (tokens.empty()) return;
    const std::string where = "line " + std::to_string(number) + ": ";
    if (tokens.size() != 5)
      throw ParseError(where + "expected 'value i j k l', got " +
                       std::to_string(tokens.size()) + " fields");
    const auto value = parse_real(tokens[0]);
    if (!value) throw ParseError(where + "non-numeric value '" + tokens[0] + "'");
    std::array<int, 4> idx{};
    for (int k = 0; k < 4; ++k) {
      const auto v = parse_int(tokens[k + 1]);
      if (!v) throw ParseError(where + "non-integer index '" + tokens[k + 1] + "'");
      if (*v < 0 || *v > set.n_orbitals())
        throw ParseError(where + "index " + tokens[k + 1] + " out of range [0, " +
                         std::to_string(set.n_orbitals()) + "]");
      idx[k] = *v;
    }
    const auto [i, j, k, l] = idx;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      set.set_core_energy(*value);
    } else if (i && j && k && l) {
      set.set_two(i, j, k, l, *value);
    } else if (i && j && !k && !l) {
      set.set_one(i, j, *value);
    } else if (i && !j && !k && !l) {
      // orbital energy line; not needed
    } else {
      throw ParseError(where + "unrecognised index pattern");
    }
  };

  handle(remainder, line_no);
  while (std::getline(in, line)) handle(line, ++line_no);
  return set;
}

IntegralSet parse_fcidump(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_fcidump(in);
}

IntegralSet read_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open FCIDUMP file '" + path + "'");
  return parse_fcidump(in);
}

std::string write_fcidump(const IntegralSet& set) {
  std::ostringstream out;
  out << "&FCI NORB=" << set.n_orbitals() << ",NELEC=" << set.n_electrons()
      << ",MS2=" << set.ms2() << ",\n ORBSYM=";
  for (int p = 0; p < set.n_orbitals(); ++p) out << "1,";
  out << "\n ISYM=1,\n&END\n";
  out << std::setprecision(17);
  for (const auto& [key, v] : set.two_body())
    out << v << ' ' << key[0] << ' ' << key[1] << ' ' << key[2] << ' ' << key[3] << '\n';
  for (const auto& [key, v] : set.one_body())
    out << v << ' ' << key[0] << ' ' << key[1] << " 0 0\n";
  out << set.core_energy() << " 0 0 0 0\n";
  return out.str();
}

}  // namespace vcc
