#pragma once

// Serialization: shortest round-trip floats, CSV with a config echo,
// JSON for equation specs, and CSV readers for fields and trajectories.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <type_traits>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "hierarchy.hpp"
#include "pde.hpp"
#include "rational.hpp"

namespace kdvh {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// Ordered key/value echo written as `# key=value` lines.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const ConfigEcho& echo, const std::vector<std::string>& header) : os_(os) {
    for (const auto& [k, v] : echo) os_ << "# " << k << '=' << v << '\n';
    row_strings(header);
  }

  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }

  template <class... T>
  void row(const T&... cells) {
    std::vector<std::string> s{cell(cells)...};
    row_strings(s);
  }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  template <class I>
    requires std::is_integral_v<I>
  static std::string cell(I v) {
    return std::to_string(v);
  }

  std::ostream& os_;
};

// ---------------------------------------------------------------------------
// Equation specs.

enum class Convention { display, evolution };

inline std::string convention_name(Convention c) { return c == Convention::display ? "display" : "evolution"; }

inline EquationSpec in_convention(const EquationSpec& s, Convention c) {
  if (c == Convention::display) return display_form(s);
  const bool want = s.k % 2 == 0;
  return s.parity_applied == want ? s : apply_parity(s);
}

inline nlohmann::ordered_json equation_to_json(const EquationSpec& s) {
  nlohmann::ordered_json j;
  j["k"] = s.k;
  j["n"] = s.order();
  j["parity_applied"] = s.parity_applied;
  j["linear"] = {{"order", s.order()}, {"coefficient", std::to_string(s.linear_sign)}};
  auto terms = nlohmann::ordered_json::array();
  // degree ascending, then orders lexicographically
  std::vector<std::pair<std::vector<int>, Rational>> sorted(s.nonlinearity.begin(), s.nonlinearity.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.first.size() < b.first.size(); });
  for (const auto& [m, a] : sorted)
    terms.push_back({{"degree", m.size()}, {"orders", m}, {"coefficient", to_rational_string(a)}});
  j["nonlinearity"] = terms;
  return j;
}

inline EquationSpec equation_from_json(const nlohmann::json& j) {
  EquationSpec s;
  try {
    s.k = j.at("k").get<int>();
    s.parity_applied = j.at("parity_applied").get<bool>();
    s.linear_sign = std::stoi(j.at("linear").at("coefficient").get<std::string>());
    for (const auto& t : j.at("nonlinearity"))
      s.nonlinearity[t.at("orders").get<std::vector<int>>()] = parse_fraction(t.at("coefficient").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("malformed equation JSON: ") + e.what());
  }
  return s;
}

/// `u_t + u_xxx + u u_x = 0` style rendering.
inline std::string equation_text(const EquationSpec& s) {
  DiffPoly lin;
  lin.add_term({s.order()}, Rational(s.linear_sign));
  std::string l = pretty(lin);
  std::string out = "u_t " + (l[0] == '-' ? "- " + l.substr(1) : "+ " + l);
  if (!s.nonlinearity.empty()) {
    std::string p = pretty(s.nonlinear_part());
    out += p[0] == '-' ? " - " + p.substr(1) : " + " + p;
  }
  return out + " = 0";
}

// ---------------------------------------------------------------------------
// CSV readers.

namespace detail {

inline std::vector<std::vector<double>> read_numeric_csv(std::istream& is, std::size_t columns,
                                                         const std::string& what) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.find_first_of("abcdefghijklmnopqrstuvwxyz") != std::string::npos) continue;
    }
    std::vector<double> r;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      try {
        r.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw config_error(what + ": bad number '" + cell + "'");
      }
    }
    if (r.size() != columns) throw config_error(what + ": expected " + std::to_string(columns) + " columns");
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot open " + path);
  return f;
}

inline SpectralField field_from_samples(const std::vector<double>& x, std::vector<double> u, double t,
                                        const std::string& what) {
  if (x.size() < 2) throw config_error(what + ": need at least two samples");
  const double dx = x[1] - x[0];
  if (!(dx > 0)) throw config_error(what + ": x must increase");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs(x[i] - x[i - 1] - dx) > 1e-9 * std::max(1.0, std::abs(dx)))
      throw config_error(what + ": x grid is not uniform");
  return {x.front(), dx * static_cast<double>(x.size()), std::move(u), t};
}

}  // namespace detail

/// Initial condition from CSV columns x,u on a uniform periodic grid.
inline SpectralField read_field_csv(const std::string& path) {
  auto f = detail::open_input(path);
  auto rows = detail::read_numeric_csv(f, 2, path);
  std::vector<double> x, u;
  for (const auto& r : rows) {
    x.push_back(r[0]);
    u.push_back(r[1]);
  }
  return detail::field_from_samples(x, std::move(u), 0, path);
}

inline void write_trajectory_csv(std::ostream& os, const ConfigEcho& echo, const Trajectory& tr) {
  CsvWriter w(os, echo, {"t", "x", "u"});
  for (const auto& f : tr.frames)
    for (std::size_t i = 0; i < f.size(); ++i) w.row(f.time, f.x(i), f.values[i]);
}

/// Long-format trajectory t,x,u (frames contiguous, x ascending within a frame).
inline Trajectory read_trajectory_csv(const std::string& path) {
  auto f = detail::open_input(path);
  auto rows = detail::read_numeric_csv(f, 3, path);
  Trajectory tr;
  std::size_t i = 0;
  while (i < rows.size()) {
    const double t = rows[i][0];
    std::vector<double> x, u;
    for (; i < rows.size() && rows[i][0] == t; ++i) {
      x.push_back(rows[i][1]);
      u.push_back(rows[i][2]);
    }
    tr.frames.push_back(detail::field_from_samples(x, std::move(u), t, path));
  }
  if (tr.frames.empty()) throw config_error(path + ": empty trajectory");
  return tr;
}

}  // namespace kdvh
