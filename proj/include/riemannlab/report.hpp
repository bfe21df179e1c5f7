#pragma once

#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "riemannlab/analysis.hpp"
#include "riemannlab/grid_solver.hpp"
#include "riemannlab/perturbation.hpp"
#include "riemannlab/potential.hpp"
#include "riemannlab/wkb.hpp"
#include "riemannlab/zeros.hpp"

namespace riemannlab {

// Version string stamped into every emitted file's metadata.
inline constexpr const char* kToolVersion = "riemann-lab 0.1.0";

// Result tables share one shape: an ordered metadata block describing the
// run, a list of column names, and rows of cells.  The writers below format
// the same table identically on every invocation, so repeated runs with the
// same configuration produce byte-identical data sections.  No timestamps,
// no locale-dependent formatting, no pointer-derived ordering.

struct Cell {
  enum class Kind { Integer, Number, Text };
  Kind kind = Kind::Number;
  long long integer = 0;
  double number = 0.0;
  std::string text;
};

inline Cell cell(double v) {
  Cell c;
  c.kind = Cell::Kind::Number;
  c.number = v;
  return c;
}

inline Cell cell(long long v) {
  Cell c;
  c.kind = Cell::Kind::Integer;
  c.integer = v;
  return c;
}

inline Cell cell(int v) { return cell(static_cast<long long>(v)); }

inline Cell cell(std::string v) {
  Cell c;
  c.kind = Cell::Kind::Text;
  c.text = std::move(v);
  return c;
}

inline Cell cell(const char* v) { return cell(std::string(v)); }

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Numbers are written with 12 significant digits, '.' decimal separator,
// independent of any global locale.
inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // collapse negative zero
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string format_integer(long long v) { return std::to_string(v); }

namespace detail {

// RFC 4180 quoting, applied only when the text demands it.  Our own tags
// stay plain, but a custom rule tag carries a comma.
inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline std::string cell_to_csv(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::Integer:
      return format_integer(c.integer);
    case Cell::Kind::Number:
      return format_number(c.number);
    case Cell::Kind::Text:
      return csv_escape(c.text);
  }
  return {};
}

}  // namespace detail

// CSV layout: '#'-prefixed metadata lines, a header row, then data rows.
inline void write_csv(const Table& table, std::ostream& os) {
  for (const auto& [key, value] : table.metadata) {
    os << "# " << key << ": " << value << '\n';
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) os << ',';
    os << detail::csv_escape(table.columns[i]);
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) os << ',';
      os << detail::cell_to_csv(row[i]);
    }
    os << '\n';
  }
}

inline std::string to_csv(const Table& table) {
  std::ostringstream os;
  write_csv(table, os);
  return os.str();
}

// JSON layout mirrors the CSV: {"metadata": {...}, "columns": [...],
// "rows": [[...], ...]}.  Integer cells stay integers, numeric cells stay
// doubles, text cells stay strings.
inline nlohmann::json to_json(const Table& table) {
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [key, value] : table.metadata) meta[key] = value;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json jrow = nlohmann::json::array();
    for (const auto& c : row) {
      switch (c.kind) {
        case Cell::Kind::Integer:
          jrow.push_back(c.integer);
          break;
        case Cell::Kind::Number:
          jrow.push_back(c.number);
          break;
        case Cell::Kind::Text:
          jrow.push_back(c.text);
          break;
      }
    }
    rows.push_back(std::move(jrow));
  }
  return nlohmann::json{
      {"metadata", std::move(meta)},
      {"columns", table.columns},
      {"rows", std::move(rows)},
  };
}

enum class OutputFormat { Csv, Json };

inline void write_table(const Table& table, OutputFormat format,
                        std::ostream& os) {
  if (format == OutputFormat::Csv) {
    write_csv(table, os);
  } else {
    os << to_json(table).dump(2) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Builders: one per result type.  Each seeds the metadata with whatever the
// source structure already knows about its own provenance; callers prepend
// or append run-level entries (tool version, zero count, tolerances).

inline Table potential_table(const PotentialModel& model,
                             const std::vector<double>& xs) {
  Table t;
  t.metadata.emplace_back("model", variant_name(model));
  t.columns = {"x", "V"};
  t.rows.reserve(xs.size());
  for (double x : xs) t.rows.push_back({cell(x), cell(eval(model, x))});
  return t;
}

// Semiclassical ladder over an inclusive level range, with the turning point
// and accumulated phase recorded per level.
inline Table wkb_ladder_table(const PotentialModel& model, int n_lo, int n_hi,
                              const QuantizationRule& rule) {
  if (n_lo < 0 || n_hi < n_lo) {
    throw std::invalid_argument("wkb_ladder_table: empty level range");
  }
  Table t;
  t.metadata.emplace_back("model", variant_name(model));
  t.metadata.emplace_back("rule", detail::rule_tag(rule));
  t.columns = {"N", "E_N", "x_T", "phase"};
  double seed = 0.0;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double e = wkb_eigenvalue(model, n, rule, seed);
    seed = e;
    const PhaseResult phase = phase_integral(model, e);
    t.rows.push_back({cell(n), cell(e), cell(phase.x_T), cell(phase.phi)});
  }
  return t;
}

inline Table spectrum_table(const Spectrum& spectrum) {
  Table t;
  t.metadata.emplace_back("method", detail::method_name(spectrum.method));
  t.metadata.emplace_back("x_max", format_number(spectrum.x_max_used));
  t.metadata.emplace_back("n_points",
                          format_integer(spectrum.n_points_used));
  t.columns = {"N", "E_N"};
  for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k) {
    t.rows.push_back(
        {cell(static_cast<long long>(k)), cell(spectrum.eigenvalues[k])});
  }
  return t;
}

inline Table counting_curve_table(const CountingCurve& curve) {
  Table t;
  if (!curve.model_tag.empty()) {
    t.metadata.emplace_back("model", curve.model_tag);
  }
  if (!curve.rule_tag.empty()) t.metadata.emplace_back("rule", curve.rule_tag);
  t.columns = {"energy", "count"};
  for (const CountingSample& s : curve.samples) {
    t.rows.push_back({cell(s.energy), cell(s.count)});
  }
  return t;
}

inline std::vector<Cell> dispersion_row(const DispersionFit& fit) {
  return {cell(law_name(fit.law)),
          cell(fit.amplitude),
          cell(fit.exponent),
          cell(fit.offset),
          cell(fit.rms_relative_residual),
          cell(fit.window_lo),
          cell(fit.window_hi),
          cell(static_cast<long long>(fit.n_samples))};
}

inline const std::vector<std::string>& dispersion_columns() {
  static const std::vector<std::string> columns = {
      "law",       "amplitude", "exponent",  "offset",
      "rms_rel",   "window_lo", "window_hi", "n_samples"};
  return columns;
}

inline Table dispersion_fit_table(const DispersionFit& fit) {
  Table t;
  t.columns = dispersion_columns();
  t.rows.push_back(dispersion_row(fit));
  return t;
}

// One row per potential variant, each carrying its own fitted growth law.
inline Table sweep_table(
    const std::vector<std::pair<std::string, DispersionFit>>& fits) {
  Table t;
  t.columns = {"variant"};
  const auto& rest = dispersion_columns();
  t.columns.insert(t.columns.end(), rest.begin(), rest.end());
  for (const auto& [variant, fit] : fits) {
    std::vector<Cell> row = {cell(variant)};
    std::vector<Cell> tail = dispersion_row(fit);
    row.insert(row.end(), tail.begin(), tail.end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table comparison_table(const CountComparison& cmp) {
  Table t;
  t.columns = {"window_lo",        "window_hi",        "shift",
               "mean_abs_residual", "max_abs_residual", "rms_residual",
               "n_samples"};
  t.rows.push_back({cell(cmp.window_lo), cell(cmp.window_hi), cell(cmp.shift),
                    cell(cmp.mean_abs_residual), cell(cmp.max_abs_residual),
                    cell(cmp.rms_residual),
                    cell(static_cast<long long>(cmp.n_samples))});
  return t;
}

inline Table histogram_table(const SpacingHistogram& hist) {
  Table t;
  t.metadata.emplace_back("total", format_integer(
                                        static_cast<long long>(hist.total)));
  t.metadata.emplace_back("mean_spacing", format_number(hist.mean_spacing));
  t.columns = {"bin_lo", "bin_hi", "count"};
  for (std::size_t i = 0; i + 1 < hist.edges.size(); ++i) {
    t.rows.push_back({cell(hist.edges[i]), cell(hist.edges[i + 1]),
                      cell(static_cast<long long>(hist.counts[i]))});
  }
  return t;
}

// The scale factor multiplies only the display column; the raw first-order
// shift stays untouched beside it.
inline Table perturbed_levels_table(const std::vector<PerturbedLevel>& levels,
                                    double scale) {
  Table t;
  t.metadata.emplace_back("scale", format_number(scale));
  t.columns = {"N", "E_N0", "E_N1_numeric", "E_N1_closed", "E_N1_scaled"};
  for (const PerturbedLevel& lvl : levels) {
    t.rows.push_back({cell(lvl.N), cell(lvl.E_N0), cell(lvl.E_N1_numeric),
                      cell(lvl.E_N1_closed),
                      cell(scale * lvl.E_N1_numeric)});
  }
  return t;
}

}  // namespace riemannlab
