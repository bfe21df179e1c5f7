#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "riemannlab/grid_solver.hpp"
#include "riemannlab/potential.hpp"
#include "riemannlab/wkb.hpp"
#include "riemannlab/zeros.hpp"

namespace riemannlab {

// One point of a counting function: how many levels sit at or below the
// energy.  Staircases sample the curve exactly at the level positions;
// semiclassical curves sample the smooth phase-integral count.
struct CountingSample {
  double energy = 0.0;
  double count = 0.0;
};

struct CountingCurve {
  std::vector<CountingSample> samples;
  std::string model_tag;
  std::string rule_tag;
};

namespace detail {

inline std::string rule_tag(const QuantizationRule& rule) {
  if (rule.mu == 2.0 && rule.nu == 0.25) {
    return "sommerfeld";
  }
  if (rule.mu == 1.0 && rule.nu == 0.75) {
    return "maslov";
  }
  return "custom(mu=" + std::to_string(rule.mu) +
         ",nu=" + std::to_string(rule.nu) + ")";
}

}  // namespace detail

// Counting staircase of a solved spectrum: one sample per eigenvalue, with
// the inclusive convention N(E_k) = k + 1.
inline CountingCurve staircase(const Spectrum& spectrum,
                               std::string model_tag = "") {
  if (spectrum.eigenvalues.empty()) {
    throw std::invalid_argument("staircase: empty spectrum");
  }
  CountingCurve curve;
  curve.model_tag = std::move(model_tag);
  curve.rule_tag = detail::method_name(spectrum.method);
  curve.samples.reserve(spectrum.eigenvalues.size());
  for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k) {
    curve.samples.push_back(
        {spectrum.eigenvalues[k], static_cast<double>(k + 1)});
  }
  return curve;
}

// Counting staircase of a zero table, over the heights.
inline CountingCurve staircase(const ZeroSet& zeros) {
  if (zeros.empty()) {
    throw std::invalid_argument("staircase: empty zero set");
  }
  CountingCurve curve;
  curve.model_tag = "zeros";
  curve.rule_tag = "table";
  curve.samples.reserve(zeros.size());
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    curve.samples.push_back(
        {zeros.zeros[k].alpha, static_cast<double>(k + 1)});
  }
  return curve;
}

// Smooth semiclassical counting curve N(E) = Phi(E) / (mu pi) - nu on
// log-spaced energies.  This is the continuum the staircase steps around;
// it is the right object for fitting growth laws, since it can be sampled
// at energies far beyond where individual levels are affordable.
inline CountingCurve wkb_counting_curve(const PotentialModel& model,
                                        const QuantizationRule& rule,
                                        double e_lo, double e_hi,
                                        int n_samples) {
  if (!(e_lo > 0.0) || !(e_hi > e_lo)) {
    throw std::invalid_argument(
        "wkb_counting_curve: need 0 < e_lo < e_hi");
  }
  if (n_samples < 2) {
    throw std::invalid_argument("wkb_counting_curve: need >= 2 samples");
  }
  CountingCurve curve;
  curve.model_tag = variant_name(model);
  curve.rule_tag = detail::rule_tag(rule);
  curve.samples.reserve(static_cast<std::size_t>(n_samples));
  const double ratio = std::log(e_hi / e_lo);
  for (int i = 0; i < n_samples; ++i) {
    const double e = e_lo * std::exp(ratio * i / (n_samples - 1));
    const double n =
        phase_integral(model, e).phi / (rule.mu * std::numbers::pi) - rule.nu;
    curve.samples.push_back({e, n});
  }
  return curve;
}

// Value of the counting curve at an energy: the count of the last sample at
// or below it (step interpretation; zero before the first sample).
inline double counting_at(const CountingCurve& curve, double energy) {
  double count = 0.0;
  for (const auto& s : curve.samples) {
    if (s.energy > energy) {
      break;
    }
    count = s.count;
  }
  return count;
}

// Growth laws fitted to counting curves.  The model forms are
//   PowerLaw       N ~ amplitude * E^exponent        (fit in log-log)
//   ExpLaw         N ~ amplitude * exp(exponent * E) (fit in semilog)
//   LogLaw         N ~ amplitude * ln E + offset
//   LinearLogLaw   N ~ (E/2pi) (ln(E/2pi) - 1) + offset
enum class DispersionLaw { PowerLaw, LinearLogLaw, ExpLaw, LogLaw };

inline const char* law_name(DispersionLaw law) {
  switch (law) {
    case DispersionLaw::PowerLaw:
      return "power";
    case DispersionLaw::LinearLogLaw:
      return "linear-log";
    case DispersionLaw::ExpLaw:
      return "exp";
    case DispersionLaw::LogLaw:
      return "log";
  }
  return "unknown";
}

struct DispersionFit {
  DispersionLaw law = DispersionLaw::PowerLaw;
  double amplitude = 0.0;
  double exponent = 0.0;
  double offset = 0.0;
  // Root-mean-square of (model - data) / data over the fitted samples.
  double rms_relative_residual = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  int n_samples = 0;
};

inline double dispersion_value(const DispersionFit& fit, double energy) {
  switch (fit.law) {
    case DispersionLaw::PowerLaw:
      return fit.amplitude * std::pow(energy, fit.exponent);
    case DispersionLaw::ExpLaw:
      return fit.amplitude * std::exp(fit.exponent * energy);
    case DispersionLaw::LogLaw:
      return fit.amplitude * std::log(energy) + fit.offset;
    case DispersionLaw::LinearLogLaw: {
      const double r = energy / (2.0 * std::numbers::pi);
      return r * (std::log(r) - 1.0) + fit.offset;
    }
  }
  throw std::logic_error("dispersion_value: unhandled law");
}

namespace detail {

// Ordinary least squares y = slope * x + intercept.
inline std::pair<double, double> least_squares(
    const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) {
    throw std::invalid_argument("fit_dispersion: degenerate abscissas");
  }
  const double slope = (n * sxy - sx * sy) / denom;
  return {slope, (sy - slope * sx) / n};
}

}  // namespace detail

inline DispersionFit fit_dispersion(const CountingCurve& curve,
                                    DispersionLaw law) {
  std::vector<double> e;
  std::vector<double> n;
  for (const auto& s : curve.samples) {
    if (!std::isfinite(s.energy) || !std::isfinite(s.count)) {
      continue;
    }
    const bool needs_log_e =
        law == DispersionLaw::PowerLaw || law == DispersionLaw::LogLaw;
    const bool needs_log_n =
        law == DispersionLaw::PowerLaw || law == DispersionLaw::ExpLaw;
    if (needs_log_e && !(s.energy > 0.0)) {
      continue;
    }
    if (needs_log_n && !(s.count > 0.0)) {
      continue;
    }
    if (law == DispersionLaw::LinearLogLaw && !(s.energy > 0.0)) {
      continue;
    }
    e.push_back(s.energy);
    n.push_back(s.count);
  }
  if (e.size() < 20) {
    throw std::invalid_argument(
        "fit_dispersion: under-determined fit (need >= 20 usable samples)");
  }

  DispersionFit fit;
  fit.law = law;
  fit.window_lo = *std::min_element(e.begin(), e.end());
  fit.window_hi = *std::max_element(e.begin(), e.end());
  fit.n_samples = static_cast<int>(e.size());

  switch (law) {
    case DispersionLaw::PowerLaw: {
      std::vector<double> lx(e.size()), ly(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) {
        lx[i] = std::log(e[i]);
        ly[i] = std::log(n[i]);
      }
      const auto [slope, intercept] = detail::least_squares(lx, ly);
      fit.exponent = slope;
      fit.amplitude = std::exp(intercept);
      break;
    }
    case DispersionLaw::ExpLaw: {
      std::vector<double> ly(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) {
        ly[i] = std::log(n[i]);
      }
      const auto [slope, intercept] = detail::least_squares(e, ly);
      fit.exponent = slope;
      fit.amplitude = std::exp(intercept);
      break;
    }
    case DispersionLaw::LogLaw: {
      std::vector<double> lx(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) {
        lx[i] = std::log(e[i]);
      }
      const auto [slope, intercept] = detail::least_squares(lx, n);
      fit.amplitude = slope;
      fit.offset = intercept;
      break;
    }
    case DispersionLaw::LinearLogLaw: {
      double sum = 0.0;
      for (std::size_t i = 0; i < e.size(); ++i) {
        const double r = e[i] / (2.0 * std::numbers::pi);
        sum += n[i] - r * (std::log(r) - 1.0);
      }
      fit.offset = sum / static_cast<double>(e.size());
      break;
    }
  }

  double acc = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (n[i] == 0.0) {
      continue;
    }
    const double rel = (dispersion_value(fit, e[i]) - n[i]) / n[i];
    acc += rel * rel;
    ++used;
  }
  fit.rms_relative_residual =
      used > 0 ? std::sqrt(acc / static_cast<double>(used)) : 0.0;
  return fit;
}

// Window statistics of the difference between an eigenvalue count and a
// zero count, after removing the best constant shift (the additive
// quantization offset is not meaningful in this comparison).
struct CountComparison {
  double window_lo = 0.0;
  double window_hi = 0.0;
  double shift = 0.0;
  double mean_abs_residual = 0.0;
  double max_abs_residual = 0.0;
  double rms_residual = 0.0;
  int n_samples = 0;
};

inline CountComparison compare_counts(const std::vector<double>& eigenvalues,
                                      const ZeroSet& zeros, double e_lo,
                                      double e_hi, int n_samples = 512) {
  if (!(e_hi > e_lo)) {
    throw std::invalid_argument("compare_counts: empty window");
  }
  if (eigenvalues.empty() || zeros.empty()) {
    throw std::invalid_argument("compare_counts: empty inputs");
  }
  if (n_samples < 2) {
    throw std::invalid_argument("compare_counts: need >= 2 samples");
  }
  std::vector<double> levels = eigenvalues;
  std::sort(levels.begin(), levels.end());
  const double z_lo = zeros.zeros.front().alpha;
  const double z_hi = zeros.zeros.back().alpha;
  if (levels.front() > e_hi || levels.back() < e_lo || z_lo > e_hi ||
      z_hi < e_lo) {
    throw std::invalid_argument(
        "compare_counts: window is disjoint from an input range");
  }

  std::vector<double> alphas;
  alphas.reserve(zeros.size());
  for (const auto& z : zeros.zeros) {
    alphas.push_back(z.alpha);
  }
  std::sort(alphas.begin(), alphas.end());

  auto count_below = [](const std::vector<double>& v, double x) {
    return static_cast<double>(
        std::upper_bound(v.begin(), v.end(), x) - v.begin());
  };

  std::vector<double> diff(static_cast<std::size_t>(n_samples));
  double mean = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double e = e_lo + (e_hi - e_lo) * i / (n_samples - 1);
    diff[static_cast<std::size_t>(i)] =
        count_below(levels, e) - count_below(alphas, e);
    mean += diff[static_cast<std::size_t>(i)];
  }
  mean /= static_cast<double>(n_samples);

  CountComparison out;
  out.window_lo = e_lo;
  out.window_hi = e_hi;
  out.shift = mean;
  out.n_samples = n_samples;
  double acc = 0.0;
  for (double d : diff) {
    const double r = d - mean;
    out.mean_abs_residual += std::fabs(r);
    out.max_abs_residual = std::max(out.max_abs_residual, std::fabs(r));
    acc += r * r;
  }
  out.mean_abs_residual /= static_cast<double>(n_samples);
  out.rms_residual = std::sqrt(acc / static_cast<double>(n_samples));
  return out;
}

inline CountComparison compare_counts(const Spectrum& spectrum,
                                      const ZeroSet& zeros, double e_lo,
                                      double e_hi, int n_samples = 512) {
  return compare_counts(spectrum.eigenvalues, zeros, e_lo, e_hi, n_samples);
}

// Histogram of consecutive spacings normalized by the local mean spacing
// (a moving average over neighboring gaps), so sequences with slowly
// drifting density land on a common scale.  Bins are uniform over
// [0, max(2, largest normalized spacing)].
struct SpacingHistogram {
  std::vector<double> edges;
  std::vector<int> counts;
  int total = 0;
  double mean_spacing = 0.0;
};

inline SpacingHistogram spacing_histogram(const std::vector<double>& values,
                                          int bins) {
  if (bins <= 0) {
    throw std::invalid_argument("spacing_histogram: bins must be positive");
  }
  if (values.size() < 2) {
    throw std::invalid_argument(
        "spacing_histogram: need at least two values");
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) {
      throw std::invalid_argument(
          "spacing_histogram: values must be strictly ascending");
    }
  }

  const std::size_t n_gaps = values.size() - 1;
  std::vector<double> gaps(n_gaps);
  for (std::size_t i = 0; i < n_gaps; ++i) {
    gaps[i] = values[i + 1] - values[i];
  }

  const std::size_t half =
      std::max<std::size_t>(1, n_gaps / 32);
  std::vector<double> normalized(n_gaps);
  double mean = 0.0;
  for (std::size_t i = 0; i < n_gaps; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n_gaps - 1, i + half);
    double local = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
      local += gaps[j];
    }
    local /= static_cast<double>(hi - lo + 1);
    normalized[i] = gaps[i] / local;
    mean += normalized[i];
  }
  mean /= static_cast<double>(n_gaps);

  const double top =
      std::max(2.0, *std::max_element(normalized.begin(), normalized.end()) *
                        (1.0 + 1e-12));
  SpacingHistogram hist;
  hist.mean_spacing = mean;
  hist.total = static_cast<int>(n_gaps);
  hist.edges.resize(static_cast<std::size_t>(bins) + 1);
  hist.counts.assign(static_cast<std::size_t>(bins), 0);
  for (int b = 0; b <= bins; ++b) {
    hist.edges[static_cast<std::size_t>(b)] = top * b / bins;
  }
  for (double s : normalized) {
    auto idx = static_cast<std::size_t>(s / top * bins);
    idx = std::min(idx, static_cast<std::size_t>(bins - 1));
    ++hist.counts[idx];
  }
  return hist;
}

}  // namespace riemannlab
