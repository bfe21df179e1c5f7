#include "riemannlab/analysis.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "riemannlab/grid_solver.hpp"
#include "riemannlab/potential.hpp"
#include "riemannlab/wkb.hpp"
#include "riemannlab/zeros.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace riemannlab;

namespace {

ZeroSet reference_zeros(std::size_t limit) {
  return load_zeros(RLAB_ZEROS_FILE, limit);
}

std::vector<double> zero_heights(std::size_t limit) {
  std::vector<double> out;
  for (const auto& z : reference_zeros(limit).zeros) {
    out.push_back(z.alpha);
  }
  return out;
}

// Ordinary least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CountingCurve synthetic_curve(const std::vector<double>& energies,
                              const std::vector<double>& counts) {
  CountingCurve curve;
  curve.model_tag = "synthetic";
  curve.rule_tag = "none";
  for (std::size_t i = 0; i < energies.size(); ++i) {
    curve.samples.push_back({energies[i], counts[i]});
  }
  return curve;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  }
  return out;
}

}  // namespace

TEST_CASE("staircase counts levels at and below each energy") {
  Spectrum fake;
  fake.eigenvalues = {3.0, 7.0, 11.0};
  const CountingCurve curve = staircase(fake, "quadratic");

  CHECK(curve.model_tag == "quadratic");
  CHECK(curve.rule_tag == std::string("FiniteDifference"));
  REQUIRE(curve.samples.size() == 3);
  CHECK(counting_at(curve, 2.0) == 0.0);
  CHECK(counting_at(curve, 5.0) == 1.0);
  CHECK(counting_at(curve, 7.0) == 2.0);
  CHECK(counting_at(curve, 11.5) == 3.0);

  for (std::size_t i = 1; i < curve.samples.size(); ++i) {
    CHECK(curve.samples[i].energy > curve.samples[i - 1].energy);
    CHECK(curve.samples[i].count >= curve.samples[i - 1].count);
  }

  CHECK_THROWS_AS(staircase(Spectrum{}), std::invalid_argument);
  CHECK_THROWS_AS(staircase(ZeroSet{}), std::invalid_argument);

  const CountingCurve zc = staircase(reference_zeros(5));
  CHECK(zc.model_tag == "zeros");
  CHECK(counting_at(zc, zc.samples.front().energy) == 1.0);
  CHECK(counting_at(zc, 1e9) == 5.0);
}

TEST_CASE("staircase of a solved ladder is inverse-consistent") {
  const Spectrum spectrum =
      solve_spectrum(PotentialModel::quadratic(),
                     GridSpec{8.0, 1000, GridMethod::FiniteDifference}, 8,
                     false);
  const CountingCurve curve = staircase(spectrum, "quadratic");
  for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k) {
    CHECK(counting_at(curve, spectrum.eigenvalues[k]) ==
          static_cast<double>(k + 1));
  }

  // E = 4N + 3 spacing means one extra level per four units of energy.
  std::vector<double> e, n;
  for (const auto& s : curve.samples) {
    e.push_back(s.energy);
    n.push_back(s.count);
  }
  CHECK_THAT(fit_slope(e, n), WithinRel(0.25, 0.02));
}

TEST_CASE("semiclassical counting curve matches the analytic quadratic count") {
  const CountingCurve curve =
      wkb_counting_curve(PotentialModel::quadratic(),
                         QuantizationRule::maslov(), 10.0, 1000.0, 32);
  CHECK(curve.model_tag == "quadratic");
  CHECK(curve.rule_tag == "maslov");
  REQUIRE(curve.samples.size() == 32);
  for (const auto& s : curve.samples) {
    CHECK_THAT(s.count, WithinRel(s.energy / 4.0 - 0.75, 1e-10));
  }

  const CountingCurve paper_rule =
      wkb_counting_curve(PotentialModel::quadratic(),
                         QuantizationRule::sommerfeld(), 10.0, 100.0, 8);
  CHECK(paper_rule.rule_tag == "sommerfeld");

  CHECK_THROWS_AS(wkb_counting_curve(PotentialModel::quadratic(),
                                     QuantizationRule::maslov(), 0.0, 10.0, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(wkb_counting_curve(PotentialModel::quadratic(),
                                     QuantizationRule::maslov(), 10.0, 5.0, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(wkb_counting_curve(PotentialModel::quadratic(),
                                     QuantizationRule::maslov(), 10.0, 50.0, 1),
                  std::invalid_argument);
}

TEST_CASE("dispersion fits recover the laws they model") {
  const std::vector<double> e1 = log_spaced(10.0, 1.0e4, 64);
  std::vector<double> n1;
  for (double x : e1) n1.push_back(2.7 * std::pow(x, 1.4));
  const DispersionFit power =
      fit_dispersion(synthetic_curve(e1, n1), DispersionLaw::PowerLaw);
  CHECK_THAT(power.exponent, WithinRel(1.4, 1e-10));
  CHECK_THAT(power.amplitude, WithinRel(2.7, 1e-9));
  CHECK(power.rms_relative_residual < 1e-10);
  CHECK(power.n_samples == 64);
  CHECK_THAT(power.window_lo, WithinRel(10.0, 1e-12));
  CHECK_THAT(power.window_hi, WithinRel(1.0e4, 1e-12));

  std::vector<double> e2, n2;
  for (int i = 0; i < 40; ++i) {
    const double x = 1.0 + 19.0 * i / 39.0;
    e2.push_back(x);
    n2.push_back(0.5 * std::exp(0.8 * x));
  }
  const DispersionFit exp_fit =
      fit_dispersion(synthetic_curve(e2, n2), DispersionLaw::ExpLaw);
  CHECK_THAT(exp_fit.exponent, WithinRel(0.8, 1e-10));
  CHECK_THAT(exp_fit.amplitude, WithinRel(0.5, 1e-9));

  const std::vector<double> e3 = log_spaced(10.0, 1.0e5, 30);
  std::vector<double> n3;
  for (double x : e3) n3.push_back(3.0 * std::log(x) + 2.0);
  const DispersionFit log_fit =
      fit_dispersion(synthetic_curve(e3, n3), DispersionLaw::LogLaw);
  CHECK_THAT(log_fit.amplitude, WithinRel(3.0, 1e-10));
  CHECK_THAT(log_fit.offset, WithinRel(2.0, 1e-9));

  const std::vector<double> e4 = log_spaced(1.0e3, 1.0e5, 25);
  std::vector<double> n4;
  for (double x : e4) {
    const double r = x / (2.0 * std::numbers::pi);
    n4.push_back(r * (std::log(r) - 1.0) + 5.5);
  }
  const DispersionFit lin_log =
      fit_dispersion(synthetic_curve(e4, n4), DispersionLaw::LinearLogLaw);
  CHECK_THAT(lin_log.offset, WithinAbs(5.5, 1e-8));
  CHECK(lin_log.rms_relative_residual < 1e-12);
}

TEST_CASE("dispersion fit rejects sparse or unusable data") {
  const std::vector<double> e = log_spaced(10.0, 100.0, 19);
  std::vector<double> n;
  for (double x : e) n.push_back(x);
  CHECK_THROWS_AS(
      fit_dispersion(synthetic_curve(e, n), DispersionLaw::PowerLaw),
      std::invalid_argument);

  // Non-positive counts cannot enter a log-log fit; with only them present
  // the fit is under-determined even though the sample count is large.
  const std::vector<double> e5 = log_spaced(10.0, 100.0, 30);
  std::vector<double> zeros_only(30, 0.0);
  CHECK_THROWS_AS(fit_dispersion(synthetic_curve(e5, zeros_only),
                                 DispersionLaw::PowerLaw),
                  std::invalid_argument);

  // Mixed data: the usable subset is fitted and reported.
  std::vector<double> e6 = log_spaced(10.0, 1.0e3, 25);
  std::vector<double> n6;
  for (double x : e6) n6.push_back(4.0 * x);
  e6.push_back(2.0e3);
  n6.push_back(0.0);
  const DispersionFit mixed =
      fit_dispersion(synthetic_curve(e6, n6), DispersionLaw::PowerLaw);
  CHECK(mixed.n_samples == 25);
  CHECK_THAT(mixed.exponent, WithinRel(1.0, 1e-10));
}

TEST_CASE("full-pipeline growth exponents for the analytic family") {
  const QuantizationRule rule = QuantizationRule::maslov();
  auto fitted_exponent = [&rule](const PotentialModel& model) {
    const double e_lo = wkb_eigenvalue(model, 100, rule);
    const double e_hi = wkb_eigenvalue(model, 2000, rule);
    const CountingCurve curve =
        wkb_counting_curve(model, rule, e_lo, e_hi, 64);
    return fit_dispersion(curve, DispersionLaw::PowerLaw);
  };

  const DispersionFit linear = fitted_exponent(PotentialModel::linear());
  CHECK_THAT(linear.exponent, WithinAbs(1.5, 0.05));
  CHECK(linear.rms_relative_residual < 0.01);

  const DispersionFit quadratic = fitted_exponent(PotentialModel::quadratic());
  CHECK_THAT(quadratic.exponent, WithinAbs(1.0, 0.01));

  const DispersionFit near_harmonic =
      fitted_exponent(PotentialModel::power_near_harmonic(0.1));
  CHECK_THAT(near_harmonic.exponent, WithinAbs(0.5 + 1.0 / 1.9, 0.02));
}

TEST_CASE("counting growth ladder at matched energy") {
  const QuantizationRule rule = QuantizationRule::maslov();
  auto count_at_50 = [&rule](const PotentialModel& model) {
    return phase_integral(model, 50.0).phi / (rule.mu * std::numbers::pi) -
           rule.nu;
  };

  const double n_log = count_at_50(PotentialModel::log_potential());
  const double n_linear = count_at_50(PotentialModel::linear());
  const double n_lc1 = count_at_50(PotentialModel::log_corrected(1));
  const double n_lc2 = count_at_50(PotentialModel::log_corrected(2));
  const double n_quad = count_at_50(PotentialModel::quadratic());
  const double n_exp = count_at_50(PotentialModel::exponential());

  // The exponentially wide logarithmic well dwarfs everything else.
  CHECK(n_log > 1e6 * n_linear);
  CHECK(n_linear > n_lc2);
  // Dividing x^2 by powers of ln x widens the well, so the log-divided
  // variants hold more states than the pure quadratic at the same energy,
  // sitting between it and the linear potential.
  CHECK(n_lc2 > n_lc1);
  CHECK(n_lc1 > n_quad);
  CHECK(n_quad > n_exp);
  CHECK(n_exp > 0.0);
}

TEST_CASE("count comparison removes a constant shift and reports residuals") {
  const std::vector<double> heights = zero_heights(64);
  const ZeroSet zeros = reference_zeros(64);
  const double lo = heights.front();
  const double hi = heights.back();

  const CountComparison same = compare_counts(heights, zeros, lo, hi);
  CHECK(same.shift == 0.0);
  CHECK(same.mean_abs_residual == 0.0);
  CHECK(same.max_abs_residual == 0.0);
  CHECK(same.rms_residual == 0.0);
  CHECK(same.n_samples == 512);
  CHECK(same.window_lo == lo);
  CHECK(same.window_hi == hi);

  // Extra levels below the window shift the whole difference curve by a
  // constant, which the comparison must absorb exactly.
  std::vector<double> padded = {1.0, 2.0, 3.0, 4.0, 5.0};
  padded.insert(padded.end(), heights.begin(), heights.end());
  const CountComparison shifted = compare_counts(padded, zeros, lo, hi);
  CHECK_THAT(shifted.shift, WithinRel(5.0, 1e-12));
  CHECK(shifted.max_abs_residual < 1e-12);

  CHECK_THROWS_AS(compare_counts(heights, zeros, hi, lo),
                  std::invalid_argument);
  CHECK_THROWS_AS(compare_counts(heights, zeros, 1.0e6, 2.0e6),
                  std::invalid_argument);
  CHECK_THROWS_AS(compare_counts(std::vector<double>{}, zeros, lo, hi),
                  std::invalid_argument);
  CHECK_THROWS_AS(compare_counts(heights, ZeroSet{}, lo, hi),
                  std::invalid_argument);
  CHECK_THROWS_AS(compare_counts(heights, zeros, lo, hi, 1),
                  std::invalid_argument);
}

TEST_CASE("spacing histogram normalizes by the local mean gap") {
  std::vector<double> even;
  for (int i = 0; i <= 64; ++i) {
    even.push_back(2.5 * i);
  }
  const SpacingHistogram flat = spacing_histogram(even, 8);
  CHECK(flat.total == 64);
  CHECK_THAT(flat.mean_spacing, WithinRel(1.0, 1e-12));
  CHECK_THAT(flat.edges.back(), WithinRel(2.0, 1e-12));
  int nonzero_bins = 0;
  int mass = 0;
  for (int c : flat.counts) {
    if (c > 0) {
      ++nonzero_bins;
      mass += c;
    }
  }
  CHECK(nonzero_bins == 1);
  CHECK(mass == 64);

  // Real zero heights repel: far fewer near-coincident gaps than a uniform
  // spread across bins would give.
  const SpacingHistogram zeros_hist = spacing_histogram(zero_heights(1024), 10);
  CHECK(zeros_hist.total == 1023);
  CHECK_THAT(zeros_hist.mean_spacing, WithinAbs(1.0, 0.05));
  CHECK(zeros_hist.counts.front() * 10 < zeros_hist.total);

  CHECK_THROWS_AS(spacing_histogram(even, 0), std::invalid_argument);
  CHECK_THROWS_AS(spacing_histogram(even, -3), std::invalid_argument);
  CHECK_THROWS_AS(spacing_histogram(std::vector<double>{1.0}, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(spacing_histogram(std::vector<double>{2.0, 1.0}, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(spacing_histogram(std::vector<double>{1.0, 1.0}, 4),
                  std::invalid_argument);
}
