#include "riemannlab/perturbation.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
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

ZeroSet single_pair(const ZeroSet& table, std::size_t index) {
  ZeroSet out;
  out.source = table.source;
  out.zeros.push_back(table.zeros.at(index));
  return out;
}

// Sign changes across a sampled sequence, skipping exact zeros.
int count_sign_changes(const std::vector<double>& samples) {
  int changes = 0;
  double previous = 0.0;
  for (double s : samples) {
    if (s == 0.0) {
      continue;
    }
    if (previous != 0.0 && (s > 0.0) != (previous > 0.0)) {
      ++changes;
    }
    previous = s;
  }
  return changes;
}

}  // namespace

TEST_CASE("first-order shift vanishes without driving zeros") {
  const PotentialModel model = PotentialModel::riemann_principal();
  const ZeroSet empty;

  CHECK(first_order_numeric(model, empty, SMode::TermSum, 5,
                            PerturbationSource::WKB) == 0.0);
  CHECK(first_order_numeric(model, empty, SMode::TermSum, 5,
                            PerturbationSource::Exact) == 0.0);

  const MatrixElement detailed = first_order_numeric_detailed(
      model, empty, SMode::TermSum, 12, PerturbationSource::WKB);
  CHECK(detailed.value == 0.0);
  CHECK(detailed.omitted_tail_bound == 0.0);

  CHECK_THROWS_AS(first_order_numeric(model, empty, SMode::TermSum, -1,
                                      PerturbationSource::WKB),
                  std::invalid_argument);
  CHECK_THROWS_AS(first_order_numeric(model, reference_zeros(1), SMode::TermSum,
                                      -3, PerturbationSource::Exact),
                  std::invalid_argument);
}

TEST_CASE("shift is linear in the fluctuation") {
  const PotentialModel model = PotentialModel::riemann_principal();
  const ZeroSet pair = single_pair(reference_zeros(1), 0);
  const double freq = pair.zeros.front().alpha;
  const auto plus_f = [&pair](double x) {
    return perturbation_potential(x, pair, SMode::TermSum);
  };
  const auto minus_f = [&plus_f](double x) { return -plus_f(x); };
  const auto triple_f = [&plus_f](double x) { return 3.0 * plus_f(x); };

  // Grid-solver state: the eigenvector does not depend on the fluctuation,
  // so flipping its sign must flip the shift exactly.
  const double plus = first_order_numeric_detailed(
                          model, plus_f, freq, 30, PerturbationSource::Exact)
                          .value;
  const double minus = first_order_numeric_detailed(
                           model, minus_f, freq, 30, PerturbationSource::Exact)
                           .value;
  CHECK(std::fabs(plus) > 1e-6);
  CHECK_THAT(minus, WithinRel(-plus, 1e-13));

  const double one = first_order_numeric_detailed(model, plus_f, freq, 30,
                                                  PerturbationSource::WKB)
                         .value;
  const double three = first_order_numeric_detailed(model, triple_f, freq, 30,
                                                    PerturbationSource::WKB)
                           .value;
  CHECK_THAT(three, WithinRel(3.0 * one, 1e-12));
}

TEST_CASE("semiclassical and grid-solver matrix elements agree") {
  const PotentialModel model = PotentialModel::riemann_principal();
  const ZeroSet zeros = reference_zeros(1024);

  for (int n : {20, 40}) {
    const double wkb = first_order_numeric(model, zeros, SMode::TermSum, n,
                                           PerturbationSource::WKB);
    const double exact = first_order_numeric(model, zeros, SMode::TermSum, n,
                                             PerturbationSource::Exact);
    INFO("N = " << n << ": semiclassical " << wkb << ", grid " << exact);
    CHECK_THAT(wkb, WithinRel(exact, 0.10));
  }
}

TEST_CASE("matrix elements add over disjoint zero subsets") {
  const PotentialModel model = PotentialModel::riemann_principal();
  const ZeroSet table = reference_zeros(1024);

  // On a shared quadrature grid (one frequency cap for every call) the
  // element is linear in the sampled fluctuation, so pair contributions add
  // to machine precision.
  ZeroSet first8;
  first8.source = table.source;
  for (std::size_t i = 0; i < 8; ++i) {
    first8.zeros.push_back(table.zeros[i]);
  }
  const double cap = first8.zeros.back().alpha;
  const auto whole = [&first8](double x) {
    return perturbation_potential(x, first8, SMode::TermSum);
  };
  const double full = first_order_numeric_detailed(
                          model, whole, cap, 40, PerturbationSource::WKB)
                          .value;
  double sum = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    const ZeroSet one = single_pair(first8, i);
    const auto f = [&one](double x) {
      return perturbation_potential(x, one, SMode::TermSum);
    };
    sum += first_order_numeric_detailed(model, f, cap, 40,
                                        PerturbationSource::WKB)
               .value;
  }
  CHECK_THAT(sum, WithinRel(full, 1e-10));

  // Through the zero-set interface each subset picks its own grid, so the
  // halves recombine only to quadrature accuracy.
  ZeroSet lo, hi;
  lo.source = hi.source = table.source;
  for (std::size_t i = 0; i < table.size(); ++i) {
    (i < 512 ? lo : hi).zeros.push_back(table.zeros[i]);
  }
  const double all = first_order_numeric(model, table, SMode::TermSum, 40,
                                         PerturbationSource::WKB);
  const double a = first_order_numeric(model, lo, SMode::TermSum, 40,
                                       PerturbationSource::WKB);
  const double b = first_order_numeric(model, hi, SMode::TermSum, 40,
                                       PerturbationSource::WKB);
  CHECK_THAT(a + b, WithinAbs(all, 1e-5));
}

TEST_CASE("linear closed form carries the beta constant") {
  CHECK_THAT(beta_function(2.5, 0.5),
             WithinRel(oracle::kBetaFiveHalvesHalf, 1e-12));

  const ClosedFormParams defaults;
  CHECK_THAT(defaults.delta, WithinRel(1.5, 1e-15));
  CHECK_THAT(defaults.alpha_1, WithinRel(14.134725141734693, 1e-15));

  const ZeroSet table = reference_zeros(16);
  const ClosedFormParams from_table = closed_form_params(table);
  CHECK(from_table.alpha_1 == table.zeros.front().alpha);
  CHECK_THAT(from_table.delta, WithinRel(1.5, 1e-15));
  CHECK_THROWS_AS(closed_form_params(ZeroSet{}), std::invalid_argument);

  // The linear application is the beta constant times the single-pair
  // fluctuation potential, evaluated at the turning point.
  const ZeroSet pair = single_pair(table, 0);
  for (double x_T : {50.0, 500.0, 5000.0}) {
    const double lhs =
        first_order_closed(x_T, from_table, ClosedForm::LinearApplication);
    const double rhs = beta_function(2.5, 0.5) *
                       perturbation_potential(x_T, pair, SMode::TermSum);
    CHECK_THAT(lhs, WithinRel(rhs, 1e-12));
  }
}

TEST_CASE("leading-cosine form oscillates; integral variant sits below it") {
  const ClosedFormParams params = closed_form_params(reference_zeros(1));
  const double a1 = params.alpha_1;

  // One period of the carrier in ln x_T flips the sign.
  const double u0 = 2.0 * std::numbers::pi * 16.0 / a1;
  const double x0 = std::exp(u0);
  const double at_crest = first_order_closed(x0, params, ClosedForm::RHClosedForm);
  const double at_trough = first_order_closed(
      std::exp(u0 + std::numbers::pi / a1), params, ClosedForm::RHClosedForm);
  CHECK(at_crest < 0.0);
  CHECK(at_trough > 0.0);

  // Over [1e3, 1e5] the sign changes at least once per carrier period.
  std::vector<double> samples;
  for (int i = 0; i <= 2000; ++i) {
    const double x = 1.0e3 * std::pow(100.0, i / 2000.0);
    samples.push_back(first_order_closed(x, params, ClosedForm::RHClosedForm));
  }
  const int floor_changes = static_cast<int>(
      std::log(100.0) / (2.0 * std::numbers::pi / a1));
  INFO("sign changes: " << count_sign_changes(samples) << ", floor "
                        << floor_changes);
  CHECK(count_sign_changes(samples) >= floor_changes);

  // The integral variant shares the carrier but sits roughly an order of
  // magnitude below the leading-cosine form.
  const double period = 2.0 * std::numbers::pi / a1;
  double sum_integral = 0.0;
  double sum_cosine = 0.0;
  for (int i = 0; i < 256; ++i) {
    const double x = std::exp(std::log(1.0e4) + period * i / 256.0);
    const double fi = first_order_closed(x, params, ClosedForm::IntegralForm);
    const double fr = first_order_closed(x, params, ClosedForm::RHClosedForm);
    sum_integral += fi * fi;
    sum_cosine += fr * fr;
  }
  const double rms_ratio = std::sqrt(sum_integral / sum_cosine);
  INFO("rms ratio " << rms_ratio);
  CHECK(rms_ratio > 0.06);
  CHECK(rms_ratio < 0.24);

  // The dropped correction of the leading-cosine form is reported one power
  // of 1 / ln x_T below the kept term.
  CHECK_THAT(rh_closed_form_log_correction_scale(x0, params),
             WithinRel(std::fabs(at_crest) / u0, 1e-14));
}

TEST_CASE("closed forms reject out-of-range inputs") {
  const ClosedFormParams params;
  CHECK_THROWS_AS(first_order_closed(1.5, params, ClosedForm::RHClosedForm),
                  std::domain_error);
  CHECK_THROWS_AS(
      first_order_closed(100.0, ClosedFormParams{0.0, 14.0},
                         ClosedForm::LinearApplication),
      std::invalid_argument);
  CHECK_THROWS_AS(
      first_order_closed(100.0, ClosedFormParams{1.5, -1.0},
                         ClosedForm::RHClosedForm),
      std::invalid_argument);
}

TEST_CASE("perturbed ladder without zeros is the bare ladder") {
  const PotentialModel model = PotentialModel::riemann_principal();
  const ZeroSet empty;
  const QuantizationRule rule = QuantizationRule::maslov();

  const auto ladder =
      perturbed_spectrum(model, empty, SMode::TermSum, 3, 8, rule);
  REQUIRE(ladder.size() == 6);
  for (const auto& level : ladder) {
    CHECK(level.E_N1_numeric == 0.0);
    CHECK(level.E_N1_closed == 0.0);
    CHECK_THAT(level.E_N0,
               WithinRel(wkb_eigenvalue(model, level.N, rule), 1e-9));
    CHECK_THAT(level.x_T, WithinRel(turning_point(model, level.E_N0), 1e-9));
  }

  CHECK_THROWS_AS(
      perturbed_spectrum(model, empty, SMode::TermSum, -1, 5, rule),
      std::invalid_argument);
  CHECK_THROWS_AS(perturbed_spectrum(model, empty, SMode::TermSum, 5, 3, rule),
                  std::invalid_argument);
}

TEST_CASE("perturbed ladder keeps shifts small and mostly sign-concordant") {
  const PotentialModel model = PotentialModel::riemann_principal();
  const ZeroSet zeros = reference_zeros(1024);
  const auto band = perturbed_spectrum(model, zeros, SMode::TermSum, 50, 150,
                                       QuantizationRule::maslov());
  REQUIRE(band.size() == 101);

  int concordant = 0;
  double worst_rel = 0.0;
  std::vector<double> numeric;
  for (std::size_t i = 0; i < band.size(); ++i) {
    const auto& level = band[i];
    CHECK_THAT(level.x_T, WithinRel(turning_point(model, level.E_N0), 1e-9));
    if (i > 0) {
      CHECK(level.E_N0 > band[i - 1].E_N0);
    }
    if ((level.E_N1_numeric > 0.0) == (level.E_N1_closed > 0.0)) {
      ++concordant;
    }
    worst_rel =
        std::max(worst_rel, std::fabs(level.E_N1_numeric) / level.E_N0);
    numeric.push_back(level.E_N1_numeric);
  }

  // The shift stays a small correction across the band, swings through both
  // signs, and its sign usually matches the closed-form estimate (the
  // closed form is asymptotic, so agreement is statistical, not level by
  // level).
  const double concordance =
      static_cast<double>(concordant) / static_cast<double>(band.size());
  INFO("concordance " << concordance << ", worst relative shift "
                      << worst_rel);
  CHECK(worst_rel < 0.05);
  CHECK(count_sign_changes(numeric) >= 3);
  CHECK(concordance >= 0.65);
}

TEST_CASE("height iteration is deterministic, bounded, and guarded") {
  const QuantizationRule rule = QuantizationRule::sommerfeld();
  const PotentialModel model = PotentialModel::riemann_principal();

  const ZeroSet empty;
  const auto fixed = attractor_iteration(empty, rule, 2);
  REQUIRE(fixed.size() == 3);
  REQUIRE(fixed[0].size() == 20);
  for (std::size_t k = 0; k < fixed[0].size(); ++k) {
    CHECK_THAT(fixed[0][k],
               WithinRel(wkb_eigenvalue(model, static_cast<int>(k), rule),
                         1e-9));
    CHECK(fixed[1][k] == fixed[0][k]);
    CHECK(fixed[2][k] == fixed[0][k]);
  }

  const ZeroSet zeros = reference_zeros(1024);
  const auto stepped = attractor_iteration(zeros, rule, 1);
  REQUIRE(stepped.size() == 2);
  REQUIRE(stepped[0].size() == 20);
  double worst = 0.0;
  for (std::size_t k = 0; k < stepped[0].size(); ++k) {
    CHECK(stepped[0][k] == zeros.zeros[k].alpha);
    worst = std::max(worst, std::fabs(stepped[1][k] - stepped[0][k]) /
                                stepped[0][k]);
  }
  INFO("worst one-step relative movement " << worst);
  CHECK(worst < 1.0);

  const auto again = attractor_iteration(zeros, rule, 1);
  CHECK(again == stepped);

  CHECK_THROWS_AS(attractor_iteration(zeros, rule, 0), std::invalid_argument);
  CHECK_THROWS_AS(attractor_iteration(zeros, rule, 1, 0),
                  std::invalid_argument);

  // A height parked close to zero makes the update explode relative to the
  // current value, which must trip the divergence guard.
  ZeroSet pathological;
  pathological.zeros.push_back(Zero{0.5, 0.01});
  CHECK_THROWS_AS(attractor_iteration(pathological, rule, 3),
                  std::runtime_error);
}
