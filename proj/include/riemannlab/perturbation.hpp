#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "riemannlab/grid_solver.hpp"
#include "riemannlab/potential.hpp"
#include "riemannlab/special_functions.hpp"
#include "riemannlab/wkb.hpp"
#include "riemannlab/zeros.hpp"

namespace riemannlab {

// Where the unperturbed state entering the matrix element comes from: the
// semiclassical wavefunction or the grid solver's eigenvector.
enum class PerturbationSource { WKB, Exact };

// Closed-form estimates of the first-order shift.  LinearApplication is the
// Beta-constant linear map applied to the single-pair fluctuation;
// RHClosedForm is its leading-cosine asymptotic; IntegralForm is the variant
// built from the antiderivative of the fluctuation integrand.
enum class ClosedForm { LinearApplication, RHClosedForm, IntegralForm };

// One rung of the perturbed ladder.
struct PerturbedLevel {
  int N = 0;
  double E_N0 = 0.0;
  double E_N1_numeric = 0.0;
  double E_N1_closed = 0.0;
  double x_T = 0.0;
};

// Knobs of the closed forms: the power-law exponent of the perturbation
// envelope (x^delta times a slow function of log x) and the height of the
// lowest zero.  The default height is the first entry of the shipped zero
// table; a rounded value can be supplied for reproducing published numbers.
struct ClosedFormParams {
  double delta = 1.5;
  double alpha_1 = 14.134725141734693;
};

inline ClosedFormParams closed_form_params(const ZeroSet& zeros) {
  if (zeros.empty()) {
    throw std::invalid_argument("closed_form_params: empty zero set");
  }
  return ClosedFormParams{1.5, zeros.zeros.front().alpha};
}

// First-order matrix element together with an estimate bounding the omitted
// integral over the classically forbidden tail.
struct MatrixElement {
  double value = 0.0;
  double omitted_tail_bound = 0.0;
};

namespace detail {

// dPhi/dE by the same central stencil as density_of_states.  It equals the
// half-period integral (1/2) * int dx / sqrt(E - V), which is the reciprocal
// of the squared semiclassical normalization constant: |psi|^2 averaged over
// an oscillation is A^2 / (2 sqrt(E - V)), and that integrates to one.  The
// identity holds through the turning point, so no patch bookkeeping is
// needed for the norm.
inline double phase_derivative(const PotentialModel& model, double E) {
  const double h = 1e-4 * std::max(std::fabs(E), 1.0);
  return (phase_integral(model, E + h).phi - phase_integral(model, E - h).phi) /
         (2.0 * h);
}

// Gamma(1/3), for the decay-mass estimate below.
inline constexpr double kGammaThird = 2.678938534707748;

// Airy Ai by its ascending series, accurate to machine precision for the
// small arguments (|z| <= 2.5) the turning-point window produces.
inline double airy_ai(double z) {
  const double z3 = z * z * z;
  double f = 1.0;
  double g = z;
  double af = 1.0;
  double bg = z;
  for (int k = 0; k < 24; ++k) {
    af *= z3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
    bg *= z3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
    f += af;
    g += bg;
    if (std::fabs(af) + std::fabs(bg) < 1e-18) {
      break;
    }
  }
  const double c1 = 0.3550280538878172;
  const double c2 = 0.2588194037928068;
  return c1 * f - c2 * g;
}

// Tabulated machinery for matrix elements of one model against one
// fluctuation.  Two grids are kept: a linear one fine enough for the
// wavefunction phase, whose cumulative integral is cubic-Hermite
// interpolated (the derivative sqrt(E - V) is exact at the nodes), and a
// log-spaced one fine enough for both the fastest fluctuation component
// (local wavelength 2*pi*x / max_log_frequency) and the density
// oscillations of |psi|^2.  The quadrature itself runs on the log grid,
// where every oscillation frequency is constant.
class FluctuationEngine {
 public:
  FluctuationEngine(const PotentialModel& model,
                    std::function<double(double)> fluctuation,
                    double max_log_frequency, double x_hi, double e_max)
      : model_(model),
        fluctuation_(std::move(fluctuation)),
        zeroed_(zeroed_below_two(model)),
        x_lo_(zeroed_ ? 2.0 : 0.0) {
    x_hi_ = std::max(x_hi, x_lo_ + 1.0);
    const double k_max = std::sqrt(std::max(e_max, 1.0));

    hw_ = std::min(0.02, 2.0 * std::numbers::pi / (60.0 * k_max));
    const int nw = static_cast<int>(std::ceil((x_hi_ - x_lo_) / hw_));
    hw_ = (x_hi_ - x_lo_) / nw;
    xw_.resize(nw + 1);
    vw_.resize(nw + 1);
    for (int i = 0; i <= nw; ++i) {
      xw_[i] = x_lo_ + i * hw_;
      vw_[i] = i == 0 && !zeroed_ ? eval(model_, 1e-12) : eval(model_, xw_[i]);
    }

    // The log grid starts where the fluctuation switches on.
    const double u_lo = std::log(2.0);
    const double u_hi = std::log(x_hi_);
    const double wave_rate = x_hi_ * k_max;
    hu_ = std::min(2.0 * std::numbers::pi / (40.0 * std::max(max_log_frequency, 1.0)),
                   std::numbers::pi / (40.0 * wave_rate));
    const int nu = static_cast<int>(std::ceil((u_hi - u_lo) / hu_));
    hu_ = (u_hi - u_lo) / nu;
    xu_.resize(nu + 1);
    vu_.resize(nu + 1);
    v0u_.resize(nu + 1);
    for (int j = 0; j <= nu; ++j) {
      const double x = std::exp(u_lo + j * hu_);
      xu_[j] = x;
      vu_[j] = fluctuation_(x);
      v0u_[j] = eval(model_, x);
    }
  }

  double x_hi() const { return x_hi_; }

  // Matrix element of the fluctuation in the semiclassical state of energy
  // E with squared amplitude A2, integrated up to the turning point.  The
  // decade around the turning point is handled by the substitution
  // x = x_T - t^2 with the potential gap linearized from the patch edge, so
  // the production waveform is never evaluated inside the Airy patch.  The
  // exponential tail beyond x_T is omitted; its scale is returned as the
  // bound field.
  MatrixElement element(double E, double A2) const {
    const double x_T = turning_point(model_, E);
    const double patch = airy_patch_half_width(x_T);
    const double body_hi = x_T - patch;

    const std::vector<double> phi = phase_table(E);

    double body = 0.0;
    double prev = 0.0;
    bool have_prev = false;
    std::size_t last = 0;
    for (std::size_t j = 0; j < xu_.size() && xu_[j] <= body_hi; ++j) {
      const double gap = E - v0u_[j];
      if (gap <= 0.0) {
        break;
      }
      const double s = std::sin(phase_at(phi, E, xu_[j]));
      const double g = s * s * vu_[j] / std::sqrt(gap) * xu_[j];
      if (have_prev) {
        body += 0.5 * (prev + g) * hu_;
      }
      prev = g;
      have_prev = true;
      last = j;
    }
    if (have_prev && body_hi > xu_[last]) {
      const double gap = E - eval(model_, body_hi);
      if (gap > 0.0) {
        const double s = std::sin(phase_at(phi, E, body_hi));
        const double g = s * s * fluctuation_(body_hi) / std::sqrt(gap) * body_hi;
        body += 0.5 * (prev + g) * (std::log(body_hi) - std::log(xu_[last]));
      }
    }

    // Turning-point window [max(2, x_T - patch), x_T], uniform (Langer)
    // form.  With the gap linearized as g' (x_T - x), the oscillatory
    // density sin^2 / sqrt(gap) is replaced by pi sqrt(zeta) Ai^2(-zeta) /
    // sqrt(gap) with zeta = g'^(1/3) (x_T - x), which joins the body
    // integrand smoothly at the patch edge (where Ai takes its asymptotic
    // form) and stays finite and accurate through the turning point.  In
    // w = g'^(1/6) sqrt(x_T - x) the window becomes
    //   2 pi g'^(-2/3) * integral_0^{w_hi} w Ai^2(-w^2) f(x) dw.
    const double wlo = std::max(x_lo_, body_hi);
    double window = 0.0;
    double slope = 0.0;
    if (x_T > wlo + 1e-12 * x_T) {
      const double width = x_T - wlo;
      const double gap_left = E - eval(model_, wlo);
      if (gap_left > 0.0) {
        slope = gap_left / width;
        const double w_hi = std::pow(slope, 1.0 / 6.0) * std::sqrt(width);
        const int n = 64;
        const double hw = w_hi / n;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
          const double w = i * hw;
          const double x = x_T - w * w / std::cbrt(slope);
          const double ai = airy_ai(-w * w);
          const double f = w * ai * ai * fluctuation_(x);
          const double sw = i == 0 || i == n ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
          acc += sw * f;
        }
        window =
            2.0 * std::numbers::pi / std::pow(slope, 2.0 / 3.0) * acc * hw / 3.0;
      }
    }

    MatrixElement out;
    out.value = A2 * (body + window);
    out.omitted_tail_bound = A2 * tail_scale(E, x_T, slope);
    return out;
  }

  // Matrix element of the fluctuation against a solver eigenvector sampled
  // on a uniform grid, integrated up to the turning point on the log grid
  // (the solver grid is too coarse for the fastest fluctuation components).
  // For this source nothing inside the classical region is modelled, and
  // the returned bound is the directly accumulated magnitude of the omitted
  // forbidden-region integral.
  MatrixElement element_exact(double E, const SampledWavefunction& wave) const {
    const double x_T = turning_point(model_, E);
    MatrixElement out;
    double prev = 0.0;
    bool have_prev = false;
    std::size_t last = 0;
    for (std::size_t j = 0; j < xu_.size() && xu_[j] <= x_T; ++j) {
      const double p = psi_at(wave, xu_[j]);
      const double g = p * p * vu_[j] * xu_[j];
      if (have_prev) {
        out.value += 0.5 * (prev + g) * hu_;
      }
      prev = g;
      have_prev = true;
      last = j;
    }
    if (have_prev && x_T > xu_[last] && x_T <= wave.x.back()) {
      const double p = psi_at(wave, x_T);
      const double g = p * p * fluctuation_(x_T) * x_T;
      out.value += 0.5 * (prev + g) * (std::log(x_T) - std::log(xu_[last]));
    }
    double tail = 0.0;
    double tprev = 0.0;
    bool have_tail = false;
    for (std::size_t j = last + 1; j < xu_.size(); ++j) {
      if (xu_[j] <= x_T || xu_[j] > wave.x.back()) {
        continue;
      }
      const double p = psi_at(wave, xu_[j]);
      const double g = p * p * std::fabs(vu_[j]) * xu_[j];
      if (have_tail) {
        tail += 0.5 * (tprev + g) * hu_;
      }
      tprev = g;
      have_tail = true;
    }
    out.omitted_tail_bound = tail;
    return out;
  }

 private:
  // Cumulative phase on the linear grid, with the free segment (0, 2) of
  // the switched-on potentials folded in exactly.
  std::vector<double> phase_table(double E) const {
    std::vector<double> phi(xw_.size());
    phi[0] = zeroed_ ? 2.0 * std::sqrt(E) : 0.0;
    for (std::size_t i = 1; i < xw_.size(); ++i) {
      const double a = std::sqrt(std::max(E - vw_[i - 1], 0.0));
      const double b = std::sqrt(std::max(E - vw_[i], 0.0));
      phi[i] = phi[i - 1] + 0.5 * (a + b) * hw_;
    }
    return phi;
  }

  // Phase at x by cubic Hermite interpolation between linear nodes; the
  // derivative sqrt(E - V) is exact at both ends of the cell.
  double phase_at(const std::vector<double>& phi, double E, double x) const {
    const double pos = (x - x_lo_) / hw_;
    std::size_t k = static_cast<std::size_t>(std::max(0.0, std::floor(pos)));
    k = std::min(k, phi.size() - 2);
    const double t = pos - static_cast<double>(k);
    const double d0 = std::sqrt(std::max(E - vw_[k], 0.0)) * hw_;
    const double d1 = std::sqrt(std::max(E - vw_[k + 1], 0.0)) * hw_;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * phi[k] + (t3 - 2.0 * t2 + t) * d0 +
           (-2.0 * t3 + 3.0 * t2) * phi[k + 1] + (t3 - t2) * d1;
  }

  // Eigenvector value at x by 4-point Lagrange interpolation on its uniform
  // grid (both endpoints included in wave.x).
  static double psi_at(const SampledWavefunction& wave, double x) {
    const double h = wave.x[1] - wave.x[0];
    const double pos = (x - wave.x.front()) / h;
    const std::size_t n = wave.x.size();
    std::size_t k = static_cast<std::size_t>(std::max(0.0, std::floor(pos)));
    k = std::min(k, n - 2);
    const std::size_t base = k == 0 ? 0 : std::min(k - 1, n - 4);
    const double t = pos - static_cast<double>(base);
    double out = 0.0;
    for (int i = 0; i < 4; ++i) {
      double w = 1.0;
      for (int m = 0; m < 4; ++m) {
        if (m != i) {
          w *= (t - m) / (i - m);
        }
      }
      out += w * wave.psi[base + i];
    }
    return out;
  }

  // Scale of the probability mass beyond the turning point, in the
  // production decay convention exp(-2 theta) / sqrt(V - E): with the gap
  // linearized at slope g', the mass is Gamma(1/3) 2 / (3 c^{1/3})
  // / sqrt(g') with c = (4/3) sqrt(g').  A state below the switch-on jump
  // decays under a constant barrier instead, with mass 1 / (2 gap).  The
  // bound multiplies the mass by the largest nearby fluctuation magnitude.
  double tail_scale(double E, double x_T, double slope) const {
    double mass;
    if (slope > 0.0) {
      const double c = (4.0 / 3.0) * std::sqrt(slope);
      mass = 2.0 * kGammaThird / (3.0 * std::cbrt(c) * std::sqrt(slope));
    } else {
      const double gap = eval(model_, 2.0) - E;
      if (gap <= 0.0) {
        return 0.0;
      }
      mass = 0.5 / gap;
    }
    const double lo = std::max(x_T, 2.0);
    const double hi = std::max(1.2 * x_T, 2.5);
    double peak = 0.0;
    for (int i = 0; i <= 8; ++i) {
      const double x = lo + (hi - lo) * i / 8.0;
      peak = std::max(peak, std::fabs(fluctuation_(x)));
    }
    return mass * peak;
  }

  PotentialModel model_;
  std::function<double(double)> fluctuation_;
  bool zeroed_;
  double x_lo_;
  double x_hi_ = 0.0;
  double hw_ = 0.0;
  double hu_ = 0.0;
  std::vector<double> xw_, vw_;
  std::vector<double> xu_, vu_, v0u_;
};

// Grid fine enough for the solver to resolve the fastest eigenvector
// requested; the matrix-element quadrature itself runs on the engine's
// log grid.
inline GridSpec exact_grid(const PotentialModel& model, int count) {
  const double e_top =
      wkb_eigenvalue(model, count - 1, QuantizationRule::maslov());
  const double x_max = extended_x_max(model, 2.0, count);
  const int n_points = std::max(
      3000, static_cast<int>(std::ceil(8.0 * x_max * std::sqrt(e_top))));
  return GridSpec{x_max, n_points, GridMethod::FiniteDifference};
}

}  // namespace detail

// First-order shift of level N of `model0` under a general perturbing
// fluctuation: the expectation value of `fluctuation` in the unperturbed
// state, integrated up to the turning point, together with a bound on the
// omitted forbidden-region tail.  `max_log_frequency` is the fastest
// angular frequency the fluctuation contains in ln x; it controls the
// quadrature resolution.  The WKB source uses the semiclassical state of
// the quantization rule; the Exact source solves for the eigenvector.
inline MatrixElement first_order_numeric_detailed(
    const PotentialModel& model0,
    const std::function<double(double)>& fluctuation, double max_log_frequency,
    int N, PerturbationSource source,
    const QuantizationRule& rule = QuantizationRule::maslov()) {
  if (N < 0) {
    throw std::invalid_argument("first_order_numeric: N must be non-negative");
  }
  const double e_wkb = wkb_eigenvalue(model0, N, rule);
  const double x_hi = 1.35 * turning_point(model0, e_wkb);
  if (source == PerturbationSource::WKB) {
    const detail::FluctuationEngine engine(model0, fluctuation,
                                           max_log_frequency, x_hi, e_wkb);
    const double a2 = 1.0 / detail::phase_derivative(model0, e_wkb);
    return engine.element(e_wkb, a2);
  }
  const GridSpec grid = detail::exact_grid(model0, N + 1);
  const Spectrum spectrum = solve_spectrum(model0, grid, N + 1, true);
  const double e_exact = spectrum.eigenvalues[static_cast<std::size_t>(N)];
  const detail::FluctuationEngine engine(
      model0, fluctuation, max_log_frequency,
      std::max(x_hi, spectrum.x_max_used), std::max(e_wkb, e_exact));
  return engine.element_exact(
      e_exact, spectrum.wavefunctions[static_cast<std::size_t>(N)]);
}

// The same, for the zero-driven fluctuation of a ZeroSet in a given
// summation mode.
inline MatrixElement first_order_numeric_detailed(
    const PotentialModel& model0, const ZeroSet& zeros, SMode mode, int N,
    PerturbationSource source,
    const QuantizationRule& rule = QuantizationRule::maslov()) {
  if (zeros.empty()) {
    if (N < 0) {
      throw std::invalid_argument(
          "first_order_numeric: N must be non-negative");
    }
    return MatrixElement{};
  }
  auto fluct = [&zeros, mode](double x) {
    return perturbation_potential(x, zeros, mode);
  };
  return first_order_numeric_detailed(model0, fluct, zeros.zeros.back().alpha,
                                      N, source, rule);
}

inline double first_order_numeric(
    const PotentialModel& model0, const ZeroSet& zeros, SMode mode, int N,
    PerturbationSource source,
    const QuantizationRule& rule = QuantizationRule::maslov()) {
  return first_order_numeric_detailed(model0, zeros, mode, N, source, rule)
      .value;
}

namespace detail {

// Antiderivative factor of the integral-form shift.
inline double f_p(double x, double alpha_1) {
  const double u = std::log(x);
  return -std::pow(x, 1.5) / u *
         (1.5 * std::cos(alpha_1 * u) + alpha_1 * std::sin(alpha_1 * u));
}

}  // namespace detail

// Closed-form first-order shift at turning point x_T.  LinearApplication is
// B(delta+1, 1/2) times the single-pair fluctuation potential built from
// alpha_1 on the critical line; RHClosedForm keeps only the leading cosine
// of its asymptotic expansion (the dropped correction is a factor
// 1 / ln x_T down, see rh_closed_form_log_correction_scale); IntegralForm
// evaluates the antiderivative variant between 2 and x_T.  The two RH forms
// carry the critical-line exponent 3/2 in their structure and ignore
// params.delta.
inline double first_order_closed(double x_T, const ClosedFormParams& params,
                                 ClosedForm form) {
  if (!(x_T >= 2.0)) {
    throw std::domain_error("first_order_closed: requires x_T >= 2");
  }
  if (!(params.delta > 0.0) || !(params.alpha_1 > 0.0)) {
    throw std::invalid_argument(
        "first_order_closed: delta and alpha_1 must be positive");
  }
  const double u = std::log(x_T);
  const double a1 = params.alpha_1;
  switch (form) {
    case ClosedForm::LinearApplication: {
      const double c = beta_function(params.delta + 1.0, 0.5);
      const double s1 = -std::sqrt(x_T) / u *
                        (std::cos(a1 * u) + 2.0 * a1 * std::sin(a1 * u)) /
                        (0.25 + a1 * a1);
      return c * (x_T / u) * s1;
    }
    case ClosedForm::RHClosedForm:
      return -(3.0 * std::numbers::pi * std::pow(x_T, 1.5) / (4.0 * u * u)) *
             std::cos(a1 * u) * std::log(a1) / a1;
    case ClosedForm::IntegralForm:
      return -(std::pow(2.0, 0.75) * 3.0 * std::numbers::pi /
               (4.0 * (2.25 + a1 * a1) * u)) *
             (detail::f_p(x_T, a1) - detail::f_p(2.0, a1)) * std::log(a1) / a1;
  }
  throw std::invalid_argument("first_order_closed: unknown form");
}

// Size of the correction RHClosedForm drops: one power of 1 / ln x_T below
// the leading term.
inline double rh_closed_form_log_correction_scale(
    double x_T, const ClosedFormParams& params) {
  return std::fabs(first_order_closed(x_T, params, ClosedForm::RHClosedForm)) /
         std::log(x_T);
}

// Perturbed ladder over N in [N_lo, N_hi]: unperturbed energies under
// `rule`, the numeric matrix element, and the linear-application closed
// estimate B(5/2, 1/2) * V_fluct(x_T) evaluated with the same zeros and
// mode.  Any display scaling of the shifts belongs to the emitter, not
// here.
inline std::vector<PerturbedLevel> perturbed_spectrum(
    const PotentialModel& model0, const ZeroSet& zeros, SMode mode, int N_lo,
    int N_hi, const QuantizationRule& rule,
    PerturbationSource source = PerturbationSource::WKB) {
  if (N_lo < 0 || N_hi < N_lo) {
    throw std::invalid_argument(
        "perturbed_spectrum: need 0 <= N_lo <= N_hi");
  }
  const double c = beta_function(2.5, 0.5);
  const double e_top = wkb_eigenvalue(model0, N_hi, rule);
  const double x_hi = 1.35 * turning_point(model0, e_top);
  auto fluct = [&zeros, mode](double x) {
    return zeros.empty() ? 0.0 : perturbation_potential(x, zeros, mode);
  };
  const double freq = zeros.empty() ? 1.0 : zeros.zeros.back().alpha;
  const detail::FluctuationEngine engine(model0, fluct, freq, x_hi, e_top);

  Spectrum exact;
  if (source == PerturbationSource::Exact) {
    exact = solve_spectrum(model0, detail::exact_grid(model0, N_hi + 1),
                           N_hi + 1, true);
  }

  std::vector<PerturbedLevel> out;
  out.reserve(static_cast<std::size_t>(N_hi - N_lo + 1));
  double seed = 0.0;
  for (int n = N_lo; n <= N_hi; ++n) {
    PerturbedLevel level;
    level.N = n;
    level.E_N0 = wkb_eigenvalue(model0, n, rule, seed);
    seed = level.E_N0;
    level.x_T = turning_point(model0, level.E_N0);
    if (source == PerturbationSource::WKB) {
      const double a2 = 1.0 / detail::phase_derivative(model0, level.E_N0);
      level.E_N1_numeric = engine.element(level.E_N0, a2).value;
    } else {
      const std::size_t k = static_cast<std::size_t>(n);
      level.E_N1_numeric =
          engine.element_exact(exact.eigenvalues[k], exact.wavefunctions[k])
              .value;
    }
    level.E_N1_closed =
        zeros.empty() ? 0.0
                      : c * perturbation_potential(level.x_T, zeros, mode);
    out.push_back(level);
  }
  return out;
}

// Fixed-point exploration of the relation alpha_N ~ E_N0 + C * (x_T / ln
// x_T) * S(x_T): each step re-evaluates the fluctuation with the current
// heights and maps them through the relation, synchronously.  Step k of the
// returned sequence holds the heights after k updates; entry 0 is the
// starting set (the unperturbed ladder when no zeros are given).  Purely
// exploratory: nothing is asserted about convergence, but a step that grows
// any height tenfold aborts.
inline std::vector<std::vector<double>> attractor_iteration(
    const ZeroSet& zeros, const QuantizationRule& rule, int steps,
    int n_levels = 20) {
  if (steps < 1) {
    throw std::invalid_argument("attractor_iteration: steps must be >= 1");
  }
  if (n_levels < 1) {
    throw std::invalid_argument("attractor_iteration: n_levels must be >= 1");
  }
  const PotentialModel model = PotentialModel::riemann_principal();
  const std::size_t m =
      zeros.empty() ? static_cast<std::size_t>(n_levels)
                    : std::min(static_cast<std::size_t>(n_levels),
                               zeros.size());
  std::vector<double> e0(m);
  std::vector<double> xt(m);
  double seed = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    e0[k] = wkb_eigenvalue(model, static_cast<int>(k), rule, seed);
    seed = e0[k];
    xt[k] = turning_point(model, e0[k]);
  }
  const double c = beta_function(2.5, 0.5);

  ZeroSet work = zeros;
  std::vector<std::vector<double>> out;
  std::vector<double> current(m);
  for (std::size_t k = 0; k < m; ++k) {
    current[k] = zeros.empty() ? e0[k] : work.zeros[k].alpha;
  }
  out.push_back(current);

  for (int step = 0; step < steps; ++step) {
    std::vector<double> next(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double s =
          work.empty() ? 0.0 : fluctuation_S(xt[k], work, SMode::TermSum);
      next[k] = e0[k] + c * (xt[k] / std::log(xt[k])) * s;
      if (std::fabs(next[k]) > 10.0 * std::max(std::fabs(current[k]), 1.0)) {
        throw std::runtime_error(
            "attractor_iteration: a height grew tenfold in one step");
      }
    }
    for (std::size_t k = 0; k < m && k < work.zeros.size(); ++k) {
      work.zeros[k].alpha = next[k];
    }
    out.push_back(next);
    current = std::move(next);
  }
  return out;
}

}  // namespace riemannlab
