#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "riemannlab/potential.hpp"
#include "riemannlab/quadrature.hpp"

namespace riemannlab {

// Semiclassical quantization condition Phi(E_N) = mu * pi * (N + nu).  Two
// presets are provided: the Sommerfeld-style full-period convention
// 2*pi*(N + 1/4) and the hard-wall Maslov connection rule pi*(N + 3/4).  The
// Maslov rule reproduces the exact half-line harmonic spectrum 4N + 3; the
// Sommerfeld rule does not, and every report records which one was used.
struct QuantizationRule {
  double mu = 1.0;
  double nu = 0.75;

  static QuantizationRule sommerfeld() { return {2.0, 0.25}; }
  static QuantizationRule maslov() { return {1.0, 0.75}; }
};

// Turning point and phase integral for one probe energy.
struct PhaseResult {
  double energy = 0.0;
  double x_T = 0.0;
  double phi = 0.0;
  double quad_error_estimate = 0.0;
};

// One semiclassical bound state.
struct WkbState {
  double energy = 0.0;
  double norm_A = 0.0;
  int node_count = 0;
};

// Numerically integrated and closed-form normalization constants, reported
// side by side.  closed_form_A2 is the stationary-phase estimate
// A^2 = 1 / (sqrt(2) ln x_T + (2 x_T / ln^3 x_T)^{-2/3}); it is tailored to
// the slowly varying Riemann-type potentials and is reported for every model
// so callers can judge its reach.
struct WkbNormResult {
  double numeric_A = 0.0;
  double numeric_A2 = 0.0;
  double closed_form_A2 = 0.0;
};

namespace detail {

// Potentials that are defined as zero on (0, 2) start their nontrivial
// region with a jump at x = 2.
inline bool zeroed_below_two(const PotentialModel& model) {
  switch (model.kind) {
    case PotentialModel::Kind::LogCorrected:
    case PotentialModel::Kind::RiemannPrincipal:
    case PotentialModel::Kind::RiemannFull:
    case PotentialModel::Kind::RiemannIntegralForm:
      return true;
    default:
      return false;
  }
}

}  // namespace detail

// Largest x with V(x) = E, located by exponential bracketing followed by
// bisection to 1e-12 relative width.  For the members that vanish on (0, 2)
// and jump at x = 2, energies below the jump turn around at the jump itself
// and x_T = 2 is returned.
inline double turning_point(const PotentialModel& model, double E) {
  if (detail::zeroed_below_two(model)) {
    if (!(E > 0.0)) {
      throw std::runtime_error(
          "turning_point: energy does not exceed the potential floor");
    }
    const double v2 = eval(model, 2.0);
    if (E <= v2) {
      return 2.0;
    }
  }

  // Find lo with V(lo) < E.
  double lo = detail::zeroed_below_two(model) ? 2.0 : 1.0;
  int shrink = 0;
  while (eval(model, lo) >= E) {
    lo *= 0.5;
    if (++shrink > 1100) {
      throw std::runtime_error(
          "turning_point: energy does not exceed the potential anywhere");
    }
  }
  // Grow hi until the potential exceeds E, remembering the last sample that
  // stayed below so that the final bracket encloses the outermost crossing.
  double hi = lo;
  int grow = 0;
  for (;;) {
    const double next = hi * 2.0;
    if (eval(model, next) > E) {
      hi = next;
      break;
    }
    lo = next;
    hi = next;
    if (++grow > 1100) {
      throw std::runtime_error("turning_point: no upper bracket found");
    }
  }

  while ((hi - lo) > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (eval(model, mid) < E) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Phase integral Phi(E) = integral over [0, x_T] of sqrt(E - V).  The
// inverse-square-root behaviour at the turning point is removed analytically
// by the substitution x = x_T - t^2; over any leading zero-potential stretch
// the integral is the exact 2 sqrt(E) contribution.
inline PhaseResult phase_integral(const PotentialModel& model, double E) {
  PhaseResult out;
  out.energy = E;
  out.x_T = turning_point(model, E);

  const bool jump_member = detail::zeroed_below_two(model);
  if (jump_member && out.x_T == 2.0) {
    // The state turns around at the jump: V = 0 on the whole classical
    // region, so the phase is exactly 2 sqrt(E).
    out.phi = 2.0 * std::sqrt(E);
    out.quad_error_estimate = 0.0;
    return out;
  }

  double phi = 0.0;
  double err = 0.0;
  double inner = 0.0;
  if (jump_member) {
    phi += 2.0 * std::sqrt(E);
    inner = 2.0;
  }

  auto substituted = [&model, E, xt = out.x_T](double t) {
    const double x = xt - t * t;
    const double gap = E - eval(model, x);
    return gap > 0.0 ? 2.0 * t * std::sqrt(gap) : 0.0;
  };
  const double t_max = std::sqrt(out.x_T - inner);
  const QuadResult q = integrate(substituted, 0.0, t_max, 5e-10, 1e-13);
  if (!q.converged) {
    throw std::runtime_error("phase_integral: quadrature did not converge");
  }
  phi += q.value;
  err += q.error;

  out.phi = phi;
  out.quad_error_estimate = err;
  return out;
}

// Solves Phi(E_N) = mu * pi * (N + nu) for E_N.  Phi is strictly increasing,
// so an exponential bracket search followed by a guarded secant (Illinois)
// iteration converges to 1e-10 relative.  `seed` optionally starts the
// bracket near a known lower energy (e.g. the previous eigenvalue).
inline double wkb_eigenvalue(const PotentialModel& model, int N,
                             const QuantizationRule& rule,
                             double seed = 0.0) {
  if (N < 0) {
    throw std::invalid_argument("wkb_eigenvalue: N must be non-negative");
  }
  const double target = rule.mu * std::numbers::pi * (N + rule.nu);

  // Potentials with V(0+) > 0 (the exponential) have no classically allowed
  // region below the wall-side infimum, so the bracket must start above it.
  const double wall = eval(model, 1e-9);
  const double e_min = wall > 0.0 ? wall * (1.0 + 1e-9) : 0.0;
  double lo = std::max(seed > 0.0 ? seed : 1e-6, e_min);
  double f_lo = phase_integral(model, lo).phi - target;
  int guard = 0;
  while (f_lo > 0.0) {
    lo = e_min + 0.25 * (lo - e_min);
    f_lo = phase_integral(model, lo).phi - target;
    if (++guard > 200) {
      throw std::runtime_error("wkb_eigenvalue: no lower bracket");
    }
  }
  double hi = std::max(2.0 * lo, 1.0);
  double f_hi = phase_integral(model, hi).phi - target;
  guard = 0;
  while (f_hi < 0.0) {
    hi *= 2.0;
    f_hi = phase_integral(model, hi).phi - target;
    if (++guard > 200) {
      throw std::runtime_error("wkb_eigenvalue: no upper bracket");
    }
  }

  // Illinois variant of regula falsi: guaranteed bracket, superlinear in
  // practice.
  double mid = hi;
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-10 * hi; ++iter) {
    mid = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(mid > lo) || !(mid < hi)) {
      mid = 0.5 * (lo + hi);
    }
    const double f_mid = phase_integral(model, mid).phi - target;
    if (f_mid == 0.0) {
      return mid;
    }
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
      f_hi *= 0.5;
    } else {
      hi = mid;
      f_hi = f_mid;
      f_lo *= 0.5;
    }
  }
  return 0.5 * (lo + hi);
}

// Lowest `count` semiclassical eigenvalues, each bracket seeded by its
// predecessor.
inline std::vector<double> wkb_spectrum(const PotentialModel& model,
                                        int count,
                                        const QuantizationRule& rule) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  double seed = 0.0;
  for (int n = 0; n < count; ++n) {
    const double e = wkb_eigenvalue(model, n, rule, seed);
    out.push_back(e);
    seed = e;
  }
  return out;
}

// dN/dE = Phi'(E) / (mu pi) by central finite difference.
inline double density_of_states(const PotentialModel& model, double E,
                                const QuantizationRule& rule) {
  const double h = 1e-4 * std::max(std::fabs(E), 1.0);
  const double hi = phase_integral(model, E + h).phi;
  const double lo = phase_integral(model, E - h).phi;
  return (hi - lo) / (2.0 * h * rule.mu * std::numbers::pi);
}

// Half-width of the excluded window around the turning point where the
// primitive semiclassical forms diverge.
inline double airy_patch_half_width(double x_T) { return 0.05 * x_T; }

// Stationary-phase normalization estimate for the slowly varying potentials.
inline double wkb_norm_closed_form_A2(double x_T) {
  const double L = std::log(x_T);
  return 1.0 / (std::sqrt(2.0) * L +
                std::pow(2.0 * x_T / (L * L * L), -2.0 / 3.0));
}

namespace detail {

// Phase accumulated from 0 to x (x strictly inside the classical region).
inline double partial_phase(const PotentialModel& model, double E, double x,
                            double x_T) {
  const bool jump_member = zeroed_below_two(model);
  double phi = 0.0;
  double start = 0.0;
  if (jump_member) {
    const double span = std::min(x, 2.0);
    phi += span * std::sqrt(E);
    if (x <= 2.0) {
      return phi;
    }
    start = 2.0;
  }
  // Away from the turning point no substitution is needed; integrate
  // directly so the upper limit stays exact.
  auto integrand = [&model, E](double y) {
    const double gap = E - eval(model, y);
    return gap > 0.0 ? std::sqrt(gap) : 0.0;
  };
  const QuadResult q = integrate(integrand, start, x, 1e-9, 1e-12);
  if (!q.converged && std::fabs(x - x_T) > 1e-6 * x_T) {
    throw std::runtime_error("partial phase quadrature did not converge");
  }
  return phi + q.value;
}

// Decay exponent accumulated from x_T to x > x_T, with the square-root
// branch point removed by x = x_T + t^2.
inline double tail_exponent(const PotentialModel& model, double E, double x,
                            double x_T) {
  auto substituted = [&model, E, x_T](double t) {
    const double y = x_T + t * t;
    const double gap = eval(model, y) - E;
    return gap > 0.0 ? 2.0 * t * std::sqrt(gap) : 0.0;
  };
  return integrate(substituted, 0.0, std::sqrt(x - x_T), 1e-9, 1e-12).value;
}

// Un-normalized wavefunction with a caller-provided turning point, so bulk
// evaluation at fixed energy does not repeat the root search.
inline double psi_unnormalized_at(const PotentialModel& model, double E,
                                  double x, double x_T) {
  if (x < 0.0) {
    throw std::domain_error("wkb_wavefunction: domain is x >= 0");
  }
  if (x == 0.0) {
    return 0.0;
  }
  const double patch = airy_patch_half_width(x_T);
  if (std::fabs(x - x_T) < patch) {
    throw std::domain_error(
        "wkb_wavefunction: x falls in the Airy patch around the turning "
        "point; use the exact solver there");
  }
  if (x < x_T) {
    const double gap = E - eval(model, x);
    const double phase = partial_phase(model, E, x, x_T);
    return std::sin(phase) / std::pow(gap, 0.25);
  }
  const double gap = eval(model, x) - E;
  const double decay = tail_exponent(model, E, x, x_T);
  return std::exp(-decay) / std::pow(gap, 0.25);
}

}  // namespace detail

// Un-normalized semiclassical wavefunction: sin(phase)/(E-V)^{1/4} in the
// classical region, exp(-decay)/(V-E)^{1/4} beyond the turning point.
// Throws inside the Airy patch around x_T where both forms diverge.
inline double wkb_wavefunction_unnormalized(const PotentialModel& model,
                                            double E, double x) {
  return detail::psi_unnormalized_at(model, E, x, turning_point(model, E));
}

// Normalization of the state at energy E: the numeric constant integrates
// |psi|^2 over the classical region and the exponential tail, patching the
// excluded Airy window by a trapezoid across it; the closed form is reported
// alongside.  States with a small total phase are integrated literally;
// highly excited states (tens of thousands of radians) replace sin^2 by its
// stationary-phase mean 1/2, whose neglected boundary term is bounded by
// 1/(4 (E - V)) at the patch edge and becomes negligible exactly where the
// literal quadrature stops being affordable.
inline WkbNormResult wkb_norm(const PotentialModel& model, double E) {
  const PhaseResult phase = phase_integral(model, E);
  const double x_T = phase.x_T;
  const double patch = airy_patch_half_width(x_T);
  // Push the window edges one part in 10^12 outward so rounding can never
  // land an edge sample inside the strict patch exclusion.
  const double left_edge = x_T - patch - 1e-12 * x_T;
  const double right_edge = x_T + patch + 1e-12 * x_T;

  auto density = [&model, E, x_T](double x) {
    const double psi = detail::psi_unnormalized_at(model, E, x, x_T);
    return psi * psi;
  };

  auto averaged = [&model, E](double x) {
    const double gap = E - eval(model, x);
    return gap > 0.0 ? 0.5 / std::sqrt(gap) : 0.0;
  };

  const bool literal = phase.phi < 200.0;
  const QuadResult body = literal
                              ? integrate(density, 0.0, left_edge, 1e-8, 1e-10)
                              : integrate(averaged, 0.0, left_edge, 1e-8, 1e-10);
  if (!body.converged) {
    throw std::runtime_error("wkb_norm: body quadrature did not converge");
  }

  // The tail decays exponentially; integrate out to where the exponent is
  // large and account the remainder as error.
  double x_far = right_edge;
  while (detail::tail_exponent(model, E, x_far, x_T) < 20.0) {
    x_far = x_T + 2.0 * (x_far - x_T);
  }
  const QuadResult tail = integrate(density, right_edge, x_far, 1e-8, 1e-12);

  // Trapezoid estimate across the excluded window.  The true density stays
  // between the oscillatory average and the Airy peak, so this contributes
  // at the percent level of the window mass at worst.  The left sample
  // matches whichever body integrand was used.
  const double left_sample = literal ? density(left_edge) : averaged(left_edge);
  const double window =
      0.5 * (left_sample + density(right_edge)) * (right_edge - left_edge);

  const double total = body.value + tail.value + window;
  WkbNormResult out;
  out.numeric_A2 = 1.0 / total;
  out.numeric_A = std::sqrt(out.numeric_A2);
  out.closed_form_A2 = wkb_norm_closed_form_A2(x_T);
  return out;
}

// Normalized semiclassical wavefunction value.
inline double wkb_wavefunction(const PotentialModel& model, double E,
                               double x) {
  return wkb_norm(model, E).numeric_A *
         wkb_wavefunction_unnormalized(model, E, x);
}

// Bound state summary for quantum number N under the given rule.
inline WkbState wkb_state(const PotentialModel& model, int N,
                          const QuantizationRule& rule) {
  WkbState state;
  state.energy = wkb_eigenvalue(model, N, rule);
  state.norm_A = wkb_norm(model, state.energy).numeric_A;
  state.node_count = N;
  return state;
}

}  // namespace riemannlab
