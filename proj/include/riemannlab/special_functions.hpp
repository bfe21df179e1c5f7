#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "riemannlab/quadrature.hpp"

namespace riemannlab {

// Controls the principal-value treatment of the logarithmic integral: the
// singularity at t = 1 is excluded symmetrically over [1 - eps, 1 + eps] and
// the limit eps -> 0 is taken by Richardson extrapolation over halved eps.
struct PrincipalValueConfig {
  double epsilon_split = 0.125;
  double quad_rel_tol = 1e-10;
};

namespace detail {

inline void validate(const PrincipalValueConfig& cfg) {
  if (!(cfg.epsilon_split > 0.0) || !(cfg.epsilon_split < 0.5)) {
    throw std::invalid_argument(
        "PrincipalValueConfig.epsilon_split must lie in (0, 0.5)");
  }
  if (!(cfg.quad_rel_tol > 0.0) || cfg.quad_rel_tol > 1e-3) {
    throw std::invalid_argument(
        "PrincipalValueConfig.quad_rel_tol must lie in (0, 1e-3]");
  }
}

// Integral over [0, 1 - eps] plus [1 + eps, x] of dt/ln(t), the symmetric
// exclusion whose eps -> 0 limit is li(x).
inline double li_excluded(double x, double eps, double rel_tol,
                          long* evaluations) {
  auto integrand = [](double t) { return 1.0 / std::log(t); };
  QuadResult low = integrate(integrand, 0.0, 1.0 - eps, rel_tol, 1e-14);
  QuadResult high = integrate(integrand, 1.0 + eps, x, rel_tol, 1e-14);
  if (evaluations != nullptr) {
    *evaluations += low.evaluations + high.evaluations;
  }
  return low.value + high.value;
}

// Richardson extrapolation of I(eps) to eps -> 0.  The symmetric exclusion
// leaves only odd powers of eps in the error expansion, so successive sweeps
// remove eps^1, eps^3, eps^5, eps^7.
inline double li_principal_value(double x, const PrincipalValueConfig& cfg) {
  constexpr int levels = 5;
  constexpr double powers[4] = {1.0, 3.0, 5.0, 7.0};
  double table[levels];
  double eps = cfg.epsilon_split;
  const double inner_tol = std::min(cfg.quad_rel_tol, 1e-11);
  for (int i = 0; i < levels; ++i) {
    table[i] = li_excluded(x, eps, inner_tol, nullptr);
    eps *= 0.5;
  }
  for (int sweep = 0; sweep < levels - 1 && sweep < 4; ++sweep) {
    const double factor = std::exp2(powers[sweep]);
    for (int i = 0; i < levels - 1 - sweep; ++i) {
      table[i] = (factor * table[i + 1] - table[i]) / (factor - 1.0);
    }
  }
  return table[0];
}

// Ei(z) for real z > 0 by ascending series; all terms are positive so there
// is no cancellation.  Valid up to moderate z (callers switch to the
// asymptotic form beyond 40).
inline double ei_series_positive(double z) {
  double sum = 0.0;
  double term = 1.0;
  for (int n = 1; n < 400; ++n) {
    term *= z / static_cast<double>(n);
    const double contribution = term / static_cast<double>(n);
    sum += contribution;
    if (contribution < sum * 1e-17) {
      break;
    }
  }
  return std::numbers::egamma + std::log(z) + sum;
}

// Divergent asymptotic series e^z/z * sum k!/z^k truncated at the smallest
// term; for z > 40 the truncation error is below double precision.
inline double ei_asymptotic_positive(double z) {
  double sum = 1.0;
  double term = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * static_cast<double>(k) / z;
    if (next >= term) {
      break;
    }
    term = next;
    sum += term;
    if (term < 1e-17 * sum) {
      break;
    }
  }
  return std::exp(z) / z * sum;
}

// E1(x) for real x > 0 via the modified Lentz continued fraction
// E1(x) = exp(-x) / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))).
inline double e1_continued_fraction(double x) {
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 400; ++i) {
    const double a = -static_cast<double>(i) * static_cast<double>(i);
    b += 2.0;
    d = a * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) {
      break;
    }
  }
  return std::exp(-x) * h;
}

// Ei(z) for real z < 0 equals -E1(-z).  The alternating series is used close
// to the origin where it suffers no harmful cancellation.
inline double ei_negative(double z) {
  const double x = -z;
  if (x <= 1.0) {
    double sum = 0.0;
    double term = 1.0;
    for (int n = 1; n < 60; ++n) {
      term *= z / static_cast<double>(n);
      sum += term / static_cast<double>(n);
      if (std::fabs(term) < 1e-18) {
        break;
      }
    }
    return std::numbers::egamma + std::log(x) + sum;
  }
  return -e1_continued_fraction(x);
}

inline double ei_real(double z) {
  if (z == 0.0) {
    throw std::domain_error("exp_integral: z = 0 is a logarithmic pole");
  }
  if (z < 0.0) {
    return ei_negative(z);
  }
  if (z <= 40.0) {
    return ei_series_positive(z);
  }
  return ei_asymptotic_positive(z);
}

// Complex Ei on the principal branch, for Im(z) >= 0.  Small |z|: ascending
// series with the principal logarithm.  Large |z|: asymptotic expansion plus
// the i*pi contribution from the branch cut along the negative real axis.
inline std::complex<double> ei_complex_upper(std::complex<double> z) {
  const double r = std::abs(z);
  if (r <= 20.0) {
    std::complex<double> sum = 0.0;
    std::complex<double> term = 1.0;
    for (int n = 1; n < 200; ++n) {
      term *= z / static_cast<double>(n);
      const std::complex<double> contribution =
          term / static_cast<double>(n);
      sum += contribution;
      if (std::abs(contribution) < 1e-18 * (1.0 + std::abs(sum))) {
        break;
      }
    }
    return std::numbers::egamma + std::log(z) + sum;
  }
  std::complex<double> sum = 1.0;
  std::complex<double> term = 1.0;
  for (int k = 1; k < 200; ++k) {
    const std::complex<double> next =
        term * (static_cast<double>(k) / z);
    if (std::abs(next) >= std::abs(term)) {
      break;
    }
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) {
      break;
    }
  }
  std::complex<double> result = std::exp(z) / z * sum;
  if (z.imag() > 0.0 || (z.imag() == 0.0 && z.real() < 0.0)) {
    result += std::complex<double>(0.0, std::numbers::pi);
  }
  return result;
}

// E1(z) by modified Lentz for Re(z) >= 0, used with z = i*x to produce the
// sine and cosine integrals at large argument.
inline std::complex<double> e1_continued_fraction_complex(
    std::complex<double> z) {
  const double tiny = 1e-300;
  std::complex<double> b = z + 1.0;
  std::complex<double> c = 1.0 / tiny;
  std::complex<double> d = 1.0 / b;
  std::complex<double> h = d;
  for (int i = 1; i < 1000; ++i) {
    const double a = -static_cast<double>(i) * static_cast<double>(i);
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const std::complex<double> delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      break;
    }
  }
  return std::exp(-z) * h;
}

// Si(x) for |x| <= 2 by the alternating power series.
inline double si_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 40; ++n) {
    const int k = 2 * n + 1;
    term *= -x2 / static_cast<double>((k - 1) * k);
    const double contribution = term / static_cast<double>(k);
    sum += contribution;
    if (std::fabs(contribution) < 1e-18) {
      break;
    }
  }
  return sum;
}

}  // namespace detail

// Riemann's logarithmic integral li(x), the principal-value integral of
// dt/ln(t) from 0.  For x > 2 the principal-value core li(2) is combined with
// a smooth quadrature over [2, x]; the core is cached for the default
// configuration because every potential evaluation passes through here.
inline double log_integral(double x, const PrincipalValueConfig& cfg = {}) {
  detail::validate(cfg);
  if (!(x > 0.0) || x == 1.0) {
    throw std::domain_error(
        "log_integral: domain is x > 0, x != 1 (logarithmic pole at 1)");
  }
  if (x < 1.0) {
    auto integrand = [](double t) { return 1.0 / std::log(t); };
    return integrate(integrand, 0.0, x, cfg.quad_rel_tol, 1e-14).value;
  }

  const PrincipalValueConfig defaults{};
  double li2;
  if (cfg.epsilon_split == defaults.epsilon_split &&
      cfg.quad_rel_tol == defaults.quad_rel_tol) {
    static const double cached = detail::li_principal_value(2.0, defaults);
    li2 = cached;
  } else {
    li2 = detail::li_principal_value(2.0, cfg);
  }

  if (x == 2.0) {
    return li2;
  }
  auto integrand = [](double t) { return 1.0 / std::log(t); };
  QuadResult tail = integrate(integrand, 2.0, x, cfg.quad_rel_tol, 1e-14);
  return li2 + tail.value;
}

// Exponential integral Ei on the principal branch.  Satisfies the reflection
// rule Ei(conj z) = conj Ei(z); li(x) = Ei(ln x) links it to log_integral.
inline std::complex<double> exp_integral(std::complex<double> z) {
  if (z == std::complex<double>(0.0, 0.0)) {
    throw std::domain_error("exp_integral: z = 0 is a logarithmic pole");
  }
  if (z.imag() == 0.0) {
    return {detail::ei_real(z.real()), 0.0};
  }
  if (z.imag() < 0.0) {
    return std::conj(detail::ei_complex_upper(std::conj(z)));
  }
  return detail::ei_complex_upper(z);
}

// Real-argument convenience overload.
inline double exp_integral(double z) { return detail::ei_real(z); }

// Sine integral Si(x) = integral of sin(t)/t from 0 to x.
inline double sine_integral(double x) {
  if (std::fabs(x) <= 2.0) {
    return detail::si_series(x);
  }
  // E1(i|x|) = -Ci(|x|) + i*si(|x|); Si is odd.
  const std::complex<double> e1 =
      detail::e1_continued_fraction_complex({0.0, std::fabs(x)});
  const double si_shift = e1.imag();
  const double value = si_shift + std::numbers::pi / 2.0;
  return x > 0.0 ? value : -value;
}

// Shifted sine integral si(x) = Si(x) - pi/2, the decaying form appearing in
// the closed-form fluctuation sums.
inline double sine_integral_shifted(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("sine_integral_shifted: domain is x > 0");
  }
  if (x <= 2.0) {
    return detail::si_series(x) - std::numbers::pi / 2.0;
  }
  return detail::e1_continued_fraction_complex({0.0, x}).imag();
}

// Euler Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
inline double beta_function(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("beta_function: arguments must be positive");
  }
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

}  // namespace riemannlab
