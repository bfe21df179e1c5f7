#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "riemannlab/quadrature.hpp"
#include "riemannlab/special_functions.hpp"
#include "riemannlab/zeros.hpp"

namespace riemannlab {

// How the zero-driven fluctuation S(x) is evaluated: the direct sum over
// conjugate pairs, the per-block si/cos integral approximation, or the
// critical-line closed form that keeps only the first zero.
enum class SMode { TermSum, BlockIntegral, RiemannClosedForm };

// Tagged union over the half-line potential family.  Every member has a hard
// wall at x = 0 (solvers impose psi(0) = 0); members that divide by ln x are
// defined as 0 on (0, 2) so the logarithm pole at x = 1 never enters.
struct PotentialModel {
  enum class Kind {
    Log,
    Linear,
    Quadratic,
    Exponential,
    PowerNearHarmonic,
    LogCorrected,
    RiemannPrincipal,
    RiemannFull,
    RiemannIntegralForm,
  };

  Kind kind = Kind::Quadratic;
  double epsilon = 0.0;  // PowerNearHarmonic: exponent is 2 - epsilon
  int log_power = 1;     // LogCorrected: x^2 / (ln x)^log_power
  ZeroSet zeros;         // RiemannFull, RiemannIntegralForm
  SMode s_mode = SMode::TermSum;  // RiemannFull

  static PotentialModel log_potential() { return {Kind::Log}; }
  static PotentialModel linear() { return {Kind::Linear}; }
  static PotentialModel quadratic() { return {Kind::Quadratic}; }
  static PotentialModel exponential() { return {Kind::Exponential}; }

  static PotentialModel power_near_harmonic(double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 0.5) {
      throw std::invalid_argument(
          "power_near_harmonic: epsilon must lie in (0, 0.5]");
    }
    PotentialModel m{Kind::PowerNearHarmonic};
    m.epsilon = epsilon;
    return m;
  }

  static PotentialModel log_corrected(int b) {
    if (b != 1 && b != 2) {
      throw std::invalid_argument("log_corrected: b must be 1 or 2");
    }
    PotentialModel m{Kind::LogCorrected};
    m.log_power = b;
    return m;
  }

  static PotentialModel riemann_principal() {
    return {Kind::RiemannPrincipal};
  }

  static PotentialModel riemann_full(ZeroSet zeros, SMode mode) {
    PotentialModel m{Kind::RiemannFull};
    m.zeros = std::move(zeros);
    m.s_mode = mode;
    return m;
  }

  static PotentialModel riemann_integral_form(ZeroSet zeros) {
    PotentialModel m{Kind::RiemannIntegralForm};
    m.zeros = std::move(zeros);
    return m;
  }
};

// Zero-driven fluctuation S(x).  TermSum is the canonical definition: one
// term per conjugate pair, summed in ascending alpha,
//   S(x) = -(1/ln x) * sum_i x^{a_i} [2 a_i cos(alpha_i ln x)
//                                     + 2 alpha_i sin(alpha_i ln x)]
//                                    / (a_i^2 + alpha_i^2).
// BlockIntegral replaces each maximal run of constant a by the si/cos
// antiderivative of the continuum approximation, with the slowly varying
// density-of-states factor ln(alpha) frozen at the block's first zero.
// RiemannClosedForm is the one-block, first-zero-only formula valid when
// every a equals 1/2.
inline double fluctuation_S(double x, const ZeroSet& zeros, SMode mode) {
  if (!(x >= 2.0)) {
    throw std::domain_error("fluctuation_S: domain is x >= 2");
  }
  if (zeros.empty()) {
    return 0.0;
  }
  const double L = std::log(x);

  switch (mode) {
    case SMode::TermSum: {
      double sum = 0.0;
      for (const Zero& z : zeros.zeros) {
        const double phase = z.alpha * L;
        sum += std::pow(x, z.a) *
               (2.0 * z.a * std::cos(phase) + 2.0 * z.alpha * std::sin(phase)) /
               (z.a * z.a + z.alpha * z.alpha);
      }
      return -sum / L;
    }

    case SMode::BlockIntegral: {
      double total = 0.0;
      std::size_t begin = 0;
      const auto& zs = zeros.zeros;
      while (begin < zs.size()) {
        std::size_t end = begin + 1;
        while (end < zs.size() && zs[end].a == zs[begin].a) {
          ++end;
        }
        const double a = zs[begin].a;
        const double alpha_lo = zs[begin].alpha;
        const double alpha_hi = zs[end - 1].alpha;
        const double si_diff = sine_integral_shifted(alpha_hi * L) -
                               sine_integral_shifted(alpha_lo * L);
        const double cos_part =
            (a / alpha_lo) * (std::cos(alpha_lo * L) / alpha_lo -
                              std::cos(alpha_hi * L) / alpha_hi);
        total += std::pow(x, a) *
                 (si_diff * (1.0 + a * L) + cos_part) * std::log(alpha_lo);
        begin = end;
      }
      return -2.0 * total / L;
    }

    case SMode::RiemannClosedForm: {
      for (const Zero& z : zeros.zeros) {
        if (z.a != 0.5) {
          throw std::invalid_argument(
              "fluctuation_S: the closed form requires every zero on the "
              "critical line (a = 1/2)");
        }
      }
      const double alpha1 = zeros.zeros.front().alpha;
      const double si1 = sine_integral_shifted(alpha1 * L);
      return 2.0 * std::sqrt(x) / L *
             (si1 * (1.0 + 0.5 * L) -
              std::cos(alpha1 * L) / (2.0 * alpha1)) *
             std::log(alpha1);
    }
  }
  return 0.0;
}

// Truncated explicit formula for Riemann's prime-power counting function:
// J(x) ~ li(x) - sum over the listed conjugate pairs of 2 Re Ei(rho ln x).
// The two asymptotically negligible terms of the full formula are dropped.
inline double j_explicit(double x, const ZeroSet& zeros) {
  if (!(x >= 2.0)) {
    throw std::domain_error("j_explicit: domain is x >= 2");
  }
  const double L = std::log(x);
  double sum = 0.0;
  for (const Zero& z : zeros.zeros) {
    const std::complex<double> rho{z.a, z.alpha};
    sum += 2.0 * exp_integral(rho * L).real();
  }
  return log_integral(x) - sum;
}

// Exact J(x) = sum_{k >= 1} pi(x^{1/k}) / k with a sieve-based prime count;
// the reference the explicit formula is truncating toward.
inline double j_prime_power_oracle(double x) {
  if (!(x >= 2.0)) {
    throw std::domain_error("j_prime_power_oracle: domain is x >= 2");
  }
  const auto prime_pi = [](double y) {
    const auto n = static_cast<std::int64_t>(y);
    if (n < 2) {
      return std::int64_t{0};
    }
    std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
    std::int64_t count = 0;
    for (std::int64_t p = 2; p <= n; ++p) {
      if (!composite[static_cast<std::size_t>(p)]) {
        ++count;
        for (std::int64_t q = p * p; q <= n; q += p) {
          composite[static_cast<std::size_t>(q)] = true;
        }
      }
    }
    return count;
  };
  double total = 0.0;
  for (int k = 1; k < 64; ++k) {
    const double root = std::pow(x, 1.0 / k);
    if (root < 2.0 - 1e-12) {
      break;
    }
    total += static_cast<double>(prime_pi(root + 1e-9)) / k;
  }
  return total;
}

// Perturbative potential V_RP(x) = (x / ln x) S(x), with the same zeroing
// convention as the other log-divided members: 0 on (0, 2).
inline double perturbation_potential(double x, const ZeroSet& zeros,
                                     SMode mode) {
  if (!(x > 0.0)) {
    throw std::domain_error("perturbation_potential: domain is x > 0");
  }
  if (x < 2.0) {
    return 0.0;
  }
  return x / std::log(x) * fluctuation_S(x, zeros, mode);
}

// Integral-form potential G(x) = (2 / ln x) * integral of J(y) over [2, x],
// with J the truncated explicit formula.
inline double integral_form_potential(double x, const ZeroSet& zeros) {
  if (!(x >= 2.0)) {
    throw std::domain_error("integral_form_potential: domain is x >= 2");
  }
  if (x == 2.0) {
    return 0.0;
  }
  auto integrand = [&zeros](double y) { return j_explicit(y, zeros); };
  const QuadResult q = integrate(integrand, 2.0, x, 1e-8, 1e-10);
  if (!q.converged) {
    throw std::runtime_error(
        "integral_form_potential: quadrature failed to converge");
  }
  return 2.0 / std::log(x) * q.value;
}

// Potential value at x > 0.  x <= 0 is the hard wall, reported as +infinity;
// solvers never integrate across it.
inline double eval(const PotentialModel& model, double x) {
  if (x <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  switch (model.kind) {
    case PotentialModel::Kind::Log:
      return std::log(x);
    case PotentialModel::Kind::Linear:
      return x;
    case PotentialModel::Kind::Quadratic:
      return x * x;
    case PotentialModel::Kind::Exponential:
      return std::exp(x);
    case PotentialModel::Kind::PowerNearHarmonic:
      return std::pow(x, 2.0 - model.epsilon);
    case PotentialModel::Kind::LogCorrected: {
      if (x < 2.0) {
        return 0.0;
      }
      const double lg = std::log(x);
      return x * x / (model.log_power == 1 ? lg : lg * lg);
    }
    case PotentialModel::Kind::RiemannPrincipal: {
      if (x < 2.0) {
        return 0.0;
      }
      return x / std::log(x) * log_integral(x);
    }
    case PotentialModel::Kind::RiemannFull: {
      if (x < 2.0) {
        return 0.0;
      }
      return x / std::log(x) *
             (log_integral(x) + fluctuation_S(x, model.zeros, model.s_mode));
    }
    case PotentialModel::Kind::RiemannIntegralForm: {
      if (x < 2.0) {
        return 0.0;
      }
      return integral_form_potential(x, model.zeros);
    }
  }
  throw std::logic_error("eval: unhandled potential kind");
}

// Human-readable variant name, used by reports and the command line.
inline std::string variant_name(const PotentialModel& model) {
  switch (model.kind) {
    case PotentialModel::Kind::Log:
      return "log";
    case PotentialModel::Kind::Linear:
      return "linear";
    case PotentialModel::Kind::Quadratic:
      return "quadratic";
    case PotentialModel::Kind::Exponential:
      return "exponential";
    case PotentialModel::Kind::PowerNearHarmonic:
      return "power(2-" + std::to_string(model.epsilon) + ")";
    case PotentialModel::Kind::LogCorrected:
      return "log-corrected(b=" + std::to_string(model.log_power) + ")";
    case PotentialModel::Kind::RiemannPrincipal:
      return "riemann-principal";
    case PotentialModel::Kind::RiemannFull:
      return "riemann-full";
    case PotentialModel::Kind::RiemannIntegralForm:
      return "riemann-integral-form";
  }
  return "unknown";
}

}  // namespace riemannlab
