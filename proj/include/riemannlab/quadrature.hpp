#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

namespace riemannlab {

// Outcome of one adaptive integration: the estimate, an a-posteriori error
// bound, the number of integrand evaluations spent, and whether the requested
// tolerance was actually met before the subdivision budget ran out.
struct QuadResult {
  double value = 0.0;
  double error = std::numeric_limits<double>::infinity();
  long evaluations = 0;
  bool converged = false;
};

namespace detail {

// Gauss-Kronrod 15(7) nodes and weights on [-1, 1].  Positive abscissae only;
// the rule is symmetric.  Even-indexed Kronrod nodes coincide with the
// embedded 7-point Gauss rule.
inline constexpr double gk15_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double gk15_weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double g7_weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
  double value;
  double error;
};

// One Gauss-Kronrod 15(7) application on [a, b].  The error estimate follows
// the usual QUADPACK rescaling so that it stays meaningful for integrands
// with sharp local structure.
template <typename F>
PanelEstimate gk15_panel(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double result_gauss = g7_weights[3] * fc;
  double result_kronrod = gk15_weights[7] * fc;
  double result_abs = gk15_weights[7] * std::fabs(fc);

  double fv1[7];
  double fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * gk15_nodes[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const double fsum = fv1[j] + fv2[j];
    result_kronrod += gk15_weights[j] * fsum;
    result_abs += gk15_weights[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
    if (j % 2 == 1) {
      result_gauss += g7_weights[j / 2] * fsum;
    }
  }

  const double mean = result_kronrod * 0.5;
  double result_asc = gk15_weights[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    result_asc += gk15_weights[j] *
                  (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));
  }

  result_kronrod *= half;
  result_abs *= std::fabs(half);
  result_asc *= std::fabs(half);

  double err = std::fabs((result_kronrod - result_gauss * half));
  if (result_asc != 0.0 && err != 0.0) {
    err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double uflow = std::numeric_limits<double>::min();
  if (result_abs > uflow / (50.0 * eps)) {
    err = std::max(eps * 50.0 * result_abs, err);
  }
  return {result_kronrod, err};
}

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

struct SegmentWorse {
  bool operator()(const Segment& lhs, const Segment& rhs) const {
    return lhs.error < rhs.error;
  }
};

}  // namespace detail

// Globally adaptive Gauss-Kronrod 15(7) integration of f over [a, b].  The
// worst segment (largest error bound) is bisected until the accumulated error
// satisfies max(abs_tol, rel_tol * |integral|) or max_segments is reached.
// Handles a > b by sign reversal and a == b as an exact zero.
template <typename F>
QuadResult integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                     double abs_tol = 0.0, int max_segments = 4000) {
  QuadResult out;
  if (a == b) {
    out.error = 0.0;
    out.converged = true;
    return out;
  }
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  auto func = [&f](double x) { return f(x); };

  std::priority_queue<detail::Segment, std::vector<detail::Segment>,
                      detail::SegmentWorse>
      queue;
  auto first = detail::gk15_panel(func, a, b);
  out.evaluations = 15;
  queue.push({a, b, first.value, first.error});
  double total_value = first.value;
  double total_error = first.error;

  int segments = 1;
  while (segments < max_segments) {
    const double tol = std::max(abs_tol, rel_tol * std::fabs(total_value));
    if (total_error <= tol) {
      break;
    }
    detail::Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // The segment is too narrow to bisect in double precision; put it back
      // and stop refining.
      queue.push(worst);
      break;
    }
    auto left = detail::gk15_panel(func, worst.a, mid);
    auto right = detail::gk15_panel(func, mid, worst.b);
    out.evaluations += 30;
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push({worst.a, mid, left.value, left.error});
    queue.push({mid, worst.b, right.value, right.error});
    ++segments;
  }

  // Re-accumulate from the queue to shed the cancellation noise built up by
  // the incremental updates.
  total_value = 0.0;
  total_error = 0.0;
  while (!queue.empty()) {
    total_value += queue.top().value;
    total_error += queue.top().error;
    queue.pop();
  }

  out.value = sign * total_value;
  out.error = total_error;
  out.converged =
      total_error <= std::max(abs_tol, rel_tol * std::fabs(total_value));
  return out;
}

}  // namespace riemannlab
