#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace riemannlab {

// One nontrivial zero of zeta written as rho = a + i*alpha with 0 < a < 1 and
// alpha > 0.  The conjugate partner is implicit: every sum over zeros pairs
// rho with its conjugate.
struct Zero {
  double a = 0.5;
  double alpha = 0.0;
};

enum class ZeroSource { File, Synthetic };

// Ordered collection of zeros, strictly ascending in alpha.
struct ZeroSet {
  std::vector<Zero> zeros;
  ZeroSource source = ZeroSource::Synthetic;

  std::size_t size() const { return zeros.size(); }
  bool empty() const { return zeros.empty(); }
};

// Piecewise-constant prescription for the real parts: consecutive blocks of
// the base set's zeros are assigned a common a-value.
struct StretchSpec {
  struct Block {
    std::size_t count = 0;
    double a_value = 0.5;
  };
  std::vector<Block> blocks;
  ZeroSet base;
};

// Reads imaginary parts (one decimal per non-blank line, '#' starts a
// comment) and returns the first `limit` of them as zeros on the critical
// line a = 1/2.  Enforces strictly ascending order.
inline ZeroSet load_zeros(const std::string& path, std::size_t limit) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_zeros: cannot open '" + path + "'");
  }
  ZeroSet out;
  out.source = ZeroSource::File;
  std::string line;
  std::size_t line_number = 0;
  while (out.zeros.size() < limit && std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) {
      continue;  // blank or comment-only line
    }
    double alpha = 0.0;
    std::size_t consumed = 0;
    try {
      alpha = std::stod(token, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    std::string trailing;
    if (consumed != token.size() || (fields >> trailing)) {
      throw std::runtime_error("load_zeros: parse error at line " +
                               std::to_string(line_number) + " of '" + path +
                               "'");
    }
    if (!out.zeros.empty() && alpha <= out.zeros.back().alpha) {
      throw std::runtime_error(
          "load_zeros: order violation at line " +
          std::to_string(line_number) + " of '" + path +
          "' (entries must be strictly ascending)");
    }
    out.zeros.push_back(Zero{0.5, alpha});
  }
  if (in.bad()) {
    throw std::runtime_error("load_zeros: I/O error reading '" + path + "'");
  }
  return out;
}

// Builds a synthetic configuration: alphas are copied from the base set in
// order, while each block dictates the a-value of its zeros.
inline ZeroSet synthesize_stretch(const StretchSpec& spec) {
  std::size_t total = 0;
  for (const auto& block : spec.blocks) {
    if (block.count == 0) {
      throw std::invalid_argument(
          "synthesize_stretch: block counts must be positive");
    }
    if (!(block.a_value > 0.0) || !(block.a_value < 1.0)) {
      throw std::invalid_argument(
          "synthesize_stretch: a-values must lie strictly inside (0, 1)");
    }
    total += block.count;
  }
  if (total > spec.base.size()) {
    throw std::invalid_argument(
        "synthesize_stretch: blocks cover more zeros than the base set "
        "provides");
  }
  ZeroSet out;
  out.source = ZeroSource::Synthetic;
  out.zeros.reserve(total);
  std::size_t index = 0;
  for (const auto& block : spec.blocks) {
    for (std::size_t i = 0; i < block.count; ++i, ++index) {
      out.zeros.push_back(Zero{block.a_value, spec.base.zeros[index].alpha});
    }
  }
  return out;
}

// Smooth average counting law for zeros up to height T:
// (T / 2pi) * (log(T / 2pi) - 1).  May be negative for small T.
inline double average_zero_count(double T) {
  if (!(T > 0.0)) {
    throw std::domain_error("average_zero_count: T must be positive");
  }
  const double u = T / (2.0 * std::numbers::pi);
  return u * (std::log(u) - 1.0);
}

// Staircase count: number of zeros with alpha <= T (inclusive at ties).
inline std::size_t empirical_zero_count(const ZeroSet& zs, double T) {
  std::size_t count = 0;
  for (const auto& zero : zs.zeros) {
    if (zero.alpha <= T) {
      ++count;
    } else {
      break;
    }
  }
  return count;
}

}  // namespace riemannlab
