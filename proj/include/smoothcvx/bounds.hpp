#pragma once

// Two-point inequalities for L-smooth convex functions: the Descent Lemma,
// co-coercivity, the global bound for functions on open convex sets, the
// local-distance condition, and the chain discretization along [x, y].

#include "smoothcvx/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace smoothcvx {

using Vec = Eigen::VectorXd;

/// Location, function value and gradient at one point.
struct PointData {
  Vec x;
  double f = 0.0;
  Vec g;

  Eigen::Index dim() const { return x.size(); }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = false;

  static Interval none() { return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), true}; }
  double width() const { return empty ? 0.0 : hi - lo; }
  bool contains(double v, double tol = 0.0) const { return !empty && v >= lo - tol && v <= hi + tol; }
  /// this ⊆ other
  bool inside(const Interval& other, double tol = 0.0) const {
    return empty || (!other.empty && other.lo <= lo + tol && hi <= other.hi + tol);
  }
};

namespace detail {

inline void require_same_dim(const PointData& a, const PointData& b) {
  if (a.x.size() == 0 || a.x.size() != a.g.size() || b.x.size() != b.g.size() || a.x.size() != b.x.size())
    throw DimensionMismatch("point data dimensions disagree: " + std::to_string(a.x.size()) + "/" +
                            std::to_string(a.g.size()) + " vs " + std::to_string(b.x.size()) + "/" +
                            std::to_string(b.g.size()));
}

inline void require_positive(double L) {
  if (!(L > 0.0)) throw std::invalid_argument("smoothness constant must be positive");
}

}  // namespace detail

struct DescentGaps {
  double lower_gap = 0.0;  // >= 0 iff the convexity inequality holds
  double upper_gap = 0.0;  // >= 0 iff the L/2 ||y-x||^2 upper bound holds
};

inline DescentGaps descent_gap(double L, const PointData& px, const PointData& py) {
  detail::require_same_dim(px, py);
  detail::require_positive(L);
  const Vec step = py.x - px.x;
  DescentGaps gaps;
  gaps.lower_gap = py.f - px.f - px.g.dot(step);
  gaps.upper_gap = 0.5 * L * step.squaredNorm() - gaps.lower_gap;
  return gaps;
}

/// f(y) - f(x) - <g_x, y-x> - ||g_x - g_y||^2 / (2L). Negative means the
/// co-coercivity inequality fails for this data.
inline double cocoercivity_gap(double L, const PointData& px, const PointData& py) {
  detail::require_same_dim(px, py);
  detail::require_positive(L);
  return py.f - px.f - px.g.dot(py.x - px.x) - (px.g - py.g).squaredNorm() / (2.0 * L);
}

/// Admissible f(y) from the global bound <g_y - g_x, y-x>^2 / (2L||y-x||^2)
/// <= f(y) - f(x) - <g_x, y-x>, applied from both endpoints.
inline Interval global_bound_interval(double L, const PointData& px, const PointData& py) {
  detail::require_same_dim(px, py);
  detail::require_positive(L);
  const Vec step = py.x - px.x;
  const double dist2 = step.squaredNorm();
  if (dist2 == 0.0) throw DegenerateError("global bound needs distinct points");
  const double curvature = (py.g - px.g).dot(step);
  const double slack = curvature * curvature / (2.0 * L * dist2);
  Interval out;
  out.lo = px.f + px.g.dot(step) + slack;
  out.hi = px.f + py.g.dot(step) - slack;
  out.empty = out.lo > out.hi;
  return out;
}

/// True iff ||x - y|| < dist_y, where dist_y is the distance from y to the
/// complement of the domain. Strict: equality returns false.
inline bool local_condition(const Vec& x, const Vec& y, double dist_y) {
  if (x.size() != y.size()) throw DimensionMismatch("locations have different dimensions");
  return (x - y).norm() < dist_y;
}

/// Smallest N with N > ||y - x|| / min(dist_x, dist_y).
inline std::size_t min_chain_length(const Vec& x, const Vec& y, double dist_x, double dist_y) {
  if (x.size() != y.size()) throw DimensionMismatch("locations have different dimensions");
  if (!(dist_x > 0.0) || !(dist_y > 0.0)) throw std::invalid_argument("distances must be positive");
  const double ratio = (y - x).norm() / std::min(dist_x, dist_y);
  return static_cast<std::size_t>(std::floor(ratio)) + 1;
}

struct ChainConfig {
  Vec x;
  Vec y;
  std::size_t N = 1;
};

/// x_i = x + (i/N)(y - x), i = 0..N, with exact endpoints.
inline std::vector<Vec> make_chain(const ChainConfig& cfg) {
  if (cfg.N < 1) throw std::invalid_argument("chain length must be at least 1");
  if (cfg.x.size() != cfg.y.size()) throw DimensionMismatch("locations have different dimensions");
  if (cfg.x == cfg.y) throw DegenerateError("chain endpoints coincide");
  std::vector<Vec> pts;
  pts.reserve(cfg.N + 1);
  const Vec step = cfg.y - cfg.x;
  for (std::size_t i = 0; i <= cfg.N; ++i) {
    if (i == cfg.N) {
      pts.push_back(cfg.y);
    } else {
      pts.push_back(cfg.x + (static_cast<double>(i) / static_cast<double>(cfg.N)) * step);
    }
  }
  return pts;
}

struct AlphaWeights {
  std::size_t N = 0;
  double xi = 0.0;
  std::vector<double> alpha;
  std::size_t N1 = 0;  // smallest index with alpha = 0
};

/// alpha_i = max(0, xi - i - 1, i - xi) for i = 0..N-1.
inline AlphaWeights alpha_weights(std::size_t N, double xi) {
  if (N < 1) throw std::invalid_argument("N must be positive");
  if (!(xi >= 0.0 && xi <= static_cast<double>(N)))
    throw RangeError("xi = " + std::to_string(xi) + " outside [0, " + std::to_string(N) + "]");
  AlphaWeights w;
  w.N = N;
  w.xi = xi;
  w.alpha.resize(N);
  bool found = false;
  for (std::size_t i = 0; i < N; ++i) {
    const double di = static_cast<double>(i);
    w.alpha[i] = std::max({0.0, xi - di - 1.0, di - xi});
    if (!found && w.alpha[i] == 0.0) {
      w.N1 = i;
      found = true;
    }
  }
  return w;
}

struct SumIdentity {
  double direct = 0.0;  // sum_i (alpha_i - xi + i + 1)^2 / (2 alpha_i + 1)
  double closed = 0.0;  // (xi - N)^2
};

inline SumIdentity sum_identity(std::size_t N, double xi) {
  const AlphaWeights w = alpha_weights(N, xi);
  SumIdentity s;
  for (std::size_t i = 0; i < N; ++i) {
    const double a = w.alpha[i];
    const double num = a - xi + static_cast<double>(i) + 1.0;
    s.direct += num * num / (2.0 * a + 1.0);
  }
  s.closed = (xi - static_cast<double>(N)) * (xi - static_cast<double>(N));
  return s;
}

struct RegionPair {
  Interval inner;  // global bound
  Interval outer;  // Descent Lemma
};

/// Allowed f(y) - f(x) as a function of t = <f'(y), y - x> under L = 1,
/// f'(x) = 0, ||y - x|| = 1.
inline RegionPair analytical_region(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw RangeError("t = " + std::to_string(t) + " outside [0, 1]");
  RegionPair r;
  r.inner = {0.5 * t * t, t - 0.5 * t * t, false};
  r.outer = {std::max(0.0, t - 0.5), std::min(0.5, t), false};
  return r;
}

/// Distance to the complement of the open half-plane {<normal, z> < offset}.
struct HalfPlaneDistance {
  Vec normal;
  double offset = 0.0;

  double operator()(const Vec& z) const { return (offset - normal.dot(z)) / normal.norm(); }
};

}  // namespace smoothcvx
