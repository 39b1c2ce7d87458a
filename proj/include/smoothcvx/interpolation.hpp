#pragma once

// L-smooth convex interpolants along a segment, glued from two-point pieces.
//
// For two data points the piece is the convex envelope of min(q0, q1) with
// q_i(z) = f_i + <g_i, z - x_i> + L/2 ||z - x_i||^2. Because both surrogates
// share the curvature L, the inner problem of the infimal combination
//
//   E(z) = inf { l q0(z0) + (1-l) q1(z1) : l z0 + (1-l) z1 = z, l in [0,1] }
//
// collapses to phi(l) = l q0(z) + (1-l) q1(z) - l (1-l) K with
// K = ||grad q0 - grad q1||^2 / 2L (a constant), a convex quadratic in l
// minimized in closed form. E interpolates (x_i, f_i, g_i) exactly when the
// two co-coercivity inequalities hold, and 0 <= Hess E <= L I.

#include "smoothcvx/bounds.hpp"
#include "smoothcvx/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace smoothcvx {

/// q(z) = value + <slope, z - center> + L/2 ||z - center||^2.
struct QuadraticSurrogate {
  Vec center;
  double value = 0.0;
  Vec slope;
  double L = 1.0;

  static QuadraticSurrogate at(const PointData& p, double L) { return {p.x, p.f, p.g, L}; }

  double operator()(const Vec& z) const {
    const Vec d = z - center;
    return value + slope.dot(d) + 0.5 * L * d.squaredNorm();
  }
  Vec gradient(const Vec& z) const { return slope + L * (z - center); }
};

/// Both co-coercivity inequalities between p0 and p1, each within `tol`.
inline bool two_point_feasible(double L, const PointData& p0, const PointData& p1, double tol = 1e-12) {
  return cocoercivity_gap(L, p0, p1) >= -tol && cocoercivity_gap(L, p1, p0) >= -tol;
}

struct TwoPointEnvelope {
  PointData p0;
  PointData p1;
  double L = 1.0;
  Vec separation;        // grad q0 - grad q1, constant in z
  double bridge = 0.0;   // K = ||separation||^2 / 2L; the bridge is |q0 - q1| < K

  QuadraticSurrogate q0() const { return QuadraticSurrogate::at(p0, L); }
  QuadraticSurrogate q1() const { return QuadraticSurrogate::at(p1, L); }
};

inline TwoPointEnvelope make_envelope(double L, const PointData& p0, const PointData& p1, double tol = 1e-12) {
  if (!(L > 0.0)) throw std::invalid_argument("L must be positive");
  if (!two_point_feasible(L, p0, p1, tol))
    throw InfeasibleData("two-point data violate co-coercivity (gaps " + std::to_string(cocoercivity_gap(L, p0, p1)) +
                         ", " + std::to_string(cocoercivity_gap(L, p1, p0)) + ")");
  TwoPointEnvelope env{p0, p1, L, {}, 0.0};
  env.separation = (p0.g - p1.g) + L * (p1.x - p0.x);
  env.bridge = env.separation.squaredNorm() / (2.0 * L);
  return env;
}

struct ValueGrad {
  double value = 0.0;
  Vec gradient;
};

inline ValueGrad envelope_eval(const TwoPointEnvelope& env, const Vec& z) {
  if (z.size() != env.p0.x.size()) throw DimensionMismatch("evaluation point has the wrong dimension");
  const QuadraticSurrogate q0 = env.q0();
  const QuadraticSurrogate q1 = env.q1();
  const double v0 = q0(z);
  const double v1 = q1(z);
  const double diff = v0 - v1;
  const double K = env.bridge;
  double weight;  // on q0
  if (K <= 1e-300) {
    weight = diff <= 0.0 ? 1.0 : 0.0;
  } else {
    weight = std::clamp((K - diff) / (2.0 * K), 0.0, 1.0);
  }
  ValueGrad out;
  out.value = v1 + weight * (diff - K) + weight * weight * K;
  out.gradient = weight * q0.gradient(z) + (1.0 - weight) * q1.gradient(z);
  return out;
}

/// Knots along [x, y] with one envelope per consecutive pair. A combination
/// of interpolants keeps one weighted layer per source.
class SegmentInterpolant {
 public:
  struct Layer {
    double weight = 1.0;
    std::vector<TwoPointEnvelope> segments;
  };

  const Vec& start() const { return start_; }
  const Vec& end() const { return end_; }
  const std::vector<PointData>& knots() const { return knots_; }
  const std::vector<double>& knot_params() const { return params_; }
  const std::vector<Layer>& layers() const { return layers_; }
  const std::vector<TwoPointEnvelope>& segments() const { return layers_.front().segments; }
  std::size_t num_segments() const { return knots_.size() - 1; }
  double L() const { return L_; }

 private:
  friend SegmentInterpolant build_segment_interpolant(double, const std::vector<PointData>&, double);
  friend SegmentInterpolant combine(const SegmentInterpolant&, const SegmentInterpolant&, double);

  Vec start_;
  Vec end_;
  double L_ = 1.0;
  std::vector<PointData> knots_;
  std::vector<double> params_;  // t_i with x_i = start + t_i (end - start)
  std::vector<Layer> layers_;
};

struct SegmentSample {
  double value = 0.0;
  double dvalue = 0.0;  // d/dt of F(x + t(y - x))
};

namespace detail {

inline SegmentSample eval_layer(const SegmentInterpolant::Layer& layer, std::size_t k, const Vec& z, const Vec& dir) {
  const ValueGrad vg = envelope_eval(layer.segments[k], z);
  return {vg.value, vg.gradient.dot(dir)};
}

inline std::size_t locate(const std::vector<double>& params, double t) {
  const auto it = std::upper_bound(params.begin(), params.end(), t);
  std::size_t k = it == params.begin() ? 0 : static_cast<std::size_t>(it - params.begin()) - 1;
  return std::min(k, params.size() - 2);
}

}  // namespace detail

/// Value and d/dt of the interpolant at x + t(y - x).
inline SegmentSample eval_interpolant(const SegmentInterpolant& interp, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw RangeError("t = " + std::to_string(t) + " outside [0, 1]");
  const Vec dir = interp.end() - interp.start();
  const Vec z = interp.start() + t * dir;
  const std::size_t k = detail::locate(interp.knot_params(), t);
  SegmentSample out;
  for (const auto& layer : interp.layers()) {
    const SegmentSample s = detail::eval_layer(layer, k, z, dir);
    out.value += layer.weight * s.value;
    out.dvalue += layer.weight * s.dvalue;
  }
  return out;
}

/// Glues per-pair envelopes over the chain. Knots must be ordered along the
/// segment from chain.front().x to chain.back().x; `tol` is the slack allowed
/// in the pairwise inequalities.
inline SegmentInterpolant build_segment_interpolant(double L, const std::vector<PointData>& chain, double tol = 1e-12) {
  if (chain.size() < 2) throw std::invalid_argument("an interpolant needs at least two knots");
  for (std::size_t i = 1; i < chain.size(); ++i) detail::require_same_dim(chain[0], chain[i]);
  SegmentInterpolant out;
  out.L_ = L;
  out.start_ = chain.front().x;
  out.end_ = chain.back().x;
  const Vec dir = out.end_ - out.start_;
  const double len2 = dir.squaredNorm();
  if (len2 == 0.0) throw DegenerateError("segment endpoints coincide");

  for (const auto& p : chain) {
    const double t = (p.x - out.start_).dot(dir) / len2;
    const double off = (p.x - out.start_ - t * dir).norm();
    if (off > 1e-9 * std::sqrt(len2) || (!out.params_.empty() && t <= out.params_.back()))
      throw std::invalid_argument("knots must be increasing points on the segment");
    out.params_.push_back(t);
  }
  out.params_.front() = 0.0;
  out.params_.back() = 1.0;
  out.knots_ = chain;

  SegmentInterpolant::Layer layer;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!two_point_feasible(L, chain[i], chain[i + 1], tol))
      throw InfeasibleData("knots (" + std::to_string(i) + "," + std::to_string(i + 1) +
                           ") admit no L-smooth convex interpolant");
    layer.segments.push_back(make_envelope(L, chain[i], chain[i + 1], tol));
  }

  // Both neighbouring pieces must reproduce each interior knot.
  for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
    const ValueGrad left = envelope_eval(layer.segments[i - 1], chain[i].x);
    const ValueGrad right = envelope_eval(layer.segments[i], chain[i].x);
    const double scale = 1.0 + std::abs(chain[i].f) + chain[i].g.norm();
    if (std::abs(left.value - right.value) > 1e-9 * scale || (left.gradient - right.gradient).norm() > 1e-9 * scale)
      throw InfeasibleData("pieces disagree at knot " + std::to_string(i));
  }
  out.layers_.push_back(std::move(layer));
  return out;
}

/// lambda Fu + (1 - lambda) Fb on shared knots.
inline SegmentInterpolant combine(const SegmentInterpolant& Fu, const SegmentInterpolant& Fb, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw RangeError("lambda outside [0, 1]");
  if (Fu.knots().size() != Fb.knots().size()) throw MismatchError("interpolants have different knot counts");
  const double scale = 1.0 + (Fu.end() - Fu.start()).norm();
  for (std::size_t i = 0; i < Fu.knots().size(); ++i)
    if ((Fu.knots()[i].x - Fb.knots()[i].x).norm() > 1e-12 * scale)
      throw MismatchError("interpolants have different knot locations");
  const PointData& ux = Fu.knots().front();
  const PointData& bx = Fb.knots().front();
  if (std::abs(ux.f - bx.f) > 1e-9 * (1.0 + std::abs(ux.f)) || (ux.g - bx.g).norm() > 1e-9 * (1.0 + ux.g.norm()) ||
      (Fu.knots().back().g - Fb.knots().back().g).norm() > 1e-9 * (1.0 + Fu.knots().back().g.norm()))
    throw MismatchError("interpolants have different endpoint data");
  if (Fu.L() != Fb.L()) throw MismatchError("interpolants have different smoothness constants");

  SegmentInterpolant out = Fu;
  for (std::size_t i = 0; i < out.knots_.size(); ++i) {
    out.knots_[i].f = lambda * Fu.knots()[i].f + (1.0 - lambda) * Fb.knots()[i].f;
    out.knots_[i].g = lambda * Fu.knots()[i].g + (1.0 - lambda) * Fb.knots()[i].g;
  }
  out.layers_.clear();
  for (auto layer : Fu.layers()) {
    layer.weight *= lambda;
    out.layers_.push_back(std::move(layer));
  }
  for (auto layer : Fb.layers()) {
    layer.weight *= 1.0 - lambda;
    out.layers_.push_back(std::move(layer));
  }
  return out;
}

struct SampleRow {
  double t = 0.0;
  double value = 0.0;
  double dvalue = 0.0;
};

/// t = k / steps for k = 0..steps.
inline std::vector<SampleRow> sample_interpolant(const SegmentInterpolant& interp, std::size_t steps) {
  if (steps < 1) throw std::invalid_argument("need at least one step");
  std::vector<SampleRow> rows;
  rows.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps);
    const SegmentSample s = eval_interpolant(interp, t);
    rows.push_back({t, s.value, s.dvalue});
  }
  return rows;
}

}  // namespace smoothcvx
