#pragma once

// Sampled checks of the counterexample against the two-point inequalities:
// exact checks on a rational lattice and seeded random pairs for the
// floating-point bounds.

#include "smoothcvx/bounds.hpp"
#include "smoothcvx/counterexample.hpp"
#include "smoothcvx/exact.hpp"
#include "smoothcvx/report.hpp"

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace smoothcvx {

struct SuiteConfig {
  ExactScalar grid_spacing = make_rational(1, 16);
  ExactScalar x0_min = -2;
  ExactScalar x0_max = 3;
  ExactScalar x1_min = make_rational(-22, 240);
  ExactScalar x1_max = 2;
  std::size_t partners = 4;  // random lattice partners per lattice point
  std::size_t global_pairs = 10000;
  std::size_t local_pairs = 1000;
  double tolerance = 1e-12;
  std::uint64_t seed = 20190101;
};

struct LatticePoint {
  ExactPoint p;
  ExactVec2 z;
  ExactScalar value;
  ExactVec2 grad;
};

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace detail

/// Grid points of the window plus, for every grid abscissa, the point on
/// each seam line with that abscissa (seams are never vertical here).
inline std::vector<LatticePoint> lattice(const PiecewiseQuadratic& f, const SuiteConfig& cfg) {
  std::vector<LatticePoint> pts;
  auto push = [&](const ExactPoint& p) {
    if (f.in_domain(p)) pts.push_back({p, to_vec(p), f.eval(p), f.gradient(p)});
  };
  for (ExactScalar a = cfg.x0_min; a <= cfg.x0_max; a += cfg.grid_spacing) {
    for (ExactScalar b = cfg.x1_min; b <= cfg.x1_max; b += cfg.grid_spacing) push({a, b});
    for (const auto& s : f.seams()) {
      const ExactVec2& n = s.line.normal;
      if (n[1] == 0) continue;
      const ExactScalar b = (s.line.offset - n[0] * a) / n[1];
      if (b <= cfg.x1_max) push({a, b});
    }
  }
  return pts;
}

inline PointData to_point_data(const PiecewiseQuadratic& f, const ExactPoint& p) {
  PointData d;
  d.x = Vec(2);
  d.x << p.x0.get_d(), p.x1.get_d();
  d.f = f.eval(p).get_d();
  const ExactVec2 g = f.gradient(p);
  d.g = Vec(2);
  d.g << g[0].get_d(), g[1].get_d();
  return d;
}

/// Lattice checks, all exact: region partition, gradient monotonicity,
/// 1-smoothness and the Descent Lemma over seeded lattice pairs.
inline VerificationReport lattice_checks(const PiecewiseQuadratic& f, const SuiteConfig& cfg) {
  VerificationReport report;
  const std::vector<LatticePoint> pts = lattice(f, cfg);

  std::size_t unclaimed = 0, shared = 0, seam_conflicts = 0;
  for (const auto& lp : pts) {
    const auto owners = f.claimants(lp.p);
    if (owners.empty()) {
      ++unclaimed;
      continue;
    }
    if (owners.size() < 2) continue;
    ++shared;
    for (std::size_t a = 0; a < owners.size(); ++a)
      for (std::size_t b = a + 1; b < owners.size(); ++b) {
        bool on_seam = false;
        for (const auto& s : f.seams())
          if (((s.first == owners[a] && s.second == owners[b]) || (s.first == owners[b] && s.second == owners[a])) &&
              s.line.on_boundary(lp.z))
            on_seam = true;
        if (!on_seam || f.piece(owners[a]).quadratic.value(lp.z) != f.piece(owners[b]).quadratic.value(lp.z))
          ++seam_conflicts;
      }
  }
  report.add("lattice: region partition", unclaimed == 0 && seam_conflicts == 0,
             std::to_string(pts.size()) + " points, " + std::to_string(shared) + " on seams, " +
                 std::to_string(unclaimed) + " unclaimed, " + std::to_string(seam_conflicts) + " conflicts");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, pts.empty() ? 0 : pts.size() - 1);
  std::size_t pairs = 0, non_monotone = 0, not_smooth = 0, descent_fail = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = 0; k < cfg.partners; ++k) {
      const std::size_t j = pick(rng);
      if (j == i) continue;
      ++pairs;
      const LatticePoint& p = pts[i];
      const LatticePoint& q = pts[j];
      const ExactVec2 dz = q.z - p.z;
      const ExactVec2 dg = q.grad - p.grad;
      if (dot(dg, dz) < 0) ++non_monotone;
      const ExactScalar dist2 = squared_norm(dz);
      if (squared_norm(dg) > dist2) ++not_smooth;
      const ExactScalar lower = q.value - p.value - dot(p.grad, dz);
      if (lower < 0 || lower > dist2 / 2) ++descent_fail;
    }
  }
  const std::string of = " of " + std::to_string(pairs) + " pairs";
  report.add("lattice: gradient monotonicity", non_monotone == 0, std::to_string(non_monotone) + " failures" + of);
  report.add("lattice: 1-smoothness", not_smooth == 0, std::to_string(not_smooth) + " failures" + of);
  report.add("lattice: descent lemma", descent_fail == 0, std::to_string(descent_fail) + " failures" + of);
  return report;
}

/// Uniform point in [x0_min, x0_max] x (boundary, x1_max], as an exact rational.
inline ExactPoint random_domain_point(const PiecewiseQuadratic& f, const SuiteConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u0(cfg.x0_min.get_d(), cfg.x0_max.get_d());
  std::uniform_real_distribution<double> u1(-23.0 / 240.0, cfg.x1_max.get_d());
  for (;;) {
    ExactPoint p{ExactScalar(u0(rng)), ExactScalar(u1(rng))};
    if (f.in_domain(p)) return p;
  }
}

/// f(y) inside the global-bound interval for seeded random pairs.
inline VerificationReport global_bound_checks(const PiecewiseQuadratic& f, const SuiteConfig& cfg) {
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::size_t failures = 0, tested = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < cfg.global_pairs; ++k) {
    const ExactPoint a = random_domain_point(f, cfg, rng);
    const ExactPoint b = random_domain_point(f, cfg, rng);
    if (a.x0 == b.x0 && a.x1 == b.x1) continue;
    ++tested;
    const PointData px = to_point_data(f, a);
    const PointData py = to_point_data(f, b);
    const Interval iv = global_bound_interval(1.0, px, py);
    const double excess = std::max(iv.lo - py.f, py.f - iv.hi);
    worst = std::max(worst, excess);
    if (excess > cfg.tolerance) ++failures;
  }
  VerificationReport report;
  report.add("random pairs: global bound contains f(y)", failures == 0,
             std::to_string(failures) + " failures of " + std::to_string(tested) + ", worst excess " +
                 detail::sci(worst));
  return report;
}

/// Co-coercivity for seeded pairs with ||x - y|| < dist(y, boundary).
inline VerificationReport local_cocoercivity_checks(const PiecewiseQuadratic& f, const SuiteConfig& cfg) {
  std::mt19937_64 rng(cfg.seed ^ 0x5851f42d4c957f2dULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  Vec normal(2);
  normal << 0.0, -1.0;
  const HalfPlaneDistance dist{normal, 23.0 / 240.0};
  std::size_t failures = 0, tested = 0;
  double worst = 0.0;
  while (tested < cfg.local_pairs) {
    const ExactPoint b = random_domain_point(f, cfg, rng);
    const PointData py = to_point_data(f, b);
    const double d = dist(py.x);
    const double r = 0.999 * d * unit(rng);
    const double th = angle(rng);
    ExactPoint a{ExactScalar(py.x(0) + r * std::cos(th)), ExactScalar(py.x(1) + r * std::sin(th))};
    if (!f.in_domain(a)) continue;
    const PointData px = to_point_data(f, a);
    if (!local_condition(px.x, py.x, d)) continue;
    ++tested;
    const double gap = cocoercivity_gap(1.0, px, py);
    worst = std::min(worst, gap);
    if (gap < -cfg.tolerance) ++failures;
  }
  VerificationReport report;
  report.add("random pairs: local co-coercivity", failures == 0,
             std::to_string(failures) + " failures of " + std::to_string(tested) + ", most negative gap " +
                 detail::sci(worst));
  return report;
}

/// Everything `verify` runs.
inline VerificationReport full_verification(const PiecewiseQuadratic& f, const SuiteConfig& cfg) {
  VerificationReport report;
  report.append(verify_c1_seams(f));
  report.append(verify_smooth_convex_pieces(f));
  report.append(verify_violation(f));
  report.append(lattice_checks(f, cfg));
  report.append(global_bound_checks(f, cfg));
  report.append(local_cocoercivity_checks(f, cfg));
  return report;
}

}  // namespace smoothcvx
