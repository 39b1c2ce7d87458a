#pragma once

// Chain programs bounding f(y) from (x, f_x, g_x, y, g_y):
//
//   U_N = max f_N  s.t. for 0 <= i < N, with D = y - x,
//     ||g_i - g_{i+1}||^2 / 2L <= f_i - f_{i+1} + <g_{i+1}, D>/N
//     ||g_i - g_{i+1}||^2 / 2L <= f_{i+1} - f_i - <g_i, D>/N
//     f_0 = f_x, g_0 = g_x, g_N = g_y
//
// and B_N the same with min. Solved in the span of {D, g_x, g_y}.

#include "smoothcvx/barrier.hpp"
#include "smoothcvx/bounds.hpp"
#include "smoothcvx/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace smoothcvx {

enum class Direction { Upper, Lower };

inline const char* to_string(Direction d) { return d == Direction::Upper ? "upper" : "lower"; }

struct ChainSpec {
  double L = 1.0;
  Vec x;
  Vec y;
  double f_x = 0.0;
  Vec g_x;
  Vec g_y;
  std::size_t N = 1;
  Direction direction = Direction::Upper;

  Eigen::Index dim() const { return x.size(); }

  void validate() const {
    if (!(L > 0.0)) throw std::invalid_argument("L must be positive");
    if (N < 1) throw std::invalid_argument("N must be at least 1");
    const Eigen::Index d = x.size();
    if (d < 1 || y.size() != d || g_x.size() != d || g_y.size() != d)
      throw DimensionMismatch("x, y, g_x, g_y must share one positive dimension");
    if (x == y) throw DegenerateError("x and y coincide");
  }
};

struct ChainProblem {
  ChainSpec spec;
  Eigen::MatrixXd basis;  // d x r, orthonormal columns
  std::size_t reduced_dim = 0;
  Vec step;  // y - x in reduced coordinates
  Vec gx;
  Vec gy;
  std::vector<QuadConstraint> constraints;
  Vec cost;  // minimized; -e_{f_N} for Upper, +e_{f_N} for Lower

  std::size_t N() const { return spec.N; }
  Eigen::Index num_vars() const {
    return static_cast<Eigen::Index>(spec.N + (spec.N - 1) * reduced_dim);
  }
  Eigen::Index f_index(std::size_t i) const { return static_cast<Eigen::Index>(i - 1); }       // 1 <= i <= N
  Eigen::Index g_offset(std::size_t i) const {                                                 // 1 <= i < N
    return static_cast<Eigen::Index>(spec.N + (i - 1) * reduced_dim);
  }
};

namespace detail {

// Gram-Schmidt on the columns, dropping near-dependent directions.
inline Eigen::MatrixXd orthonormal_span(const std::vector<Vec>& vectors, Eigen::Index d) {
  double scale = 0.0;
  for (const auto& v : vectors) scale = std::max(scale, v.norm());
  const double tol = 1e-12 * std::max(scale, 1.0);
  std::vector<Vec> basis;
  for (const auto& v : vectors) {
    Vec w = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) w -= b.dot(w) * b;
    if (w.norm() > tol) basis.push_back(w.normalized());
  }
  Eigen::MatrixXd out(d, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = basis[k];
  return out;
}

// Dense constraint over all variables, compressed to the touched ones.
inline QuadConstraint compress(double kappa, const Eigen::MatrixXd& G, const Vec& h, const Vec& a, double b) {
  QuadConstraint c;
  c.kappa = kappa;
  c.h = h;
  c.b = b;
  for (Eigen::Index j = 0; j < G.cols(); ++j)
    if (G.col(j).cwiseAbs().maxCoeff() != 0.0 || a(j) != 0.0) c.vars.push_back(j);
  const auto k = static_cast<Eigen::Index>(c.vars.size());
  c.G.resize(G.rows(), k);
  c.a.resize(k);
  for (Eigen::Index p = 0; p < k; ++p) {
    c.G.col(p) = G.col(c.vars[static_cast<std::size_t>(p)]);
    c.a(p) = a(c.vars[static_cast<std::size_t>(p)]);
  }
  return c;
}

}  // namespace detail

/// Emits the 2N chain constraints. With reduce = false the ambient
/// coordinates are used as is.
inline ChainProblem build_problem(const ChainSpec& spec, bool reduce = true) {
  spec.validate();
  ChainProblem p;
  p.spec = spec;
  const Eigen::Index d = spec.dim();
  const Vec delta = spec.y - spec.x;
  p.basis = reduce ? detail::orthonormal_span({delta, spec.g_x, spec.g_y}, d) : Eigen::MatrixXd::Identity(d, d);
  p.reduced_dim = static_cast<std::size_t>(p.basis.cols());
  p.step = p.basis.transpose() * delta;
  p.gx = p.basis.transpose() * spec.g_x;
  p.gy = p.basis.transpose() * spec.g_y;

  const std::size_t N = spec.N;
  const auto r = static_cast<Eigen::Index>(p.reduced_dim);
  const Eigen::Index n = p.num_vars();
  const double inv_n = 1.0 / static_cast<double>(N);
  const double kappa = 1.0 / (2.0 * spec.L);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(r, r);

  for (std::size_t i = 0; i < N; ++i) {
    // u = g_i - g_{i+1}
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(r, n);
    Vec h = Vec::Zero(r);
    if (i == 0) h += p.gx; else G.block(0, p.g_offset(i), r, r) += I;
    if (i + 1 == N) h -= p.gy; else G.block(0, p.g_offset(i + 1), r, r) -= I;

    // Upper: kappa||u||^2 - f_i + f_{i+1} - <g_{i+1}, D>/N <= 0
    Vec a = Vec::Zero(n);
    double b = 0.0;
    if (i == 0) b -= spec.f_x; else a(p.f_index(i)) -= 1.0;
    a(p.f_index(i + 1)) += 1.0;
    if (i + 1 == N) b -= inv_n * p.gy.dot(p.step); else a.segment(p.g_offset(i + 1), r) -= inv_n * p.step;
    p.constraints.push_back(detail::compress(kappa, G, h, a, b));

    // Lower: kappa||u||^2 + f_i - f_{i+1} + <g_i, D>/N <= 0
    a.setZero();
    b = 0.0;
    if (i == 0) b += spec.f_x; else a(p.f_index(i)) += 1.0;
    a(p.f_index(i + 1)) -= 1.0;
    if (i == 0) b += inv_n * p.gx.dot(p.step); else a.segment(p.g_offset(i), r) += inv_n * p.step;
    p.constraints.push_back(detail::compress(kappa, G, h, a, b));
  }

  p.cost = Vec::Zero(n);
  p.cost(p.f_index(N)) = spec.direction == Direction::Upper ? -1.0 : 1.0;
  return p;
}

struct ClosedFormN1 {
  double B1 = 0.0;
  double U1 = 0.0;
  bool feasible = false;  // B1 <= U1
};

/// The single-step program in closed form:
///   U1 = f_x + <g_y, y-x> - ||g_y - g_x||^2 / 2L
///   B1 = f_x + <g_x, y-x> + ||g_y - g_x||^2 / 2L
inline ClosedFormN1 closed_form_n1(const ChainSpec& spec) {
  const Vec delta = spec.y - spec.x;
  const double spread = (spec.g_y - spec.g_x).squaredNorm() / (2.0 * spec.L);
  ClosedFormN1 c;
  c.U1 = spec.f_x + spec.g_y.dot(delta) - spread;
  c.B1 = spec.f_x + spec.g_x.dot(delta) + spread;
  c.feasible = c.B1 <= c.U1;
  return c;
}

/// Admissible s = <g_y, y> under x = 0, f_x = 0, g_x = 0:
/// [||g_y||^2 / L, ||g_y|| ||y||].
inline Interval feasibility_interval_n1(double norm_y, double norm_gy, double L) {
  Interval iv{norm_gy * norm_gy / L, norm_gy * norm_y, false};
  if (iv.lo > iv.hi) return Interval::none();
  return iv;
}

/// Instance with x = 0, f_x = 0, g_x = 0, ||y||^2 = norm_y2, ||g_y||^2 =
/// norm_gy2 and <g_y, y> = s, laid out in the plane.
inline ChainSpec normalized_spec(double s, std::size_t N, Direction dir, double norm_y2 = 1.0,
                                 double norm_gy2 = 0.5, double L = 1.0) {
  const double ny = std::sqrt(norm_y2);
  const double along = s / ny;
  const double cross2 = norm_gy2 - along * along;
  if (cross2 < -1e-12 * std::max(1.0, norm_gy2))
    throw RangeError("s = " + std::to_string(s) + " exceeds ||g_y|| ||y||");
  ChainSpec spec;
  spec.L = L;
  spec.x = Vec::Zero(2);
  spec.y = Vec(2);
  spec.y << ny, 0.0;
  spec.g_x = Vec::Zero(2);
  spec.g_y = Vec(2);
  spec.g_y << along, std::sqrt(std::max(0.0, cross2));
  spec.N = N;
  spec.direction = dir;
  return spec;
}

struct BoundResult {
  SolveStatus status = SolveStatus::IterationLimit;
  double value = std::numeric_limits<double>::quiet_NaN();
  std::vector<PointData> chain;  // x_0..x_N with recovered f_i, g_i
  double max_constraint_violation = std::numeric_limits<double>::infinity();
  double duality_gap_estimate = std::numeric_limits<double>::infinity();
  bool relaxed = false;
  int newton_steps = 0;
};

/// Linear f from f_x to the middle of the single-step interval, linear g
/// from g_x to g_y.
inline Vec initial_point(const ChainProblem& p) {
  const ClosedFormN1 cf = closed_form_n1(p.spec);
  const double mid = 0.5 * (cf.B1 + cf.U1);
  const std::size_t N = p.N();
  const auto r = static_cast<Eigen::Index>(p.reduced_dim);
  Vec z(p.num_vars());
  for (std::size_t i = 1; i <= N; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(N);
    z(p.f_index(i)) = p.spec.f_x + t * (mid - p.spec.f_x);
    if (i < N) z.segment(p.g_offset(i), r) = p.gx + t * (p.gy - p.gx);
  }
  return z;
}

inline BoundResult solve(const ChainProblem& problem, const SolverConfig& config = {}) {
  if (!config.valid()) throw std::invalid_argument("invalid solver configuration");
  const BarrierSolver solver(problem.constraints, problem.cost, config);
  const BarrierOutcome run = solver.solve(initial_point(problem));

  BoundResult res;
  res.status = run.status;
  res.max_constraint_violation = run.max_violation;
  res.duality_gap_estimate = run.gap;
  res.relaxed = run.relaxed;
  res.newton_steps = run.newton_steps;
  if (run.status == SolveStatus::Infeasible) return res;

  const ChainSpec& spec = problem.spec;
  const std::size_t N = problem.N();
  const auto r = static_cast<Eigen::Index>(problem.reduced_dim);
  res.value = run.z(problem.f_index(N));
  const std::vector<Vec> pts = make_chain({spec.x, spec.y, N});
  res.chain.reserve(N + 1);
  for (std::size_t i = 0; i <= N; ++i) {
    PointData pd;
    pd.x = pts[i];
    if (i == 0) {
      pd.f = spec.f_x;
      pd.g = spec.g_x;
    } else {
      pd.f = run.z(problem.f_index(i));
      pd.g = i == N ? spec.g_y : Vec(problem.basis * run.z.segment(problem.g_offset(i), r));
    }
    res.chain.push_back(std::move(pd));
  }
  return res;
}

struct GridOracle {
  double B2 = 0.0;
  double U2 = 0.0;
  std::size_t feasible_points = 0;
};

/// Brute force for N = 2: scan g_1 over a resolution x resolution grid; for
/// each g_1 the f variables reduce to two chained intervals. Each pair's
/// two inequalities add up to ||g_1 - g_x - L D/4|| <= L||D||/4 (and the
/// mirror image about g_y), so the scanned box is the bounding box of those
/// two disks, clipped to the radius ||g_x|| + ||g_y|| + L||D|| box. A grid
/// point counts as feasible when each interval is nonempty up to `slack`,
/// which lets the scan see feasible sets thinner than the grid spacing.
inline GridOracle oracle_grid_n2(const ChainSpec& spec, std::size_t resolution, double slack = 0.0) {
  if (spec.N != 2) throw std::invalid_argument("grid oracle needs N = 2");
  if (resolution < 2) throw std::invalid_argument("resolution must be at least 2");
  spec.validate();
  const Eigen::Index d = spec.dim();
  const Vec delta = spec.y - spec.x;
  Eigen::MatrixXd basis = detail::orthonormal_span({delta, spec.g_x, spec.g_y}, d);
  if (basis.cols() > 2) throw std::invalid_argument("grid oracle needs data spanning at most two dimensions");
  // A one-dimensional span is padded with a zero coordinate.
  auto coords = [&](const Vec& v) {
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (Eigen::Index k = 0; k < basis.cols(); ++k) c(k) = basis.col(k).dot(v);
    return c;
  };
  const Eigen::Vector2d D = coords(delta);
  const Eigen::Vector2d gx = coords(spec.g_x);
  const Eigen::Vector2d gy = coords(spec.g_y);
  const double kappa = 1.0 / (2.0 * spec.L);
  const double radius = spec.g_x.norm() + spec.g_y.norm() + spec.L * delta.norm();
  const double disk = 0.25 * spec.L * delta.norm();
  const Eigen::Vector2d c0 = gx + 0.25 * spec.L * D, c1 = gy - 0.25 * spec.L * D;
  Eigen::Vector2d lo = Eigen::Vector2d::Constant(-radius), hi = Eigen::Vector2d::Constant(radius);
  for (int k = 0; k < 2; ++k) {
    lo(k) = std::max({lo(k), c0(k) - disk, c1(k) - disk});
    hi(k) = std::min({hi(k), c0(k) + disk, c1(k) + disk});
  }
  if (lo(0) > hi(0) + slack || lo(1) > hi(1) + slack)
    throw NoFeasiblePoint("the pairwise feasibility disks do not meet");
  hi = hi.cwiseMax(lo);
  const Eigen::Vector2d spacing = (hi - lo) / static_cast<double>(resolution - 1);
  const double gx_d = 0.5 * gx.dot(D);
  const double gy_d = 0.5 * gy.dot(D);

  GridOracle out;
  out.B2 = std::numeric_limits<double>::infinity();
  out.U2 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < resolution; ++i) {
    for (std::size_t j = 0; j < resolution; ++j) {
      const Eigen::Vector2d g1(lo(0) + spacing(0) * static_cast<double>(i), lo(1) + spacing(1) * static_cast<double>(j));
      const double q0 = kappa * (g1 - gx).squaredNorm();
      const double q1 = kappa * (gy - g1).squaredNorm();
      const double g1_d = 0.5 * g1.dot(D);
      const double lo0 = q0 + gx_d, hi0 = -q0 + g1_d;
      const double lo1 = q1 + g1_d, hi1 = -q1 + gy_d;
      if (lo0 > hi0 + slack || lo1 > hi1 + slack) continue;
      ++out.feasible_points;
      out.B2 = std::min(out.B2, spec.f_x + lo0 + lo1);
      out.U2 = std::max(out.U2, spec.f_x + hi0 + hi1);
    }
  }
  if (out.feasible_points == 0) throw NoFeasiblePoint("no grid point satisfies the chain constraints");
  return out;
}

struct SweepRow {
  double s = 0.0;
  std::size_t N = 0;
  double B = std::numeric_limits<double>::quiet_NaN();
  double U = std::numeric_limits<double>::quiet_NaN();
  SolveStatus status = SolveStatus::Infeasible;
  BoundResult lower;
  BoundResult upper;
};

struct SweepBase {
  double norm_y2 = 1.0;
  double norm_gy2 = 0.5;
  double L = 1.0;
};

/// Both bounds for every (s, N), rows ordered by s then N. Values of s
/// beyond ||g_y|| ||y|| admit no data and are reported Infeasible.
inline std::vector<SweepRow> sweep(const SweepBase& base, const std::vector<double>& s_grid,
                                   const std::vector<std::size_t>& Ns, const SolverConfig& config = {},
                                   unsigned workers = 1) {
  std::vector<SweepRow> rows(s_grid.size() * Ns.size());
  auto run_row = [&](std::size_t k) {
    SweepRow& row = rows[k];
    row.s = s_grid[k / Ns.size()];
    row.N = Ns[k % Ns.size()];
    ChainSpec upper;
    try {
      upper = normalized_spec(row.s, row.N, Direction::Upper, base.norm_y2, base.norm_gy2, base.L);
    } catch (const RangeError&) {
      row.status = SolveStatus::Infeasible;
      return;
    }
    ChainSpec lower = upper;
    lower.direction = Direction::Lower;
    row.upper = solve(build_problem(upper), config);
    row.lower = solve(build_problem(lower), config);
    if (row.upper.status == SolveStatus::Infeasible || row.lower.status == SolveStatus::Infeasible) {
      row.status = SolveStatus::Infeasible;
    } else if (row.upper.status == SolveStatus::Optimal && row.lower.status == SolveStatus::Optimal) {
      row.status = SolveStatus::Optimal;
      row.B = row.lower.value;
      row.U = row.upper.value;
    } else {
      row.status = SolveStatus::IterationLimit;
      row.B = row.lower.value;
      row.U = row.upper.value;
    }
  };

  workers = std::max(1u, workers);
  if (workers == 1 || rows.size() < 2) {
    for (std::size_t k = 0; k < rows.size(); ++k) run_row(k);
    return rows;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < rows.size(); k += workers) run_row(k);
    });
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace smoothcvx
