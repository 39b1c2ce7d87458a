#pragma once

// Log-barrier path following for convex programs
//
//   minimize  c^T z   s.t.  kappa_j ||G_j z_J + h_j||^2 + a_j^T z_J + b_j <= relax
//
// where z_J selects the few variables constraint j touches. Phase I minimizes
// a common slack; phase II follows the central path with damped Newton steps.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <utility>
#include <vector>

namespace smoothcvx {

/// kappa ||G z_J + h||^2 + a^T z_J + b, with z_J = z[vars].
struct QuadConstraint {
  std::vector<Eigen::Index> vars;
  double kappa = 0.0;
  Eigen::MatrixXd G;  // r x |vars|
  Eigen::VectorXd h;  // r
  Eigen::VectorXd a;  // |vars|
  double b = 0.0;

  Eigen::VectorXd gather(const Eigen::VectorXd& z) const {
    Eigen::VectorXd local(static_cast<Eigen::Index>(vars.size()));
    for (std::size_t k = 0; k < vars.size(); ++k) local(static_cast<Eigen::Index>(k)) = z(vars[k]);
    return local;
  }

  double value(const Eigen::VectorXd& z) const {
    const Eigen::VectorXd local = gather(z);
    return kappa * (G * local + h).squaredNorm() + a.dot(local) + b;
  }

  /// Local gradient (w.r.t. z_J) at a gathered point.
  Eigen::VectorXd local_gradient(const Eigen::VectorXd& local) const {
    return 2.0 * kappa * G.transpose() * (G * local + h) + a;
  }

  Eigen::MatrixXd local_hessian() const { return 2.0 * kappa * G.transpose() * G; }
};

struct SolverConfig {
  double barrier_mu0 = 1.0;
  double mu_shrink = 0.2;
  double newton_tol = 1e-8;
  int max_outer = 100;
  int max_newton = 100;
  double feas_tol = 1e-8;

  bool valid() const {
    return barrier_mu0 > 0 && mu_shrink > 0 && mu_shrink < 1 && newton_tol > 0 && max_outer > 0 &&
           max_newton > 0 && feas_tol > 0;
  }
};

enum class SolveStatus { Optimal, Infeasible, IterationLimit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::IterationLimit: return "IterationLimit";
  }
  return "?";
}

struct BarrierOutcome {
  SolveStatus status = SolveStatus::IterationLimit;
  Eigen::VectorXd z;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double max_violation = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  double phase1_slack = std::numeric_limits<double>::quiet_NaN();
  bool relaxed = false;  // solved with constraints loosened to feas_tol
  int newton_steps = 0;
};

class BarrierSolver {
 public:
  BarrierSolver(std::vector<QuadConstraint> constraints, Eigen::VectorXd cost, SolverConfig config)
      : cons_(std::move(constraints)), cost_(std::move(cost)), cfg_(config) {}

  /// Phase I from z0, then phase II. Empty-interior feasible sets whose
  /// phase-I slack is within feas_tol are solved with every constraint
  /// relaxed by feas_tol.
  BarrierOutcome solve(const Eigen::VectorXd& z0) const {
    BarrierOutcome out;
    const Eigen::Index n = z0.size();

    // Phase I: variables (z, t), constraints c_j(z) - t <= 0, minimize t.
    std::vector<QuadConstraint> slack_cons = cons_;
    for (auto& c : slack_cons) {
      c.vars.push_back(n);
      c.G.conservativeResize(c.G.rows(), c.G.cols() + 1);
      c.G.col(c.G.cols() - 1).setZero();
      c.a.conservativeResize(c.a.size() + 1);
      c.a(c.a.size() - 1) = -1.0;
    }
    Eigen::VectorXd w(n + 1);
    w.head(n) = z0;
    w(n) = max_value(cons_, z0) + 1.0;
    Eigen::VectorXd slack_cost = Eigen::VectorXd::Zero(n + 1);
    slack_cost(n) = 1.0;

    const double phase1_tol = cfg_.newton_tol * 1e-5;
    const Path phase1 = follow_path(slack_cons, slack_cost, w, 0.0, phase1_tol, [&](const Eigen::VectorXd& v) {
      return max_value(cons_, v.head(n)) < 0.0;
    }, [&](const Eigen::VectorXd& v, double gap) { return v(n) - gap > cfg_.feas_tol; });
    out.newton_steps += phase1.newton_steps;

    Eigen::VectorXd z = phase1.z.head(n);
    const double slack = max_value(cons_, z);
    out.phase1_slack = slack;

    double relax = 0.0;
    if (slack >= 0.0) {
      if (phase1.stopped_early || slack > cfg_.feas_tol) {
        out.status = SolveStatus::Infeasible;
        out.z = z;
        out.max_violation = slack;
        return out;
      }
      if (!phase1.converged) {
        out.status = SolveStatus::IterationLimit;
        out.z = z;
        out.max_violation = slack;
        out.objective = cost_.dot(z);
        return out;
      }
      if (slack >= cfg_.feas_tol) {
        // Boundary case with no room to relax: report the phase-I point.
        out.status = SolveStatus::Optimal;
        out.z = z;
        out.objective = cost_.dot(z);
        out.max_violation = slack;
        out.gap = phase1.gap;
        return out;
      }
      // Loosen just enough to open an interior around the phase-I point; the
      // optimum moves by O(sqrt(relax)) when the feasible set is a point.
      relax = std::min(cfg_.feas_tol, std::max(4.0 * slack, 1e-4 * cfg_.feas_tol));
      out.relaxed = true;
    }

    const Path phase2 = follow_path(cons_, cost_, z, relax, cfg_.newton_tol, nullptr, nullptr);
    out.newton_steps += phase2.newton_steps;
    out.z = phase2.z;
    out.objective = cost_.dot(phase2.z);
    out.max_violation = std::max(0.0, max_value(cons_, phase2.z));
    out.gap = phase2.gap;
    out.status = phase2.converged ? SolveStatus::Optimal : SolveStatus::IterationLimit;
    return out;
  }

  const std::vector<QuadConstraint>& constraints() const { return cons_; }

  static double max_value(const std::vector<QuadConstraint>& cons, const Eigen::VectorXd& z) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& c : cons) m = std::max(m, c.value(z));
    return m;
  }

 private:
  struct Path {
    Eigen::VectorXd z;
    double gap = std::numeric_limits<double>::infinity();
    bool converged = false;
    bool stopped_early = false;  // the reject predicate fired
    int newton_steps = 0;
  };

  template <class Accept, class Reject>
  Path follow_path(const std::vector<QuadConstraint>& cons, const Eigen::VectorXd& cost, Eigen::VectorXd z,
                   double relax, double gap_tol, Accept&& accept, Reject&& reject) const {
    Path path;
    const double m = static_cast<double>(cons.size());
    double mu = cfg_.barrier_mu0;
    for (int outer = 0; outer < cfg_.max_outer; ++outer) {
      path.newton_steps += center(cons, cost, z, relax, mu);
      path.gap = m * mu;
      if constexpr (!std::is_same_v<std::decay_t<Accept>, std::nullptr_t>) {
        if (accept(z)) {
          path.z = z;
          path.converged = true;
          return path;
        }
      }
      if constexpr (!std::is_same_v<std::decay_t<Reject>, std::nullptr_t>) {
        if (reject(z, path.gap)) {
          path.z = z;
          path.stopped_early = true;
          return path;
        }
      }
      if (path.gap <= gap_tol) {
        path.z = z;
        path.converged = true;
        return path;
      }
      mu *= cfg_.mu_shrink;
    }
    path.z = z;
    return path;
  }

  // Minimizes cost^T z / mu - sum log(relax - c_j(z)) from a strictly feasible z.
  int center(const std::vector<QuadConstraint>& cons, const Eigen::VectorXd& cost, Eigen::VectorXd& z, double relax,
             double mu) const {
    const Eigen::Index n = z.size();
    const double inner_tol = cfg_.newton_tol * 1e-2;
    int steps = 0;
    for (; steps < cfg_.max_newton; ++steps) {
      Eigen::VectorXd grad = cost / mu;
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
      for (const auto& c : cons) {
        const Eigen::VectorXd local = c.gather(z);
        const double s = relax - (c.kappa * (c.G * local + c.h).squaredNorm() + c.a.dot(local) + c.b);
        const Eigen::VectorXd lg = c.local_gradient(local);
        const Eigen::MatrixXd lh = c.local_hessian() / s + (lg * lg.transpose()) / (s * s);
        for (std::size_t p = 0; p < c.vars.size(); ++p) {
          grad(c.vars[p]) += lg(static_cast<Eigen::Index>(p)) / s;
          for (std::size_t q = 0; q < c.vars.size(); ++q)
            hess(c.vars[p], c.vars[q]) += lh(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
        }
      }
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      Eigen::VectorXd dz = -ldlt.solve(grad);
      if (ldlt.info() != Eigen::Success || !dz.allFinite()) {
        const double reg = 1e-12 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
        hess.diagonal().array() += reg;
        dz = -hess.ldlt().solve(grad);
        if (!dz.allFinite()) break;
      }
      const double decrement2 = -grad.dot(dz);
      if (decrement2 / 2.0 <= inner_tol) break;

      const double phi0 = merit(cons, cost, z, relax, mu);
      double step = 1.0;
      bool moved = false;
      while (step > 1e-16) {
        const Eigen::VectorXd trial = z + step * dz;
        const double phi = merit(cons, cost, trial, relax, mu);
        if (std::isfinite(phi) && phi <= phi0 - 0.25 * step * decrement2) {
          z = trial;
          moved = phi0 - phi > 1e-14 * (1.0 + std::abs(phi0));
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    return steps;
  }

  static double merit(const std::vector<QuadConstraint>& cons, const Eigen::VectorXd& cost, const Eigen::VectorXd& z,
                      double relax, double mu) {
    double phi = cost.dot(z) / mu;
    for (const auto& c : cons) {
      const double s = relax - c.value(z);
      if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
      phi -= std::log(s);
    }
    return phi;
  }

  std::vector<QuadConstraint> cons_;
  Eigen::VectorXd cost_;
  SolverConfig cfg_;
};

}  // namespace smoothcvx
