#pragma once

// A four-piece convex spline on the open half-plane {x1 > -23/240}. It is
// convex and 1-smooth on that domain, yet violates the unconstrained
// co-coercivity inequality for x = (0,0), y = (2,0), so it has no 1-smooth
// convex extension to the whole plane.
//
// Everything here is exact rational arithmetic. Piece numbers are 1-based.

#include "smoothcvx/errors.hpp"
#include "smoothcvx/exact.hpp"
#include "smoothcvx/report.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace smoothcvx {

/// q(z) = 1/2 z^T A z + b^T z + c with symmetric A.
struct QuadraticPiece {
  ExactMat2 A{};
  ExactVec2 b{};
  ExactScalar c{};

  /// 1/2 ||z - center||^2 + offset.
  static QuadraticPiece isotropic(const ExactVec2& center = {}, const ExactScalar& offset = 0) {
    QuadraticPiece q;
    q.A = {{{1, 0}, {0, 1}}};
    q.b = {ExactScalar(-center[0]), ExactScalar(-center[1])};
    q.c = squared_norm(center) / 2 + offset;
    return q;
  }

  /// Returns q - weight * (<normal, z> - level)^2.
  QuadraticPiece minus_square(const ExactScalar& weight, const ExactVec2& normal,
                              const ExactScalar& level) const {
    QuadraticPiece r = *this;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) r.A[i][j] -= 2 * weight * normal[i] * normal[j];
      r.b[i] += 2 * weight * level * normal[i];
    }
    r.c -= weight * level * level;
    return r;
  }

  ExactScalar value(const ExactVec2& z) const {
    ExactScalar v = c + dot(b, z);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) v += A[i][j] * z[i] * z[j] / 2;
    return v;
  }

  ExactVec2 gradient(const ExactVec2& z) const {
    return {ExactScalar(A[0][0] * z[0] + A[0][1] * z[1] + b[0]),
            ExactScalar(A[1][0] * z[0] + A[1][1] * z[1] + b[1])};
  }

  ExactScalar trace() const { return A[0][0] + A[1][1]; }
  ExactScalar det() const { return A[0][0] * A[1][1] - A[0][1] * A[1][0]; }
};

/// <normal, z> <= offset, or < when strict.
struct HalfPlane {
  ExactVec2 normal{};
  ExactScalar offset{};
  bool strict = false;

  ExactScalar level(const ExactVec2& z) const { return dot(normal, z); }
  bool contains(const ExactVec2& z) const {
    return strict ? level(z) < offset : level(z) <= offset;
  }
  bool on_boundary(const ExactVec2& z) const { return level(z) == offset; }
};

/// lo <= <normal, z> as a HalfPlane.
inline HalfPlane at_least(const ExactVec2& normal, const ExactScalar& lo) {
  return {{ExactScalar(-normal[0]), ExactScalar(-normal[1])}, ExactScalar(-lo), false};
}

inline HalfPlane at_most(const ExactVec2& normal, const ExactScalar& hi) { return {normal, hi, false}; }

struct Piece {
  QuadraticPiece quadratic;
  std::vector<HalfPlane> region;  // conjunction

  bool claims(const ExactVec2& z) const {
    for (const auto& h : region)
      if (!h.contains(z)) return false;
    return true;
  }
};

/// A line <normal, z> = offset along which two pieces must agree to first order.
struct Seam {
  std::size_t first = 0;   // piece numbers, 1-based
  std::size_t second = 0;
  HalfPlane line;
};

class PiecewiseQuadratic {
 public:
  PiecewiseQuadratic(std::vector<Piece> pieces, HalfPlane domain, std::vector<Seam> seams)
      : pieces_(std::move(pieces)), domain_(std::move(domain)), seams_(std::move(seams)) {}

  const std::vector<Piece>& pieces() const { return pieces_; }
  std::vector<Piece>& pieces() { return pieces_; }
  const HalfPlane& domain() const { return domain_; }
  const std::vector<Seam>& seams() const { return seams_; }
  const Piece& piece(std::size_t number) const { return pieces_.at(number - 1); }

  bool in_domain(const ExactPoint& p) const { return domain_.contains(to_vec(p)); }

  /// Lowest-numbered piece whose region contains p.
  std::size_t classify_region(const ExactPoint& p) const {
    require_domain(p);
    const ExactVec2 z = to_vec(p);
    for (std::size_t k = 0; k < pieces_.size(); ++k)
      if (pieces_[k].claims(z)) return k + 1;
    throw DomainError("point " + p.x0.get_str() + "," + p.x1.get_str() + " is claimed by no region");
  }

  ExactScalar eval(const ExactPoint& p) const { return piece(classify_region(p)).quadratic.value(to_vec(p)); }

  ExactVec2 gradient(const ExactPoint& p) const {
    return piece(classify_region(p)).quadratic.gradient(to_vec(p));
  }

  /// Every piece number whose region contains p (possibly several on seams).
  std::vector<std::size_t> claimants(const ExactPoint& p) const {
    std::vector<std::size_t> out;
    const ExactVec2 z = to_vec(p);
    for (std::size_t k = 0; k < pieces_.size(); ++k)
      if (pieces_[k].claims(z)) out.push_back(k + 1);
    return out;
  }

 private:
  void require_domain(const ExactPoint& p) const {
    if (!in_domain(p))
      throw DomainError("point (" + p.x0.get_str() + ", " + p.x1.get_str() + ") is outside the open domain");
  }

  std::vector<Piece> pieces_;
  HalfPlane domain_;
  std::vector<Seam> seams_;
};

/// The four-piece spline F on {x1 > -23/240}.
inline PiecewiseQuadratic make_counterexample() {
  const ExactVec2 n12{3, -1};   // 3 x0 - x1
  const ExactVec2 n34{1, -2};   // x0 - 2 x1
  const ExactScalar s12 = make_rational(1, 12);
  const ExactScalar s23 = make_rational(31, 12);
  const ExactScalar s34 = make_rational(49, 48);
  const ExactVec2 shifted{make_rational(3, 4), make_rational(-1, 4)};
  const ExactScalar lift = make_rational(1, 48);

  QuadraticPiece f1 = QuadraticPiece::isotropic();
  QuadraticPiece f2 = f1.minus_square(make_rational(1, 20), n12, s12);
  QuadraticPiece f3 = QuadraticPiece::isotropic(shifted, lift);
  QuadraticPiece f4 = f3.minus_square(make_rational(1, 10), n34, s34);

  std::vector<Piece> pieces{
      {f1, {at_most(n12, s12)}},
      {f2, {at_least(n12, s12), at_most(n12, s23)}},
      {f3, {at_least(n12, s23), at_most(n34, s34)}},
      {f4, {at_least(n34, s34)}},
  };
  HalfPlane domain{{0, -1}, make_rational(23, 240), true};
  std::vector<Seam> seams{
      {1, 2, {n12, s12, false}},
      {2, 3, {n12, s23, false}},
      {3, 4, {n34, s34, false}},
  };
  return PiecewiseQuadratic(std::move(pieces), std::move(domain), std::move(seams));
}

inline const PiecewiseQuadratic& counterexample() {
  static const PiecewiseQuadratic f = make_counterexample();
  return f;
}

inline std::size_t classify_region(const ExactPoint& p) { return counterexample().classify_region(p); }
inline ExactScalar eval_F(const ExactPoint& p) { return counterexample().eval(p); }
inline ExactVec2 grad_F(const ExactPoint& p) { return counterexample().gradient(p); }

namespace detail {

inline std::string seam_label(const Seam& s) {
  return "seam " + std::to_string(s.first) + "|" + std::to_string(s.second) + " (<(" +
         s.line.normal[0].get_str() + "," + s.line.normal[1].get_str() + "),z> = " + s.line.offset.get_str() + ")";
}

}  // namespace detail

/// Checks, for every seam, that the two adjacent pieces restricted to the seam
/// line have identical value and gradient polynomials (coefficient-wise).
inline VerificationReport verify_c1_seams(const PiecewiseQuadratic& f = counterexample()) {
  VerificationReport report;
  for (const Seam& seam : f.seams()) {
    const QuadraticPiece& qa = f.piece(seam.first).quadratic;
    const QuadraticPiece& qb = f.piece(seam.second).quadratic;
    const ExactVec2& n = seam.line.normal;

    // z(s) = z0 + s d with <n, z0> = offset and d orthogonal to n.
    ExactVec2 z0 = n[0] != 0 ? ExactVec2{ExactScalar(seam.line.offset / n[0]), 0}
                             : ExactVec2{0, ExactScalar(seam.line.offset / n[1])};
    ExactVec2 d{ExactScalar(-n[1]), n[0]};

    ExactMat2 dA;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) dA[i][j] = qa.A[i][j] - qb.A[i][j];
    ExactVec2 db = qa.b - qb.b;
    ExactScalar dc = qa.c - qb.c;
    auto apply = [&](const ExactVec2& v) {
      return ExactVec2{ExactScalar(dA[0][0] * v[0] + dA[0][1] * v[1]),
                       ExactScalar(dA[1][0] * v[0] + dA[1][1] * v[1])};
    };

    const ExactVec2 Ad = apply(d);
    const ExactVec2 Az0 = apply(z0);
    const ExactScalar value_s2 = dot(d, Ad) / 2;
    const ExactScalar value_s1 = dot(d, Az0 + db);
    const ExactScalar value_s0 = dot(z0, Az0) / 2 + dot(db, z0) + dc;
    const ExactVec2 grad_s0 = Az0 + db;
    const ExactVec2& grad_s1 = Ad;

    std::vector<std::string> bad;
    if (value_s2 != 0 || value_s1 != 0 || value_s0 != 0)
      bad.push_back("value difference " + value_s2.get_str() + " s^2 + " + value_s1.get_str() + " s + " +
                    value_s0.get_str());
    if (grad_s0[0] != 0 || grad_s0[1] != 0 || grad_s1[0] != 0 || grad_s1[1] != 0)
      bad.push_back("gradient difference (" + grad_s0[0].get_str() + "," + grad_s0[1].get_str() + ") + s (" +
                    grad_s1[0].get_str() + "," + grad_s1[1].get_str() + ")");
    std::string detail = "value and gradient agree identically";
    if (!bad.empty()) {
      detail.clear();
      for (const auto& b : bad) detail += (detail.empty() ? "" : "; ") + b;
    }
    report.add(detail::seam_label(seam), bad.empty(), detail);
  }
  return report;
}

struct PieceSpectrum {
  ExactScalar trace;
  ExactScalar det;
  bool convex = false;      // both eigenvalues >= 0
  bool one_smooth = false;  // both eigenvalues <= 1
  std::vector<ExactScalar> eigenvalues;  // filled when rational
};

/// Eigenvalue range of the Hessian by trace/det tests, without
/// eigendecomposition: A >= 0 iff tr A >= 0 and det A >= 0; A <= I likewise
/// applied to I - A.
inline PieceSpectrum piece_spectrum(const QuadraticPiece& q) {
  PieceSpectrum s;
  s.trace = q.trace();
  s.det = q.det();
  const ExactScalar tr_shift = s.trace - 2;
  const ExactScalar det_shift = s.det - s.trace + 1;  // det(A - I)
  s.convex = s.trace >= 0 && s.det >= 0;
  s.one_smooth = tr_shift <= 0 && det_shift >= 0;
  if (auto root = exact_sqrt(ExactScalar(s.trace * s.trace - 4 * s.det))) {
    s.eigenvalues = {ExactScalar((s.trace - *root) / 2), ExactScalar((s.trace + *root) / 2)};
  }
  return s;
}

inline VerificationReport verify_smooth_convex_pieces(const PiecewiseQuadratic& f = counterexample()) {
  VerificationReport report;
  for (std::size_t k = 1; k <= f.pieces().size(); ++k) {
    const QuadraticPiece& q = f.piece(k).quadratic;
    const PieceSpectrum s = piece_spectrum(q);
    const bool symmetric = q.A[0][1] == q.A[1][0];
    std::string detail = "trace " + s.trace.get_str() + ", det " + s.det.get_str();
    if (!s.eigenvalues.empty())
      detail += ", eigenvalues {" + s.eigenvalues[0].get_str() + ", " + s.eigenvalues[1].get_str() + "}";
    if (!symmetric) detail += ", Hessian not symmetric";
    if (!s.convex) detail += ", not convex";
    if (!s.one_smooth) detail += ", eigenvalue above 1";
    report.add("piece " + std::to_string(k) + " convex and 1-smooth", symmetric && s.convex && s.one_smooth, detail);
  }
  return report;
}

/// Both sides of the co-coercivity inequality with L = 1 at (x, y).
struct CocoercivityCheck {
  ExactScalar lhs;     // 1/2 ||F'(y) - F'(x)||^2
  ExactScalar rhs;     // F(y) - F(x) - <F'(x), y - x>
  ExactScalar margin;  // lhs - rhs, positive means violated
};

inline CocoercivityCheck cocoercivity_sides(const PiecewiseQuadratic& f, const ExactPoint& x, const ExactPoint& y) {
  const ExactVec2 gx = f.gradient(x);
  const ExactVec2 gy = f.gradient(y);
  CocoercivityCheck c;
  c.lhs = squared_norm(gy - gx) / 2;
  c.rhs = f.eval(y) - f.eval(x) - dot(gx, to_vec(y) - to_vec(x));
  c.margin = c.lhs - c.rhs;
  return c;
}

/// Shows that x = (0,0), y = (2,0) strictly violate co-coercivity.
inline VerificationReport verify_violation(const PiecewiseQuadratic& f = counterexample()) {
  const ExactPoint x{0, 0};
  const ExactPoint y{2, 0};
  const CocoercivityCheck c = cocoercivity_sides(f, x, y);
  const mpz_class den(23040);
  VerificationReport report;
  report.add("co-coercivity violated at x=(0,0), y=(2,0)", c.margin > 0,
             "lhs = " + to_fraction_over(c.lhs, den) + ", rhs = " + to_fraction_over(c.rhs, den) +
                 ", violation = " + to_fraction_over(c.margin, den));
  return report;
}

}  // namespace smoothcvx
