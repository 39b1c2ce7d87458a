#include "smoothcvx/counterexample.hpp"
#include "smoothcvx/property_suite.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace smoothcvx;

namespace {

ExactScalar q(long n, long d = 1) { return make_rational(n, d); }

// Literal transcription of the four pieces and their case split, kept
// independent of the QuadraticPiece machinery.
ExactScalar F1(const ExactScalar& a, const ExactScalar& b) { return (a * a + b * b) / 2; }
ExactScalar F2(const ExactScalar& a, const ExactScalar& b) {
  const ExactScalar u = 3 * a - b - q(1, 12);
  return F1(a, b) - u * u / 20;
}
ExactScalar F3(const ExactScalar& a, const ExactScalar& b) {
  const ExactScalar u = a - q(3, 4), v = b + q(1, 4);
  return (u * u + v * v) / 2 + q(1, 48);
}
ExactScalar F4(const ExactScalar& a, const ExactScalar& b) {
  const ExactScalar w = a - 2 * b - q(49, 48);
  return F3(a, b) - w * w / 10;
}

int oracle_piece(const ExactScalar& a, const ExactScalar& b) {
  const ExactScalar s = 3 * a - b, w = a - 2 * b;
  if (s <= q(1, 12)) return 1;
  if (s <= q(31, 12)) return 2;
  if (w <= q(49, 48)) return 3;
  return 4;
}

ExactScalar oracle_value(const ExactScalar& a, const ExactScalar& b) {
  switch (oracle_piece(a, b)) {
    case 1: return F1(a, b);
    case 2: return F2(a, b);
    case 3: return F3(a, b);
    default: return F4(a, b);
  }
}

// Exact gradient by the symmetric difference quotient, which is exact for
// quadratics.
ExactVec2 oracle_gradient(const ExactScalar& a, const ExactScalar& b) {
  const ExactScalar h = q(1, 1000000);
  const int k = oracle_piece(a, b);
  auto Fk = [k](const ExactScalar& x, const ExactScalar& y) {
    switch (k) {
      case 1: return F1(x, y);
      case 2: return F2(x, y);
      case 3: return F3(x, y);
      default: return F4(x, y);
    }
  };
  return {(Fk(a + h, b) - Fk(a - h, b)) / (2 * h), (Fk(a, b + h) - Fk(a, b - h)) / (2 * h)};
}

}  // namespace

TEST(ExactScalar, LowestTermsAndParsing) {
  EXPECT_EQ(q(554, 23040), q(277, 11520));
  EXPECT_EQ(parse_rational("16991/23040"), q(16991, 23040));
  EXPECT_EQ(parse_rational("-0.125"), q(-1, 8));
  EXPECT_EQ(parse_rational("2.5e-1"), q(1, 4));
  EXPECT_EQ(parse_rational("3"), q(3));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_EQ(to_decimal(q(16991, 23040)), "0.73745659722222222");
  EXPECT_EQ(to_fraction_over(q(277, 11520), mpz_class(23040)), "554/23040");
  EXPECT_EQ(exact_sqrt(q(9, 16)).value(), q(3, 4));
  EXPECT_FALSE(exact_sqrt(q(1, 2)).has_value());
}

TEST(ClassifyRegion, SpecPoints) {
  EXPECT_EQ(classify_region({0, 0}), 1u);
  EXPECT_EQ(classify_region({2, 0}), 4u);
  EXPECT_EQ(classify_region({1, q(1, 4)}), 3u);
}

// (3/4, -1/4) satisfies piece 2's strip test but lies below x1 = -23/240,
// so the public operations reject it while piece 2's formula still applies.
TEST(ClassifyRegion, StripPointBelowTheDomain) {
  const ExactPoint p{q(3, 4), q(-1, 4)};
  EXPECT_FALSE(counterexample().in_domain(p));
  EXPECT_THROW(classify_region(p), DomainError);
  EXPECT_THROW(eval_F(p), DomainError);
  EXPECT_THROW(grad_F(p), DomainError);
  const QuadraticPiece& f2 = counterexample().piece(2).quadratic;
  EXPECT_EQ(f2.value(to_vec(p)), q(59, 2880));
  EXPECT_EQ(f2.gradient(to_vec(p)), (ExactVec2{q(1, 40), q(-1, 120)}));
  EXPECT_EQ(oracle_piece(p.x0, p.x1), 2);
  EXPECT_EQ(F2(p.x0, p.x1), q(59, 2880));
}

TEST(ClassifyRegion, SeamsGoToLowestIndex) {
  // 3x0 - x1 = 1/12 and 31/12, x0 - 2x1 = 49/48.
  EXPECT_EQ(classify_region({q(1, 36), 0}), 1u);
  EXPECT_EQ(classify_region({q(31, 36), 0}), 2u);
  const ExactPoint on34{q(49, 48) + 2, 1};
  EXPECT_EQ(counterexample().claimants(on34), (std::vector<std::size_t>{3, 4}));
  EXPECT_EQ(classify_region(on34), 3u);
}

TEST(ClassifyRegion, RejectsClosedBoundaryAndBelow) {
  EXPECT_THROW(classify_region({0, q(-23, 240)}), DomainError);
  EXPECT_THROW(classify_region({0, -1}), DomainError);
  EXPECT_THROW(eval_F({q(199, 240), q(-23, 240)}), DomainError);
  EXPECT_THROW(grad_F({5, -2}), DomainError);
  EXPECT_NO_THROW(classify_region({0, q(-23, 240) + q(1, 1000000000)}));
}

TEST(EvalF, KnownValues) {
  EXPECT_EQ(eval_F({0, 0}), 0);
  EXPECT_EQ(eval_F({2, 0}), q(16991, 23040));
}

TEST(GradF, KnownValues) {
  EXPECT_EQ(grad_F({0, 0}), (ExactVec2{0, 0}));
  EXPECT_EQ(grad_F({2, 0}), (ExactVec2{q(253, 240), q(77, 120)}));
}

TEST(EvalF, MatchesLiteralFormulasOnRandomRationals) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-3000, 3000);
  std::uniform_int_distribution<long> den(1, 997);
  int checked = 0;
  while (checked < 2000) {
    const ExactPoint p{q(num(rng), den(rng)), q(num(rng), den(rng))};
    if (!counterexample().in_domain(p)) continue;
    ++checked;
    ASSERT_EQ(static_cast<int>(classify_region(p)), oracle_piece(p.x0, p.x1));
    ASSERT_EQ(eval_F(p), oracle_value(p.x0, p.x1));
    ASSERT_EQ(grad_F(p), oracle_gradient(p.x0, p.x1));
  }
}

TEST(Seams, AllThreeIdentitiesHold) {
  const VerificationReport r = verify_c1_seams();
  ASSERT_EQ(r.checks().size(), 3u);
  EXPECT_TRUE(r.all_passed());
  EXPECT_NE(r.find("seam 1|2 (<(3,-1),z> = 1/12)"), nullptr);
  EXPECT_NE(r.find("seam 2|3 (<(3,-1),z> = 31/12)"), nullptr);
  EXPECT_NE(r.find("seam 3|4 (<(1,-2),z> = 49/48)"), nullptr);
}

TEST(Seams, OracleAgreesAcrossEachSeam) {
  // Value and gradient of the two literal formulas agree at seam points.
  for (long k = -20; k <= 20; ++k) {
    const ExactScalar a = q(k, 7);
    const ExactScalar b12 = 3 * a - q(1, 12), b23 = 3 * a - q(31, 12), b34 = (a - q(49, 48)) / 2;
    EXPECT_EQ(F1(a, b12), F2(a, b12));
    EXPECT_EQ(F2(a, b23), F3(a, b23));
    EXPECT_EQ(F3(a, b34), F4(a, b34));
  }
}

TEST(Seams, PerturbedConstantIsCaught) {
  PiecewiseQuadratic f = make_counterexample();
  f.pieces()[1].quadratic.c += q(1, 1000);
  const VerificationReport r = verify_c1_seams(f);
  EXPECT_FALSE(r.all_passed());
  EXPECT_FALSE(r.find("seam 1|2 (<(3,-1),z> = 1/12)")->passed);
  EXPECT_FALSE(r.find("seam 2|3 (<(3,-1),z> = 31/12)")->passed);
  EXPECT_TRUE(r.find("seam 3|4 (<(1,-2),z> = 49/48)")->passed);
}

TEST(Seams, PerturbedGradientIsCaught) {
  PiecewiseQuadratic f = make_counterexample();
  f.pieces()[3].quadratic.b[0] += q(1, 1000);
  EXPECT_FALSE(verify_c1_seams(f).find("seam 3|4 (<(1,-2),z> = 49/48)")->passed);
}

TEST(Pieces, HessiansAndSpectra) {
  const auto& f = counterexample();
  const ExactMat2 A2{ExactVec2{q(1, 10), q(3, 10)}, ExactVec2{q(3, 10), q(9, 10)}};
  const ExactMat2 A4{ExactVec2{q(4, 5), q(2, 5)}, ExactVec2{q(2, 5), q(1, 5)}};
  const ExactMat2 I{ExactVec2{1, 0}, ExactVec2{0, 1}};
  EXPECT_EQ(f.piece(1).quadratic.A, I);
  EXPECT_EQ(f.piece(2).quadratic.A, A2);
  EXPECT_EQ(f.piece(3).quadratic.A, I);
  EXPECT_EQ(f.piece(4).quadratic.A, A4);

  const std::vector<std::vector<ExactScalar>> expected{{1, 1}, {0, 1}, {1, 1}, {0, 1}};
  for (std::size_t k = 1; k <= 4; ++k) {
    const PieceSpectrum s = piece_spectrum(f.piece(k).quadratic);
    EXPECT_TRUE(s.convex) << k;
    EXPECT_TRUE(s.one_smooth) << k;
    std::vector<ExactScalar> eig = s.eigenvalues;
    std::sort(eig.begin(), eig.end());
    EXPECT_EQ(eig, expected[k - 1]) << k;
  }
  EXPECT_TRUE(verify_smooth_convex_pieces().all_passed());
}

TEST(Pieces, TraceDetTestRejectsTooCurvedOrConcave) {
  QuadraticPiece steep;
  steep.A = ExactMat2{ExactVec2{q(3, 2), 0}, ExactVec2{0, q(1, 2)}};
  EXPECT_TRUE(piece_spectrum(steep).convex);
  EXPECT_FALSE(piece_spectrum(steep).one_smooth);
  QuadraticPiece saddle;
  saddle.A = ExactMat2{ExactVec2{q(1, 2), 0}, ExactVec2{0, q(-1, 2)}};
  EXPECT_FALSE(piece_spectrum(saddle).convex);
  QuadraticPiece irrational;  // eigenvalues (3 +- sqrt 5) / 8
  irrational.A = ExactMat2{ExactVec2{q(1, 2), q(1, 4)}, ExactVec2{q(1, 4), q(1, 4)}};
  const PieceSpectrum s = piece_spectrum(irrational);
  EXPECT_TRUE(s.convex);
  EXPECT_TRUE(s.eigenvalues.empty());
  EXPECT_TRUE(s.one_smooth);
}

TEST(Violation, ExactSides) {
  const CocoercivityCheck c = cocoercivity_sides(counterexample(), {0, 0}, {2, 0});
  EXPECT_EQ(c.lhs, q(17545, 23040));
  EXPECT_EQ(c.rhs, q(16991, 23040));
  EXPECT_EQ(c.margin, q(554, 23040));
  EXPECT_GT(c.margin, 0);

  // The same sides from the literal oracle.
  const ExactVec2 g = oracle_gradient(2, 0);
  EXPECT_EQ((g[0] * g[0] + g[1] * g[1]) / 2, q(17545, 23040));
  EXPECT_EQ(oracle_value(2, 0), q(16991, 23040));

  const VerificationReport r = verify_violation();
  ASSERT_EQ(r.checks().size(), 1u);
  EXPECT_TRUE(r.all_passed());
  EXPECT_NE(r.checks()[0].detail.find("violation = 554/23040"), std::string::npos);
}

TEST(PropertySuite, DefaultRunPasses) {
  const VerificationReport r = full_verification(counterexample(), SuiteConfig{});
  for (const auto& c : r.checks()) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
  ASSERT_NE(r.find("lattice: region partition"), nullptr);
  // Seam points are part of the lattice.
  EXPECT_EQ(r.find("lattice: region partition")->detail.find(" 0 on seams"), std::string::npos);
}

TEST(PropertySuite, FinerGridHasMoreSamples) {
  SuiteConfig fine;
  fine.grid_spacing = q(1, 32);
  const auto coarse_pts = lattice(counterexample(), SuiteConfig{});
  const auto fine_pts = lattice(counterexample(), fine);
  EXPECT_GT(fine_pts.size(), 3 * coarse_pts.size());
  EXPECT_TRUE(lattice_checks(counterexample(), fine).all_passed());
}

TEST(PropertySuite, DeterministicUnderSeed) {
  SuiteConfig cfg;
  cfg.global_pairs = 500;
  cfg.local_pairs = 200;
  std::ostringstream a, b;
  full_verification(counterexample(), cfg).write_text(a);
  full_verification(counterexample(), cfg).write_text(b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(PropertySuite, CocoercivityFailsForTheFarPairOnly) {
  // The pair (0,0), (2,0) is far outside the local condition.
  EXPECT_FALSE(local_condition(Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 0), 23.0 / 240.0));
  const PointData px = to_point_data(counterexample(), {0, 0});
  const PointData py = to_point_data(counterexample(), {2, 0});
  EXPECT_NEAR(cocoercivity_gap(1.0, px, py), -554.0 / 23040.0, 1e-15);
}

TEST(Report, TextAndJson) {
  VerificationReport r;
  r.add("a", true, "fine");
  r.add("b", false);
  std::ostringstream os;
  r.write_text(os);
  EXPECT_EQ(os.str(), "[PASS] a: fine\n[FAIL] b\nSOME CHECKS FAILED\n");
  const auto j = r.to_json();
  EXPECT_FALSE(j["passed"].get<bool>());
  EXPECT_EQ(j["checks"].size(), 2u);
}
