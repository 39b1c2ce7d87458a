// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all
// twelve pass.

#include "smoothcvx/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

using namespace smoothcvx;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

const double kSqrtHalf = std::sqrt(0.5);

BoundResult bound(double s, std::size_t N, Direction dir) { return solve(build_problem(normalized_spec(s, N, dir))); }

// 1. Exact reproduction of the counterexample values.
Outcome criterion1() {
  const auto t0 = Clock::now();
  const ExactScalar Fy = eval_F({2, 0});
  const ExactVec2 g = grad_F({2, 0});
  const CocoercivityCheck c = cocoercivity_sides(counterexample(), {0, 0}, {2, 0});
  const bool ok = Fy == make_rational(16991, 23040) && g[0] == make_rational(253, 240) &&
                  g[1] == make_rational(77, 120) && c.lhs == make_rational(17545, 23040) &&
                  c.rhs == make_rational(16991, 23040) && c.margin == make_rational(554, 23040) && c.margin > 0;
  const double dt = seconds_since(t0);
  return {ok && dt < 1.0, "F(2,0) = " + Fy.get_str() + ", lhs = " + to_fraction_over(c.lhs, 23040) +
                              ", violation = " + to_fraction_over(c.margin, 23040) + ", " + fmt(dt) + " s"};
}

// 2. Seams and piece spectra.
Outcome criterion2() {
  const VerificationReport seams = verify_c1_seams();
  const std::vector<std::vector<ExactScalar>> want{{1, 1}, {0, 1}, {1, 1}, {0, 1}};
  bool spectra = true;
  std::string eig;
  for (std::size_t k = 1; k <= 4; ++k) {
    const PieceSpectrum s = piece_spectrum(counterexample().piece(k).quadratic);
    std::vector<ExactScalar> e = s.eigenvalues;
    std::sort(e.begin(), e.end());
    spectra = spectra && s.convex && s.one_smooth && e == want[k - 1];
    eig += " {" + (e.empty() ? std::string("?") : e.front().get_str() + "," + e.back().get_str()) + "}";
  }
  return {seams.all_passed() && seams.checks().size() == 3 && spectra,
          std::to_string(seams.checks().size()) + " seams exact, spectra" + eig};
}

// 3. Global bound on random pairs of the counterexample.
Outcome criterion3() {
  const auto t0 = Clock::now();
  const VerificationReport r = global_bound_checks(counterexample(), SuiteConfig{});
  const double dt = seconds_since(t0);
  return {r.all_passed() && dt < 10.0, r.checks()[0].detail + ", " + fmt(dt) + " s"};
}

// 4. Local co-coercivity under the distance condition.
Outcome criterion4() {
  const VerificationReport r = local_cocoercivity_checks(counterexample(), SuiteConfig{});
  return {r.all_passed(), r.checks()[0].detail};
}

// 5. Sum identity.
Outcome criterion5() {
  std::mt19937_64 rng(20190105);
  double worst = 0.0;
  bool ok = true;
  for (std::size_t N = 1; N <= 50; ++N) {
    std::uniform_real_distribution<double> u(0.0, static_cast<double>(N));
    for (int k = 0; k < 100; ++k) {
      const SumIdentity s = sum_identity(N, u(rng));
      const double rel = std::abs(s.direct - s.closed) / static_cast<double>(N * N);
      worst = std::max(worst, rel);
      ok = ok && rel <= 1e-9;
    }
  }
  const SumIdentity a = sum_identity(4, 1.5);
  ok = ok && std::abs(a.direct - 6.25) <= 1e-12 && std::abs(a.closed - 6.25) <= 1e-12;
  for (std::size_t N = 1; N <= 50; ++N) {
    const SumIdentity top = sum_identity(N, static_cast<double>(N));
    const SumIdentity bottom = sum_identity(N, 0.0);
    const double n2 = static_cast<double>(N * N);
    ok = ok && std::abs(top.direct) <= 1e-12 && std::abs(top.closed) <= 1e-12;
    ok = ok && std::abs(bottom.direct - n2) <= 1e-12 && std::abs(bottom.closed - n2) <= 1e-12;
  }
  return {ok, "worst |direct - closed| / N^2 = " + fmt(worst) + "; hand cases exact"};
}

// 6. Region CSV from the CLI.
Outcome criterion6() {
  RunConfig cfg;
  cfg.command = Command::Region;
  std::ostringstream out, err;
  if (run(cfg, out, err) != 0) return {false, "region command failed: " + err.str()};
  std::istringstream is(out.str());
  std::string line;
  std::getline(is, line);
  std::size_t rows = 0, bad = 0;
  while (std::getline(is, line)) {
    double t, il, ih, ol, oh;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &t, &il, &ih, &ol, &oh) != 5) return {false, "bad row"};
    ++rows;
    const bool inside = ol <= il && ih <= oh;
    bool shape;
    if (t == 0.0 || t == 1.0) {
      shape = il == ih && ol == oh && il == ol;
    } else {
      shape = ol < il || ih < oh;
    }
    if (!inside || !shape) ++bad;
  }
  return {rows == 1001 && bad == 0, std::to_string(rows) + " rows, " + std::to_string(bad) + " violations"};
}

// 7. Solver against the closed form for N = 1.
Outcome criterion7() {
  double worst = 0.0;
  bool ok = true;
  for (int k = 0; k < 50; ++k) {
    const double s = 0.5 + (kSqrtHalf - 0.5) * k / 49.0;
    const ClosedFormN1 cf = closed_form_n1(normalized_spec(s, 1, Direction::Upper));
    const BoundResult up = bound(s, 1, Direction::Upper), lo = bound(s, 1, Direction::Lower);
    ok = ok && up.status == SolveStatus::Optimal && lo.status == SolveStatus::Optimal;
    worst = std::max({worst, std::abs(up.value - cf.U1), std::abs(lo.value - cf.B1)});
  }
  ok = ok && worst <= 1e-6;
  const bool flagged = bound(0.45, 1, Direction::Upper).status == SolveStatus::Infeasible &&
                       bound(0.45, 1, Direction::Lower).status == SolveStatus::Infeasible;
  return {ok && flagged, "worst error " + fmt(worst) + ", s = 0.45 " + (flagged ? "Infeasible" : "not flagged")};
}

// 8. Solver against the brute-force grid for N = 2.
Outcome criterion8() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2019);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> e(0.0, 1.0);
  double worst = 0.0;
  bool ok = true;
  for (int k = 0; k < 10; ++k) {
    // Endpoint data of a random 1-smooth convex quadratic in the plane.
    const double th = 6.0 * e(rng);
    Eigen::Matrix2d R;
    R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    const Eigen::Matrix2d A = R * Eigen::Vector2d(e(rng), e(rng)).asDiagonal() * R.transpose();
    const Eigen::Vector2d b(n(rng), n(rng));
    ChainSpec spec;
    spec.N = 2;
    spec.x = Eigen::Vector2d(n(rng), n(rng));
    spec.y = Eigen::Vector2d(n(rng), n(rng));
    spec.f_x = 0.5 * spec.x.dot(A * spec.x) + b.dot(spec.x);
    spec.g_x = A * spec.x + b;
    spec.g_y = A * spec.y + b;
    const GridOracle o = oracle_grid_n2(spec, 1200);
    spec.direction = Direction::Lower;
    const BoundResult lo = solve(build_problem(spec));
    spec.direction = Direction::Upper;
    const BoundResult up = solve(build_problem(spec));
    ok = ok && lo.status == SolveStatus::Optimal && up.status == SolveStatus::Optimal;
    worst = std::max({worst, std::abs(lo.value - o.B2), std::abs(up.value - o.U2)});
  }
  const double dt = seconds_since(t0);
  return {ok && worst <= 2e-3 && dt < 60.0, "worst |solver - grid| = " + fmt(worst) + ", " + fmt(dt) + " s"};
}

std::vector<double> default_s_grid() {
  const SweepGrid g;
  std::vector<double> v;
  for (std::size_t k = 0; k < g.s_steps; ++k)
    v.push_back(k + 1 == g.s_steps ? g.s_max
                                   : g.s_min + (g.s_max - g.s_min) * static_cast<double>(k) /
                                                   static_cast<double>(g.s_steps - 1));
  return v;
}

// 9. Sandwich between the analytical bounds on the default sweep.
Outcome criterion9(const std::vector<SweepRow>& rows) {
  std::size_t optimal = 0, bad = 0;
  double worst = -INFINITY;
  for (const auto& r : rows) {
    if (r.status != SolveStatus::Optimal) continue;
    ++optimal;
    const ChainSpec spec = normalized_spec(r.s, r.N, Direction::Upper);
    // Neither end of the interval depends on f(y).
    const Interval iv = global_bound_interval(spec.L, {spec.x, spec.f_x, spec.g_x}, {spec.y, 0.0, spec.g_y});
    worst = std::max({worst, iv.lo - r.B, r.U - iv.hi});
    if (r.B < iv.lo - 1e-6 || r.U > iv.hi + 1e-6) ++bad;
  }
  return {optimal == rows.size() && bad == 0,
          std::to_string(optimal) + " Optimal rows, " + std::to_string(bad) + " outside, worst excess " + fmt(worst)};
}

// 10. Nesting and overlap of the bands.
Outcome criterion10() {
  bool ok = true;
  std::ostringstream os;
  for (double s : {0.55, 0.6, 0.65}) {
    const double B1 = bound(s, 1, Direction::Lower).value, U1 = bound(s, 1, Direction::Upper).value;
    const double B5 = bound(s, 5, Direction::Lower).value, U5 = bound(s, 5, Direction::Upper).value;
    const double B50 = bound(s, 50, Direction::Lower).value, U50 = bound(s, 50, Direction::Upper).value;
    const bool nest = B1 <= B5 + 1e-6 && U5 <= U1 + 1e-6;
    const double width = U1 - B1;
    const bool overlap = std::abs(U50 - U5) <= 0.02 * width && std::abs(B50 - B5) <= 0.02 * width;
    ok = ok && nest && overlap;
    os << "s=" << s << ": B1-B5 " << fmt(B1 - B5) << ", U5-U1 " << fmt(U5 - U1) << ", |U50-U5|/(U1-B1) "
       << fmt(std::abs(U50 - U5) / width) << ", |B50-B5|/(U1-B1) " << fmt(std::abs(B50 - B5) / width) << "; ";
  }
  std::string d = os.str();
  d.resize(d.size() - 2);
  return {ok, d};
}

// 11. Interpolant round trip.
Outcome criterion11() {
  bool ok = true;
  double knot_err = 0.0, convex_err = 0.0, smooth_err = 0.0, end_err = 0.0, mid_err = 0.0;
  std::mt19937_64 rng(20190111);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double s : {0.55, 0.65}) {
    for (std::size_t N : {2u, 5u}) {
      const BoundResult up = bound(s, N, Direction::Upper), lo = bound(s, N, Direction::Lower);
      if (up.status != SolveStatus::Optimal || lo.status != SolveStatus::Optimal) return {false, "solve failed"};
      std::vector<SegmentInterpolant> built;
      try {
        built.push_back(build_segment_interpolant(1.0, up.chain));
        built.push_back(build_segment_interpolant(1.0, lo.chain));
      } catch (const std::exception& e) {
        return {false, std::string("build failed: ") + e.what()};
      }
      const BoundResult* chains[2] = {&up, &lo};
      for (int w = 0; w < 2; ++w) {
        const SegmentInterpolant& F = built[w];
        const BoundResult& r = *chains[w];
        const Vec dir = r.chain.back().x - r.chain.front().x;
        const double len2 = dir.squaredNorm();
        for (std::size_t i = 0; i <= N; ++i) {
          const SegmentSample smp = eval_interpolant(F, static_cast<double>(i) / static_cast<double>(N));
          knot_err = std::max({knot_err, std::abs(smp.value - r.chain[i].f), std::abs(smp.dvalue - r.chain[i].g.dot(dir))});
        }
        for (int k = 0; k < 1000; ++k) {
          double t[3] = {u(rng), u(rng), u(rng)};
          std::sort(t, t + 3);
          if (t[1] - t[0] < 1e-6 || t[2] - t[1] < 1e-6) continue;
          const SegmentSample a = eval_interpolant(F, t[0]), b = eval_interpolant(F, t[1]), c = eval_interpolant(F, t[2]);
          convex_err = std::max(convex_err, (b.value - a.value) / (t[1] - t[0]) - (c.value - b.value) / (t[2] - t[1]));
          smooth_err = std::max(smooth_err, std::abs(c.dvalue - a.dvalue) - len2 * (t[2] - t[0]));
        }
        end_err = std::max(end_err, std::abs(eval_interpolant(F, 1.0).value - r.value));
      }
      const SegmentInterpolant mid = combine(built[0], built[1], 0.5);
      mid_err = std::max(mid_err, std::abs(eval_interpolant(mid, 1.0).value - 0.5 * (up.value + lo.value)));
    }
  }
  ok = knot_err <= 1e-10 && convex_err <= 1e-9 && smooth_err <= 1e-9 && end_err <= 1e-6 && mid_err <= 1e-6;
  return {ok, "knots " + fmt(knot_err) + ", convexity " + fmt(convex_err) + ", smoothness " + fmt(smooth_err) +
                  ", endpoint " + fmt(end_err) + ", combine " + fmt(mid_err)};
}

// 12. Byte-identical sweep CSV from two runs of the executable.
Outcome criterion12() {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / ("smoothcvx_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  const std::string exe = SMOOTHCVX_CLI_PATH;
  const int ra = std::system((exe + " sweep --seed 7 --out " + a).c_str());
  const int rb = std::system((exe + " sweep --seed 7 --out " + b).c_str());
  auto slurp = [](const std::string& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
  };
  const std::string ca = slurp(a), cb = slurp(b);
  std::filesystem::remove_all(dir);
  const bool ran = WIFEXITED(ra) && WEXITSTATUS(ra) == 0 && WIFEXITED(rb) && WEXITSTATUS(rb) == 0;
  return {ran && !ca.empty() && ca == cb, std::to_string(ca.size()) + " bytes, " + (ca == cb ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<SweepRow> rows = sweep(SweepBase{}, default_s_grid(), SweepGrid{}.N_list);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact counterexample reproduction", criterion1},
      {"seams and piece spectra", criterion2},
      {"global bound on random pairs", criterion3},
      {"local co-coercivity on random pairs", criterion4},
      {"sum identity", criterion5},
      {"region inner inside outer", criterion6},
      {"solver vs closed form, N = 1", criterion7},
      {"solver vs grid oracle, N = 2", criterion8},
      {"analytical sandwich on the default sweep", [&] { return criterion9(rows); }},
      {"band nesting and overlap", criterion10},
      {"interpolant round trip", criterion11},
      {"sweep determinism", criterion12},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] criterion %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
