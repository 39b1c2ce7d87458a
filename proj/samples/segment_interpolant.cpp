// Realizes both chain bounds by L-smooth convex functions along [x, y] and
// blends them to hit a prescribed value at y.

#include <smoothcvx/chain_qcqp.hpp>
#include <smoothcvx/interpolation.hpp>

#include <cstdio>

int main() {
  using namespace smoothcvx;
  const std::size_t N = 5;
  const BoundResult up = solve(build_problem(normalized_spec(0.6, N, Direction::Upper)));
  const BoundResult lo = solve(build_problem(normalized_spec(0.6, N, Direction::Lower)));
  const SegmentInterpolant Fu = build_segment_interpolant(1.0, up.chain);
  const SegmentInterpolant Fb = build_segment_interpolant(1.0, lo.chain);

  const double target = 0.5 * (up.value + lo.value);
  const double lambda = (target - lo.value) / (up.value - lo.value);
  const SegmentInterpolant F = combine(Fu, Fb, lambda);

  std::printf("%6s %12s %12s %12s\n", "t", "F_b", "F_u", "blend");
  for (const SampleRow& r : sample_interpolant(F, 10)) {
    std::printf("%6.2f %12.8f %12.8f %12.8f\n", r.t, eval_interpolant(Fb, r.t).value, eval_interpolant(Fu, r.t).value,
                r.value);
  }
  std::printf("blend at y = %.8f (target %.8f)\n", eval_interpolant(F, 1.0).value, target);
  return 0;
}
