// Lower and upper chain bounds on f(y) for growing N, in the normalization
// x = 0, f(x) = 0, f'(x) = 0, ||y||^2 = 1, ||f'(y)||^2 = 0.5.

#include <smoothcvx/chain_qcqp.hpp>

#include <cstdio>

int main() {
  using namespace smoothcvx;
  const double s = 0.6;  // <f'(y), y>
  std::printf("%4s %12s %12s %12s\n", "N", "B_N", "U_N", "status");
  for (std::size_t N : {1, 2, 3, 5, 10, 20, 50}) {
    const BoundResult lo = solve(build_problem(normalized_spec(s, N, Direction::Lower)));
    const BoundResult hi = solve(build_problem(normalized_spec(s, N, Direction::Upper)));
    std::printf("%4zu %12.8f %12.8f %12s\n", N, lo.value, hi.value, to_string(hi.status));
  }
  const ClosedFormN1 cf = closed_form_n1(normalized_spec(s, 1, Direction::Upper));
  std::printf("closed form N = 1: B_1 = %.8f, U_1 = %.8f\n", cf.B1, cf.U1);
  return 0;
}
