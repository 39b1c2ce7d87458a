// Evaluates the four-piece spline exactly and shows that co-coercivity fails
// between (0,0) and (2,0) although F is convex and 1-smooth on its domain.

#include <smoothcvx/counterexample.hpp>

#include <iostream>

int main() {
  using namespace smoothcvx;
  const ExactPoint x{0, 0};
  const ExactPoint y{2, 0};

  std::cout << "F(2,0) lies in piece " << classify_region(y) << '\n';
  std::cout << "F(2,0)      = " << eval_F(y) << " = " << to_decimal(eval_F(y)) << '\n';
  const ExactVec2 g = grad_F(y);
  std::cout << "grad F(2,0) = (" << g[0] << ", " << g[1] << ")\n";

  const CocoercivityCheck c = cocoercivity_sides(counterexample(), x, y);
  const mpz_class den = 23040;
  std::cout << "|g(y) - g(x)|^2 / 2        = " << to_fraction_over(c.lhs, den) << '\n';
  std::cout << "f(y) - f(x) - <g(x), y - x> = " << to_fraction_over(c.rhs, den) << '\n';
  std::cout << "violation                   = " << to_fraction_over(c.margin, den) << '\n';

  for (std::size_t k = 1; k <= 4; ++k) {
    const PieceSpectrum s = piece_spectrum(counterexample().piece(k).quadratic);
    std::cout << "piece " << k << ": trace " << s.trace << ", det " << s.det << '\n';
  }
  return 0;
}
