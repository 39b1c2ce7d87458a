#pragma once

// Exact rational scalars and 2-vectors backed by GMP.

#include <gmpxx.h>

#include <array>
#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smoothcvx {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
using ExactScalar = mpq_class;

struct ExactPoint {
  ExactScalar x0;
  ExactScalar x1;
};

using ExactVec2 = std::array<ExactScalar, 2>;
using ExactMat2 = std::array<ExactVec2, 2>;

inline ExactScalar make_rational(long num, long den = 1) {
  ExactScalar q(num, den);
  q.canonicalize();
  return q;
}

inline ExactScalar dot(const ExactVec2& a, const ExactVec2& b) {
  ExactScalar r = a[0] * b[0];
  r += a[1] * b[1];
  return r;
}

inline ExactScalar squared_norm(const ExactVec2& a) { return dot(a, a); }

inline ExactVec2 operator-(const ExactVec2& a, const ExactVec2& b) {
  return {ExactScalar(a[0] - b[0]), ExactScalar(a[1] - b[1])};
}

inline ExactVec2 operator+(const ExactVec2& a, const ExactVec2& b) {
  return {ExactScalar(a[0] + b[0]), ExactScalar(a[1] + b[1])};
}

inline ExactVec2 to_vec(const ExactPoint& p) { return {p.x0, p.x1}; }

/// Parses "p/q", integers, and decimals with an optional exponent
/// ("-0.25", "1e-3") into an exact rational.
inline ExactScalar parse_rational(std::string_view text) {
  auto fail = [&] {
    return std::invalid_argument("not a rational number: '" + std::string(text) + "'");
  };
  if (text.empty()) throw fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    ExactScalar num = parse_rational(text.substr(0, slash));
    ExactScalar den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw fail();
    return ExactScalar(num / den);
  }
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits.empty()) throw fail();
  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw fail();
    std::string exp_text(text.substr(pos + 1));
    if (exp_text.empty()) throw fail();
    std::size_t used = 0;
    try {
      exponent = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      throw fail();
    }
    if (used != exp_text.size()) throw fail();
  }
  mpz_class mantissa(digits, 10);
  long shift = exponent - frac_digits;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  ExactScalar q = shift < 0 ? ExactScalar(mantissa, scale) : ExactScalar(mantissa * scale);
  q.canonicalize();
  return negative ? ExactScalar(-q) : q;
}

/// Correctly rounded decimal with `digits` significant digits.
inline std::string to_decimal(const ExactScalar& q, int digits = 17) {
  mpf_class f(0, 256);
  f = q;
  std::vector<char> buf(128);
  int n = gmp_snprintf(buf.data(), buf.size(), "%.*Fg", digits, f.get_mpf_t());
  if (n >= static_cast<int>(buf.size())) {
    buf.resize(static_cast<std::size_t>(n) + 1);
    gmp_snprintf(buf.data(), buf.size(), "%.*Fg", digits, f.get_mpf_t());
  }
  return buf.data();
}

/// "p/q" with the given denominator when q divides it, e.g. 277/11520 over
/// 23040 renders as "554/23040". Falls back to lowest terms otherwise.
inline std::string to_fraction_over(const ExactScalar& q, const mpz_class& denominator) {
  ExactScalar scaled = q * denominator;
  if (scaled.get_den() != 1) return q.get_str();
  return scaled.get_num().get_str() + "/" + denominator.get_str();
}

/// Exact square root when q is the square of a rational.
inline std::optional<ExactScalar> exact_sqrt(const ExactScalar& q) {
  if (q < 0) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
    return std::nullopt;
  mpz_class n = sqrt(q.get_num());
  mpz_class d = sqrt(q.get_den());
  ExactScalar r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace smoothcvx
