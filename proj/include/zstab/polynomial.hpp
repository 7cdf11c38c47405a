#pragma once

// Dense univariate polynomials over Q, coefficients in ascending degree.
// The zero polynomial has no coefficients.

#include <utility>
#include <vector>

#include "zstab/rational.hpp"

namespace zstab {

struct Polynomial {
  std::vector<Rational> coeffs;

  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> c) : coeffs(std::move(c)) { trim(); }

  void trim() {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  }
  bool is_zero() const { return coeffs.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  const Rational& leading() const { return coeffs.back(); }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

inline Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.coeffs.size(), b.coeffs.size()), Rational(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
  return Polynomial(std::move(c));
}

inline Polynomial operator*(const Rational& s, const Polynomial& p) {
  std::vector<Rational> c = p.coeffs;
  for (auto& v : c) v *= s;
  return Polynomial(std::move(c));
}

inline Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + Rational(-1) * b; }

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.coeffs.size() + b.coeffs.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  return Polynomial(std::move(c));
}

inline Polynomial derivative(const Polynomial& p) {
  if (p.coeffs.size() <= 1) return {};
  std::vector<Rational> c(p.coeffs.size() - 1);
  for (std::size_t i = 1; i < p.coeffs.size(); ++i) c[i - 1] = p.coeffs[i] * static_cast<long>(i);
  return Polynomial(std::move(c));
}

/// Euclidean division a = q*b + r with deg r < deg b.
inline std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
  require(!b.is_zero(), Errc::precondition, "polynomial division by zero");
  std::vector<Rational> rem = a.coeffs;
  const int db = b.degree();
  if (a.degree() < db) return {Polynomial{}, a};
  std::vector<Rational> quot(static_cast<std::size_t>(a.degree() - db + 1), Rational(0));
  for (int k = a.degree(); k >= db; --k) {
    const Rational factor = rem[static_cast<std::size_t>(k)] / b.leading();
    if (factor == 0) continue;
    quot[static_cast<std::size_t>(k - db)] = factor;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= factor * b.coeffs[static_cast<std::size_t>(j)];
  }
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

inline Polynomial monic(const Polynomial& p) {
  if (p.is_zero()) return p;
  return (Rational(1) / p.leading()) * p;
}

inline Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

/// Coefficients of p(c + h) as a polynomial in h (Taylor coefficients at c).
inline Polynomial taylor_shift(const Polynomial& p, const Rational& c) {
  std::vector<Rational> t = p.coeffs;
  const std::size_t n = t.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) t[j - 1] += c * t[j];
  return Polynomial(std::move(t));
}

/// Square-free decomposition (Yun): returns (factor, multiplicity) pairs with
/// monic, pairwise coprime, square-free factors whose product is p / lc(p).
inline std::vector<std::pair<Polynomial, int>> squarefree_decomposition(const Polynomial& p) {
  require(!p.is_zero(), Errc::precondition, "square-free decomposition of the zero polynomial");
  std::vector<std::pair<Polynomial, int>> out;
  if (p.degree() == 0) return out;
  const Polynomial dp = derivative(p);
  Polynomial a = gcd(p, dp);
  Polynomial b = divmod(p, a).first;
  Polynomial c = divmod(dp, a).first;
  Polynomial d = c - derivative(b);
  int i = 1;
  while (b.degree() > 0) {
    Polynomial g = gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g, i);
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    d = c - derivative(b);
    ++i;
  }
  return out;
}

}  // namespace zstab
