#pragma once

#include <gmpxx.h>

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "strata/common.hpp"

namespace strata {

struct GaussianRational {
  mpq_class re{0}, im{0};

  GaussianRational() = default;
  GaussianRational(long r) : re(r) {}
  GaussianRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}
  static GaussianRational i() { return {0, 1}; }
  static GaussianRational frac(long p, long q) { return {mpq_class(p, q)}; }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  GaussianRational conj() const { return {re, -im}; }
  cplx to_complex() const { return {re.get_d(), im.get_d()}; }
  std::string str() const;
};

GaussianRational operator+(const GaussianRational& a, const GaussianRational& b);
GaussianRational operator-(const GaussianRational& a, const GaussianRational& b);
GaussianRational operator-(const GaussianRational& a);
GaussianRational operator*(const GaussianRational& a, const GaussianRational& b);
GaussianRational operator/(const GaussianRational& a, const GaussianRational& b);
bool operator==(const GaussianRational& a, const GaussianRational& b);

// PBW order Z < Xp < Xm < Yp < Ym
enum class Gen : int { Z = 0, Xp = 1, Xm = 2, Yp = 3, Ym = 4 };
inline constexpr int kNumGen = 5;
const char* gen_name(Gen g);

using Monomial = std::array<int, kNumGen>;  // exponents in PBW order

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const;  // degree, then lexicographic
};

class PBWElement {
 public:
  using Terms = std::map<Monomial, GaussianRational, MonomialLess>;

  PBWElement() = default;
  static PBWElement scalar(const GaussianRational& c);
  static PBWElement generator(Gen g);
  static PBWElement monomial(const Monomial& m, const GaussianRational& c = 1);

  const Terms& terms() const { return terms_; }
  void add(const Monomial& m, const GaussianRational& c);
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  std::string str() const;

  friend PBWElement operator+(const PBWElement& a, const PBWElement& b);
  friend PBWElement operator-(const PBWElement& a, const PBWElement& b);
  friend PBWElement operator*(const GaussianRational& c, const PBWElement& a);
  friend PBWElement operator*(const PBWElement& a, const PBWElement& b);
  friend bool operator==(const PBWElement& a, const PBWElement& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
};

// [a, b] of basis elements, as a degree one element
PBWElement bracket(Gen a, Gen b);
// commutator in U(g')
PBWElement bracket(const PBWElement& a, const PBWElement& b);
PBWElement pbw_normalize(const std::vector<Gen>& word);
PBWElement power(const PBWElement& e, int n);

// 1/4 Xp Xm + 1/8 Z^2 + 1/4 Xm Xp
PBWElement casimir_sl2();
// 1/2 Xp Xm + 1/8 Z^2 - 1/4 Z
PBWElement casimir_sl2_ordered();
// Z Yp Ym - Xp Ym^2 + Xm Yp^2
PBWElement casimir_saff();

bool is_central(const PBWElement& e);

// sum over all orderings of the letters of m (no 1/n! factor)
PBWElement symmetrize(const std::vector<Gen>& word);
PBWElement symmetrize(const PBWElement& e);

// Sum of c * w1^a w2^b d1^c d2^d, coefficients on the left.
class DiffOpPoly {
 public:
  using Key = std::array<int, 4>;  // (a, b, c, d)
  using Terms = std::map<Key, GaussianRational>;
  using Poly = std::map<std::array<int, 2>, GaussianRational>;  // w1^a w2^b

  DiffOpPoly() = default;
  static DiffOpPoly identity();
  static DiffOpPoly term(int a, int b, int c, int d, const GaussianRational& coef = 1);

  const Terms& terms() const { return terms_; }
  void add(const Key& k, const GaussianRational& c);
  bool is_zero() const { return terms_.empty(); }
  std::string str() const;

  Poly apply(const Poly& p) const;
  Poly apply_monomial(int a, int b) const;
  // numerical action on a smooth function via nested 4th-order central differences
  cplx apply_numeric(const std::function<cplx(const Vec2&)>& f, const Vec2& w, double h = 1e-3) const;

  friend DiffOpPoly operator+(const DiffOpPoly& a, const DiffOpPoly& b);
  friend DiffOpPoly operator-(const DiffOpPoly& a, const DiffOpPoly& b);
  friend DiffOpPoly operator*(const GaussianRational& c, const DiffOpPoly& a);
  // composition a o b
  friend DiffOpPoly operator*(const DiffOpPoly& a, const DiffOpPoly& b);
  friend bool operator==(const DiffOpPoly& a, const DiffOpPoly& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
};

// Lie derivative of the right action f -> f(w g + w') on the plane:
// H -> w1 d1 - w2 d2, F -> w1 d2, G -> w2 d1, P -> d1, Q -> d2
DiffOpPoly euclidean_rep(Gen g);
DiffOpPoly euclidean_rep(const PBWElement& e);

// D1 = w1 d1, D2 = w2 d2; returns D1^2 + D1 D2 + D2 D1 + D2^2 + 2 D1 + 2 D2
DiffOpPoly euler_fol_operator();

}  // namespace strata
