#include "strata/enveloping.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace strata {

std::string GaussianRational::str() const {
  std::ostringstream os;
  bool r = sgn(re) != 0, i = sgn(im) != 0;
  if (!r && !i) return "0";
  if (r && !i) {
    os << re.get_str();
  } else if (!r) {
    if (im == 1)
      os << "i";
    else if (im == -1)
      os << "-i";
    else
      os << im.get_str() << "i";
  } else {
    os << "(" << re.get_str() << (sgn(im) > 0 ? "+" : "-");
    mpq_class a = abs(im);
    if (a != 1) os << a.get_str();
    os << "i)";
  }
  return os.str();
}

GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
  return {a.re + b.re, a.im + b.im};
}
GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
  return {a.re - b.re, a.im - b.im};
}
GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
  mpq_class n = b.re * b.re + b.im * b.im;
  if (sgn(n) == 0) throw std::domain_error("GaussianRational: division by zero");
  GaussianRational t = a * b.conj();
  return {t.re / n, t.im / n};
}
bool operator==(const GaussianRational& a, const GaussianRational& b) { return a.re == b.re && a.im == b.im; }

const char* gen_name(Gen g) {
  static const char* names[] = {"Z", "Xp", "Xm", "Yp", "Ym"};
  return names[static_cast<int>(g)];
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
  int da = std::accumulate(a.begin(), a.end(), 0), db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

PBWElement PBWElement::scalar(const GaussianRational& c) { return monomial(Monomial{}, c); }

PBWElement PBWElement::generator(Gen g) {
  Monomial m{};
  m[static_cast<int>(g)] = 1;
  return monomial(m);
}

PBWElement PBWElement::monomial(const Monomial& m, const GaussianRational& c) {
  PBWElement e;
  e.add(m, c);
  return e;
}

void PBWElement::add(const Monomial& m, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

int PBWElement::degree() const {
  int d = -1;
  for (auto& [m, c] : terms_) d = std::max(d, std::accumulate(m.begin(), m.end(), 0));
  return d;
}

namespace {

// appends "c*body" to os with sign handling; body may be empty
void append_term(std::ostringstream& os, const GaussianRational& c, const std::string& body, bool first) {
  bool neg = sgn(c.im) == 0 && sgn(c.re) < 0;
  GaussianRational a = neg ? -c : c;
  if (first)
    os << (neg ? "-" : "");
  else
    os << (neg ? " - " : " + ");
  bool unit = a == GaussianRational(1);
  if (body.empty()) {
    os << a.str();
  } else {
    if (!unit) os << a.str() << "*";
    os << body;
  }
}

}  // namespace

std::string PBWElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // highest degree first
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string body;
    for (int g = 0; g < kNumGen; ++g) {
      if (m[g] == 0) continue;
      if (!body.empty()) body += "*";
      body += gen_name(static_cast<Gen>(g));
      if (m[g] > 1) body += "^" + std::to_string(m[g]);
    }
    append_term(os, c, body, first);
    first = false;
  }
  return os.str();
}

PBWElement operator+(const PBWElement& a, const PBWElement& b) {
  PBWElement r = a;
  for (auto& [m, c] : b.terms_) r.add(m, c);
  return r;
}

PBWElement operator-(const PBWElement& a, const PBWElement& b) {
  PBWElement r = a;
  for (auto& [m, c] : b.terms_) r.add(m, -c);
  return r;
}

PBWElement operator*(const GaussianRational& c, const PBWElement& a) {
  PBWElement r;
  for (auto& [m, x] : a.terms_) r.add(m, c * x);
  return r;
}

namespace {

using Mat3 = std::array<std::array<GaussianRational, 3>, 3>;
using Coords = std::array<GaussianRational, kNumGen>;

Mat3 zero3() { return {}; }

// F, H, G, P, Q as 3x3 matrices [[X, 0], [w, 0]]
Mat3 real_basis(int i) {
  Mat3 m = zero3();
  switch (i) {
    case 0: m[0][1] = 1; break;                   // F
    case 1: m[0][0] = 1; m[1][1] = -1; break;     // H
    case 2: m[1][0] = 1; break;                   // G
    case 3: m[2][0] = 1; break;                   // P
    case 4: m[2][1] = 1; break;                   // Q
  }
  return m;
}

Coords real_coords(const Mat3& m) { return {m[0][1], m[0][0], m[1][0], m[2][0], m[2][1]}; }

// Z, Xp, Xm, Yp, Ym in the (F, H, G, P, Q) coordinates
std::array<Coords, kNumGen> complex_basis() {
  GaussianRational i = GaussianRational::i(), h = GaussianRational::frac(1, 2), hi = h * i;
  std::array<Coords, kNumGen> b{};
  b[0] = {-i, 0, i, 0, 0};
  b[1] = {hi, h, hi, 0, 0};
  b[2] = {-hi, h, -hi, 0, 0};
  b[3] = {0, 0, 0, h, hi};
  b[4] = {0, 0, 0, h, -hi};
  return b;
}

Mat3 to_matrix(const Coords& c) {
  Mat3 m = zero3();
  for (int k = 0; k < kNumGen; ++k) {
    Mat3 e = real_basis(k);
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) m[r][s] = m[r][s] + c[k] * e[r][s];
  }
  return m;
}

Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 m = zero3();
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s)
      for (int t = 0; t < 3; ++t) m[r][s] = m[r][s] + a[r][t] * b[t][s];
  return m;
}

// solve sum_j x_j basis_j = target by Gauss-Jordan elimination
Coords solve(const std::array<Coords, kNumGen>& basis, const Coords& target) {
  std::array<std::array<GaussianRational, kNumGen + 1>, kNumGen> a;
  for (int r = 0; r < kNumGen; ++r) {
    for (int j = 0; j < kNumGen; ++j) a[r][j] = basis[j][r];
    a[r][kNumGen] = target[r];
  }
  for (int col = 0; col < kNumGen; ++col) {
    int piv = col;
    while (a[piv][col].is_zero()) ++piv;
    std::swap(a[piv], a[col]);
    GaussianRational inv = GaussianRational(1) / a[col][col];
    for (auto& x : a[col]) x = x * inv;
    for (int r = 0; r < kNumGen; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      GaussianRational f = a[r][col];
      for (int j = 0; j <= kNumGen; ++j) a[r][j] = a[r][j] - f * a[col][j];
    }
  }
  Coords x;
  for (int r = 0; r < kNumGen; ++r) x[r] = a[r][kNumGen];
  return x;
}

const std::array<std::array<Coords, kNumGen>, kNumGen>& bracket_table() {
  static const auto table = [] {
    std::array<std::array<Coords, kNumGen>, kNumGen> t;
    auto b = complex_basis();
    for (int i = 0; i < kNumGen; ++i)
      for (int j = 0; j < kNumGen; ++j) {
        Mat3 x = to_matrix(b[i]), y = to_matrix(b[j]);
        Mat3 xy = mul(x, y), yx = mul(y, x);
        Mat3 c = zero3();
        for (int r = 0; r < 3; ++r)
          for (int s = 0; s < 3; ++s) c[r][s] = xy[r][s] - yx[r][s];
        t[i][j] = solve(b, real_coords(c));
      }
    return t;
  }();
  return table;
}

struct MemoKey {
  int g;
  Monomial m;
  bool operator<(const MemoKey& o) const { return g != o.g ? g < o.g : m < o.m; }
};

// g * x^m in PBW form
const PBWElement& mul_gen(int g, const Monomial& m) {
  thread_local std::map<MemoKey, PBWElement> memo;
  MemoKey key{g, m};
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  int h = 0;
  while (h < kNumGen && m[h] == 0) ++h;
  PBWElement out;
  if (h == kNumGen || g <= h) {
    Monomial n = m;
    ++n[g];
    out.add(n, 1);
  } else {
    Monomial rest = m;
    --rest[h];
    // g h rest = h (g rest) + [g, h] rest
    PBWElement grest = mul_gen(g, rest);
    for (auto& [t, c] : grest.terms())
      for (auto& [u, d] : mul_gen(h, t).terms()) out.add(u, c * d);
    const Coords& br = bracket_table()[g][h];
    for (int j = 0; j < kNumGen; ++j) {
      if (br[j].is_zero()) continue;
      for (auto& [u, d] : mul_gen(j, rest).terms()) out.add(u, br[j] * d);
    }
  }
  return memo.emplace(key, std::move(out)).first->second;
}

PBWElement left_mul_word(const std::vector<int>& word, PBWElement e) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    PBWElement next;
    for (auto& [m, c] : e.terms())
      for (auto& [u, d] : mul_gen(*it, m).terms()) next.add(u, c * d);
    e = std::move(next);
  }
  return e;
}

std::vector<int> word_of(const Monomial& m) {
  std::vector<int> w;
  for (int g = 0; g < kNumGen; ++g)
    for (int k = 0; k < m[g]; ++k) w.push_back(g);
  return w;
}

}  // namespace

PBWElement operator*(const PBWElement& a, const PBWElement& b) {
  PBWElement r;
  for (auto& [ma, ca] : a.terms_) {
    PBWElement prod = left_mul_word(word_of(ma), b);
    for (auto& [m, c] : prod.terms_) r.add(m, ca * c);
  }
  return r;
}

PBWElement bracket(Gen a, Gen b) {
  PBWElement r;
  const Coords& c = bracket_table()[static_cast<int>(a)][static_cast<int>(b)];
  for (int j = 0; j < kNumGen; ++j) {
    Monomial m{};
    m[j] = 1;
    r.add(m, c[j]);
  }
  return r;
}

PBWElement bracket(const PBWElement& a, const PBWElement& b) { return a * b - b * a; }

PBWElement pbw_normalize(const std::vector<Gen>& word) {
  std::vector<int> w;
  for (Gen g : word) w.push_back(static_cast<int>(g));
  return left_mul_word(w, PBWElement::scalar(1));
}

PBWElement power(const PBWElement& e, int n) {
  PBWElement r = PBWElement::scalar(1);
  for (int i = 0; i < n; ++i) r = r * e;
  return r;
}

PBWElement casimir_sl2() {
  using enum Gen;
  return GaussianRational::frac(1, 4) * pbw_normalize({Xp, Xm}) + GaussianRational::frac(1, 8) * pbw_normalize({Z, Z}) +
         GaussianRational::frac(1, 4) * pbw_normalize({Xm, Xp});
}

PBWElement casimir_sl2_ordered() {
  using enum Gen;
  return GaussianRational::frac(1, 2) * pbw_normalize({Xp, Xm}) + GaussianRational::frac(1, 8) * pbw_normalize({Z, Z}) -
         GaussianRational::frac(1, 4) * pbw_normalize({Z});
}

PBWElement casimir_saff() {
  using enum Gen;
  return pbw_normalize({Z, Yp, Ym}) - pbw_normalize({Xp, Ym, Ym}) + pbw_normalize({Xm, Yp, Yp});
}

bool is_central(const PBWElement& e) {
  for (int g = 0; g < kNumGen; ++g)
    if (!bracket(PBWElement::generator(static_cast<Gen>(g)), e).is_zero()) return false;
  return true;
}

PBWElement symmetrize(const std::vector<Gen>& word) {
  std::vector<int> idx(word.size());
  std::iota(idx.begin(), idx.end(), 0);
  PBWElement r;
  do {
    std::vector<Gen> w;
    for (int i : idx) w.push_back(word[i]);
    r = r + pbw_normalize(w);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return r;
}

PBWElement symmetrize(const PBWElement& e) {
  PBWElement r;
  for (auto& [m, c] : e.terms()) {
    std::vector<Gen> w;
    for (int g : word_of(m)) w.push_back(static_cast<Gen>(g));
    r = r + c * symmetrize(w);
  }
  return r;
}

DiffOpPoly DiffOpPoly::identity() { return term(0, 0, 0, 0); }

DiffOpPoly DiffOpPoly::term(int a, int b, int c, int d, const GaussianRational& coef) {
  DiffOpPoly p;
  p.add({a, b, c, d}, coef);
  return p;
}

void DiffOpPoly::add(const Key& k, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

std::string DiffOpPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  const char* names[] = {"w1", "w2", "d1", "d2"};
  for (auto& [k, c] : terms_) {
    std::string body;
    for (int j = 0; j < 4; ++j) {
      if (k[j] == 0) continue;
      if (!body.empty()) body += "*";
      body += names[j];
      if (k[j] > 1) body += "^" + std::to_string(k[j]);
    }
    append_term(os, c, body, first);
    first = false;
  }
  return os.str();
}

namespace {

long binom(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long falling(int n, int k) {
  long r = 1;
  for (int i = 0; i < k; ++i) r *= (n - i);
  return r;
}

}  // namespace

DiffOpPoly operator+(const DiffOpPoly& a, const DiffOpPoly& b) {
  DiffOpPoly r = a;
  for (auto& [k, c] : b.terms_) r.add(k, c);
  return r;
}

DiffOpPoly operator-(const DiffOpPoly& a, const DiffOpPoly& b) {
  DiffOpPoly r = a;
  for (auto& [k, c] : b.terms_) r.add(k, -c);
  return r;
}

DiffOpPoly operator*(const GaussianRational& c, const DiffOpPoly& a) {
  DiffOpPoly r;
  for (auto& [k, x] : a.terms_) r.add(k, c * x);
  return r;
}

DiffOpPoly operator*(const DiffOpPoly& a, const DiffOpPoly& b) {
  DiffOpPoly r;
  for (auto& [ka, ca] : a.terms_)
    for (auto& [kb, cb] : b.terms_) {
      GaussianRational c = ca * cb;
      for (int i = 0; i <= std::min(ka[2], kb[0]); ++i)
        for (int j = 0; j <= std::min(ka[3], kb[1]); ++j) {
          long f = binom(ka[2], i) * falling(kb[0], i) * binom(ka[3], j) * falling(kb[1], j);
          r.add({ka[0] + kb[0] - i, ka[1] + kb[1] - j, ka[2] - i + kb[2], ka[3] - j + kb[3]}, GaussianRational(f) * c);
        }
    }
  return r;
}

DiffOpPoly::Poly DiffOpPoly::apply(const Poly& p) const {
  Poly out;
  for (auto& [k, c] : terms_)
    for (auto& [m, d] : p) {
      if (m[0] < k[2] || m[1] < k[3]) continue;
      GaussianRational f = GaussianRational(falling(m[0], k[2]) * falling(m[1], k[3])) * c * d;
      std::array<int, 2> e{m[0] - k[2] + k[0], m[1] - k[3] + k[1]};
      auto& slot = out[e];
      slot = slot + f;
      if (slot.is_zero()) out.erase(e);
    }
  return out;
}

DiffOpPoly::Poly DiffOpPoly::apply_monomial(int a, int b) const { return apply(Poly{{{a, b}, 1}}); }

namespace {

cplx nested_derivative(const std::function<cplx(const Vec2&)>& f, const Vec2& w, int c, int d, double h) {
  if (c == 0 && d == 0) return f(w);
  int axis = c > 0 ? 0 : 1;
  int nc = c - (axis == 0), nd = d - (axis == 1);
  auto at = [&](double s) {
    Vec2 p = w;
    p[axis] += s * h;
    return nested_derivative(f, p, nc, nd, h);
  };
  return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
}

}  // namespace

cplx DiffOpPoly::apply_numeric(const std::function<cplx(const Vec2&)>& f, const Vec2& w, double h) const {
  cplx s = 0;
  for (auto& [k, c] : terms_)
    s += c.to_complex() * std::pow(w[0], k[0]) * std::pow(w[1], k[1]) * nested_derivative(f, w, k[2], k[3], h);
  return s;
}

DiffOpPoly euclidean_rep(Gen g) {
  // coordinates of g in (F, H, G, P, Q)
  Coords c = complex_basis()[static_cast<int>(g)];
  DiffOpPoly F = DiffOpPoly::term(1, 0, 0, 1), H = DiffOpPoly::term(1, 0, 1, 0) - DiffOpPoly::term(0, 1, 0, 1),
             G = DiffOpPoly::term(0, 1, 1, 0), P = DiffOpPoly::term(0, 0, 1, 0), Q = DiffOpPoly::term(0, 0, 0, 1);
  return c[0] * F + c[1] * H + c[2] * G + c[3] * P + c[4] * Q;
}

DiffOpPoly euclidean_rep(const PBWElement& e) {
  DiffOpPoly r;
  for (auto& [m, c] : e.terms()) {
    DiffOpPoly t = DiffOpPoly::identity();
    for (int g : word_of(m)) t = t * euclidean_rep(static_cast<Gen>(g));
    r = r + c * t;
  }
  return r;
}

DiffOpPoly euler_fol_operator() {
  DiffOpPoly d1 = DiffOpPoly::term(1, 0, 1, 0), d2 = DiffOpPoly::term(0, 1, 0, 1);
  return d1 * d1 + d1 * d2 + d2 * d1 + d2 * d2 + GaussianRational(2) * d1 + GaussianRational(2) * d2;
}

}  // namespace strata
