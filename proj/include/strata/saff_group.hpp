#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "strata/common.hpp"

namespace strata {

struct SL2 {
  double a = 1, b = 0, c = 0, d = 1;
  double det() const { return a * d - b * c; }
};

SL2 operator*(const SL2& l, const SL2& r);
SL2 inverse(const SL2& g);
// rescale by 1/sqrt(det) so that det = 1 again
SL2 renormalize(const SL2& g);
SL2 rot(double theta);  // [[cos, sin], [-sin, cos]]

// (g, w) with w a row vector; (g,w)(h,w') = (gh, wh + w')
struct SAff {
  SL2 g;
  Vec2 w{0.0, 0.0};
};

SAff identity();
SAff compose(const SAff& l, const SAff& r);
SAff inverse(const SAff& a);
// left-to-right product; the matrix part is renormalized every kRenormalizeEvery factors
inline constexpr int kRenormalizeEvery = 64;
SAff compose_chain(const std::vector<SAff>& factors);
Vec2 row_times(const Vec2& w, const SL2& g);
double distance(const SAff& l, const SAff& r);  // max-abs entry difference

// g = (n(x), (w1, w2)) * diag(sqrt y, 1/sqrt y) * rot(theta)
struct Iwasawa {
  double x = 0, y = 1, w1 = 0, w2 = 0, theta = 0;
};

Iwasawa iwasawa(const SAff& a);
SAff from_iwasawa(const Iwasawa& c);

// (tau, z) with tau = x + iy, z = u + iv = p tau + q
struct JacobiPoint {
  double x = 0, y = 1, u = 0, v = 0;
  double p() const { return v / y; }
  double q() const { return u - v * x / y; }
  cplx tau() const { return {x, y}; }
  cplx z() const { return {u, v}; }
  static JacobiPoint from_pq(double x, double y, double p, double q);
  static JacobiPoint from_complex(cplx tau, cplx z);
};

// The point (tau, z) attached to an Iwasawa coordinate: tau = x+iy, z = w1*y*i + w2.
JacobiPoint jacobi_of(const Iwasawa& c);
// Representative ([[sqrt y, x/sqrt y],[0, 1/sqrt y]], (v/sqrt y, u/sqrt y)) of a point.
SAff section(const JacobiPoint& pt);

// Left action: act(a*b, pt) = act(a, act(b, pt)).
JacobiPoint act(const SAff& a, const JacobiPoint& pt);
// automorphy factor c*tau + d
cplx j_factor(const SL2& g, cplx tau);

struct ModularFunction {
  std::function<cplx(const JacobiPoint&)> eval;
  int k = 0;
  cplx operator()(const JacobiPoint& pt) const { return eval(pt); }
};

// (phi |_k a)(pt) = j(a, tau)^{-k} phi(act(a, pt)); a right action on functions
ModularFunction slash(const ModularFunction& phi, const SAff& a);

using GroupFunction = std::function<cplx(const SAff&)>;

// lift(phi)(g) = j(g, i)^{-k} phi(g.(i,0)) = e^{ik theta} y^{k/2} phi(tau, z)
GroupFunction lift(const ModularFunction& phi);
ModularFunction unlift(const GroupFunction& f, int k);

struct Reduction {
  SAff gamma;       // integral element with act(gamma, pt) = rep
  JacobiPoint rep;  // |x| <= 1/2, |tau| >= 1, p, q in [0, 1)
};

// Ties: x in (-1/2, 1/2]; on |tau| = 1 the representative has x <= 0.
Reduction reduce_to_fundamental(const JacobiPoint& pt);
bool in_fundamental_domain(const JacobiPoint& pt, double tol = 1e-12);

// Probability measure on SAff2(Z)\SAff2(R)/K: dx dy du dv / y^3 normalised.
struct MVSample {
  JacobiPoint pt;
  double theta = 0;  // uniform angle, used when a group element is needed
};

inline constexpr double kModularVolume = kPi / 3.0;  // area of SL2(Z)\H in dx dy / y^2

class MasurVeechSampler {
 public:
  // y_max <= 0 means no truncation (exact sampling of the full cusp)
  explicit MasurVeechSampler(std::uint64_t seed, double y_max = 0.0);
  MVSample next();
  // probability mass of {y > y_max} under the normalised measure
  double tail_mass() const;
  double y_max() const { return y_max_; }

 private:
  std::mt19937_64 rng_;
  double y_max_;
};

std::vector<MVSample> sample_masur_veech(std::uint64_t seed, std::size_t n, double y_max = 0.0);

// sample -> group element n(x) a(sqrt y) k(theta) with translation from (p, q)
SAff group_element(const MVSample& s);

struct MCSpec {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::size_t batches = 100;
  double y_max = 0.0;
};

// batch-means estimate of the mean of f over the given samples
CEstimate batch_mean(const std::vector<cplx>& values, std::size_t batches);

// integral of phi1 conj(phi2) dx dy du dv / y^{3-k} over the quotient (total mass pi/3 at k = 0)
CEstimate inner_product(const ModularFunction& phi1, const ModularFunction& phi2, const MCSpec& mc);

}  // namespace strata
