#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace strata {

using cplx = std::complex<double>;
using Vec2 = std::array<double, 2>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// e(x) = exp(2 pi i x)
inline cplx e(double x) { return std::polar(1.0, kTwoPi * x); }

// value with a one-sigma error bar
struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

struct CEstimate {
  cplx value{};
  double stderr_ = 0.0;
};

}  // namespace strata
