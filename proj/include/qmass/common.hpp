// Shared constants, small math helpers and the library error type.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qmass {

inline constexpr double kPi = 3.14159265358979323846;

// Strictness margin used by the convexity / cone classifications.
inline constexpr double kConvexityTol = 1e-8;

// Minimum admissible v^2 for spacelike graphs in de Sitter space.
inline constexpr double kSpacelikeMargin = 1e-8;

enum class ErrorCode {
  Domain,
  UnsupportedDimension,
  Geometry,
  Parse,
  Validation,
  SingularCurvature,
  Immersion,
  SpacelikeViolation,
  Resample,
  Range,
  StepRejected,
  FlowStalled,
  Unsupported,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

// Area of the unit n-sphere S^n in R^{n+1}.
inline double omega_n(int n) {
  if (n == 1) return 2.0 * kPi;
  if (n == 2) return 4.0 * kPi;
  return 2.0 * std::pow(kPi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

// k!! with the conventions (-1)!! = 0!! = 1.
inline double double_factorial(int k) {
  if (k <= 0) return 1.0;
  double p = 1.0;
  for (int m = k; m >= 2; m -= 2) p *= m;
  return p;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double p = 1.0;
  for (int i = 1; i <= k; ++i) p = p * (n - k + i) / i;
  return p;
}

inline double clamp(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

// Adaptive Simpson quadrature of f on [a,b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-11) {
  struct Rec {
    static double go(const F& f, double a, double m, double b, double fa,
                     double fm, double fb, double whole, double tol,
                     int depth) {
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      // Relative floor keeps the recursion finite for large integrands.
      const double eff =
          std::max(tol, 1e-15 * (std::abs(left) + std::abs(right)));
      if (depth <= 0 || std::abs(delta) <= 15.0 * eff)
        return left + right + delta / 15.0;
      return go(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             go(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec::go(f, a, m, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace qmass
