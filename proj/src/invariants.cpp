#include "solgeom/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "solgeom/elliptic.hpp"
#include "solgeom/errors.hpp"

namespace solgeom {

namespace {

constexpr double kAdmissibilitySlack = 1e-12;
constexpr double kMinDerivativeModulus = 1e-8;

void require_modulus(double k, const char* who) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw DomainError(std::string(who) + ": modulus must lie in [0, 1)");
  }
}

double complement_sq(double k) { return (1.0 - k) * (1.0 + k); }

struct ValueAndSlope {
  double value;
  double slope;
};

// Solve f(k) = target for an increasing f on [0, 1) with f(0) = lower.
double invert_increasing(double target, double lower, const char* who,
                         const std::function<ValueAndSlope(double)>& f) {
  if (!std::isfinite(target)) {
    throw DomainError(std::string(who) + ": target must be finite");
  }
  const double tol = 1e-10 * std::max(1.0, target);
  if (target < lower - tol) {
    throw DomainError(std::string(who) + ": target below the range infimum");
  }
  if (target <= lower + tol) return 0.0;

  double lo = 0.0;
  double hi = 0.5;
  for (int j = 2; f(hi).value < target; ++j) {
    lo = hi;
    hi = 1.0 - std::ldexp(1.0, -j);
    if (hi >= 1.0) {
      throw DomainError(std::string(who) + ": target too large to resolve in double precision");
    }
  }

  double k = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    if (k < kMinDerivativeModulus) k = 0.5 * (lo + hi);
    const ValueAndSlope v = f(k);
    const double r = v.value - target;
    if (std::abs(r) <= tol) return k;
    if (r > 0.0) {
      hi = k;
    } else {
      lo = k;
    }
    if (std::nextafter(lo, 1.0) >= hi) return std::abs(f(lo).value - target) < std::abs(r) ? lo : k;
    double next = k - r / v.slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    k = next;
  }
  return k;
}

}  // namespace

double modulus_from_ab(double a, double b) {
  double two_ab = 2.0 * std::abs(a * b);
  if (!(two_ab <= 1.0 + kAdmissibilitySlack)) {
    throw DomainError("modulus_from_ab: 2|ab| exceeds 1, no unit-speed geodesic has these constants");
  }
  two_ab = std::min(two_ab, 1.0);
  return std::sqrt((1.0 - two_ab) / (1.0 + two_ab));
}

double two_abs_ab_from_modulus(double k) {
  if (!(k >= 0.0 && k <= 1.0)) throw DomainError("two_abs_ab_from_modulus: modulus must lie in [0, 1]");
  return complement_sq(k) / (1.0 + k * k);
}

ModulusDict ab_from_kh(double k, double h) {
  require_modulus(k, "ab_from_kh");
  const double s = std::sqrt(complement_sq(k) / (2.0 * (1.0 + k * k)));
  ModulusDict d;
  d.k = k;
  d.h = h;
  d.abs_a = std::exp(-h) * s;
  d.abs_b = std::exp(h) * s;
  d.two_abs_ab = two_abs_ab_from_modulus(k);
  return d;
}

double amplitude(double k) {
  require_modulus(k, "amplitude");
  return std::atanh(k);
}

InvariantSet invariant_set(double k) {
  require_modulus(k, "invariant_set");
  const EllipticParts p = elliptic_parts(k);
  const double kc2 = complement_sq(k);
  const double root = std::sqrt(8.0 * (1.0 + k * k));
  const double two_e_minus_ck = p.E + p.e_minus_ck;  // 2E - (1-k^2) K

  InvariantSet s;
  s.k = k;
  s.A = std::atanh(k);
  s.T = root * p.K;
  s.M = root * two_e_minus_ck / kc2;
  s.H = 2.0 * two_e_minus_ck / std::sqrt(kc2);
  return s;
}

InvariantDerivatives invariant_derivatives(double k) {
  if (!(k >= kMinDerivativeModulus && k < 1.0)) {
    throw DomainError("invariant_derivatives: modulus must lie in [1e-8, 1)");
  }
  const EllipticParts p = elliptic_parts(k);
  const double k2 = k * k;
  const double kc2 = complement_sq(k);
  const double root = std::sqrt(8.0 * (1.0 + k2));
  const double mixed = p.e_minus_ck + k2 * p.E;  // (1+k^2) E - (1-k^2) K
  const double two_e_minus_ck = p.E + p.e_minus_ck;

  InvariantDerivatives d;
  d.dT = std::sqrt(8.0 / (1.0 + k2)) * mixed / (k * kc2);
  d.dH = 2.0 * mixed / (k * kc2 * std::sqrt(kc2));
  d.dM = root * (p.e_minus_ck / (k * kc2) +
                 k * (3.0 + k2) * two_e_minus_ck / ((1.0 + k2) * kc2 * kc2));

  const InvariantSet s = invariant_set(k);
  d.dM_compact = (s.M - s.T) / (2.0 * k) + k * (3.0 + k2) / (kc2 * (1.0 + k2)) * s.M;
  return d;
}

double invert_H(double target) {
  return invert_increasing(target, std::numbers::pi, "invert_H", [](double k) {
    const double value = invariant_set(k).H;
    const double slope = k >= kMinDerivativeModulus ? invariant_derivatives(k).dH : 0.0;
    return ValueAndSlope{value, slope};
  });
}

double invert_T(double target) {
  return invert_increasing(target, std::numbers::sqrt2 * std::numbers::pi, "invert_T", [](double k) {
    const double value = invariant_set(k).T;
    const double slope = k >= kMinDerivativeModulus ? invariant_derivatives(k).dT : 0.0;
    return ValueAndSlope{value, slope};
  });
}

double agm_period_from_ab(double a, double b) {
  const double ab = std::abs(a * b);
  if (!(ab > 0.0 && 2.0 * ab <= 1.0 + kAdmissibilitySlack)) {
    throw DomainError("agm_period: requires 0 < 2|ab| <= 1");
  }
  return std::numbers::pi / agm(std::sqrt(ab), 0.5 * std::sqrt(1.0 + 2.0 * ab));
}

double agm_period(double k) {
  require_modulus(k, "agm_period");
  const double ab = 0.5 * two_abs_ab_from_modulus(k);
  return std::numbers::pi / agm(std::sqrt(ab), 0.5 * std::sqrt(1.0 + 2.0 * ab));
}

}  // namespace solgeom
