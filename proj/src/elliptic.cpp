#include "solgeom/elliptic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "solgeom/errors.hpp"

namespace solgeom {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxAgmIterations = 64;

void require_modulus(double k, const char* who) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw DomainError(std::string(who) + ": modulus must lie in [0, 1)");
  }
}

}  // namespace

double agm(double x, double y) {
  if (!(x > 0.0 && y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
    throw DomainError("agm: arguments must be positive and finite");
  }
  for (int i = 0; i < kMaxAgmIterations; ++i) {
    if (std::abs(x - y) <= 4.0 * kEps * x) break;
    const double g = std::sqrt(x * y);
    x = 0.5 * (x + y);
    y = g;
  }
  return x;
}

EllipticParts elliptic_parts(double k) {
  require_modulus(k, "complete_elliptic");
  const double kc2 = (1.0 - k) * (1.0 + k);

  // Descending Landen/AGM sequence a_n, g_n with c_{n+1} = (a_n - g_n) / 2.
  // E = K (1 - S),  S = sum_{n>=0} 2^{n-1} c_n^2,  c_0 = k.
  double a = 1.0;
  double g = std::sqrt(kc2);
  double tail = 0.0;  // sum over n >= 1
  double weight = 1.0;
  for (int i = 0; i < kMaxAgmIterations; ++i) {
    if (std::abs(a - g) <= 4.0 * kEps * a) break;
    const double c = 0.5 * (a - g);
    tail += weight * c * c;
    weight *= 2.0;
    const double next_g = std::sqrt(a * g);
    a = 0.5 * (a + g);
    g = next_g;
  }
  const double mean = 0.5 * (a + g);
  const double K = std::numbers::pi / (2.0 * mean);
  const double S = 0.5 * k * k + tail;

  EllipticParts out;
  out.k = k;
  out.K = K;
  out.k_minus_e = K * S;
  out.E = K - out.k_minus_e;
  out.e_minus_ck = K * (0.5 * k * k - tail);  // K (k^2 - S)
  return out;
}

EllipticPair complete_elliptic(double k) {
  const EllipticParts p = elliptic_parts(k);
  return {p.k, p.K, p.E};
}

EllipticDerivatives elliptic_derivatives(double k) {
  if (!(k > 0.0 && k < 1.0)) {
    throw DomainError("elliptic_derivatives: modulus must lie in (0, 1)");
  }
  const EllipticParts p = elliptic_parts(k);
  const double kc2 = (1.0 - k) * (1.0 + k);
  return {p.e_minus_ck / (k * kc2), -p.k_minus_e / k};
}

double aux_integral(double k) {
  const EllipticParts p = elliptic_parts(k);
  const double kc2 = (1.0 - k) * (1.0 + k);
  return 2.0 * p.E / kc2 - p.K;
}

}  // namespace solgeom
