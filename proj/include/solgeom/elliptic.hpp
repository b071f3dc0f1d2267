#pragma once

// Complete elliptic integrals of the first and second kind, modulus convention:
//   K(k) = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t)
//   E(k) = int_0^{pi/2} sqrt(1 - k^2 sin^2 t) dt

namespace solgeom {

struct EllipticPair {
  double k = 0.0;
  double K = 0.0;
  double E = 0.0;
};

// K together with the two differences that appear in every derivative
// formula, accumulated without cancellation from the AGM sequence:
//   k_minus_e  = K - E
//   e_minus_ck = E - (1 - k^2) K
struct EllipticParts {
  double k = 0.0;
  double K = 0.0;
  double E = 0.0;
  double k_minus_e = 0.0;
  double e_minus_ck = 0.0;
};

struct EllipticDerivatives {
  double dK = 0.0;
  double dE = 0.0;
};

// Arithmetic-geometric mean; stops once |x - y| <= 4 eps x.
double agm(double x, double y);

EllipticPair complete_elliptic(double k);
EllipticParts elliptic_parts(double k);

// dK/dk = (E - (1-k^2) K) / (k (1-k^2)),  dE/dk = (E - K) / k.  Requires 0 < k < 1.
EllipticDerivatives elliptic_derivatives(double k);

// int_0^1 (1 + k^2 u^2) / (sqrt(1-u^2) (1-k^2 u^2)^{3/2}) du = 2E/(1-k^2) - K.
double aux_integral(double k);

}  // namespace solgeom
