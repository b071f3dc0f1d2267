#pragma once

// Invariants of a generic unit-speed geodesic as functions of its modulus k:
// amplitude A, period T, axial drift factor M and horizontal drift H, plus
// the dictionary between (a, b) and (k, h). The modulus is the canonical
// argument everywhere; |ab| is recovered from it when needed.

namespace solgeom {

struct InvariantSet {
  double k = 0.0;
  double A = 0.0;  // amplitude of the height oscillation
  double T = 0.0;  // period
  double M = 0.0;  // axial drift per period, in units of (|b|, |a|)
  double H = 0.0;  // sqrt(|dx dy|) over one period
};

struct ModulusDict {
  double k = 0.0;
  double h = 0.0;  // average height, log|b/a| / 2
  double abs_a = 0.0;
  double abs_b = 0.0;
  double two_abs_ab = 0.0;  // (1 - k^2) / (1 + k^2)
};

struct InvariantDerivatives {
  double dT = 0.0;
  double dM = 0.0;
  double dH = 0.0;
  // dM in the compact form (M - T)/(2k) + k(3+k^2) M / ((1-k^2)(1+k^2)).
  double dM_compact = 0.0;
};

// Throws DomainError unless 2|ab| <= 1 (up to 1e-12 of rounding slack).
double modulus_from_ab(double a, double b);

// Magnitudes only: the signs of a and b are not determined by (k, h).
ModulusDict ab_from_kh(double k, double h);

// 2|ab| for a unit-speed geodesic of modulus k.
double two_abs_ab_from_modulus(double k);

// arctanh(k).
double amplitude(double k);

InvariantSet invariant_set(double k);

// Closed-form derivatives; refuses k < 1e-8 where the 1/k factors are only
// removable singularities.
InvariantDerivatives invariant_derivatives(double k);

// Inverses of the increasing diffeomorphisms H: [0,1) -> [pi, inf) and
// T: [0,1) -> [sqrt(2) pi, inf). Safeguarded Newton inside a bisection
// bracket; stops at |f(k) - target| <= 1e-10 max(1, target) or when the
// bracket has shrunk to adjacent doubles.
double invert_H(double target);
double invert_T(double target);

// T(k) = pi / AGM(sqrt|ab|, sqrt(1 + 2|ab|) / 2).
double agm_period(double k);
double agm_period_from_ab(double a, double b);

}  // namespace solgeom
