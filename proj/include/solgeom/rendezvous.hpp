#pragma once

// Partner geodesics, the displacement over one period and the Jacobi field
// that vanishes at a critical time and one period later.

#include <array>

#include "solgeom/flow.hpp"

namespace solgeom {

struct PartnerPair {
  GeodesicSpec original;
  GeodesicSpec partner;  // t_initial == t1
  double t1 = 0.0;
};

// Launches from gamma(t1) with the vertically flipped velocity. Generic
// geodesics only (PreconditionError otherwise).
PartnerPair partner_at(const GeodesicSpec& spec, double t1, double tol = 1e-12);

// Reflection formula for the partner: (2x(t1) - x(2t1 - t), 2y(t1) - y(2t1 - t), z(2t1 - t)).
Point partner_by_reflection(const GeodesicSpec& spec, double t1, double t, double tol = 1e-12);

// sgn(ab) M(k) (b, a, 0).
std::array<double, 3> period_displacement(const GeodesicSpec& spec);

struct RendezvousReport {
  double meet_error = 0.0;  // Euclidean, in coordinates
  bool distinct = false;
  double length_original = 0.0;
  double length_partner = 0.0;
  double T = 0.0;
  GeodesicSpec partner;
};

RendezvousReport rendezvous_check(const GeodesicSpec& spec, double t1, double tol = 1e-12);

struct JacobiDefect {
  double at_t1 = 0.0;
  double at_t1_plus_T = 0.0;
  double max_norm = 0.0;
  // z-component of J at the middle of [t1, t1 + T]
  double mid_z = 0.0;
};

// The family psi(t, s) is the partner taken at time t1 + s. Requires
// |z'(t1)| <= 1e-10 and ds in [1e-6, 1e-3]. Norms are metric norms at
// gamma(t); J is sampled on 400 points of [t1, t1 + T].
JacobiDefect jacobi_endpoint_defect(const GeodesicSpec& spec, double t1, double ds, double tol = 1e-13);

}  // namespace solgeom
