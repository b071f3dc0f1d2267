#pragma once

// Geodesics of the Heisenberg group with the metric dx^2 + dy^2 + (dz - x dy)^2.
// Constants of motion c = z' - x y' and b = (1 + x^2) y' - x z'.

#include "solgeom/core.hpp"

namespace solgeom::nil {

struct NilGeodesic {
  double b = 0.0;
  double c = 0.0;
  double a = 0.0;      // x' when c = 0
  double A = 0.0;      // radius of the helix, sqrt(1 - c^2) / |c|
  double phi = 0.0;
  double x0 = 0.0;     // -b/c on the helical branch
  double y0 = 0.0;
  double z0 = 0.0;
  bool helical = false;  // |c| > 1e-12
};

double norm_squared(const TangentVec& v);

// Throws PreconditionError unless |v|_nil is 1 within 1e-10.
NilGeodesic nil_from_initial(const TangentVec& v);

struct NilState {
  Point point;
  TangentVec velocity;
};

// Helical branch:
//   x = x0 + A cos(ct - phi),  y = y0 + A sin(ct - phi)
//   z = z0 + (c + cA^2/2) t + (A^2/4) sin(2(ct - phi)) - (bA/c) sin(ct - phi)
// otherwise x = x0 + a t, y = y0 + b t, z = z0 + b x0 t + (ab/2) t^2.
NilState nil_eval(const NilGeodesic& g, double t);

}  // namespace solgeom::nil
