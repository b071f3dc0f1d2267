#pragma once

// Geodesics of SOL: construction from initial data, classification,
// integration of the flow, closed forms for the degenerate classes, Grayson
// cylinders and the vector fields xi, eta tangent to them.
//
// Constants of motion of a geodesic t -> (x, y, z):
//   a = e^{-2z} x',  b = e^{2z} y',  c = a x - b y + z'
// so that x' = a e^{2z}, y' = b e^{-2z} and z'' = -U'_{a,b}(z).

#include <optional>
#include <string>
#include <vector>

#include "solgeom/core.hpp"

namespace solgeom {

enum class GeodesicClass { Vertical, Horizontal, Hyperbolic, Generic };

std::string to_string(GeodesicClass c);

struct MotionConstants {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct GeodesicSpec {
  MotionConstants constants;
  GeodesicClass kind = GeodesicClass::Vertical;
  double k = 1.0;
  std::optional<double> h;  // only when ab != 0
  double t_initial = 0.0;   // time at which `initial` is attained
  TangentVec initial;       // unit velocity at initial.base
  double speed = 1.0;
};

// Throws PreconditionError if | |v| - 1 | > 1e-10; otherwise v is
// renormalised before the constants are read off.
GeodesicSpec spec_from_initial(const TangentVec& v, double t_initial = 0.0);

struct Sample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double zdot = 0.0;
  double res_speed = 0.0;    // |2U(z) + z'^2 - 1|
  double res_grayson = 0.0;  // |(ax - by - c)^2 + 2U(z) - 1|
  double drift_a = 0.0;
  double drift_b = 0.0;
  double drift_c = 0.0;
};

struct Trajectory {
  GeodesicSpec spec;
  double tol = 0.0;
  std::vector<Sample> samples;

  double max_residual() const;
};

// Uniform grid t0, t0 + dt, ... ending exactly at t1. tol in [1e-13, 1e-6].
// Throws IntegrationError (carrying the worst residual) when the step budget
// runs out or a residual exceeds 10 tol.
Trajectory integrate(const GeodesicSpec& spec, double t0, double t1, double tol, double dt);

// Samples at the given strictly increasing times, which may lie on either
// side of spec.t_initial.
Trajectory integrate_at(const GeodesicSpec& spec, const std::vector<double>& times, double tol);

// Position and velocity at time t.
TangentVec state_at(const GeodesicSpec& spec, double t, double tol = 1e-12);

struct ClosedFormState {
  Point point;
  TangentVec velocity;
};

// Model hyperbolic geodesic x = x0 + tanh(t)/a, y = 0, z = -log(a cosh t).
// Throws DomainError for a <= 0.
ClosedFormState hyperbolic_closed_form(double a, double x0, double t);

// ---------------------------------------------------------------------------

struct GraysonCylinder {
  MotionConstants constants;
  double k = 0.0;
  double h = 0.0;
};

// Throws DomainError unless 0 < 2|ab| < 1.
GraysonCylinder make_cylinder(const MotionConstants& m);

double grayson_residual(const GraysonCylinder& cyl, const Point& p);

struct FrameFields {
  TangentVec xi;
  TangentVec eta;
  double cos_theta = 0.0;
};

// Throws PreconditionError when |grayson_residual| > 1e-8.
FrameFields frame_fields(const GraysonCylinder& cyl, const Point& p);

// c = ax - by + sqrt(1 - 2U(z)) first, then the minus sign. A single
// cylinder when the discriminant vanishes (to 1e-14), none when negative.
std::vector<GraysonCylinder> cylinders_through(double a, double b, const Point& p);

// ---------------------------------------------------------------------------

// The model geodesic of modulus k: h = 0, a = b > 0, c = 0, at its maximal
// altitude A(k) at time 0, passing over the origin.
GeodesicSpec normalized_spec(double k);

struct NormalForm {
  Isometry isometry;   // maps the geodesic onto the model
  double time = 0.0;   // original time sent to model time 0
  GeodesicSpec spec;   // initial data after normalisation
};

// Generic geodesics only (PreconditionError otherwise). Lifts to h = 0,
// makes a, b positive, moves to the next time of maximal altitude and
// translates that point over the origin.
NormalForm normal_form(const GeodesicSpec& spec, double tol = 1e-12);

}  // namespace solgeom
