#pragma once

// Riemannian distance in SOL: closed forms inside the totally geodesic
// vertical planes, cut lengths, a multi-start shooting solver for the
// general two-point problem, the staircase upper bound, the constructive
// far-field geodesic on the ground plane and the first conjugate time along
// a horizontal geodesic.

#include <optional>
#include <string>
#include <vector>

#include "solgeom/flow.hpp"

namespace solgeom {

enum class DistanceMethod { Vertical, HyperbolicClosedForm, Shooting };

std::string to_string(DistanceMethod m);

struct DistanceResult {
  double value = 0.0;
  GeodesicSpec witness;  // starts at the first point at time 0
  double time = 0.0;     // witness(time) is the second point
  DistanceMethod method = DistanceMethod::Vertical;
  double residual = 0.0;    // coordinate miss of the witness endpoint
  int converged = 0;        // converged shooting starts
  int basins = 0;           // distinct converged directions
};

// +infinity for vertical and hyperbolic geodesics, sqrt(2) pi for horizontal
// ones, T(k) for generic ones (PreconditionError if k is missing).
double cut_length(GeodesicClass kind, std::optional<double> k = std::nullopt);

// Exact answer when p, q lie on a common vertical line or in a common plane
// x = const or y = const; nullopt otherwise.
std::optional<DistanceResult> dist_special(const Point& p, const Point& q);

struct StaircaseBound {
  double length = 0.0;  // 4 log(p/2) + 4
  double chord = 0.0;   // sqrt(2) p
};

StaircaseBound staircase_bound(double p);

struct DistanceOptions {
  double tol = 1e-10;         // relative endpoint miss accepted
  int starts = 32;            // quasi-random directions, at least 32
  bool use_closed_form = true;
  int max_iterations = 60;    // Levenberg-Marquardt iterations per start
};

// Throws SolverError (carrying the best relative miss) when no start converges.
DistanceResult distance(const Point& p, const Point& q, const DistanceOptions& opts = {});
DistanceResult distance(const Point& p, const Point& q, double tol);

struct GroundAsymptotic {
  double theta = 0.0;
  double lambda = 0.0;
  double k = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double T = 0.0;
  double M = 0.0;
  double lambda_star = 0.0;
  double four_log_lambda = 0.0;
  double excess = 0.0;  // T - 4 log(lambda)
  // |M b - lambda cos(theta)| / lambda and |M a - lambda sin(theta)| / lambda
  double mb_error = 0.0;
  double ma_error = 0.0;
  GeodesicSpec spec;  // from the origin with velocity (a, b, c)
};

// lambda*(theta) = H(k_theta) / sqrt(sin cos), k_theta the modulus of 2|ab| = 2 sin cos.
double asymptotic_threshold(double theta);

// Geodesic from the origin reaching lambda (cos theta, sin theta, 0) after
// one period. Throws DomainError for theta outside (0, pi/2) or lambda
// below the threshold.
GroundAsymptotic ground_asymptotic(double theta, double lambda);

// Analytic Jacobi field along t -> (t, t, 0)/sqrt(2), frame components
// (1 - cos(sqrt2 t))(X - Y) + sin(sqrt2 t) Z.
FrameComponents horizontal_jacobi_field(double t);

// Central difference in s of the family with initial directions
// cos(s)(X + Y)/sqrt2 + sin(s) Z, at time t.
FrameComponents horizontal_family_field(double t, double ds = 1e-4, double tol = 1e-12);

// First zero of the family field on (0.1, 10]; throws SolverError when no
// zero is found in the bracket.
double horizontal_conjugate_time();

struct SpherePoint {
  double theta = 0.0;  // polar angle from +Z
  double phi = 0.0;
  double length = 0.0; // min(radius, cut length)
  bool clipped = false;
  Point point;
};

// Endpoints of the unit-speed geodesics from the origin over a direction
// grid, each run for the radius or up to its cut length.
std::vector<SpherePoint> sphere_points(double radius, int n_theta, int n_phi, double tol = 1e-10);

}  // namespace solgeom
