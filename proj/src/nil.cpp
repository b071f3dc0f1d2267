#include "solgeom/nil.hpp"

#include <cmath>

#include "solgeom/errors.hpp"

namespace solgeom::nil {

namespace {

constexpr double kFlatThreshold = 1e-12;

}  // namespace

double norm_squared(const TangentVec& v) {
  const double w = v.dz - v.base.x * v.dy;
  return v.dx * v.dx + v.dy * v.dy + w * w;
}

NilGeodesic nil_from_initial(const TangentVec& v) {
  const double n = std::sqrt(nil::norm_squared(v));
  if (!(std::abs(n - 1.0) <= 1e-10)) {
    throw PreconditionError("nil_from_initial: initial velocity must have unit length (normalise first)");
  }
  const double dx = v.dx / n;
  const double dy = v.dy / n;
  const double dz = v.dz / n;
  const Point& p = v.base;

  NilGeodesic g;
  g.c = dz - p.x * dy;
  g.b = (1.0 + p.x * p.x) * dy - p.x * dz;
  if (std::abs(g.c) <= kFlatThreshold) {
    g.helical = false;
    g.c = 0.0;
    g.a = dx;
    g.b = dy;
    g.x0 = p.x;
    g.y0 = p.y;
    g.z0 = p.z;
    return g;
  }
  g.helical = true;
  const double cos_part = p.x + g.b / g.c;  // A cos(phi)
  const double sin_part = dx / g.c;         // A sin(phi)
  g.A = std::hypot(cos_part, sin_part);
  g.phi = g.A > 0.0 ? std::atan2(sin_part, cos_part) : 0.0;
  g.x0 = -g.b / g.c;
  g.y0 = p.y + sin_part;
  g.z0 = p.z + 0.25 * g.A * g.A * std::sin(2.0 * g.phi) - g.b / g.c * sin_part;
  return g;
}

NilState nil_eval(const NilGeodesic& g, double t) {
  NilState s;
  if (!g.helical) {
    const double x = g.x0 + g.a * t;
    s.point = {x, g.y0 + g.b * t, g.z0 + g.b * g.x0 * t + 0.5 * g.a * g.b * t * t};
    s.velocity = {s.point, g.a, g.b, g.b * x};
    return s;
  }
  const double th = g.c * t - g.phi;
  const double co = std::cos(th);
  const double si = std::sin(th);
  const double A = g.A;
  const double x = g.x0 + A * co;
  s.point = {x, g.y0 + A * si,
             g.z0 + (g.c + 0.5 * g.c * A * A) * t + 0.25 * A * A * std::sin(2.0 * th) - g.b * A / g.c * si};
  const double ydot = A * g.c * co;
  s.velocity = {s.point, -A * g.c * si, ydot, g.c + x * ydot};
  return s;
}

}  // namespace solgeom::nil
