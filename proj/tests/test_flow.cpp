#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "solgeom/errors.hpp"
#include "solgeom/flow.hpp"
#include "solgeom/invariants.hpp"

using namespace solgeom;

namespace {

// Generic geodesic of modulus k, average height h and third constant c,
// sampled at its maximal altitude at time 0.
GeodesicSpec make_generic(double k, double h, double c, int sa = 1, int sb = 1) {
  const ModulusDict d = ab_from_kh(k, h);
  const double a = sa * d.abs_a, b = sb * d.abs_b;
  const double z = h + amplitude(k);
  return spec_from_initial({{c / a, 0.0, z}, a * std::exp(2 * z), b * std::exp(-2 * z), 0.0});
}

double max_coord_gap(const Sample& s, const oracle::State6& o) {
  return std::max({std::abs(s.x - o[0]), std::abs(s.y - o[1]), std::abs(s.z - o[2])});
}

}  // namespace

TEST_CASE("construction and classification") {
  const GeodesicSpec v = spec_from_initial({{0, 0, 0}, 0, 0, 1});
  CHECK(v.kind == GeodesicClass::Vertical);
  CHECK(v.constants.a == 0.0);
  CHECK(v.constants.b == 0.0);

  const double r = 1 / std::numbers::sqrt2;
  const GeodesicSpec h = spec_from_initial({{0, 0, 0}, r, r, 0});
  CHECK(h.kind == GeodesicClass::Horizontal);
  CHECK(h.k == 0.0);

  const double a = 0.3, b = 0.4, c = std::sqrt(1 - a * a - b * b);
  const GeodesicSpec g = spec_from_initial({{0, 0, 0}, a, b, c});
  CHECK(g.kind == GeodesicClass::Generic);
  CHECK(std::abs(g.k - std::sqrt((1 - 2 * a * b) / (1 + 2 * a * b))) < 1e-15);
  CHECK(std::abs(*g.h - 0.5 * std::log(b / a)) < 1e-15);
  CHECK(std::abs(g.constants.c - c) < 1e-15);

  const GeodesicSpec hyp = spec_from_initial({{0, 0, 0}, 0.6, 0, 0.8});
  CHECK(hyp.kind == GeodesicClass::Hyperbolic);
  CHECK_FALSE(hyp.h.has_value());

  CHECK_THROWS_AS(spec_from_initial({{0, 0, 0}, 1, 1, 0}), PreconditionError);
}

TEST_CASE("constants of motion are read off in the adopted convention") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    const Point p{0.3 * i - 5, 0.1 * i, 0.05 * i - 1};
    const TangentVec v = oracle::random_unit(rng, p);
    const GeodesicSpec s = spec_from_initial(v);
    CHECK(std::abs(s.constants.a - std::exp(-2 * p.z) * v.dx) < 1e-14 * std::max(1.0, std::abs(s.constants.a)));
    CHECK(std::abs(s.constants.b - std::exp(2 * p.z) * v.dy) < 1e-14 * std::max(1.0, std::abs(s.constants.b)));
  }
}

TEST_CASE("vertical geodesic is the z-axis") {
  const GeodesicSpec v = spec_from_initial({{0, 0, 0}, 0, 0, 1});
  const Trajectory t = integrate(v, 0, 1, 1e-10, 0.5);
  REQUIRE(t.samples.size() == 3);
  for (const Sample& s : t.samples) {
    CHECK(s.x == 0.0);
    CHECK(s.y == 0.0);
    CHECK(s.z == s.t);
    CHECK(s.zdot == 1.0);
  }
}

TEST_CASE("hyperbolic closed form") {
  const double a = 0.5;
  const ClosedFormState top = hyperbolic_closed_form(a, 0.0, 0.0);
  CHECK(std::abs(top.point.z + std::log(a)) < 1e-15);
  CHECK(top.velocity.dz == 0.0);
  for (double t = -3; t <= 3; t += 0.25) {
    const ClosedFormState s = hyperbolic_closed_form(a, 1.5, t);
    const double u = s.point.x - 1.5, v = std::exp(s.point.z);
    CHECK(std::abs(u * u + v * v - 1 / (a * a)) < 1e-12);
    CHECK(std::abs(norm(s.velocity) - 1) < 1e-14);
  }
  CHECK_THROWS_AS(hyperbolic_closed_form(0.0, 0, 0), DomainError);

  // chord from (0,0,0) to (lambda,0,0)
  const double lambda = 3.0;
  const double aa = 2 / std::sqrt(lambda * lambda + 4);
  const double T = std::asinh(lambda / 2);
  const ClosedFormState l = hyperbolic_closed_form(aa, lambda / 2, -T);
  const ClosedFormState rr = hyperbolic_closed_form(aa, lambda / 2, T);
  CHECK(std::abs(l.point.x) < 1e-12);
  CHECK(std::abs(l.point.z) < 1e-12);
  CHECK(std::abs(rr.point.x - lambda) < 1e-12);
  CHECK(std::abs(rr.point.z) < 1e-12);
}

TEST_CASE("hyperbolic geodesics from arbitrary initial data") {
  const double a = 0.5;
  const ClosedFormState s0 = hyperbolic_closed_form(a, 0.0, -1.0);
  const GeodesicSpec spec = spec_from_initial(s0.velocity, -1.0);
  REQUIRE(spec.kind == GeodesicClass::Hyperbolic);
  const Trajectory traj = integrate(spec, -2, 2, 1e-10, 0.1);
  for (const Sample& s : traj.samples) {
    const ClosedFormState c = hyperbolic_closed_form(a, 0.0, s.t);
    CHECK(std::abs(s.x - c.point.x) < 1e-9);
    CHECK(std::abs(s.z - c.point.z) < 1e-9);
    CHECK(std::abs(s.zdot - c.velocity.dz) < 1e-9);
  }

  // a = 0 branch against the full equations
  const TangentVec v{{0.2, -0.4, 0.3}, 0.0, 0.5 * std::exp(-0.3), std::sqrt(0.75)};
  const GeodesicSpec sy = spec_from_initial(v);
  REQUIRE(sy.kind == GeodesicClass::Hyperbolic);
  std::vector<double> times;
  for (int i = 0; i <= 20; ++i) times.push_back(0.2 * i);
  const auto ref = oracle::integrate_full(v, times);
  const Trajectory ty = integrate_at(sy, times, 1e-10);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(max_coord_gap(ty.samples[i], ref[i]) < 1e-9);
}

TEST_CASE("generic integration agrees with the full Euler-Lagrange system") {
  std::mt19937_64 rng(22);
  std::vector<double> times;
  for (int i = 0; i <= 100; ++i) times.push_back(0.1 * i);
  int generic = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const Point p{std::uniform_real_distribution<double>(-2, 2)(rng), std::uniform_real_distribution<double>(-2, 2)(rng),
                  std::uniform_real_distribution<double>(-0.5, 0.5)(rng)};
    const TangentVec v = oracle::random_unit(rng, p);
    const GeodesicSpec spec = spec_from_initial(v);
    if (spec.kind != GeodesicClass::Generic || spec.k > 0.95) continue;
    ++generic;
    const Trajectory t = integrate_at(spec, times, 1e-12);
    const auto ref = oracle::integrate_full(v, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double scale = std::max({1.0, std::abs(ref[i][0]), std::abs(ref[i][1])});
      CHECK(max_coord_gap(t.samples[i], ref[i]) < 1e-8 * scale);
    }
  }
  CHECK(generic >= 6);
}

TEST_CASE("residuals, bounds and periodicity") {
  for (double tol : {1e-8, 1e-10, 1e-12}) {
    for (double k : {0.2, 0.6, 0.9}) {
      const GeodesicSpec spec = make_generic(k, 0.4, 0.3, 1, -1);
      const double T = invariant_set(k).T;
      const Trajectory traj = integrate(spec, 0, 3 * T, tol, 0.05);
      const double A = amplitude(k);
      for (const Sample& s : traj.samples) {
        CHECK(s.res_speed <= 10 * tol);
        CHECK(s.res_grayson <= 10 * tol);
        CHECK(s.drift_c <= 10 * tol * (1 + std::abs(spec.constants.a * s.x) + std::abs(spec.constants.b * s.y)));
        CHECK(std::abs(s.z - 0.4) <= A + tol);
        const double e2 = std::exp(2 * s.z);
        const double rx = std::abs(spec.constants.a * e2 / spec.constants.b);
        const double ry = std::abs(spec.constants.b / e2 / spec.constants.a);
        const double lo = (1 - k) / (1 + k) * (1 - 1e-9), hi = (1 + k) / (1 - k) * (1 + 1e-9);
        CHECK((rx >= lo && rx <= hi));
        CHECK((ry >= lo && ry <= hi));
      }
    }
  }
  const GeodesicSpec spec = make_generic(0.6, 0.0, 0.0);
  const double T = invariant_set(0.6).T;
  for (double t0 : {0.0, 0.7, 2.9}) {
    const Trajectory tr = integrate_at(spec, {t0, t0 + T}, 1e-12);
    CHECK(std::abs(tr.samples[1].z - tr.samples[0].z) < 1e-8);
  }
}

TEST_CASE("integration in both directions from the initial time") {
  const GeodesicSpec spec = make_generic(0.5, 0.0, 0.2);
  const TangentVec earlier = state_at(spec, -3.0, 1e-13);
  const GeodesicSpec from_earlier = spec_from_initial(earlier, -3.0);
  const Trajectory a = integrate_at(spec, {-3.0, -1.0, 0.5, 4.0}, 1e-12);
  const Trajectory b = integrate_at(from_earlier, {-3.0, -1.0, 0.5, 4.0}, 1e-12);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(a.samples[i].x - b.samples[i].x) < 1e-9);
    CHECK(std::abs(a.samples[i].y - b.samples[i].y) < 1e-9);
    CHECK(std::abs(a.samples[i].z - b.samples[i].z) < 1e-9);
  }
  CHECK_THROWS_AS(integrate(spec, 0, 1, 1e-5, 0.1), DomainError);
  CHECK_THROWS_AS(integrate_at(spec, {1.0, 0.5}, 1e-10), DomainError);
}

TEST_CASE("isometry equivariance") {
  std::mt19937_64 rng(23);
  const std::vector<double> times = {0.0, 1.0, 2.5, 6.0};
  for (int trial = 0; trial < 10; ++trial) {
    const TangentVec v = oracle::random_unit(rng, {0.3, -0.2, 0.1});
    const GeodesicSpec spec = spec_from_initial(v);
    if (spec.kind != GeodesicClass::Generic || spec.k > 0.95) continue;
    const Isometry g = Isometry::left_translation({0.5, -1.0, 0.4})
                           .then(Isometry::swap_flip())
                           .then(Isometry::sign_change(-1, 1));
    const GeodesicSpec mapped = spec_from_initial(g.apply(v));
    CHECK(std::abs(mapped.k - spec.k) < 1e-12);
    const Trajectory t1 = integrate_at(spec, times, 1e-12);
    const Trajectory t2 = integrate_at(mapped, times, 1e-12);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const Point gp = g.apply(Point{t1.samples[i].x, t1.samples[i].y, t1.samples[i].z});
      CHECK(std::abs(gp.x - t2.samples[i].x) < 1e-8);
      CHECK(std::abs(gp.y - t2.samples[i].y) < 1e-8);
      CHECK(std::abs(gp.z - t2.samples[i].z) < 1e-8);
    }
  }
}

TEST_CASE("normal form identifies geodesics of equal modulus") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double k : {0.3, 0.75}) {
    const GeodesicSpec model = normalized_spec(k);
    for (int trial = 0; trial < 3; ++trial) {
      const GeodesicSpec base = make_generic(k, u(rng), u(rng), u(rng) > 0 ? 1 : -1, u(rng) > 0 ? 1 : -1);
      const double tau = 5 * (u(rng) + 1);
      const GeodesicSpec spec = spec_from_initial(state_at(base, tau, 1e-13));
      const NormalForm nf = normal_form(spec);
      const TangentVec& w = nf.spec.initial;
      const TangentVec& m = model.initial;
      CHECK(std::abs(w.base.x - m.base.x) < 1e-10);
      CHECK(std::abs(w.base.y - m.base.y) < 1e-10);
      CHECK(std::abs(w.base.z - m.base.z) < 1e-10);
      CHECK(std::abs(w.dx - m.dx) < 1e-10);
      CHECK(std::abs(w.dy - m.dy) < 1e-10);
      CHECK(std::abs(w.dz - m.dz) < 1e-10);
    }
  }
  CHECK_THROWS_AS(normal_form(spec_from_initial({{0, 0, 0}, 0, 0, 1})), PreconditionError);
}

TEST_CASE("time reversal") {
  const GeodesicSpec spec = make_generic(0.5, 0.3, -0.4);
  TangentVec back = spec.initial;
  back.dx = -back.dx;
  back.dy = -back.dy;
  back.dz = -back.dz;
  const GeodesicSpec rev = spec_from_initial(back);
  CHECK(rev.constants.a == -spec.constants.a);
  CHECK(rev.constants.b == -spec.constants.b);
  CHECK(std::abs(rev.constants.c + spec.constants.c) < 1e-15);
  const GraysonCylinder c1 = make_cylinder(spec.constants), c2 = make_cylinder(rev.constants);
  const Trajectory t = integrate(spec, 0, 8, 1e-11, 0.5);
  for (const Sample& s : t.samples) {
    CHECK(std::abs(grayson_residual(c1, {s.x, s.y, s.z})) < 1e-9);
    CHECK(std::abs(grayson_residual(c2, {s.x, s.y, s.z})) < 1e-9);
  }
}

TEST_CASE("Grayson cylinders") {
  const GeodesicSpec spec = make_generic(0.6, 0.2, 0.5);
  const GraysonCylinder cyl = make_cylinder(spec.constants);
  const double a = spec.constants.a, b = spec.constants.b, c = spec.constants.c;
  const double A = amplitude(0.6);
  const Trajectory t = integrate(spec, -10, 10, 1e-11, 0.25);
  for (const Sample& s : t.samples) CHECK(std::abs(grayson_residual(cyl, {s.x, s.y, s.z})) <= 1e-8);

  CHECK(grayson_residual(cyl, {0, 0, 0.2 + 2 * A}) > 0);
  // inflection line z = h, ax - by = c + sqrt(1 - 2|ab|)
  const double w = std::sqrt(1 - 2 * std::abs(a * b));
  const Point infl{(c + w) / a, 0.0, 0.2};
  CHECK(std::abs(grayson_residual(cyl, infl)) < 1e-14);

  CHECK_THROWS_AS(make_cylinder({0.0, 0.5, 0.0}), DomainError);
}

TEST_CASE("framing fields") {
  const GeodesicSpec spec = make_generic(0.5, -0.3, 0.2, 1, -1);
  const GraysonCylinder cyl = make_cylinder(spec.constants);
  const double a = spec.constants.a, b = spec.constants.b, c = spec.constants.c;
  const double two_ab = 2 * std::abs(a * b);

  // critical line: top of the cylinder
  const FrameFields top = frame_fields(cyl, spec.initial.base);
  CHECK(std::abs(std::abs(top.cos_theta) - two_ab) < 1e-12);
  // inflection line
  const Point infl{(c + std::sqrt(1 - two_ab)) / a, 0.0, -0.3};
  const FrameFields mid = frame_fields(cyl, infl);
  CHECK(std::abs(std::abs(mid.cos_theta) - std::sqrt(two_ab)) < 1e-12);

  const Trajectory t = integrate(spec, 0, 10, 1e-12, 0.37);
  for (const Sample& s : t.samples) {
    const Point p{s.x, s.y, s.z};
    const FrameFields f = frame_fields(cyl, p);
    CHECK(std::abs(norm(f.xi) - 1) < 1e-10);
    CHECK(std::abs(f.cos_theta) >= two_ab - 1e-10);
    CHECK(std::abs(f.cos_theta) <= std::sqrt(two_ab) + 1e-10);
    // d F = 2w (a dx - b dy) + 2U'(z) dz, F the defining function, w = ax - by - c
    const double w = a * s.x - b * s.y - c;
    const double dU = a * a * std::exp(2 * s.z) - b * b * std::exp(-2 * s.z);
    auto omega = [&](const TangentVec& v) { return 2 * w * (a * v.dx - b * v.dy) + 2 * dU * v.dz; };
    CHECK(std::abs(omega(f.xi)) < 1e-12);
    CHECK(std::abs(omega(f.eta)) < 1e-12);
    // cos(theta) is the metric angle between xi and eta
    const double ip = std::exp(-2 * s.z) * f.xi.dx * f.eta.dx + std::exp(2 * s.z) * f.xi.dy * f.eta.dy;
    CHECK(std::abs(ip / (norm(f.xi) * norm(f.eta)) - f.cos_theta) < 1e-10);
  }
  CHECK_THROWS_AS(frame_fields(cyl, {0, 0, 5}), PreconditionError);
}

TEST_CASE("cylinders through a point") {
  const ModulusDict d = ab_from_kh(0.6, 0.3);
  const double a = d.abs_a, b = d.abs_b, A = amplitude(0.6);
  CHECK(cylinders_through(a, b, {0, 0, 0.3 + 1.5 * A}).empty());
  const auto two = cylinders_through(a, b, {0.5, 0.2, 0.3});
  REQUIRE(two.size() == 2);
  const double w = std::sqrt(1 - 2 * a * b);
  CHECK(std::abs(two[0].constants.c - (a * 0.5 - b * 0.2 + w)) < 1e-14);
  CHECK(std::abs(two[1].constants.c - (a * 0.5 - b * 0.2 - w)) < 1e-14);

  const Point edge{0.5, 0.2, 0.3 + A};
  const auto one = cylinders_through(a, b, edge);
  REQUIRE(one.size() == 1);
  // the geodesic through the edge point tangent to that cylinder has z' = 0
  const GeodesicSpec s = spec_from_initial({edge, a * std::exp(2 * edge.z), b * std::exp(-2 * edge.z), 0.0});
  CHECK(std::abs(s.constants.c - one[0].constants.c) < 1e-12);
}
