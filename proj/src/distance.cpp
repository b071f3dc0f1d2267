#include "solgeom/distance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "solgeom/errors.hpp"
#include "solgeom/invariants.hpp"

namespace solgeom {

namespace {

using Vec3 = std::array<double, 3>;
using Mat = std::array<Vec3, 3>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCapMargin = 1e-6;
const double kSqrt2Pi = std::numbers::sqrt2 * std::numbers::pi;

Vec3 sub(const Vec3& u, const Vec3& v) { return {u[0] - v[0], u[1] - v[1], u[2] - v[2]}; }
double len(const Vec3& u) { return std::hypot(u[0], u[1], u[2]); }
double max_abs(const Vec3& u) { return std::max({std::abs(u[0]), std::abs(u[1]), std::abs(u[2])}); }

Vec3 unit(const Vec3& u) {
  const double n = len(u);
  return {u[0] / n, u[1] / n, u[2] / n};
}

Vec3 cross(const Vec3& u, const Vec3& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

double det(const Mat& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Cramer's rule; m is symmetric positive definite here.
std::optional<Vec3> solve3(const Mat& m, const Vec3& r) {
  const double d = det(m);
  if (!(std::abs(d) > 0.0) || !std::isfinite(d)) return std::nullopt;
  Vec3 x{};
  for (int c = 0; c < 3; ++c) {
    Mat mc = m;
    for (int i = 0; i < 3; ++i) mc[i][c] = r[i];
    x[c] = det(mc) / d;
  }
  return x;
}

Vec3 as_vec(const Point& p) { return {p.x, p.y, p.z}; }

GeodesicSpec spec_from_origin(const Vec3& d) {
  const Vec3 u = unit(d);
  return spec_from_initial({{0.0, 0.0, 0.0}, u[0], u[1], u[2]});
}

double cut_of(const GeodesicSpec& spec) {
  if (spec.kind == GeodesicClass::Generic && spec.k >= 1.0) return kInf;
  return cut_length(spec.kind, spec.kind == GeodesicClass::Generic ? std::optional<double>(spec.k) : std::nullopt);
}

// Length of the coordinate segment from the origin to q.
double straight_path_length(const Vec3& q) {
  auto speed = [&](double tau) {
    const double z = tau * q[2];
    return std::sqrt(std::exp(-2.0 * z) * q[0] * q[0] + std::exp(2.0 * z) * q[1] * q[1] + q[2] * q[2]);
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(speed, 0.0, 1.0, 10, 1e-12);
}

// Coordinate staircases: x-move at height u, y-move at height v.
double staircase_path_length(const Vec3& q) {
  const double X = std::abs(q[0]);
  const double Y = std::abs(q[1]);
  const double Z = q[2];
  std::vector<double> us = {0.0, Z};
  std::vector<double> vs = {0.0, Z};
  if (X > 0.0) us.push_back(std::log(X));
  if (Y > 0.0) vs.push_back(-std::log(Y));
  double best = kInf;
  for (double u : us) {
    for (double v : vs) {
      const double moves = std::exp(-u) * X + std::exp(v) * Y;
      best = std::min(best, moves + std::abs(u) + std::abs(v - u) + std::abs(Z - v));
      best = std::min(best, moves + std::abs(v) + std::abs(u - v) + std::abs(Z - u));
    }
  }
  return best;
}

struct Candidate {
  Vec3 direction{};
  double s = 0.0;
  double miss = kInf;  // relative
};

class Shooter {
 public:
  Shooter(const Vec3& target, double bound, double tol, double itol, int max_iterations)
      : q_(target),
        scale_(std::max(1.0, max_abs(target))),
        bound_(bound),
        tol_(tol),
        itol_(itol),
        max_iterations_(max_iterations) {}

  Candidate run(Vec3 d, double s) const {
    Candidate best;
    d = unit(d);
    s = std::clamp(s, 1e-8, cap(d));
    Vec3 vel{};
    Vec3 F = miss(d, s, &vel);
    double r = max_abs(F) / scale_;
    double mu = -1.0;
    for (int it = 0; it < max_iterations_ && r > tol_; ++it) {
      // tangent basis at d
      const Vec3 helper = std::abs(d[2]) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
      const Vec3 e1 = unit(cross(d, helper));
      const Vec3 e2 = cross(d, e1);
      constexpr double h = 1e-5;
      Mat J{};
      const Vec3 Fa = sub(miss(perturb(d, e1, e2, h, 0.0), s, nullptr), miss(perturb(d, e1, e2, -h, 0.0), s, nullptr));
      const Vec3 Fb = sub(miss(perturb(d, e1, e2, 0.0, h), s, nullptr), miss(perturb(d, e1, e2, 0.0, -h), s, nullptr));
      for (int i = 0; i < 3; ++i) {
        J[i][0] = Fa[i] / (2.0 * h);
        J[i][1] = Fb[i] / (2.0 * h);
        J[i][2] = vel[i];
      }
      Mat JtJ{};
      Vec3 JtF{};
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          for (int i = 0; i < 3; ++i) JtJ[a][b] += J[i][a] * J[i][b];
        }
        for (int i = 0; i < 3; ++i) JtF[a] -= J[i][a] * F[i];
      }
      if (mu < 0.0) mu = 1e-6 * std::max({JtJ[0][0], JtJ[1][1], JtJ[2][2]});
      bool accepted = false;
      for (int tries = 0; tries < 12 && !accepted; ++tries) {
        Mat A = JtJ;
        for (int i = 0; i < 3; ++i) A[i][i] += mu * (1.0 + JtJ[i][i]);
        const auto step = solve3(A, JtF);
        if (!step) {
          mu *= 10.0;
          continue;
        }
        Vec3 delta = *step;
        const double angle = std::hypot(delta[0], delta[1]);
        if (angle > 0.5) {
          for (double& x : delta) x *= 0.5 / angle;
        }
        const Vec3 d_new = perturb(d, e1, e2, delta[0], delta[1]);
        const double s_new = std::clamp(s + delta[2], 1e-8, cap(d_new));
        Vec3 vel_new{};
        Vec3 F_new;
        try {
          F_new = miss(d_new, s_new, &vel_new);
        } catch (const std::exception&) {
          mu *= 10.0;
          continue;
        }
        const double r_new = max_abs(F_new) / scale_;
        if (r_new < r) {
          d = d_new;
          s = s_new;
          F = F_new;
          vel = vel_new;
          r = r_new;
          mu *= 0.2;
          accepted = true;
        } else {
          mu *= 10.0;
        }
      }
      if (!accepted) break;
    }
    best.direction = d;
    best.s = s;
    best.miss = r;
    return best;
  }

  double cap(const Vec3& d) const { return std::min(cut_of(spec_from_origin(d)), bound_) + kCapMargin; }

 private:
  static Vec3 perturb(const Vec3& d, const Vec3& e1, const Vec3& e2, double a, double b) {
    return unit({d[0] + a * e1[0] + b * e2[0], d[1] + a * e1[1] + b * e2[1], d[2] + a * e1[2] + b * e2[2]});
  }

  Vec3 miss(const Vec3& d, double s, Vec3* velocity) const {
    const TangentVec v = state_at(spec_from_origin(d), s, itol_);
    if (velocity) *velocity = {v.dx, v.dy, v.dz};
    return sub(as_vec(v.base), q_);
  }

  Vec3 q_;
  double scale_;
  double bound_;
  double tol_;
  double itol_;
  int max_iterations_;
};

DistanceResult finish_closed_form(const Point& p, const Point& q, const TangentVec& start, double value,
                                  DistanceMethod method) {
  DistanceResult r;
  r.value = value;
  r.method = method;
  r.witness = spec_from_initial(start);
  r.time = value;
  const Point end = value > 0.0 ? state_at(r.witness, value, 1e-12).base : p;
  r.residual = max_abs(sub(as_vec(end), as_vec(q))) / std::max(1.0, max_abs(as_vec(q)));
  return r;
}

// Distance inside the plane y = const, whose metric (dx^2 + dv^2) / v^2 with
// v = e^z is the upper half-plane model.
std::optional<DistanceResult> in_xz_plane(const Point& p, const Point& q) {
  if (p.y != q.y) return std::nullopt;
  const double u1 = p.x;
  const double u2 = q.x;
  const double v1 = std::exp(p.z);
  const double v2 = std::exp(q.z);
  const double chord = std::hypot(u2 - u1, v2 - v1);
  const double value = 2.0 * std::asinh(chord / (2.0 * std::sqrt(v1 * v2)));
  if (u1 == u2) {
    const double dir = q.z >= p.z ? 1.0 : -1.0;
    return finish_closed_form(p, q, {p, 0.0, 0.0, dir}, value, DistanceMethod::Vertical);
  }
  // semicircle centred at (uc, 0) of radius R = 1/|a|
  const double uc = 0.5 * ((u2 * u2 - u1 * u1) + (v2 * v2 - v1 * v1)) / (u2 - u1);
  const double R = std::hypot(u1 - uc, v1);
  const double a = std::copysign(1.0 / R, u2 - u1);
  const TangentVec start{p, a * v1 * v1, 0.0, a * (uc - u1)};
  return finish_closed_form(p, q, start, value, DistanceMethod::HyperbolicClosedForm);
}

}  // namespace

std::string to_string(DistanceMethod m) {
  switch (m) {
    case DistanceMethod::Vertical:
      return "vertical";
    case DistanceMethod::HyperbolicClosedForm:
      return "hyperbolic-closed-form";
    case DistanceMethod::Shooting:
      return "shooting";
  }
  return "unknown";
}

double cut_length(GeodesicClass kind, std::optional<double> k) {
  switch (kind) {
    case GeodesicClass::Vertical:
    case GeodesicClass::Hyperbolic:
      return kInf;
    case GeodesicClass::Horizontal:
      return kSqrt2Pi;
    case GeodesicClass::Generic:
      if (!k) throw PreconditionError("cut_length: generic geodesics need their modulus");
      return invariant_set(*k).T;
  }
  return kInf;
}

std::optional<DistanceResult> dist_special(const Point& p, const Point& q) {
  if (p.x == q.x && p.y == q.y) {
    const double dir = q.z >= p.z ? 1.0 : -1.0;
    return finish_closed_form(p, q, {p, 0.0, 0.0, dir}, std::abs(q.z - p.z), DistanceMethod::Vertical);
  }
  if (auto r = in_xz_plane(p, q)) return r;
  if (p.x == q.x) {
    const Isometry flip = Isometry::swap_flip();
    auto r = in_xz_plane(flip.apply(p), flip.apply(q));
    if (!r) return std::nullopt;
    return finish_closed_form(p, q, flip.apply(r->witness.initial), r->value, r->method);
  }
  return std::nullopt;
}

StaircaseBound staircase_bound(double p) {
  if (!(p >= 2.0)) throw DomainError("staircase_bound: requires p >= 2");
  return {4.0 * std::log(p / 2.0) + 4.0, std::numbers::sqrt2 * p};
}

DistanceResult distance(const Point& p, const Point& q, double tol) {
  DistanceOptions opts;
  opts.tol = tol;
  return distance(p, q, opts);
}

DistanceResult distance(const Point& p, const Point& q, const DistanceOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("distance: tolerance must be positive");
  if (opts.starts < 32) throw DomainError("distance: at least 32 starts are required");
  if (p.x == q.x && p.y == q.y && p.z == q.z) return *dist_special(p, q);
  if (opts.use_closed_form) {
    if (auto r = dist_special(p, q)) return *r;
  }

  const Isometry to_origin = Isometry::left_translation(group_inverse(p));
  const Vec3 target = as_vec(to_origin.apply(q));
  const double bound = std::min(straight_path_length(target), staircase_path_length(target));
  const double itol = std::clamp(opts.tol * 1e-2, 1e-13, 1e-6);
  const Shooter shooter(target, bound, opts.tol, itol, opts.max_iterations);

  std::vector<std::pair<Vec3, double>> seeds;
  seeds.push_back({unit(target), len(target)});
  const double planar = std::hypot(target[0], target[1]);
  if (std::abs(target[2]) <= 1e-12 * std::max(1.0, planar) && target[0] != 0.0 && target[1] != 0.0) {
    const double theta = std::atan2(std::abs(target[1]), std::abs(target[0]));
    if (planar >= asymptotic_threshold(theta)) {
      const GroundAsymptotic g = ground_asymptotic(theta, planar);
      const double sx = target[0] > 0.0 ? 1.0 : -1.0;
      const double sy = target[1] > 0.0 ? 1.0 : -1.0;
      seeds.push_back({{sx * g.a, sy * g.b, g.c}, g.T});
      seeds.push_back({{sx * g.a, sy * g.b, -g.c}, g.T});
    }
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < opts.starts; ++i) {
    const double zc = 1.0 - (2.0 * i + 1.0) / opts.starts;
    const double r = std::sqrt(1.0 - zc * zc);
    seeds.push_back({{r * std::cos(golden * i), r * std::sin(golden * i), zc}, bound});
  }

  std::vector<Candidate> converged;
  Candidate best;
  for (const auto& [d, s0] : seeds) {
    Candidate c;
    try {
      c = shooter.run(d, std::min(s0, shooter.cap(unit(d))));
    } catch (const std::exception&) {
      continue;
    }
    if (c.miss < best.miss) best = c;
    if (c.miss <= opts.tol && c.s <= shooter.cap(c.direction)) converged.push_back(c);
  }
  if (converged.empty()) {
    throw SolverError("distance: no shooting start converged", best.miss);
  }

  const auto winner = std::min_element(converged.begin(), converged.end(),
                                       [](const Candidate& x, const Candidate& y) { return x.s < y.s; });
  std::vector<Vec3> basins;
  for (const Candidate& c : converged) {
    const bool known = std::any_of(basins.begin(), basins.end(),
                                   [&](const Vec3& d) { return len(sub(d, c.direction)) <= 1e-5; });
    if (!known) basins.push_back(c.direction);
  }

  DistanceResult r;
  r.value = winner->s;
  r.method = DistanceMethod::Shooting;
  r.time = winner->s;
  const Vec3 d = winner->direction;
  r.witness = spec_from_initial(to_origin.inverse().apply(TangentVec{{0.0, 0.0, 0.0}, d[0], d[1], d[2]}));
  r.residual = winner->miss;
  r.converged = static_cast<int>(converged.size());
  r.basins = static_cast<int>(basins.size());
  return r;
}

// ---------------------------------------------------------------------------

double asymptotic_threshold(double theta) {
  if (!(theta > 0.0 && theta < 0.5 * std::numbers::pi)) {
    throw DomainError("asymptotic_threshold: theta must lie in (0, pi/2)");
  }
  const double sc = std::sin(theta) * std::cos(theta);
  const double k_theta = std::sqrt(std::max(0.0, (1.0 - 2.0 * sc) / (1.0 + 2.0 * sc)));
  return invariant_set(k_theta).H / std::sqrt(sc);
}

GroundAsymptotic ground_asymptotic(double theta, double lambda) {
  const double lambda_star = asymptotic_threshold(theta);
  if (!(lambda >= lambda_star * (1.0 - 1e-12))) {
    throw DomainError("ground_asymptotic: lambda below the admissibility threshold " + std::to_string(lambda_star));
  }
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  GroundAsymptotic g;
  g.theta = theta;
  g.lambda = lambda;
  g.lambda_star = lambda_star;
  g.k = invert_H(std::max(std::numbers::pi, lambda * std::sqrt(s * c)));
  const double k2 = g.k * g.k;
  const double ratio = (1.0 - g.k) * (1.0 + g.k) / (2.0 * (1.0 + k2));
  g.a = std::sqrt(std::tan(theta) * ratio);
  g.b = std::sqrt(ratio / std::tan(theta));
  g.c = std::sqrt(std::max(0.0, 1.0 - g.a * g.a - g.b * g.b));
  const InvariantSet inv = invariant_set(g.k);
  g.T = inv.T;
  g.M = inv.M;
  g.four_log_lambda = 4.0 * std::log(lambda);
  g.excess = g.T - g.four_log_lambda;
  g.mb_error = std::abs(g.M * g.b - lambda * c) / lambda;
  g.ma_error = std::abs(g.M * g.a - lambda * s) / lambda;
  const double n = std::hypot(g.a, g.b, g.c);
  g.spec = spec_from_initial({{0.0, 0.0, 0.0}, g.a / n, g.b / n, g.c / n});
  return g;
}

FrameComponents horizontal_jacobi_field(double t) {
  const double p = 1.0 - std::cos(std::numbers::sqrt2 * t);
  return {p, -p, std::sin(std::numbers::sqrt2 * t)};
}

FrameComponents horizontal_family_field(double t, double ds, double tol) {
  const double r = 1.0 / std::numbers::sqrt2;
  auto end = [&](double s) {
    const Vec3 d{std::cos(s) * r, std::cos(s) * r, std::sin(s)};
    return state_at(spec_from_origin(d), t, tol).base;
  };
  const Point plus = end(ds);
  const Point minus = end(-ds);
  const TangentVec J{{t * r, t * r, 0.0}, (plus.x - minus.x) / (2.0 * ds), (plus.y - minus.y) / (2.0 * ds),
                     (plus.z - minus.z) / (2.0 * ds)};
  return to_frame(J);
}

double horizontal_conjugate_time() {
  constexpr double lo = 0.1;
  constexpr double hi = 10.0;
  constexpr double step = 0.05;
  auto magnitude = [](double t) {
    const FrameComponents J = horizontal_family_field(t);
    return std::hypot(J.X, J.Y, J.Z);
  };
  std::vector<double> ts;
  std::vector<double> js;
  for (double t = lo; t <= hi + 1e-12; t += step) {
    ts.push_back(t);
    js.push_back(magnitude(t));
  }
  const double peak = *std::max_element(js.begin(), js.end());
  for (std::size_t i = 1; i + 1 < js.size(); ++i) {
    if (!(js[i] <= js[i - 1] && js[i] <= js[i + 1])) continue;
    const auto [t_min, j_min] = boost::math::tools::brent_find_minima(magnitude, ts[i - 1], ts[i + 1], 40);
    if (j_min <= 1e-3 * peak) return t_min;
  }
  throw SolverError("horizontal_conjugate_time: no zero of the Jacobi field in (0.1, 10]", peak);
}

std::vector<SpherePoint> sphere_points(double radius, int n_theta, int n_phi, double tol) {
  if (!(radius > 0.0) || n_theta < 1 || n_phi < 1) {
    throw DomainError("sphere_points: radius must be positive and the grid non-empty");
  }
  std::vector<SpherePoint> out;
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::numbers::pi * (i + 0.5) / n_theta;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n_phi;
      const Vec3 d{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
      const GeodesicSpec spec = spec_from_origin(d);
      const double cut = cut_of(spec);
      SpherePoint sp;
      sp.theta = theta;
      sp.phi = phi;
      sp.clipped = cut < radius;
      sp.length = std::min(radius, cut);
      sp.point = state_at(spec, sp.length, tol).base;
      out.push_back(sp);
    }
  }
  return out;
}

}  // namespace solgeom
