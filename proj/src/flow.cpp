#include "solgeom/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "solgeom/errors.hpp"
#include "solgeom/invariants.hpp"

namespace solgeom {

namespace {

namespace odeint = boost::numeric::odeint;

using State = std::array<double, 4>;  // x, y, z, z'

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kUnitSpeedSlack = 1e-10;
constexpr double kHorizontalSlack = 1e-12;
constexpr std::int64_t kStepBudget = 2'000'000;

double log_cosh(double u) {
  const double v = std::abs(u);
  return v + std::log1p(std::exp(-2.0 * v)) - std::numbers::ln2;
}

// Right-hand side of the reduced system; `direction` = -1 runs time backwards.
struct Field {
  double a;
  double b;
  bool cosh_form;
  double two_ab;
  double h;
  double direction;

  void operator()(const State& s, State& d, double /*t*/) const {
    const double z = s[2];
    const double e2 = std::exp(2.0 * z);
    d[0] = direction * a * e2;
    d[1] = direction * b / e2;
    d[2] = direction * s[3];
    // the cosh form only matters once e^{2z} would overflow
    d[3] = direction * (cosh_form && std::abs(z) > 200.0 ? -two_ab * std::sinh(2.0 * (z - h))
                                                         : -a * a * e2 + b * b / e2);
  }
};

Field make_field(const MotionConstants& m, double direction) {
  Field f{m.a, m.b, m.a * m.b != 0.0, 2.0 * std::abs(m.a * m.b), 0.0, direction};
  if (f.cosh_form) f.h = 0.5 * std::log(std::abs(m.b / m.a));
  return f;
}

// Integrates from the initial state through each of `offsets` (non-negative,
// increasing, measured from t_initial in the chosen direction).
std::vector<State> sweep(const GeodesicSpec& spec, const std::vector<double>& offsets, double direction,
                         double tol) {
  std::vector<State> out;
  out.reserve(offsets.size());
  if (offsets.empty()) return out;

  const Field field = make_field(spec.constants, direction);
  State x{spec.initial.base.x, spec.initial.base.y, spec.initial.base.z, spec.initial.dz};
  const double inner = std::max(0.05 * tol, 4.0 * kEps);
  auto stepper = odeint::make_controlled(inner, inner, odeint::runge_kutta_fehlberg78<State>());

  double t = 0.0;
  double dt = 0.05;
  std::int64_t attempts = 0;
  for (double target : offsets) {
    while (t < target) {
      const double remaining = target - t;
      double step = std::min(dt, remaining);
      const bool clamped = step < dt;
      if (++attempts > kStepBudget) {
        throw IntegrationError("integrate: step budget exhausted before reaching the requested time",
                               std::numeric_limits<double>::infinity());
      }
      const double t_before = t;
      if (stepper.try_step(field, x, t, step) == odeint::success) {
        if (clamped) {
          t = target;
        } else {
          dt = step;
        }
      } else {
        dt = step;
        if (t_before + dt == t_before) {
          throw IntegrationError("integrate: step size underflow", std::numeric_limits<double>::infinity());
        }
      }
    }
    out.push_back(x);
  }
  return out;
}

void attach_diagnostics(const MotionConstants& m, Sample& s) {
  const double u = potential(m.a, m.b, s.z);
  const double w = m.a * s.x - m.b * s.y - m.c;
  s.res_speed = std::abs(2.0 * u + s.zdot * s.zdot - 1.0);
  s.res_grayson = std::abs(w * w + 2.0 * u - 1.0);
  const double e2 = std::exp(2.0 * s.z);
  const double xdot = m.a * e2;
  const double ydot = m.b / e2;
  s.drift_a = std::abs(xdot / e2 - m.a);
  s.drift_b = std::abs(ydot * e2 - m.b);
  s.drift_c = std::abs(m.a * s.x - m.b * s.y + s.zdot - m.c);
}

double residual_allowance(const MotionConstants& m, const Sample& s, double tol) {
  const double scale = 1.0 + std::abs(m.a * s.x) + std::abs(m.b * s.y) + std::abs(m.c);
  return 10.0 * tol * scale + 64.0 * kEps * scale;
}

State closed_form_state(const GeodesicSpec& spec, double t) {
  const TangentVec& v = spec.initial;
  const double tau = t - spec.t_initial;
  const MotionConstants& m = spec.constants;
  switch (spec.kind) {
    case GeodesicClass::Vertical:
      return {v.base.x, v.base.y, v.base.z + v.dz * tau, v.dz};
    case GeodesicClass::Horizontal: {
      const double z = v.base.z;
      return {v.base.x + m.a * std::exp(2.0 * z) * tau, v.base.y + m.b * std::exp(-2.0 * z) * tau, z, 0.0};
    }
    case GeodesicClass::Hyperbolic: {
      const bool swapped = m.a == 0.0;
      const TangentVec w = swapped ? Isometry::swap_flip().apply(v) : v;
      const double z0 = w.base.z;
      const double a = std::exp(-2.0 * z0) * w.dx;
      const double zd0 = std::clamp(w.dz, -1.0 + kEps, 1.0 - kEps);
      const double s = std::atanh(zd0);
      const double z = z0 + log_cosh(s) - log_cosh(tau - s);
      const double zd = -std::tanh(tau - s);
      const double inv_a = std::copysign(std::exp(z0) * std::cosh(s), a);
      const double x = w.base.x + inv_a * (std::tanh(tau - s) + std::tanh(s));
      if (!swapped) return {x, w.base.y, z, zd};
      // back through the swap-flip: (x, y, z) -> (y, x, -z)
      return {w.base.y, x, -z, -zd};
    }
    case GeodesicClass::Generic:
      break;
  }
  throw PreconditionError("closed form requested for a generic geodesic");
}

Trajectory build(const GeodesicSpec& spec, const std::vector<double>& times, double tol) {
  if (!(tol >= 1e-13 && tol <= 1e-6)) {
    throw DomainError("integrate: tolerance must lie in [1e-13, 1e-6]");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw DomainError("integrate: sample times must be strictly increasing");
  }
  for (double t : times) {
    if (!std::isfinite(t)) throw DomainError("integrate: sample times must be finite");
  }

  Trajectory traj;
  traj.spec = spec;
  traj.tol = tol;
  traj.samples.resize(times.size());

  std::vector<State> states(times.size());
  if (spec.kind == GeodesicClass::Generic) {
    const auto split = std::lower_bound(times.begin(), times.end(), spec.t_initial);
    const std::size_t n_back = static_cast<std::size_t>(split - times.begin());
    std::vector<double> fwd;
    std::vector<double> back;
    for (std::size_t i = n_back; i < times.size(); ++i) fwd.push_back(times[i] - spec.t_initial);
    for (std::size_t i = n_back; i-- > 0;) back.push_back(spec.t_initial - times[i]);
    const auto sf = sweep(spec, fwd, 1.0, tol);
    const auto sb = sweep(spec, back, -1.0, tol);
    for (std::size_t i = 0; i < sf.size(); ++i) states[n_back + i] = sf[i];
    for (std::size_t i = 0; i < sb.size(); ++i) states[n_back - 1 - i] = sb[i];
  } else {
    for (std::size_t i = 0; i < times.size(); ++i) states[i] = closed_form_state(spec, times[i]);
  }

  double worst = 0.0;
  bool violated = false;
  for (std::size_t i = 0; i < times.size(); ++i) {
    Sample& s = traj.samples[i];
    s.t = times[i];
    s.x = states[i][0];
    s.y = states[i][1];
    s.z = states[i][2];
    s.zdot = states[i][3];
    attach_diagnostics(spec.constants, s);
    const double r = std::max({s.res_speed, s.res_grayson, s.drift_a, s.drift_b, s.drift_c});
    worst = std::max(worst, r);
    if (r > residual_allowance(spec.constants, s, tol)) violated = true;
  }
  if (violated) {
    throw IntegrationError("integrate: residuals exceed 10 tol", worst);
  }
  return traj;
}

}  // namespace

std::string to_string(GeodesicClass c) {
  switch (c) {
    case GeodesicClass::Vertical:
      return "vertical";
    case GeodesicClass::Horizontal:
      return "horizontal";
    case GeodesicClass::Hyperbolic:
      return "hyperbolic";
    case GeodesicClass::Generic:
      return "generic";
  }
  return "unknown";
}

GeodesicSpec spec_from_initial(const TangentVec& v, double t_initial) {
  const double n = norm(v);
  if (!(std::abs(n - 1.0) <= kUnitSpeedSlack)) {
    throw PreconditionError("spec_from_initial: initial velocity must have unit length (normalise first)");
  }
  TangentVec u{v.base, v.dx / n, v.dy / n, v.dz / n};
  const Point& p = u.base;

  GeodesicSpec spec;
  spec.t_initial = t_initial;
  spec.initial = u;
  spec.speed = 1.0;
  MotionConstants& m = spec.constants;
  m.a = std::exp(-2.0 * p.z) * u.dx;
  m.b = std::exp(2.0 * p.z) * u.dy;
  m.c = m.a * p.x - m.b * p.y + u.dz;

  if (m.a == 0.0 && m.b == 0.0) {
    spec.kind = GeodesicClass::Vertical;
    spec.k = 1.0;
    return spec;
  }
  if (m.a == 0.0 || m.b == 0.0) {
    spec.kind = GeodesicClass::Hyperbolic;
    spec.k = 1.0;
    return spec;
  }
  spec.h = 0.5 * std::log(std::abs(m.b / m.a));
  const double two_ab = 2.0 * std::abs(m.a * m.b);
  if (std::abs(two_ab - 1.0) <= kHorizontalSlack) {
    spec.kind = GeodesicClass::Horizontal;
    spec.k = 0.0;
    return spec;
  }
  spec.kind = GeodesicClass::Generic;
  spec.k = modulus_from_ab(m.a, m.b);
  return spec;
}

double Trajectory::max_residual() const {
  double worst = 0.0;
  for (const Sample& s : samples) {
    worst = std::max({worst, s.res_speed, s.res_grayson, s.drift_a, s.drift_b, s.drift_c});
  }
  return worst;
}

Trajectory integrate(const GeodesicSpec& spec, double t0, double t1, double tol, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("integrate: dt must be positive");
  if (!(t1 >= t0)) throw DomainError("integrate: t1 must not precede t0");
  std::vector<double> times;
  const double span = t1 - t0;
  const auto n = static_cast<std::int64_t>(std::floor(span / dt + 1e-9));
  if (n > 50'000'000) throw DomainError("integrate: too many samples requested");
  for (std::int64_t i = 0; i <= n; ++i) times.push_back(t0 + static_cast<double>(i) * dt);
  if (t1 - times.back() > 1e-9 * dt) {
    times.push_back(t1);
  } else {
    times.back() = t1;
  }
  if (times.size() > 1 && !(times.back() > times[times.size() - 2])) times.erase(times.end() - 2);
  return build(spec, times, tol);
}

Trajectory integrate_at(const GeodesicSpec& spec, const std::vector<double>& times, double tol) {
  return build(spec, times, tol);
}

TangentVec state_at(const GeodesicSpec& spec, double t, double tol) {
  const Trajectory traj = build(spec, {t}, tol);
  const Sample& s = traj.samples.front();
  const MotionConstants& m = spec.constants;
  const double e2 = std::exp(2.0 * s.z);
  return {{s.x, s.y, s.z}, m.a * e2, m.b / e2, s.zdot};
}

ClosedFormState hyperbolic_closed_form(double a, double x0, double t) {
  if (!(a > 0.0)) throw DomainError("hyperbolic_closed_form: a must be positive");
  const double th = std::tanh(t);
  const double sech = 1.0 / std::cosh(t);
  ClosedFormState out;
  out.point = {x0 + th / a, 0.0, -std::log(a) - log_cosh(t)};
  out.velocity = {out.point, sech * sech / a, 0.0, -th};
  return out;
}

// ---------------------------------------------------------------------------

GraysonCylinder make_cylinder(const MotionConstants& m) {
  const double two_ab = 2.0 * std::abs(m.a * m.b);
  if (!(two_ab > 0.0 && two_ab < 1.0)) {
    throw DomainError("Grayson cylinder requires 0 < 2|ab| < 1");
  }
  return {m, modulus_from_ab(m.a, m.b), 0.5 * std::log(std::abs(m.b / m.a))};
}

double grayson_residual(const GraysonCylinder& cyl, const Point& p) {
  const MotionConstants& m = cyl.constants;
  const double w = m.a * p.x - m.b * p.y - m.c;
  return w * w + 2.0 * potential(m.a, m.b, p.z) - 1.0;
}

FrameFields frame_fields(const GraysonCylinder& cyl, const Point& p) {
  if (!(std::abs(grayson_residual(cyl, p)) <= 1e-8)) {
    throw PreconditionError("frame_fields: point does not lie on the cylinder");
  }
  const MotionConstants& m = cyl.constants;
  const double e2 = std::exp(2.0 * p.z);
  const double w = m.a * p.x - m.b * p.y - m.c;
  FrameFields f;
  f.xi = {p, m.a * e2, m.b / e2, -w};
  f.eta = {p, m.b, m.a, 0.0};
  f.cos_theta = 2.0 * m.a * m.b / std::sqrt(1.0 - w * w);
  return f;
}

std::vector<GraysonCylinder> cylinders_through(double a, double b, const Point& p) {
  const double two_ab = 2.0 * std::abs(a * b);
  if (!(two_ab > 0.0 && two_ab < 1.0)) {
    throw DomainError("cylinders_through: requires 0 < 2|ab| < 1");
  }
  const double disc = 1.0 - 2.0 * potential(a, b, p.z);
  const double base = a * p.x - b * p.y;
  std::vector<GraysonCylinder> out;
  if (disc < -1e-14) return out;
  if (disc <= 1e-14) {
    out.push_back(make_cylinder({a, b, base}));
    return out;
  }
  const double r = std::sqrt(disc);
  out.push_back(make_cylinder({a, b, base + r}));
  out.push_back(make_cylinder({a, b, base - r}));
  return out;
}

// ---------------------------------------------------------------------------

GeodesicSpec normalized_spec(double k) {
  const double A = amplitude(k);
  const double a = std::sqrt(0.5 * two_abs_ab_from_modulus(k));
  const Point p{0.0, 0.0, A};
  return spec_from_initial({p, a * std::exp(2.0 * A), a * std::exp(-2.0 * A), 0.0});
}

NormalForm normal_form(const GeodesicSpec& spec, double tol) {
  if (spec.kind != GeodesicClass::Generic) {
    throw PreconditionError("normal_form: geodesic must be generic");
  }
  const double T = invariant_set(spec.k).T;
  const double h = *spec.h;
  const double t0 = spec.t_initial;
  auto zdot = [&](double t) { return state_at(spec, t, tol).dz; };

  // next time >= t0 at which z' changes sign from + to -, i.e. z is maximal
  double t_max = t0;
  const TangentVec v0 = spec.initial;
  const bool at_top = std::abs(v0.dz) <= 1e-14 && v0.base.z > h;
  if (!at_top) {
    const int n = 64;
    std::vector<double> times;
    for (int i = 0; i <= n; ++i) times.push_back(t0 + T * i / n);
    const Trajectory traj = integrate_at(spec, times, tol);
    double lo = 0.0;
    double hi = 0.0;
    bool found = false;
    for (int i = 0; i < n && !found; ++i) {
      if (traj.samples[i].zdot > 0.0 && traj.samples[i + 1].zdot <= 0.0) {
        lo = times[i];
        hi = times[i + 1];
        found = true;
      }
    }
    if (!found) throw SolverError("normal_form: no altitude maximum within one period", 0.0);
    std::uintmax_t iters = 100;
    const auto bracket = boost::math::tools::toms748_solve(
        zdot, lo, hi, [](double x, double y) { return std::abs(x - y) <= 1e-15 * std::max(1.0, std::abs(x)); },
        iters);
    t_max = 0.5 * (bracket.first + bracket.second);
  }

  const MotionConstants& m = spec.constants;
  Isometry iso = Isometry::vertical_lift(-h).then(Isometry::sign_change(m.a > 0 ? 1 : -1, m.b > 0 ? 1 : -1));
  const TangentVec top = iso.apply(state_at(spec, t_max, tol));
  iso = iso.then(Isometry::horizontal_translation(-top.base.x, -top.base.y));

  NormalForm nf;
  nf.isometry = iso;
  nf.time = t_max;
  TangentVec v = iso.apply(state_at(spec, t_max, tol));
  v.dz = 0.0;  // exact at the maximum; removes the root-finding residue
  nf.spec = spec_from_initial(v);
  return nf;
}

}  // namespace solgeom
