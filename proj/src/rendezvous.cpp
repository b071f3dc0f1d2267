#include "solgeom/rendezvous.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "solgeom/errors.hpp"
#include "solgeom/invariants.hpp"

namespace solgeom {

namespace {

void require_generic(const GeodesicSpec& spec, const char* who) {
  if (spec.kind != GeodesicClass::Generic) {
    throw PreconditionError(std::string(who) + ": geodesic must be generic");
  }
}

double distance3(const Point& p, const Point& q) { return std::hypot(p.x - q.x, p.y - q.y, p.z - q.z); }

}  // namespace

PartnerPair partner_at(const GeodesicSpec& spec, double t1, double tol) {
  require_generic(spec, "partner_at");
  const TangentVec v = state_at(spec, t1, tol);
  PartnerPair pair;
  pair.original = spec;
  pair.partner = spec_from_initial(vertical_flip(v), t1);
  pair.t1 = t1;
  return pair;
}

Point partner_by_reflection(const GeodesicSpec& spec, double t1, double t, double tol) {
  require_generic(spec, "partner_by_reflection");
  const double u = 2.0 * t1 - t;
  std::vector<double> times = {std::min(t1, u), std::max(t1, u)};
  if (times[0] == times[1]) times.pop_back();
  const Trajectory traj = integrate_at(spec, times, tol);
  const Sample& at_t1 = t1 <= u ? traj.samples.front() : traj.samples.back();
  const Sample& at_u = t1 <= u ? traj.samples.back() : traj.samples.front();
  return {2.0 * at_t1.x - at_u.x, 2.0 * at_t1.y - at_u.y, at_u.z};
}

std::array<double, 3> period_displacement(const GeodesicSpec& spec) {
  require_generic(spec, "period_displacement");
  const double M = invariant_set(spec.k).M;
  const MotionConstants& m = spec.constants;
  const double sign = m.a * m.b > 0.0 ? 1.0 : -1.0;
  return {sign * M * m.b, sign * M * m.a, 0.0};
}

RendezvousReport rendezvous_check(const GeodesicSpec& spec, double t1, double tol) {
  require_generic(spec, "rendezvous_check");
  const PartnerPair pair = partner_at(spec, t1, tol);
  const double T = invariant_set(spec.k).T;

  const TangentVec start = state_at(spec, t1, tol);
  const TangentVec end = state_at(spec, t1 + T, tol);
  const TangentVec end_partner = state_at(pair.partner, t1 + T, tol);

  RendezvousReport r;
  r.T = T;
  r.partner = pair.partner;
  r.meet_error = distance3(end.base, end_partner.base);
  const TangentVec& w = pair.partner.initial;
  r.distinct = std::max({std::abs(w.dx - start.dx), std::abs(w.dy - start.dy), std::abs(w.dz - start.dz)}) > 1e-12;
  // both curves run at unit speed over [t1, t1 + T]
  r.length_original = T * spec.speed;
  r.length_partner = T * pair.partner.speed;
  return r;
}

JacobiDefect jacobi_endpoint_defect(const GeodesicSpec& spec, double t1, double ds, double tol) {
  require_generic(spec, "jacobi_endpoint_defect");
  if (!(ds >= 1e-6 && ds <= 1e-3)) throw DomainError("jacobi_endpoint_defect: ds must lie in [1e-6, 1e-3]");
  const TangentVec v1 = state_at(spec, t1, tol);
  if (!(std::abs(v1.dz) <= 1e-10)) {
    throw PreconditionError("jacobi_endpoint_defect: t1 is not a critical time");
  }
  const double T = invariant_set(spec.k).T;
  constexpr int kGrid = 400;

  std::vector<double> grid;
  for (int j = 0; j <= kGrid; ++j) grid.push_back(t1 + T * j / kGrid);

  std::vector<double> needed = {t1 - ds, t1 + ds};
  for (double t : grid) {
    needed.push_back(2.0 * (t1 + ds) - t);
    needed.push_back(2.0 * (t1 - ds) - t);
  }
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
  const Trajectory traj = integrate_at(spec, needed, tol);
  std::map<double, Point> at;
  for (const Sample& s : traj.samples) at[s.t] = {s.x, s.y, s.z};

  auto psi = [&](double t, double s) {
    const Point& pivot = at.at(t1 + s);
    const Point& far = at.at(2.0 * (t1 + s) - t);
    return Point{2.0 * pivot.x - far.x, 2.0 * pivot.y - far.y, far.z};
  };

  JacobiDefect out;
  std::vector<double> norms;
  for (int j = 0; j <= kGrid; ++j) {
    const double t = grid[j];
    const Point plus = psi(t, ds);
    const Point minus = psi(t, -ds);
    const TangentVec J{{0.0, 0.0, 0.5 * (plus.z + minus.z)},
                       (plus.x - minus.x) / (2.0 * ds),
                       (plus.y - minus.y) / (2.0 * ds),
                       (plus.z - minus.z) / (2.0 * ds)};
    const double n = norm(J);
    norms.push_back(n);
    if (j == kGrid / 2) out.mid_z = J.dz;
  }
  out.at_t1 = norms.front();
  out.at_t1_plus_T = norms.back();
  out.max_norm = *std::max_element(norms.begin(), norms.end());
  return out;
}

}  // namespace solgeom
