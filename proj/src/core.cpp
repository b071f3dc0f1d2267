#include "solgeom/core.hpp"

#include <algorithm>
#include <cmath>

#include "solgeom/errors.hpp"

namespace solgeom {

Point group_mul(const Point& p, const Point& q) {
  return {p.x + std::exp(p.z) * q.x, p.y + std::exp(-p.z) * q.y, p.z + q.z};
}

Point group_inverse(const Point& p) {
  return {-std::exp(-p.z) * p.x, -std::exp(p.z) * p.y, -p.z};
}

Mat3 matrix_rep(const Point& p) {
  return {{{std::exp(p.z), 0.0, p.x}, {0.0, std::exp(-p.z), p.y}, {0.0, 0.0, 1.0}}};
}

double norm_squared(const TangentVec& v) {
  const double z = v.base.z;
  return std::exp(-2.0 * z) * v.dx * v.dx + std::exp(2.0 * z) * v.dy * v.dy + v.dz * v.dz;
}

double norm(const TangentVec& v) {
  const FrameComponents f = to_frame(v);
  return std::hypot(f.X, f.Y, f.Z);
}

FrameComponents to_frame(const TangentVec& v) {
  const double z = v.base.z;
  return {std::exp(-z) * v.dx, std::exp(z) * v.dy, v.dz};
}

TangentVec from_frame(const Point& base, const FrameComponents& f) {
  return {base, std::exp(base.z) * f.X, std::exp(-base.z) * f.Y, f.Z};
}

// ---------------------------------------------------------------------------

Isometry Isometry::identity() { return {}; }

Isometry Isometry::left_translation(const Point& g) {
  Isometry iso;
  iso.word_.push_back({Kind::LeftTranslation, {g.x, g.y, g.z}});
  return iso;
}

Isometry Isometry::horizontal_translation(double w1, double w2) {
  return left_translation({w1, w2, 0.0});
}

Isometry Isometry::vertical_lift(double w) { return left_translation({0.0, 0.0, w}); }

Isometry Isometry::sign_change(int e1, int e2) {
  if ((e1 != 1 && e1 != -1) || (e2 != 1 && e2 != -1)) {
    throw DomainError("sign_change: signs must be +1 or -1");
  }
  Isometry iso;
  iso.word_.push_back({Kind::SignChange, {double(e1), double(e2), 0.0}});
  return iso;
}

Isometry Isometry::swap_flip() {
  Isometry iso;
  iso.word_.push_back({Kind::SwapFlip, {}});
  return iso;
}

Isometry Isometry::then(const Isometry& next) const {
  Isometry out = *this;
  out.word_.insert(out.word_.end(), next.word_.begin(), next.word_.end());
  return out;
}

Isometry Isometry::inverse() const {
  Isometry out;
  for (auto it = word_.rbegin(); it != word_.rend(); ++it) {
    Generator g = *it;
    if (g.kind == Kind::LeftTranslation) {
      const Point inv = group_inverse({g.params[0], g.params[1], g.params[2]});
      g.params = {inv.x, inv.y, inv.z};
    }
    // sign changes and the swap-flip are involutions
    out.word_.push_back(g);
  }
  return out;
}

Point Isometry::apply(const Point& p) const {
  Point q = p;
  for (const Generator& g : word_) {
    switch (g.kind) {
      case Kind::LeftTranslation:
        q = group_mul({g.params[0], g.params[1], g.params[2]}, q);
        break;
      case Kind::SignChange:
        q = {g.params[0] * q.x, g.params[1] * q.y, q.z};
        break;
      case Kind::SwapFlip:
        q = {q.y, q.x, -q.z};
        break;
    }
  }
  return q;
}

TangentVec Isometry::apply(const TangentVec& v) const {
  TangentVec w = v;
  for (const Generator& g : word_) {
    switch (g.kind) {
      case Kind::LeftTranslation: {
        const double s = std::exp(g.params[2]);
        w = {group_mul({g.params[0], g.params[1], g.params[2]}, w.base), s * w.dx, w.dy / s, w.dz};
        break;
      }
      case Kind::SignChange:
        w = {{g.params[0] * w.base.x, g.params[1] * w.base.y, w.base.z},
             g.params[0] * w.dx,
             g.params[1] * w.dy,
             w.dz};
        break;
      case Kind::SwapFlip:
        w = {{w.base.y, w.base.x, -w.base.z}, w.dy, w.dx, -w.dz};
        break;
    }
  }
  return w;
}

TangentVec vertical_flip(const TangentVec& v) { return {v.base, v.dx, v.dy, -v.dz}; }

double potential(double a, double b, double z) {
  const double ab = std::abs(a * b);
  if (ab == 0.0) {
    return 0.5 * (a * a * std::exp(2.0 * z) + b * b * std::exp(-2.0 * z));
  }
  const double h = 0.5 * std::log(std::abs(b / a));
  return ab * std::cosh(2.0 * (z - h));
}

double horizontal_distance(const Point& p1, const Point& p2) {
  if (std::abs(p1.z - p2.z) > 1e-12 * std::max(1.0, std::abs(p1.z))) {
    throw PreconditionError("horizontal_distance: points are at different altitudes");
  }
  const double z = p1.z;
  return std::hypot(std::exp(-z) * (p2.x - p1.x), std::exp(z) * (p2.y - p1.y));
}

}  // namespace solgeom
