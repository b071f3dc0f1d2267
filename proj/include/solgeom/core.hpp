#pragma once

// The SOL group R^2 x| R with the left-invariant metric
//   ds^2 = e^{-2z} dx^2 + e^{2z} dy^2 + dz^2
// together with a few isometries and the pieces of the metric used by the
// geodesic code.

#include <array>
#include <span>
#include <vector>

namespace solgeom {

struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Tangent vector at `base`, components in the coordinate basis d/dx, d/dy, d/dz.
struct TangentVec {
  Point base;
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;
};

// Components in the orthonormal left-invariant frame
//   X = e^z d/dx,  Y = e^{-z} d/dy,  Z = d/dz.
struct FrameComponents {
  double X = 0.0;
  double Y = 0.0;
  double Z = 0.0;
};

using Mat3 = std::array<std::array<double, 3>, 3>;

Point group_mul(const Point& p, const Point& q);
Point group_inverse(const Point& p);

// Faithful representation (x,y,z) -> [[e^z,0,x],[0,e^-z,y],[0,0,1]].
Mat3 matrix_rep(const Point& p);

double norm_squared(const TangentVec& v);
double norm(const TangentVec& v);

FrameComponents to_frame(const TangentVec& v);
TangentVec from_frame(const Point& base, const FrameComponents& f);

// Word over the generators listed below; composes exactly, applied left to
// right (the first generator in the word acts first).
class Isometry {
 public:
  enum class Kind {
    LeftTranslation,  // p -> g * p, g = (x0, y0, w)
    SignChange,       // (x, y, z) -> (e1 x, e2 y, z)
    SwapFlip,         // (x, y, z) -> (y, x, -z)
  };

  struct Generator {
    Kind kind;
    std::array<double, 3> params{};  // g for translations, (e1, e2, 0) for sign changes
  };

  static Isometry identity();
  static Isometry left_translation(const Point& g);
  static Isometry horizontal_translation(double w1, double w2);
  static Isometry vertical_lift(double w);
  static Isometry sign_change(int e1, int e2);
  static Isometry swap_flip();

  // `*this` first, then `next`.
  Isometry then(const Isometry& next) const;
  Isometry inverse() const;

  Point apply(const Point& p) const;
  // Differential, carrying the base point along.
  TangentVec apply(const TangentVec& v) const;

  std::span<const Generator> word() const { return word_; }

 private:
  std::vector<Generator> word_;
};

// (X, Y, Z) -> (X, Y, -Z). Isometric on each tangent space, but not the
// differential of any isometry.
TangentVec vertical_flip(const TangentVec& v);

// U_{a,b}(z) = (a^2 e^{2z} + b^2 e^{-2z}) / 2. For ab != 0 this is evaluated
// as |ab| cosh(2(z - h)), h = log|b/a| / 2.
double potential(double a, double b, double z);

// Euclidean distance inside the horizontal plane of the two points, which
// must share their altitude.
double horizontal_distance(const Point& p1, const Point& p2);

}  // namespace solgeom
