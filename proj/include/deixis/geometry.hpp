#pragma once

#include <cmath>
#include <string>

#include "deixis/errors.hpp"

namespace deixis {

// Units: lengths in millimeters, angles in radians, time in seconds.

/// 3-component vector; doubles as a point.
struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }

  /// Unit vector in the same direction. Throws Error on a near-zero vector.
  Vec3 normalized() const {
    const double n = norm();
    if (n < 1e-12) throw Error("cannot normalize near-zero vector");
    return {x / n, y / n, z / n};
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

using Point3 = Vec3;

/// 2D point in the board plane: u rightward from the top-left corner,
/// v downward, both in millimeters.
struct Point2 {
  double u = 0.0, v = 0.0;
};

/// Unit quaternion, scalar-first component order (w, x, y, z).
struct Quat {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  Quat() = default;
  Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
};

struct Mat3 {
  double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  static Mat3 identity() { return {}; }

  Vec3 operator*(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }

  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        r.m[i][j] = 0.0;
        for (int k = 0; k < 3; ++k) r.m[i][j] += m[i][k] * o.m[k][j];
      }
    return r;
  }

  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }
};

/// Converts a unit quaternion to a rotation matrix. Quaternions whose norm
/// deviates from 1 by more than 1e-6 are rejected with NonUnitQuaternion;
/// smaller deviations are normalized away.
Mat3 rotation_from_quaternion(const Quat& q);

/// Rigid motion mapping points expressed in `from_frame` into `to_frame`:
/// p_to = rotation * p_from + translation.
struct RigidTransform {
  Mat3 rotation;
  Vec3 translation;
  std::string from_frame;
  std::string to_frame;

  static RigidTransform identity(std::string frame) {
    return {Mat3::identity(), Vec3{}, frame, frame};
  }
};

Point3 apply(const RigidTransform& t, const Point3& p);

/// Rotates a direction (no translation applied).
Vec3 rotate(const RigidTransform& t, const Vec3& d);

/// compose(a, b) applies b first: apply(compose(a, b), p) == apply(a, apply(b, p)).
/// Requires a.from_frame == b.to_frame; throws FrameMismatch otherwise.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

RigidTransform invert(const RigidTransform& t);

/// Checks rotation orthonormality and det +1 within `tol`.
bool is_rotation(const Mat3& r, double tol = 1e-9);

struct Plane {
  Point3 point;  // any point on the plane
  Vec3 normal;   // unit normal
};

/// Builds a plane, normalizing the given normal vector.
Plane make_plane(const Point3& point, const Vec3& normal);

/// Forearm ray: pointing direction is elbow -> hand.
struct PointingRay {
  Point3 elbow;
  Point3 hand;

  Vec3 direction() const { return hand - elbow; }
};

enum class RayPlaneStatus { Hit, Parallel, PointsAway };

struct RayPlaneHit {
  RayPlaneStatus status = RayPlaneStatus::Parallel;
  Point3 point;        // valid when status == Hit
  double t = 0.0;      // parameter along hand + t * (hand - elbow)
  bool grazing = false;  // incidence shallower than kGrazingCos

  bool ok() const { return status == RayPlaneStatus::Hit; }
};

inline constexpr double kParallelEps = 1e-9;  // on the normalized-direction dot
inline constexpr double kGrazingCos = 1e-3;

/// Intersects the forward extension of the pointing ray with a plane:
/// P = H + t (H - E), t = ((Pf - H) . N) / ((H - E) . N), t must be > 0.
/// Near-parallel rays report Parallel, backward intersections PointsAway.
RayPlaneHit intersect_ray_plane(const PointingRay& ray, const Plane& plane);

PointingRay apply(const RigidTransform& t, const PointingRay& ray);
Plane apply(const RigidTransform& t, const Plane& plane);

}  // namespace deixis
