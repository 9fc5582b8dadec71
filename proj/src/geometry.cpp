#include "deixis/geometry.hpp"

#include <cmath>

namespace deixis {

Mat3 rotation_from_quaternion(const Quat& q) {
  const double n = q.norm();
  if (std::abs(n - 1.0) > 1e-6 || !std::isfinite(n))
    throw NonUnitQuaternion("quaternion norm " + std::to_string(n) +
                            " deviates from 1 by more than 1e-6");
  const double w = q.w / n, x = q.x / n, y = q.y / n, z = q.z / n;

  Mat3 r;
  r.m[0][0] = 1.0 - 2.0 * (y * y + z * z);
  r.m[0][1] = 2.0 * (x * y - w * z);
  r.m[0][2] = 2.0 * (x * z + w * y);
  r.m[1][0] = 2.0 * (x * y + w * z);
  r.m[1][1] = 1.0 - 2.0 * (x * x + z * z);
  r.m[1][2] = 2.0 * (y * z - w * x);
  r.m[2][0] = 2.0 * (x * z - w * y);
  r.m[2][1] = 2.0 * (y * z + w * x);
  r.m[2][2] = 1.0 - 2.0 * (x * x + y * y);
  return r;
}

Point3 apply(const RigidTransform& t, const Point3& p) {
  return t.rotation * p + t.translation;
}

Vec3 rotate(const RigidTransform& t, const Vec3& d) { return t.rotation * d; }

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  if (a.from_frame != b.to_frame)
    throw FrameMismatch("cannot compose " + a.from_frame + "<-" + a.to_frame +
                        " after " + b.from_frame + "->" + b.to_frame);
  RigidTransform r;
  r.rotation = a.rotation * b.rotation;
  r.translation = a.rotation * b.translation + a.translation;
  r.from_frame = b.from_frame;
  r.to_frame = a.to_frame;
  return r;
}

RigidTransform invert(const RigidTransform& t) {
  RigidTransform r;
  r.rotation = t.rotation.transposed();
  r.translation = -(r.rotation * t.translation);
  r.from_frame = t.to_frame;
  r.to_frame = t.from_frame;
  return r;
}

bool is_rotation(const Mat3& r, double tol) {
  // Columns orthonormal.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += r.m[k][i] * r.m[k][j];
      const double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(dot - want) > tol) return false;
    }
  }
  const double det =
      r.m[0][0] * (r.m[1][1] * r.m[2][2] - r.m[1][2] * r.m[2][1]) -
      r.m[0][1] * (r.m[1][0] * r.m[2][2] - r.m[1][2] * r.m[2][0]) +
      r.m[0][2] * (r.m[1][0] * r.m[2][1] - r.m[1][1] * r.m[2][0]);
  return std::abs(det - 1.0) <= tol;
}

Plane make_plane(const Point3& point, const Vec3& normal) {
  return Plane{point, normal.normalized()};
}

RayPlaneHit intersect_ray_plane(const PointingRay& ray, const Plane& plane) {
  const Vec3 d = ray.direction();
  const double dn = d.norm();
  if (dn < 1e-12) throw Error("pointing ray has zero length");

  const double cos_inc = d.dot(plane.normal) / dn;
  RayPlaneHit hit;
  hit.grazing = std::abs(cos_inc) < kGrazingCos;
  if (std::abs(cos_inc) <= kParallelEps) {
    hit.status = RayPlaneStatus::Parallel;
    return hit;
  }

  const double t =
      (plane.point - ray.hand).dot(plane.normal) / d.dot(plane.normal);
  if (t <= 0.0) {
    hit.status = RayPlaneStatus::PointsAway;
    hit.t = t;
    return hit;
  }
  hit.status = RayPlaneStatus::Hit;
  hit.t = t;
  hit.point = ray.hand + t * d;
  return hit;
}

PointingRay apply(const RigidTransform& t, const PointingRay& ray) {
  return PointingRay{apply(t, ray.elbow), apply(t, ray.hand)};
}

Plane apply(const RigidTransform& t, const Plane& plane) {
  return Plane{apply(t, plane.point), rotate(t, plane.normal)};
}

}  // namespace deixis
