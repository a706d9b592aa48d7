#include "terranav/camera.hpp"

#include <cmath>

#include "terranav/attitude.hpp"
#include "terranav/errors.hpp"

namespace terranav {

bool Pose::valid(double tol) const {
    return p.allFinite() && is_rotation(R, tol);
}

bool RelativeMotion::valid(double tol) const {
    return p12.allFinite() && is_rotation(R12, tol);
}

Vector3 homogeneous_ray(const ImagePoint& u) {
    return {u.x(), u.y(), 1.0};
}

Vector3 world_to_camera(const Pose& pose, const Vector3& g_world) {
    return pose.R.transpose() * (g_world - pose.p);
}

Vector3 camera_to_world(const Pose& pose, const Vector3& g_camera) {
    return pose.R * g_camera + pose.p;
}

ImagePoint project(const Vector3& g_camera) {
    if (!(g_camera.z() > 0.0)) {
        throw BehindCameraError("project: point behind camera (z = " +
                                std::to_string(g_camera.z()) + ")");
    }
    return {g_camera.x() / g_camera.z(), g_camera.y() / g_camera.z()};
}

Matrix3 projection_operator(const Vector3& u, const Vector3& s, double eps_den) {
    const double den = s.dot(u);
    if (std::abs(den) <= eps_den) {
        throw DegenerateDirectionError("projection_operator: degenerate projection direction"
                                       " (|s^T u| <= guard)");
    }
    return Matrix3::Identity() - u * s.transpose() / den;
}

Matrix3 l_operator(const Vector3& q1, const Vector3& n, const Matrix3& r1, double eps_den) {
    const double den = n.dot(r1 * q1);
    if (std::abs(den) <= eps_den) {
        throw DegenerateDirectionError("l_operator: grazing incidence (|n^T R1 q1| <= guard)");
    }
    return q1 * n.transpose() / den;
}

double depth_from_plane(const Pose& pose1, const Vector3& q1,
                        const SurfaceContact& contact, double eps_den) {
    const double den = contact.normal.dot(pose1.R * q1);
    if (std::abs(den) <= eps_den) {
        throw DegenerateDirectionError("depth_from_plane: grazing incidence");
    }
    return contact.normal.dot(contact.point - pose1.p) / den;
}

}  // namespace terranav
