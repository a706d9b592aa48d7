#pragma once

#include "terranav/dtm.hpp"
#include "terranav/types.hpp"

namespace terranav {

// Default denominator guard for the projection operators.
inline constexpr double kDenominatorGuard = 1e-12;

// Camera pose: p is the optical center in world coordinates, R rotates
// camera-frame vectors into the world frame (w = R*c + p).
struct Pose {
    Vector3 p = Vector3::Zero();
    Matrix3 R = Matrix3::Identity();

    bool valid(double tol = 1e-10) const;
};

// Inter-frame motion: c2 = R12 * c1 + p12, with p12 expressed in the
// second camera frame.
struct RelativeMotion {
    Vector3 p12 = Vector3::Zero();
    Matrix3 R12 = Matrix3::Identity();

    bool valid(double tol = 1e-10) const;
};

// Normalized image-plane coordinates (focal length 1, principal point 0).
using ImagePoint = Vector2;

// Homogeneous ray (u_x, u_y, 1) of an image point, camera frame.
Vector3 homogeneous_ray(const ImagePoint& u);

Vector3 world_to_camera(const Pose& pose, const Vector3& g_world);
Vector3 camera_to_world(const Pose& pose, const Vector3& g_camera);

// Pinhole projection; requires positive depth along the optical axis.
ImagePoint project(const Vector3& g_camera);

// Oblique projector P(u, s) = I - u s^T / (s^T u). Projects onto the
// subspace normal to s along the direction of u; P*u = 0 and s^T*P = 0.
Matrix3 projection_operator(const Vector3& u, const Vector3& s,
                            double eps_den = kDenominatorGuard);

// Complementary operator L = q1 n^T / (n^T R1 q1): maps world offsets
// onto the viewing ray, in first-camera coordinates. Satisfies
// R1*L + P(R1 q1, n) = I.
Matrix3 l_operator(const Vector3& q1, const Vector3& n, const Matrix3& r1,
                   double eps_den = kDenominatorGuard);

// Depth of the feature along the ray through q1, from the tangent plane
// at the contact point: (n^T g - n^T p1) / (n^T R1 q1).
double depth_from_plane(const Pose& pose1, const Vector3& q1,
                        const SurfaceContact& contact,
                        double eps_den = kDenominatorGuard);

}  // namespace terranav
