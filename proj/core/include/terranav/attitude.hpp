#pragma once

#include "terranav/types.hpp"

namespace terranav {

// Skew-symmetric cross-product matrix: skew(w) * v == w x v.
Matrix3 skew(const Vector3& w);

// Exact rotation matrix of a rotation vector (Rodrigues formula),
// stable for small angles.
Matrix3 rotation_of(const Vector3& rotvec);

// Rotation vector of a rotation matrix (inverse of rotation_of).
Vector3 rotvec_of(const Matrix3& r);

// Body-to-local-level direction cosine matrix assembled from the three
// elemental matrices, composed as Phi * Theta * Psi. For small angles
// this convention satisfies dcm(w) ~ I - skew(w).
Matrix3 dcm_b_to_l(double phi, double theta, double psi);
Matrix3 dcm_b_to_l(const Vector3& euler);

// Euler angles (phi, theta, psi) of a DCM in the same convention;
// valid away from |theta| = pi/2.
Vector3 euler_angles_of(const Matrix3& dcm);

// Geodesic angle between two rotations, in radians.
double rotation_distance(const Matrix3& a, const Matrix3& b);

// Wrap an angle into (-pi, pi].
double wrap_pi(double angle);

// True when r is orthonormal with determinant +1 within tol.
bool is_rotation(const Matrix3& r, double tol = 1e-10);

}  // namespace terranav
