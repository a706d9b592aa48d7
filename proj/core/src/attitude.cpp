#include "terranav/attitude.hpp"

#include <Eigen/Geometry>
#include <cmath>

namespace terranav {

Matrix3 skew(const Vector3& w) {
    Matrix3 s;
    s << 0.0, -w.z(), w.y(),
         w.z(), 0.0, -w.x(),
        -w.y(), w.x(), 0.0;
    return s;
}

Matrix3 rotation_of(const Vector3& rotvec) {
    const double angle = rotvec.norm();
    if (angle < 1e-12) {
        // Second-order expansion keeps orthonormality error below 1e-24.
        return Matrix3::Identity() + skew(rotvec) + 0.5 * skew(rotvec) * skew(rotvec);
    }
    return Eigen::AngleAxisd(angle, rotvec / angle).toRotationMatrix();
}

Vector3 rotvec_of(const Matrix3& r) {
    const Eigen::AngleAxisd aa(r);
    return aa.angle() * aa.axis();
}

Matrix3 dcm_b_to_l(double phi, double theta, double psi) {
    Matrix3 psi_dcm, theta_dcm, phi_dcm;
    psi_dcm << std::cos(psi), std::sin(psi), 0.0,
              -std::sin(psi), std::cos(psi), 0.0,
               0.0, 0.0, 1.0;
    theta_dcm << std::cos(theta), 0.0, -std::sin(theta),
                 0.0, 1.0, 0.0,
                 std::sin(theta), 0.0, std::cos(theta);
    phi_dcm << 1.0, 0.0, 0.0,
               0.0, std::cos(phi), std::sin(phi),
               0.0, -std::sin(phi), std::cos(phi);
    return phi_dcm * theta_dcm * psi_dcm;
}

Matrix3 dcm_b_to_l(const Vector3& euler) {
    return dcm_b_to_l(euler.x(), euler.y(), euler.z());
}

Vector3 euler_angles_of(const Matrix3& dcm) {
    // dcm(0,2) = -sin(theta); dcm(1,2) = sin(phi)cos(theta);
    // dcm(2,2) = cos(phi)cos(theta); dcm(0,0) = cos(theta)cos(psi);
    // dcm(0,1) = cos(theta)sin(psi).
    const double st = -dcm(0, 2);
    const double theta = std::asin(std::clamp(st, -1.0, 1.0));
    const double phi = std::atan2(dcm(1, 2), dcm(2, 2));
    const double psi = std::atan2(dcm(0, 1), dcm(0, 0));
    return {phi, theta, psi};
}

double rotation_distance(const Matrix3& a, const Matrix3& b) {
    const double c = ((a.transpose() * b).trace() - 1.0) * 0.5;
    return std::acos(std::clamp(c, -1.0, 1.0));
}

double wrap_pi(double angle) {
    const double two_pi = 2.0 * M_PI;
    double a = std::fmod(angle, two_pi);
    if (a <= -M_PI) a += two_pi;
    if (a > M_PI) a -= two_pi;
    return a;
}

bool is_rotation(const Matrix3& r, double tol) {
    const double ortho = (r.transpose() * r - Matrix3::Identity()).cwiseAbs().maxCoeff();
    return ortho <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

}  // namespace terranav
