#include "terranav/ekf.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "terranav/attitude.hpp"
#include "terranav/errors.hpp"

namespace terranav {

Matrix15 assemble_phi(const Vector3& f_vec, const Matrix3& dcm,
                      bool conventional_bias_coupling) {
    Matrix15 phi = Matrix15::Zero();
    phi.block<3, 3>(0, 3) = Matrix3::Identity();
    phi.block<3, 3>(3, 6) = skew(f_vec);
    if (conventional_bias_coupling) {
        phi.block<3, 3>(3, 9) = -dcm;
        phi.block<3, 3>(6, 12) = dcm;
    } else {
        phi.block<3, 3>(6, 9) = -dcm;
        phi.block<3, 3>(3, 12) = -dcm;
    }
    return phi;
}

Matrix15 transition(const Matrix15& phi, double dt) {
    return Matrix15::Identity() + phi * dt;
}

Matrix15 process_noise(const NoiseConfig& cfg, double dt) {
    Matrix15 q = Matrix15::Zero();
    q.diagonal().segment<3>(3).setConstant(cfg.sigma_accel * cfg.sigma_accel * dt * dt);
    q.diagonal().segment<3>(6).setConstant(cfg.sigma_gyro * cfg.sigma_gyro * dt);
    q.diagonal().segment<3>(9).setConstant(cfg.q_bias_accel * dt);
    q.diagonal().segment<3>(12).setConstant(cfg.q_bias_gyro * dt);
    return q;
}

Predicted time_update(const ErrorState& x_prev, const Covariance15& p_prev,
                      const Matrix15& a, const Matrix15& q) {
    Predicted out;
    out.x = ErrorState::Zero();
    out.x.segment<6>(9) = x_prev.segment<6>(9);
    out.p = a * p_prev * a.transpose() + q;
    return out;
}

Eigen::Matrix<double, 6, 15> measurement_matrix() {
    Eigen::Matrix<double, 6, 15> h = Eigen::Matrix<double, 6, 15>::Zero();
    h(0, 0) = 1.0;
    h(1, 1) = 1.0;
    h(2, 2) = 1.0;
    h(3, 6) = 1.0;
    h(4, 7) = 1.0;
    h(5, 8) = 1.0;
    return h;
}

MeasurementUpdateResult measurement_update(const ErrorState& x_minus,
                                           const Covariance15& p_minus,
                                           const Measurement& z, const Matrix6& r) {
    const Eigen::Matrix<double, 6, 15> h = measurement_matrix();
    const Matrix6 s = h * p_minus * h.transpose() + r;

    const Eigen::SelfAdjointEigenSolver<Matrix6> eig(s);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (!(lmin > 0.0) || lmax / lmin > 1e12) {
        throw FilterError("measurement_update: innovation covariance ill-conditioned"
                          " (min eig " + std::to_string(lmin) +
                          ", max eig " + std::to_string(lmax) + ")");
    }

    const Eigen::LLT<Matrix6> llt(s);
    // K = P- H^T S^{-1}, via the SPD factorization of S.
    const Eigen::Matrix<double, 15, 6> k = llt.solve(h * p_minus).transpose();

    MeasurementUpdateResult out;
    out.gain = k;
    out.x = x_minus + k * (z - h * x_minus);
    const Matrix15 ikh = Matrix15::Identity() - k * h;
    out.p = ikh * p_minus * ikh.transpose() + k * r * k.transpose();
    out.p = 0.5 * (out.p + out.p.transpose());
    return out;
}

Measurement compose_measurement(const Pose& vision_pose, const NavState& ins_state) {
    const Matrix3 d_c = dcm_b_to_l(ins_state.attitude);
    const Matrix3 rel = vision_pose.R * d_c.transpose();
    const double sin_theta = std::abs(rel(0, 2));
    if (sin_theta >= std::sin(M_PI / 2.0 - 1e-6)) {
        throw FilterError("compose_measurement: relative attitude at gimbal lock");
    }
    Measurement z;
    z.segment<3>(0) = vision_pose.p - ins_state.position;
    z.segment<3>(3) = euler_angles_of(rel);
    return z;
}

}  // namespace terranav
