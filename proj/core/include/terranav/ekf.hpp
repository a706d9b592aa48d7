#pragma once

#include "terranav/camera.hpp"
#include "terranav/ins.hpp"
#include "terranav/types.hpp"

namespace terranav {

// 15-component error state, ordered
// [dx dy dz | dVx dVy dVz | dphi dtheta dpsi | a_x a_y a_z | b_x b_y b_z].
using ErrorState = Vector15;

// 15x15 symmetric positive-semidefinite covariance.
using Covariance15 = Matrix15;

// 6-component vision measurement [dx dy dz | dphi dtheta dpsi]_m.
using Measurement = Vector6;

// Process and measurement noise intensities. Velocity process noise
// scales with dt^2, angle noise with dt, bias random walks with dt.
struct NoiseConfig {
    double sigma_accel = 0.0;   // m/s^2, per-sample
    double sigma_gyro = 0.0;    // rad/s, per-sample
    double q_bias_accel = 0.0;  // (m/s^2)^2 per second
    double q_bias_gyro = 0.0;   // (rad/s)^2 per second
    double r_pos = 1.0;         // m^2
    double r_ang = 1e-6;        // rad^2
};

// Error-dynamics Jacobian. Zero except: rows 1-3 x cols 4-6 = I,
// rows 4-6 x cols 7-9 = skew(f_vec), and the two -DCM bias blocks.
// By default the bias blocks follow the source layout (accel bias into
// attitude rows, gyro bias into velocity rows); the conventional flag
// swaps the column ranges and uses the coupling signs consistent with
// this module's error definitions (+DCM gyro-to-attitude, -DCM
// accel-to-velocity).
Matrix15 assemble_phi(const Vector3& f_vec, const Matrix3& dcm,
                      bool conventional_bias_coupling = false);

// First-order discrete transition A = I + phi*dt.
Matrix15 transition(const Matrix15& phi, double dt);

// Diagonal process noise for one step of dt seconds.
Matrix15 process_noise(const NoiseConfig& cfg, double dt);

struct Predicted {
    ErrorState x;
    Covariance15 p;
};

// Time update: the predicted state keeps only the bias components
// (error feedback/reset structure); covariance A P A^T + Q.
Predicted time_update(const ErrorState& x_prev, const Covariance15& p_prev,
                      const Matrix15& a, const Matrix15& q);

// 6x15 selector with ones at (1,1),(2,2),(3,3),(4,7),(5,8),(6,9).
Eigen::Matrix<double, 6, 15> measurement_matrix();

struct MeasurementUpdateResult {
    ErrorState x;
    Covariance15 p;
    Eigen::Matrix<double, 15, 6> gain;
};

// Kalman measurement update with Joseph-form covariance, symmetrized.
MeasurementUpdateResult measurement_update(const ErrorState& x_minus,
                                           const Covariance15& p_minus,
                                           const Measurement& z, const Matrix6& r);

// Vision-minus-INS measurement: position difference plus the Euler
// angles of D_m * D_c^T. vision_pose carries the vision-derived body
// attitude as its rotation (body-to-L DCM).
Measurement compose_measurement(const Pose& vision_pose, const NavState& ins_state);

}  // namespace terranav
