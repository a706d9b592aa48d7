#pragma once

#include "terranav/attitude.hpp"
#include "terranav/types.hpp"

namespace terranav {

inline constexpr double kStandardGravity = 9.80665;  // m/s^2

// Navigation state in the local-level frame (x/y planar, z up).
// attitude holds (phi, theta, psi) of the body-to-L DCM.
struct NavState {
    Vector3 position = Vector3::Zero();
    Vector3 velocity = Vector3::Zero();
    Vector3 attitude = Vector3::Zero();
};

// One IMU integration interval: velocity and angle increments in the
// body frame over dt seconds.
struct ImuSample {
    Vector3 dv = Vector3::Zero();
    Vector3 dtheta = Vector3::Zero();
    double dt = 0.01;
};

// Accelerometer and gyro bias estimates used as measurement compensation.
struct BiasState {
    Vector3 accel_bias = Vector3::Zero();
    Vector3 gyro_bias = Vector3::Zero();
};

// Specific force in the L-frame: dcm * dv / dt.
Vector3 specific_force(const Matrix3& dcm, const ImuSample& sample);

// One strapdown step: attitude composed with the compensated body-frame
// angle increment, velocity integrated through the pre-update DCM with
// gravity along -z, position by semi-implicit Euler (updated velocity).
NavState propagate(const NavState& state, const ImuSample& sample,
                   const BiasState& bias_correction,
                   double gravity = kStandardGravity);

// Feed an error-state estimate back into the navigation solution:
// positions and velocities add, attitude composes the small-rotation DCM
// of the angle errors onto the current DCM, biases accumulate.
// The error-state ordering is
// [dp(3), dv(3), dang(3), accel_bias(3), gyro_bias(3)].
struct CorrectedNav {
    NavState state;
    BiasState bias;
};
CorrectedNav apply_corrections(const NavState& state, const BiasState& bias,
                               const Vector15& error_state);

}  // namespace terranav
