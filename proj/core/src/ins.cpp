#include "terranav/ins.hpp"

namespace terranav {

Vector3 specific_force(const Matrix3& dcm, const ImuSample& sample) {
    return dcm * (sample.dv / sample.dt);
}

NavState propagate(const NavState& state, const ImuSample& sample,
                   const BiasState& bias_correction, double gravity) {
    const double dt = sample.dt;
    const Vector3 dtheta = sample.dtheta - bias_correction.gyro_bias * dt;
    const Vector3 dv = sample.dv - bias_correction.accel_bias * dt;

    const Matrix3 dcm_old = dcm_b_to_l(state.attitude);

    NavState next;
    next.attitude = euler_angles_of(dcm_old * rotation_of(dtheta));
    next.velocity = state.velocity + dcm_old * dv + Vector3(0.0, 0.0, -gravity) * dt;
    next.position = state.position + next.velocity * dt;
    return next;
}

CorrectedNav apply_corrections(const NavState& state, const BiasState& bias,
                               const Vector15& error_state) {
    CorrectedNav out;
    out.state.position = state.position + error_state.segment<3>(0);
    out.state.velocity = state.velocity + error_state.segment<3>(3);

    const Matrix3 delta = dcm_b_to_l(error_state(6), error_state(7), error_state(8));
    out.state.attitude = euler_angles_of(delta * dcm_b_to_l(state.attitude));

    out.bias.accel_bias = bias.accel_bias + error_state.segment<3>(9);
    out.bias.gyro_bias = bias.gyro_bias + error_state.segment<3>(12);
    return out;
}

}  // namespace terranav
