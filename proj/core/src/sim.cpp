#include "terranav/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "terranav/attitude.hpp"
#include "terranav/errors.hpp"

namespace terranav {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

Pose camera_pose(const NavState& nav, const Matrix3& mount) {
    Pose pose;
    pose.p = nav.position;
    pose.R = dcm_b_to_l(nav.attitude) * mount;
    return pose;
}

Pose camera_pose(const Vector3& position, const Matrix3& body_dcm, const Matrix3& mount) {
    Pose pose;
    pose.p = position;
    pose.R = body_dcm * mount;
    return pose;
}

// Second camera pose from pose1 and the relative motion.
Pose second_pose(const Pose& pose1, const RelativeMotion& motion) {
    Pose pose2;
    pose2.R = pose1.R * motion.R12.transpose();
    pose2.p = pose1.p - pose2.R * motion.p12;
    return pose2;
}

RelativeMotion relative_motion_between(const Pose& pose1, const Pose& pose2) {
    RelativeMotion motion;
    motion.R12 = pose2.R.transpose() * pose1.R;
    motion.p12 = pose2.R.transpose() * (pose1.p - pose2.p);
    return motion;
}

Vector6 pose_difference(const Pose& body_a, const Pose& body_b) {
    Vector6 d;
    d.segment<3>(0) = body_a.p - body_b.p;
    d.segment<3>(3) = euler_angles_of(body_a.R * body_b.R.transpose());
    return d;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    // splitmix64 on base + index; independent of the total run count.
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

TerrainGrid synth_terrain(const TerrainSpec& spec) {
    Eigen::MatrixXd h(spec.n_rows, spec.n_cols);
    double phase_x = 0.0, phase_y = 0.0;
    if (spec.kind == TerrainSpec::Kind::Rolling) {
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
        phase_x = u(rng);
        phase_y = u(rng);
    }
    for (int i = 0; i < spec.n_rows; ++i) {
        const double y = spec.origin_y + i * spec.cell_size;
        for (int j = 0; j < spec.n_cols; ++j) {
            const double x = spec.origin_x + j * spec.cell_size;
            switch (spec.kind) {
                case TerrainSpec::Kind::Flat:
                    h(i, j) = 0.0;
                    break;
                case TerrainSpec::Kind::Inclined:
                    h(i, j) = spec.slope * x;
                    break;
                case TerrainSpec::Kind::Rolling: {
                    const double k = 2.0 * M_PI / spec.wavelength;
                    h(i, j) = spec.amplitude * std::sin(k * x + phase_x) +
                              spec.amplitude * std::sin(k * y + phase_y);
                    break;
                }
            }
        }
    }
    return TerrainGrid(spec.origin_x, spec.origin_y, spec.cell_size, std::move(h));
}

Trajectory::Trajectory(const TrajectorySpec& spec, double duration)
    : speed_(spec.speed), duration_(duration) {
    if (!(duration > 0.0)) {
        throw ScenarioError("Trajectory: duration must be positive");
    }
    double t = 0.0;
    Vector3 p = spec.start;
    double psi = spec.heading;
    auto push = [&](const TrajectorySegment& seg) {
        nodes_.push_back({t, p, psi, seg.yaw_rate, seg.climb_rate});
        const double tau = seg.duration;
        if (std::abs(seg.yaw_rate) > 0.0) {
            const double psi1 = psi + seg.yaw_rate * tau;
            p.x() += speed_ / seg.yaw_rate * (std::sin(psi1) - std::sin(psi));
            p.y() += speed_ / seg.yaw_rate * (std::cos(psi1) - std::cos(psi));
            psi = psi1;
        } else {
            p.x() += speed_ * std::cos(psi) * tau;
            p.y() += -speed_ * std::sin(psi) * tau;
        }
        p.z() += seg.climb_rate * tau;
        t += tau;
    };
    for (const TrajectorySegment& seg : spec.segments) {
        if (t >= duration) break;
        push(seg);
    }
    if (t < duration) {
        push({duration - t, 0.0, 0.0});  // pad with straight flight
    }
}

const Trajectory::Node& Trajectory::node_at(double t) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                               [](double v, const Node& n) { return v < n.t0; });
    if (it != nodes_.begin()) --it;
    return *it;
}

Vector3 Trajectory::position(double t) const {
    const Node& n = node_at(t);
    const double tau = t - n.t0;
    Vector3 p = n.p0;
    if (std::abs(n.yaw_rate) > 0.0) {
        const double psi1 = n.psi0 + n.yaw_rate * tau;
        p.x() += speed_ / n.yaw_rate * (std::sin(psi1) - std::sin(n.psi0));
        p.y() += speed_ / n.yaw_rate * (std::cos(psi1) - std::cos(n.psi0));
    } else {
        p.x() += speed_ * std::cos(n.psi0) * tau;
        p.y() += -speed_ * std::sin(n.psi0) * tau;
    }
    p.z() += n.climb_rate * tau;
    return p;
}

Vector3 Trajectory::velocity(double t) const {
    const Node& n = node_at(t);
    const double psi = n.psi0 + n.yaw_rate * (t - n.t0);
    return {speed_ * std::cos(psi), -speed_ * std::sin(psi), n.climb_rate};
}

Vector3 Trajectory::attitude(double t) const {
    const Node& n = node_at(t);
    return {0.0, 0.0, wrap_pi(n.psi0 + n.yaw_rate * (t - n.t0))};
}

Matrix3 Trajectory::dcm(double t) const {
    return dcm_b_to_l(attitude(t));
}

NavState Trajectory::state(double t) const {
    NavState s;
    s.position = position(t);
    s.velocity = velocity(t);
    s.attitude = attitude(t);
    return s;
}

std::vector<ImuSample> synth_imu(const Trajectory& traj, const ImuNoiseSpec& noise,
                                 double imu_rate, double gravity,
                                 std::mt19937_64& rng) {
    const double dt = 1.0 / imu_rate;
    const int n = static_cast<int>(std::llround(traj.duration() * imu_rate));
    const Vector3 g_l(0.0, 0.0, -gravity);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<ImuSample> samples;
    samples.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double t0 = k * dt;
        const double t1 = (k + 1) * dt;
        const Matrix3 d0 = traj.dcm(t0);
        const Matrix3 d1 = traj.dcm(t1);

        ImuSample s;
        s.dt = dt;
        s.dtheta = rotvec_of(d0.transpose() * d1);
        s.dv = d0.transpose() * (traj.velocity(t1) - traj.velocity(t0) - g_l * dt);

        s.dtheta += noise.gyro_bias * dt;
        s.dv += noise.accel_bias * dt;
        const double sa = noise.accel_noise_density * std::sqrt(dt);
        const double sg = noise.gyro_noise_density * std::sqrt(dt);
        for (int a = 0; a < 3; ++a) s.dv(a) += sa * gauss(rng);
        for (int a = 0; a < 3; ++a) s.dtheta(a) += sg * gauss(rng);
        samples.push_back(s);
    }
    return samples;
}

FlowField synth_flow(const Pose& cam1, const RelativeMotion& motion,
                     const TerrainGrid& grid, int n, double pixel_sigma,
                     std::mt19937_64& rng) {
    if (n < 7) {
        throw ScenarioError("synth_flow: need at least 7 features, got " +
                            std::to_string(n));
    }
    const Pose cam2 = second_pose(cam1, motion);
    std::uniform_real_distribution<double> jitter(-0.02, 0.02);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Golden-angle spiral over the field of view; seeded jitter keeps
    // configurations generic.
    constexpr double kGoldenAngle = 2.39996322972865332;
    constexpr double kMaxRadius = 0.25;

    FlowField flow;
    flow.correspondences.reserve(n);
    int attempts = 0;
    const int max_attempts = 40 * n;
    int i = 0;
    while (flow.size() < n && attempts < max_attempts) {
        const int idx = attempts++;
        const double r = kMaxRadius * std::sqrt((i + 0.5) / n);
        const double a = idx * kGoldenAngle;
        ImagePoint u1(r * std::cos(a) + jitter(rng), r * std::sin(a) + jitter(rng));
        try {
            const Vector3 dir = (cam1.R * homogeneous_ray(u1)).normalized();
            const SurfaceContact ground = grid.intersect_ray(cam1.p, dir);
            const Vector3 in_cam2 = world_to_camera(cam2, ground.point);
            if (in_cam2.z() <= 1e-6) continue;
            const ImagePoint u2 = project(in_cam2);

            FlowCorrespondence corr;
            corr.u1 = u1 + pixel_sigma * ImagePoint(gauss(rng), gauss(rng));
            corr.u2 = u2 + pixel_sigma * ImagePoint(gauss(rng), gauss(rng));
            flow.correspondences.push_back(corr);
            ++i;
        } catch (const std::runtime_error&) {
            continue;  // ray escaped or behind camera; try the next slot
        }
    }
    if (flow.size() < n) {
        throw ScenarioError("synth_flow: only " + std::to_string(flow.size()) + " of " +
                            std::to_string(n) + " features valid");
    }
    return flow;
}

double EpisodeRecord::final_drift_position_error() const {
    const StepRecord& s = steps.back();
    return (s.drift.position - s.truth.position).norm();
}

double EpisodeRecord::final_corrected_position_error() const {
    const StepRecord& s = steps.back();
    return (s.corrected.position - s.truth.position).norm();
}

double EpisodeRecord::final_drift_velocity_error() const {
    const StepRecord& s = steps.back();
    return (s.drift.velocity - s.truth.velocity).norm();
}

double EpisodeRecord::final_corrected_velocity_error() const {
    const StepRecord& s = steps.back();
    return (s.corrected.velocity - s.truth.velocity).norm();
}

Matrix6 measurement_noise(const ScenarioConfig& cfg) {
    if (cfg.use_r_matrix) return cfg.r_matrix;
    Matrix6 r = Matrix6::Zero();
    r.diagonal().head<3>().setConstant(cfg.ekf_noise.r_pos);
    r.diagonal().tail<3>().setConstant(cfg.ekf_noise.r_ang);
    return r;
}

EpisodeRecord run_episode(const ScenarioConfig& cfg) {
    if (cfg.imu_rate < cfg.vision_rate) {
        throw ScenarioError("run_episode: imu_rate must be >= vision_rate");
    }
    const double stride_real = cfg.imu_rate / cfg.vision_rate;
    const int vision_stride = static_cast<int>(std::llround(stride_real));
    if (std::abs(stride_real - vision_stride) > 1e-9) {
        throw ScenarioError("run_episode: imu_rate must be an integer multiple of vision_rate");
    }
    if (cfg.n_features < 7) {
        throw ScenarioError("run_episode: n_features must be >= 7");
    }

    const TerrainGrid grid = synth_terrain(cfg.terrain);
    const Trajectory traj(cfg.trajectory, cfg.duration);

    std::mt19937_64 imu_rng(derive_seed(cfg.seed, 0));
    std::mt19937_64 vis_rng(derive_seed(cfg.seed, 1));

    const std::vector<ImuSample> samples = synth_imu(traj, cfg.imu, cfg.imu_rate, cfg.gravity, imu_rng);
    const double dt = 1.0 / cfg.imu_rate;

    NavState drift = traj.state(0.0);
    NavState corrected = drift;
    const BiasState no_bias;
    BiasState feedback_bias;

    ErrorState x = ErrorState::Zero();
    Covariance15 p = cfg.p0_diag.asDiagonal();
    const Matrix6 r_mat = measurement_noise(cfg);

    // Best estimate of the navigation state at the previous vision epoch.
    NavState epoch_state = corrected;

    EpisodeRecord record;
    record.steps.reserve(samples.size());

    for (std::size_t k = 0; k < samples.size(); ++k) {
        const ImuSample& s = samples[k];
        const double t = (k + 1) * dt;

        drift = propagate(drift, s, no_bias, cfg.gravity);

        const Matrix3 dcm_c = dcm_b_to_l(corrected.attitude);
        ImuSample compensated = s;
        compensated.dv -= feedback_bias.accel_bias * dt;
        compensated.dtheta -= feedback_bias.gyro_bias * dt;
        const Vector3 f_vec = specific_force(dcm_c, compensated);
        corrected = propagate(corrected, s, feedback_bias, cfg.gravity);

        const Matrix15 phi = assemble_phi(f_vec, dcm_c, cfg.conventional_bias_coupling);
        const Matrix15 a = transition(phi, dt);
        const Matrix15 q = process_noise(cfg.ekf_noise, dt);
        const Predicted pred = time_update(x, p, a, q);
        x = pred.x;
        p = pred.p;

        if ((k + 1) % vision_stride == 0) {
            const double t2 = t;
            const double t1 = t2 - 1.0 / cfg.vision_rate;

            VisionRecord vr;
            vr.t = t2;
            const Pose true_cam1 = camera_pose(traj.position(t1), traj.dcm(t1), cfg.camera_mount);
            const Pose true_cam2 = camera_pose(traj.position(t2), traj.dcm(t2), cfg.camera_mount);
            const RelativeMotion true_motion = relative_motion_between(true_cam1, true_cam2);

            bool applied = false;
            try {
                const FlowField flow = synth_flow(true_cam1, true_motion, grid,
                                                  cfg.n_features, cfg.pixel_noise_sigma,
                                                  vis_rng);

                const Pose guess_cam1 = camera_pose(epoch_state, cfg.camera_mount);
                const Pose guess_cam2 = camera_pose(corrected, cfg.camera_mount);
                const RelativeMotion guess_motion = relative_motion_between(guess_cam1, guess_cam2);
                const ParameterVector initial = pack_parameters(guess_cam1, guess_motion);

                const PoseMotionEstimate est = solve(initial, flow, grid, cfg.solver);
                vr.iterations = est.iterations;
                vr.residual_norm = est.final_residual_norm;
                vr.converged = est.converged;
                vr.rank = est.jacobian_rank;

                if (est.converged) {
                    const Pose vision_cam2 = second_pose(est.pose1, est.motion);
                    Pose vision_body2;
                    vision_body2.p = vision_cam2.p;
                    vision_body2.R = vision_cam2.R * cfg.camera_mount.transpose();

                    Pose true_body2;
                    true_body2.p = traj.position(t2);
                    true_body2.R = traj.dcm(t2);
                    vr.vision_error = pose_difference(vision_body2, true_body2);

                    const Measurement z = compose_measurement(vision_body2, corrected);
                    const MeasurementUpdateResult upd = measurement_update(x, p, z, r_mat);
                    vr.innovation = z - measurement_matrix() * x;
                    x = upd.x;
                    p = upd.p;

                    const CorrectedNav fed = apply_corrections(corrected, feedback_bias, x);
                    corrected = fed.state;
                    feedback_bias = fed.bias;
                    if (cfg.reset_bias_after_feedback) {
                        x.segment<6>(9).setZero();
                    }
                    applied = true;
                }
            } catch (const std::runtime_error&) {
                // solver or synthesis failure: skip this measurement
            }
            vr.applied = applied;
            if (!applied) ++record.solver_failures;
            record.vision.push_back(vr);
            epoch_state = corrected;
        }

        StepRecord step;
        step.t = t;
        step.truth = traj.state(t);
        step.drift = drift;
        step.corrected = corrected;
        step.p_diag = p.diagonal();
        record.steps.push_back(step);
    }
    return record;
}

MonteCarloSummary monte_carlo(const ScenarioConfig& cfg, int n_runs, int n_threads) {
    if (n_runs < 1) {
        throw ScenarioError("monte_carlo: n_runs must be >= 1");
    }
    std::vector<EpisodeRecord> records(n_runs);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= n_runs) return;
            ScenarioConfig run_cfg = cfg;
            run_cfg.seed = derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(r));
            records[r] = run_episode(run_cfg);
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    MonteCarloSummary sum;
    sum.n_runs = n_runs;
    const std::size_t n_steps = records.front().steps.size();
    sum.times.resize(n_steps);
    sum.drift_pos_rms.assign(n_steps, 0.0);
    sum.corrected_pos_rms.assign(n_steps, 0.0);
    sum.drift_vel_rms.assign(n_steps, 0.0);
    sum.corrected_vel_rms.assign(n_steps, 0.0);

    for (const EpisodeRecord& rec : records) {
        for (std::size_t k = 0; k < n_steps; ++k) {
            const StepRecord& s = rec.steps[k];
            sum.times[k] = s.t;
            sum.drift_pos_rms[k] += (s.drift.position - s.truth.position).squaredNorm();
            sum.corrected_pos_rms[k] += (s.corrected.position - s.truth.position).squaredNorm();
            sum.drift_vel_rms[k] += (s.drift.velocity - s.truth.velocity).squaredNorm();
            sum.corrected_vel_rms[k] += (s.corrected.velocity - s.truth.velocity).squaredNorm();
        }
    }
    for (std::size_t k = 0; k < n_steps; ++k) {
        sum.drift_pos_rms[k] = std::sqrt(sum.drift_pos_rms[k] / n_runs);
        sum.corrected_pos_rms[k] = std::sqrt(sum.corrected_pos_rms[k] / n_runs);
        sum.drift_vel_rms[k] = std::sqrt(sum.drift_vel_rms[k] / n_runs);
        sum.corrected_vel_rms[k] = std::sqrt(sum.corrected_vel_rms[k] / n_runs);
    }

    // Scatter of applied vision measurements about the truth.
    Vector6 mean = Vector6::Zero();
    int n_meas = 0, n_epochs = 0, n_failed = 0;
    for (const EpisodeRecord& rec : records) {
        n_failed += rec.solver_failures;
        for (const VisionRecord& v : rec.vision) {
            ++n_epochs;
            if (v.applied) {
                mean += v.vision_error;
                ++n_meas;
            }
        }
    }
    if (n_meas > 0) mean /= n_meas;
    Matrix6 cov = Matrix6::Zero();
    for (const EpisodeRecord& rec : records) {
        for (const VisionRecord& v : rec.vision) {
            if (v.applied) {
                const Vector6 d = v.vision_error - mean;
                cov += d * d.transpose();
            }
        }
    }
    if (n_meas > 1) cov /= (n_meas - 1);
    sum.measurement_covariance = cov;
    sum.n_measurements = n_meas;
    sum.n_solver_failures = n_failed;
    sum.convergence_rate = n_epochs > 0 ? 1.0 - static_cast<double>(n_failed) / n_epochs : 1.0;
    return sum;
}

SolverScatter solver_scatter(const ScenarioConfig& cfg, int n_trials) {
    const TerrainGrid grid = synth_terrain(cfg.terrain);
    const Trajectory traj(cfg.trajectory, cfg.duration);
    const double t1 = 0.0;
    const double t2 = 1.0 / cfg.vision_rate;

    const Pose true_cam1 = camera_pose(traj.position(t1), traj.dcm(t1), cfg.camera_mount);
    const Pose true_cam2 = camera_pose(traj.position(t2), traj.dcm(t2), cfg.camera_mount);
    const RelativeMotion true_motion = relative_motion_between(true_cam1, true_cam2);
    const ParameterVector truth = pack_parameters(true_cam1, true_motion);

    Pose true_body2;
    true_body2.p = traj.position(t2);
    true_body2.R = traj.dcm(t2);

    SolverScatter out;
    out.n_trials = n_trials;
    std::vector<Vector6> errors;
    errors.reserve(n_trials);
    double pos_sq = 0.0, att_sq = 0.0;

    for (int trial = 0; trial < n_trials; ++trial) {
        std::mt19937_64 rng(derive_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(trial)));
        std::uniform_real_distribution<double> u(-1.0, 1.0);

        ParameterVector initial = truth;
        for (int a = 0; a < 3; ++a) initial(a) += cfg.init_perturb_pos * u(rng);
        for (int a = 3; a < 6; ++a) initial(a) += cfg.init_perturb_att * u(rng);
        for (int a = 9; a < 12; ++a) initial(a) += cfg.init_perturb_att * u(rng);

        try {
            const FlowField flow = synth_flow(true_cam1, true_motion, grid, cfg.n_features,
                                              cfg.pixel_noise_sigma, rng);
            const PoseMotionEstimate est = solve(initial, flow, grid, cfg.solver);
            if (!est.converged) continue;

            const Pose vision_cam2 = second_pose(est.pose1, est.motion);
            Pose vision_body2;
            vision_body2.p = vision_cam2.p;
            vision_body2.R = vision_cam2.R * cfg.camera_mount.transpose();
            errors.push_back(pose_difference(vision_body2, true_body2));

            pos_sq += (est.pose1.p - true_cam1.p).squaredNorm();
            const double da = rotation_distance(est.pose1.R, true_cam1.R);
            att_sq += da * da;
            ++out.n_converged;
        } catch (const std::runtime_error&) {
            continue;
        }
    }

    if (out.n_converged > 0) {
        for (const Vector6& e : errors) out.mean += e;
        out.mean /= out.n_converged;
        for (const Vector6& e : errors) {
            const Vector6 d = e - out.mean;
            out.covariance += d * d.transpose();
        }
        if (out.n_converged > 1) out.covariance /= (out.n_converged - 1);
        out.pose1_position_rmse = std::sqrt(pos_sq / out.n_converged);
        out.pose1_attitude_rmse = std::sqrt(att_sq / out.n_converged);
    }
    return out;
}

ScenarioConfig default_scenario() {
    ScenarioConfig cfg;
    cfg.terrain.kind = TerrainSpec::Kind::Rolling;
    cfg.terrain.amplitude = 8.0;
    cfg.terrain.wavelength = 150.0;
    cfg.terrain.seed = 7;

    cfg.trajectory.start = Vector3(-1200.0, 200.0, 100.0);
    cfg.trajectory.speed = 30.0;
    cfg.trajectory.heading = 0.0;
    cfg.trajectory.segments = {
        {25.0, 0.0, 0.0},
        {25.0, 1.5 * kDegToRad, 0.0},
        {25.0, -1.5 * kDegToRad, 0.0},
        {25.0, 0.0, 0.0},
    };

    cfg.imu.accel_noise_density = 0.002;
    cfg.imu.gyro_noise_density = 2e-5;
    cfg.imu.accel_bias = Vector3::Constant(0.01);
    cfg.imu.gyro_bias = Vector3::Constant(0.001);

    cfg.ekf_noise.sigma_accel = 0.02;
    cfg.ekf_noise.sigma_gyro = 2e-5;
    cfg.ekf_noise.q_bias_accel = 1e-10;
    cfg.ekf_noise.q_bias_gyro = 1e-12;
    cfg.ekf_noise.r_pos = 0.25;
    cfg.ekf_noise.r_ang = 1e-6;

    cfg.p0_diag.segment<3>(0).setConstant(1.0);
    cfg.p0_diag.segment<3>(3).setConstant(0.01);
    cfg.p0_diag.segment<3>(6).setConstant(1e-6);
    cfg.p0_diag.segment<3>(9).setConstant(4e-4);
    cfg.p0_diag.segment<3>(12).setConstant(4e-6);

    cfg.camera_mount = dcm_b_to_l(M_PI, 0.0, 0.0);  // nadir-looking
    return cfg;
}

ScenarioConfig scenario_from_config(const Config& cfg) {
    ScenarioConfig sc = default_scenario();

    const std::string kind = cfg.get_string("terrain.kind", "rolling");
    if (kind == "flat") sc.terrain.kind = TerrainSpec::Kind::Flat;
    else if (kind == "inclined") sc.terrain.kind = TerrainSpec::Kind::Inclined;
    else if (kind == "rolling") sc.terrain.kind = TerrainSpec::Kind::Rolling;
    else throw ConfigError(cfg.name() + ": terrain.kind must be flat|inclined|rolling, got '" + kind + "'");

    sc.terrain.slope = cfg.get_double("terrain.slope", sc.terrain.slope);
    sc.terrain.amplitude = cfg.get_double("terrain.amplitude_m", sc.terrain.amplitude);
    sc.terrain.wavelength = cfg.get_double("terrain.wavelength_m", sc.terrain.wavelength);
    sc.terrain.seed = static_cast<std::uint64_t>(cfg.get_double("terrain.seed", static_cast<double>(sc.terrain.seed)));
    sc.terrain.origin_x = cfg.get_double("terrain.origin_x", sc.terrain.origin_x);
    sc.terrain.origin_y = cfg.get_double("terrain.origin_y", sc.terrain.origin_y);
    sc.terrain.cell_size = cfg.get_double("terrain.cell_size", sc.terrain.cell_size);
    sc.terrain.n_cols = cfg.get_int("terrain.n_cols", sc.terrain.n_cols);
    sc.terrain.n_rows = cfg.get_int("terrain.n_rows", sc.terrain.n_rows);

    sc.trajectory.start.x() = cfg.get_double("trajectory.start_x", sc.trajectory.start.x());
    sc.trajectory.start.y() = cfg.get_double("trajectory.start_y", sc.trajectory.start.y());
    sc.trajectory.start.z() = cfg.get_double("trajectory.start_z", sc.trajectory.start.z());
    sc.trajectory.speed = cfg.get_double("trajectory.speed_mps", sc.trajectory.speed);
    sc.trajectory.heading = cfg.get_double("trajectory.heading_deg", sc.trajectory.heading / kDegToRad) * kDegToRad;
    if (!cfg.keys_with_prefix("trajectory.segment.").empty()) {
        sc.trajectory.segments.clear();
        for (int i = 0;; ++i) {
            const std::string prefix = "trajectory.segment." + std::to_string(i) + ".";
            if (!cfg.has(prefix + "duration_s")) break;
            TrajectorySegment seg;
            seg.duration = cfg.get_double(prefix + "duration_s");
            seg.yaw_rate = cfg.get_double(prefix + "yaw_rate_dps", 0.0) * kDegToRad;
            seg.climb_rate = cfg.get_double(prefix + "climb_rate_mps", 0.0);
            sc.trajectory.segments.push_back(seg);
        }
    }

    sc.duration = cfg.get_double("duration_s", sc.duration);
    sc.gravity = cfg.get_double("gravity", sc.gravity);
    sc.seed = static_cast<std::uint64_t>(cfg.get_double("seed", static_cast<double>(sc.seed)));

    sc.imu_rate = cfg.get_double("imu.rate_hz", sc.imu_rate);
    sc.imu.accel_noise_density = cfg.get_double("imu.accel_noise_density", sc.imu.accel_noise_density);
    sc.imu.gyro_noise_density = cfg.get_double("imu.gyro_noise_density", sc.imu.gyro_noise_density);
    sc.imu.accel_bias.setConstant(cfg.get_double("imu.accel_bias", 0.0));
    sc.imu.gyro_bias.setConstant(cfg.get_double("imu.gyro_bias", 0.0));
    for (int a = 0; a < 3; ++a) {
        const std::string axis(1, "xyz"[a]);
        sc.imu.accel_bias(a) = cfg.get_double("imu.accel_bias_" + axis, sc.imu.accel_bias(a));
        sc.imu.gyro_bias(a) = cfg.get_double("imu.gyro_bias_" + axis, sc.imu.gyro_bias(a));
    }

    sc.vision_rate = cfg.get_double("vision.rate_hz", sc.vision_rate);
    sc.n_features = cfg.get_int("vision.features", sc.n_features);
    sc.pixel_noise_sigma = cfg.get_double("vision.pixel_sigma", sc.pixel_noise_sigma);

    const double mr = cfg.get_double("camera.mount_roll_deg", 180.0) * kDegToRad;
    const double mp = cfg.get_double("camera.mount_pitch_deg", 0.0) * kDegToRad;
    const double my = cfg.get_double("camera.mount_yaw_deg", 0.0) * kDegToRad;
    sc.camera_mount = dcm_b_to_l(mr, mp, my);

    sc.solver.max_iterations = cfg.get_int("solver.max_iterations", sc.solver.max_iterations);
    sc.solver.step_tolerance = cfg.get_double("solver.step_tolerance", sc.solver.step_tolerance);
    sc.solver.residual_tolerance = cfg.get_double("solver.residual_tolerance", sc.solver.residual_tolerance);
    sc.solver.gn_stall_window = cfg.get_int("solver.gn_stall_window", sc.solver.gn_stall_window);
    sc.solver.lm_lambda_init = cfg.get_double("solver.lm_lambda_init", sc.solver.lm_lambda_init);
    sc.solver.lm_lambda_factor = cfg.get_double("solver.lm_lambda_factor", sc.solver.lm_lambda_factor);
    sc.solver.fd_step = cfg.get_double("solver.fd_step", sc.solver.fd_step);
    sc.solver.huber_delta = cfg.get_double("solver.huber_delta", sc.solver.huber_delta);
    sc.solver.recompute_ground_points = cfg.get_bool("solver.recompute_ground_points", sc.solver.recompute_ground_points);
    sc.solver.rank_tolerance = cfg.get_double("solver.rank_tolerance", sc.solver.rank_tolerance);

    sc.ekf_noise.sigma_accel = cfg.get_double("ekf.sigma_accel", sc.ekf_noise.sigma_accel);
    sc.ekf_noise.sigma_gyro = cfg.get_double("ekf.sigma_gyro", sc.ekf_noise.sigma_gyro);
    sc.ekf_noise.q_bias_accel = cfg.get_double("ekf.q_bias_accel", sc.ekf_noise.q_bias_accel);
    sc.ekf_noise.q_bias_gyro = cfg.get_double("ekf.q_bias_gyro", sc.ekf_noise.q_bias_gyro);
    sc.ekf_noise.r_pos = cfg.get_double("ekf.r_pos", sc.ekf_noise.r_pos);
    sc.ekf_noise.r_ang = cfg.get_double("ekf.r_ang", sc.ekf_noise.r_ang);
    sc.conventional_bias_coupling = cfg.get_bool("ekf.conventional_bias_coupling", sc.conventional_bias_coupling);
    sc.reset_bias_after_feedback = cfg.get_bool("ekf.reset_bias_after_feedback", sc.reset_bias_after_feedback);

    auto p0 = [&](const std::string& key, int offset, double fallback_std) {
        const double std_dev = cfg.get_double(key, fallback_std);
        sc.p0_diag.segment<3>(offset).setConstant(std_dev * std_dev);
    };
    p0("ekf.p0_pos_std", 0, std::sqrt(sc.p0_diag(0)));
    p0("ekf.p0_vel_std", 3, std::sqrt(sc.p0_diag(3)));
    p0("ekf.p0_att_std", 6, std::sqrt(sc.p0_diag(6)));
    p0("ekf.p0_bias_accel_std", 9, std::sqrt(sc.p0_diag(9)));
    p0("ekf.p0_bias_gyro_std", 12, std::sqrt(sc.p0_diag(12)));

    sc.init_perturb_pos = cfg.get_double("init.perturb_pos_m", sc.init_perturb_pos);
    sc.init_perturb_att = cfg.get_double("init.perturb_att_deg", sc.init_perturb_att / kDegToRad) * kDegToRad;

    return sc;
}

}  // namespace terranav
