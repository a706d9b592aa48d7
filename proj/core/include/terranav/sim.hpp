#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "terranav/config.hpp"
#include "terranav/dtm.hpp"
#include "terranav/ekf.hpp"
#include "terranav/ins.hpp"
#include "terranav/solver.hpp"
#include "terranav/types.hpp"

namespace terranav {

struct TerrainSpec {
    enum class Kind { Flat, Inclined, Rolling };
    Kind kind = Kind::Rolling;
    double slope = 0.1;        // inclined: h = slope * x
    double amplitude = 5.0;    // rolling, meters
    double wavelength = 200.0; // rolling, meters
    std::uint64_t seed = 1;    // rolling phases
    double origin_x = -2000.0;
    double origin_y = -2000.0;
    double cell_size = 20.0;
    int n_cols = 201;
    int n_rows = 201;
};

// Deterministic terrain from the spec; rolling terrain is the sum of two
// orthogonal sinusoids with seeded phases.
TerrainGrid synth_terrain(const TerrainSpec& spec);

struct TrajectorySegment {
    double duration = 10.0;
    double yaw_rate = 0.0;    // rad/s
    double climb_rate = 0.0;  // m/s
};

struct TrajectorySpec {
    Vector3 start{0.0, 0.0, 100.0};
    double speed = 30.0;    // m/s, horizontal
    double heading = 0.0;   // initial psi, rad
    std::vector<TrajectorySegment> segments;
};

// Piecewise closed-form ground truth. Attitude is yaw-only; level wings.
class Trajectory {
public:
    Trajectory(const TrajectorySpec& spec, double duration);

    Vector3 position(double t) const;
    Vector3 velocity(double t) const;
    Vector3 attitude(double t) const;  // (0, 0, psi)
    Matrix3 dcm(double t) const;
    NavState state(double t) const;
    double duration() const { return duration_; }

private:
    struct Node {
        double t0;
        Vector3 p0;
        double psi0;
        double yaw_rate;
        double climb_rate;
    };
    const Node& node_at(double t) const;

    std::vector<Node> nodes_;
    double speed_;
    double duration_;
};

struct ImuNoiseSpec {
    double accel_noise_density = 0.0;  // m/s^2 per sqrt(Hz)
    double gyro_noise_density = 0.0;   // rad/s per sqrt(Hz)
    Vector3 accel_bias = Vector3::Zero();
    Vector3 gyro_bias = Vector3::Zero();
};

// Body-frame increments reverse-engineered from the truth so that
// noise-free, bias-free propagation reproduces the truth to integration
// order; bias*dt plus white noise scaled by sqrt(dt) added on top.
std::vector<ImuSample> synth_imu(const Trajectory& traj, const ImuNoiseSpec& noise,
                                 double imu_rate, double gravity,
                                 std::mt19937_64& rng);

// Exact two-frame correspondences of terrain points seen from pose1,
// with independent Gaussian pixel noise on all four coordinates.
FlowField synth_flow(const Pose& cam1, const RelativeMotion& motion,
                     const TerrainGrid& grid, int n, double pixel_sigma,
                     std::mt19937_64& rng);

struct ScenarioConfig {
    TerrainSpec terrain;
    TrajectorySpec trajectory;
    double duration = 100.0;
    double imu_rate = 100.0;
    double vision_rate = 1.0;
    int n_features = 10;
    double pixel_noise_sigma = 1e-3;
    ImuNoiseSpec imu;
    NoiseConfig ekf_noise;
    bool use_r_matrix = false;
    Matrix6 r_matrix = Matrix6::Identity();
    Vector15 p0_diag = Vector15::Ones();
    Matrix3 camera_mount = Matrix3::Identity();  // camera-to-body rotation
    SolverConfig solver;
    bool conventional_bias_coupling = true;
    bool reset_bias_after_feedback = false;
    double init_perturb_pos = 5.0;   // m per axis, solve/calibration trials
    double init_perturb_att = 0.0174532925199432957;  // rad per axis (1 deg)
    std::uint64_t seed = 1;
    double gravity = kStandardGravity;
};

// Build a scenario from a flat key-value config; unknown keys are
// rejected, missing keys fall back to the defaults above.
ScenarioConfig scenario_from_config(const Config& cfg);
ScenarioConfig default_scenario();

// Measurement noise matrix used by the filter (configured diagonal or a
// calibrated 6x6 loaded from file).
Matrix6 measurement_noise(const ScenarioConfig& cfg);

struct StepRecord {
    double t;
    NavState truth;
    NavState drift;
    NavState corrected;
    Vector15 p_diag;
};

struct VisionRecord {
    double t = 0.0;
    int iterations = 0;
    double residual_norm = 0.0;
    bool converged = false;
    int rank = 0;
    bool applied = false;
    Measurement innovation = Measurement::Zero();
    Vector6 vision_error = Vector6::Zero();  // vision pose2 minus truth
};

struct EpisodeRecord {
    std::vector<StepRecord> steps;
    std::vector<VisionRecord> vision;
    int solver_failures = 0;

    double final_drift_position_error() const;
    double final_corrected_position_error() const;
    double final_drift_velocity_error() const;
    double final_corrected_velocity_error() const;
};

// Closed loop: truth advance, dual INS propagation (drift and corrected),
// EKF time update at IMU rate; vision solve, measurement update, and
// error feedback at vision rate.
EpisodeRecord run_episode(const ScenarioConfig& cfg);

struct MonteCarloSummary {
    std::vector<double> times;
    std::vector<double> drift_pos_rms;
    std::vector<double> corrected_pos_rms;
    std::vector<double> drift_vel_rms;
    std::vector<double> corrected_vel_rms;
    Matrix6 measurement_covariance = Matrix6::Zero();
    int n_runs = 0;
    int n_measurements = 0;
    int n_solver_failures = 0;
    double convergence_rate = 1.0;
};

// Independent seeded episodes; per-run seeds depend only on the base
// seed and the run index.
MonteCarloSummary monte_carlo(const ScenarioConfig& cfg, int n_runs, int n_threads = 1);

struct SolverScatter {
    Matrix6 covariance = Matrix6::Zero();  // pose2 measurement error scatter
    Vector6 mean = Vector6::Zero();
    double pose1_position_rmse = 0.0;
    double pose1_attitude_rmse = 0.0;
    int n_trials = 0;
    int n_converged = 0;
};

// Repeated single solves of the first vision epoch with perturbed
// initial guesses; feeds the measurement-noise calibration.
SolverScatter solver_scatter(const ScenarioConfig& cfg, int n_trials);

// Deterministic per-run seed derivation.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace terranav
