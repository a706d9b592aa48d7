#pragma once

#include <vector>

#include <Eigen/Core>

#include "terranav/camera.hpp"
#include "terranav/dtm.hpp"
#include "terranav/types.hpp"

namespace terranav {

struct FlowCorrespondence {
    ImagePoint u1 = ImagePoint::Zero();
    ImagePoint u2 = ImagePoint::Zero();
};

// Optical-flow field between two frames. The solver needs at least
// seven correspondences for a nonsingular linearization.
struct FlowField {
    std::vector<FlowCorrespondence> correspondences;

    int size() const { return static_cast<int>(correspondences.size()); }
};

// Twelve parameters: [p1 (m), euler1 (rad), p12 (m), euler12 (rad)].
// Rotations use the dcm_b_to_l Euler convention throughout.
using ParameterVector = Vector12;

ParameterVector pack_parameters(const Pose& pose1, const RelativeMotion& motion);
Pose pose_from_parameters(const ParameterVector& params);
RelativeMotion motion_from_parameters(const ParameterVector& params);

struct SolverConfig {
    int max_iterations = 50;
    double step_tolerance = 1e-10;      // relative step size
    double residual_tolerance = 1e-12;  // stacked residual 2-norm
    int gn_stall_window = 3;            // non-decreasing iterations before LM
    double lm_lambda_init = 1e-3;
    double lm_lambda_factor = 10.0;
    double fd_step = 1e-7;              // relative finite-difference step
    double huber_delta = 0.0;           // robust loss threshold; <= 0 disables
    bool frozen_ground_points = false;  // never re-intersect after the initial guess
    double rank_tolerance = 1e-8;       // relative singular-value cutoff
    double eps_den = kDenominatorGuard;
};

struct PoseMotionEstimate {
    Pose pose1;
    RelativeMotion motion;
    bool converged = false;
    int iterations = 0;
    double final_residual_norm = 0.0;
    int jacobian_rank = 0;
    double condition_number = 0.0;  // of the final normal-equations matrix
    int excluded_features = 0;      // robust mode only
};

// One tangent-plane contact per correspondence, obtained by intersecting
// the ray through each first-frame feature with the DTM.
std::vector<SurfaceContact> ground_point_estimates(const ParameterVector& params,
                                                   const FlowField& flow,
                                                   const TerrainGrid& grid);

// Normalized constraint residual of one feature:
// P(q2, q2) * c2G / |c2G| with c2G = p12 + R12 L (G_E - p1).
Vector3 residual_one(const ParameterVector& params, const FlowCorrespondence& corr,
                     const SurfaceContact& contact,
                     double eps_den = kDenominatorGuard);

// All residual blocks stacked into a 3n-vector; ground contacts are
// recomputed from the current parameters unless frozen ones are given.
Eigen::VectorXd stacked_residual(const ParameterVector& params, const FlowField& flow,
                                 const TerrainGrid& grid,
                                 const std::vector<SurfaceContact>* frozen_contacts = nullptr);

// Central finite-difference Jacobian of the stacked residual, 3n x 12.
// With frozen contacts the differentiated system is the one the solver
// actually linearizes; without them ground points are re-intersected at
// every evaluation.
Eigen::MatrixXd jacobian_fd(const ParameterVector& params, const FlowField& flow,
                            const TerrainGrid& grid, double fd_step = 1e-7,
                            const std::vector<SurfaceContact>* frozen_contacts = nullptr);

// Numerical rank: singular values above rel_tol times the largest.
int matrix_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-6);

// Gauss-Newton with permanent Levenberg-Marquardt fallback once the
// residual norm stops decreasing for gn_stall_window iterations.
// Ground contacts are re-intersected at every accepted iterate and held
// fixed inside each linearization; with frozen_ground_points they stay
// at the initial guess for the whole solve.
PoseMotionEstimate solve(const ParameterVector& initial, const FlowField& flow,
                         const TerrainGrid& grid, const SolverConfig& config = {});

}  // namespace terranav
