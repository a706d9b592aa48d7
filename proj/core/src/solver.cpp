#include "terranav/solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "terranav/attitude.hpp"
#include "terranav/errors.hpp"

namespace terranav {

namespace {

// Robust (Huber) cost of a stacked residual; plain half squared norm
// when the loss is disabled.
double robust_cost(const Eigen::VectorXd& r, double delta) {
    if (delta <= 0.0) return 0.5 * r.squaredNorm();
    double cost = 0.0;
    for (int i = 0; i + 2 < r.size(); i += 3) {
        const double e = r.segment<3>(i).norm();
        cost += (e <= delta) ? 0.5 * e * e : delta * (e - 0.5 * delta);
    }
    return cost;
}

// IRLS weights per feature block (sqrt applied to rows later).
Eigen::VectorXd huber_weights(const Eigen::VectorXd& r, double delta) {
    const int n = static_cast<int>(r.size()) / 3;
    Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
    if (delta <= 0.0) return w;
    for (int i = 0; i < n; ++i) {
        const double e = r.segment<3>(3 * i).norm();
        if (e > delta) w(i) = delta / e;
    }
    return w;
}

struct Evaluation {
    Eigen::VectorXd residual;
    int excluded = 0;
};

// Stacked residual with optional per-feature exclusion (robust mode).
Evaluation evaluate(const ParameterVector& params, const FlowField& flow,
                    const TerrainGrid& grid,
                    const std::vector<SurfaceContact>* frozen,
                    double eps_den, bool allow_exclusion) {
    const int n = flow.size();
    Evaluation out;
    out.residual = Eigen::VectorXd::Zero(3 * n);

    const Pose pose1 = pose_from_parameters(params);
    const RelativeMotion motion = motion_from_parameters(params);

    for (int i = 0; i < n; ++i) {
        const FlowCorrespondence& corr = flow.correspondences[i];
        try {
            SurfaceContact contact;
            if (frozen != nullptr) {
                contact = (*frozen)[i];
            } else {
                const Vector3 q1 = homogeneous_ray(corr.u1);
                const Vector3 dir = (pose1.R * q1).normalized();
                contact = grid.intersect_ray(pose1.p, dir);
            }
            const Vector3 q1 = homogeneous_ray(corr.u1);
            const Vector3 q2 = homogeneous_ray(corr.u2);
            const Matrix3 l = l_operator(q1, contact.normal, pose1.R, eps_den);
            const Vector3 c2g = motion.p12 + motion.R12 * (l * (contact.point - pose1.p));
            const double norm = c2g.norm();
            if (norm <= eps_den) {
                throw DegenerateDirectionError("residual: |c2G| below guard");
            }
            out.residual.segment<3>(3 * i) =
                projection_operator(q2, q2, eps_den) * c2g / norm;
        } catch (const std::runtime_error& e) {
            if (allow_exclusion) {
                ++out.excluded;  // zero rows, weight-zero feature
            } else {
                throw DegenerateDirectionError("feature " + std::to_string(i) + ": " +
                                               e.what());
            }
        }
    }
    return out;
}

Eigen::MatrixXd jacobian_impl(const ParameterVector& params, const FlowField& flow,
                              const TerrainGrid& grid,
                              const std::vector<SurfaceContact>* frozen,
                              double fd_step, double eps_den, bool allow_exclusion) {
    const int n = flow.size();
    Eigen::MatrixXd j(3 * n, 12);
    for (int k = 0; k < 12; ++k) {
        const double h = fd_step * std::max(1.0, std::abs(params(k)));
        ParameterVector plus = params, minus = params;
        plus(k) += h;
        minus(k) -= h;
        const Eigen::VectorXd rp =
            evaluate(plus, flow, grid, frozen, eps_den, allow_exclusion).residual;
        const Eigen::VectorXd rm =
            evaluate(minus, flow, grid, frozen, eps_den, allow_exclusion).residual;
        j.col(k) = (rp - rm) / (2.0 * h);
    }
    return j;
}

}  // namespace

ParameterVector pack_parameters(const Pose& pose1, const RelativeMotion& motion) {
    ParameterVector p;
    p.segment<3>(0) = pose1.p;
    p.segment<3>(3) = euler_angles_of(pose1.R);
    p.segment<3>(6) = motion.p12;
    p.segment<3>(9) = euler_angles_of(motion.R12);
    return p;
}

Pose pose_from_parameters(const ParameterVector& params) {
    Pose pose;
    pose.p = params.segment<3>(0);
    pose.R = dcm_b_to_l(params(3), params(4), params(5));
    return pose;
}

RelativeMotion motion_from_parameters(const ParameterVector& params) {
    RelativeMotion motion;
    motion.p12 = params.segment<3>(6);
    motion.R12 = dcm_b_to_l(params(9), params(10), params(11));
    return motion;
}

std::vector<SurfaceContact> ground_point_estimates(const ParameterVector& params,
                                                   const FlowField& flow,
                                                   const TerrainGrid& grid) {
    const Pose pose1 = pose_from_parameters(params);
    std::vector<SurfaceContact> contacts;
    contacts.reserve(flow.correspondences.size());
    int i = 0;
    for (const FlowCorrespondence& corr : flow.correspondences) {
        const Vector3 q1 = homogeneous_ray(corr.u1);
        const Vector3 dir = (pose1.R * q1).normalized();
        try {
            contacts.push_back(grid.intersect_ray(pose1.p, dir));
        } catch (const RayEscapeError& e) {
            throw RayEscapeError("feature " + std::to_string(i) + ": " + e.what());
        } catch (const DomainError& e) {
            throw DomainError("feature " + std::to_string(i) + ": " + e.what());
        }
        ++i;
    }
    return contacts;
}

Vector3 residual_one(const ParameterVector& params, const FlowCorrespondence& corr,
                     const SurfaceContact& contact, double eps_den) {
    const Pose pose1 = pose_from_parameters(params);
    const RelativeMotion motion = motion_from_parameters(params);
    const Vector3 q1 = homogeneous_ray(corr.u1);
    const Vector3 q2 = homogeneous_ray(corr.u2);
    const Matrix3 l = l_operator(q1, contact.normal, pose1.R, eps_den);
    const Vector3 c2g = motion.p12 + motion.R12 * (l * (contact.point - pose1.p));
    const double norm = c2g.norm();
    if (norm <= eps_den) {
        throw DegenerateDirectionError("residual_one: |c2G| below guard");
    }
    return projection_operator(q2, q2, eps_den) * c2g / norm;
}

Eigen::VectorXd stacked_residual(const ParameterVector& params, const FlowField& flow,
                                 const TerrainGrid& grid,
                                 const std::vector<SurfaceContact>* frozen_contacts) {
    return evaluate(params, flow, grid, frozen_contacts, kDenominatorGuard, false).residual;
}

Eigen::MatrixXd jacobian_fd(const ParameterVector& params, const FlowField& flow,
                            const TerrainGrid& grid, double fd_step,
                            const std::vector<SurfaceContact>* frozen_contacts) {
    return jacobian_impl(params, flow, grid, frozen_contacts, fd_step, kDenominatorGuard,
                         false);
}

int matrix_rank(const Eigen::MatrixXd& m, double rel_tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cutoff = rel_tol * sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++rank;
    }
    return rank;
}

PoseMotionEstimate solve(const ParameterVector& initial, const FlowField& flow,
                         const TerrainGrid& grid, const SolverConfig& config) {
    if (flow.size() < 7) {
        throw DegenerateGeometryError("solve: need at least 7 correspondences, got " +
                                      std::to_string(flow.size()));
    }
    const bool robust = config.huber_delta > 0.0;

    // Paper construction: ground points are intersected once, from the
    // initial-guess pose, and the tangent-plane constraint is solved with
    // them held fixed. Re-intersection at every evaluation is available
    // for comparison but makes the landscape piecewise-smooth.
    std::vector<SurfaceContact> frozen;
    const std::vector<SurfaceContact>* frozen_ptr = nullptr;
    if (!config.recompute_ground_points) {
        frozen = ground_point_estimates(initial, flow, grid);
        frozen_ptr = &frozen;
    }

    auto eval = [&](const ParameterVector& x) {
        return evaluate(x, flow, grid, frozen_ptr, config.eps_den, robust);
    };
    auto jac = [&](const ParameterVector& x) {
        return jacobian_impl(x, flow, grid, frozen_ptr, config.fd_step, config.eps_den,
                             robust);
    };

    ParameterVector x = initial;
    Evaluation ev = eval(x);
    double cost = robust_cost(ev.residual, config.huber_delta);

    Eigen::MatrixXd j = jac(x);
    {
        const int rank0 = matrix_rank(j, config.rank_tolerance);
        if (rank0 < 12) {
            throw DegenerateGeometryError("solve: degenerate geometry, Jacobian rank " +
                                          std::to_string(rank0) + " < 12 at initial point");
        }
    }

    PoseMotionEstimate est;
    est.excluded_features = ev.excluded;

    bool lm_mode = false;
    double lambda = config.lm_lambda_init;
    int stall = 0;
    bool converged = ev.residual.norm() <= config.residual_tolerance;
    int iter = 0;
    bool jacobian_failed = false;

    while (!converged && iter < config.max_iterations) {
        ++iter;

        const Eigen::VectorXd w = huber_weights(ev.residual, config.huber_delta);
        Eigen::MatrixXd jw = j;
        Eigen::VectorXd rw = ev.residual;
        if (robust) {
            for (int i = 0; i < w.size(); ++i) {
                const double s = std::sqrt(w(i));
                jw.middleRows<3>(3 * i) *= s;
                rw.segment<3>(3 * i) *= s;
            }
        }
        Eigen::Matrix<double, 12, 12> a = jw.transpose() * jw;
        const Vector12 g = jw.transpose() * rw;

        bool accepted = false;
        if (!lm_mode) {
            const Vector12 step = Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 12, 12>>(a)
                                      .solve(-g);
            const ParameterVector xn = x + step;
            bool eval_ok = true;
            Evaluation evn;
            try {
                evn = eval(xn);
            } catch (const std::runtime_error&) {
                eval_ok = false;
            }
            if (eval_ok) {
                const double cost_n = robust_cost(evn.residual, config.huber_delta);
                stall = (cost_n >= cost) ? stall + 1 : 0;
                x = xn;
                ev = evn;
                cost = cost_n;
                accepted = true;
                if (step.norm() <= config.step_tolerance * (x.norm() + config.step_tolerance)) {
                    converged = true;
                }
            } else {
                // Step left the valid region: treat as a stalled iteration
                // and stay at the current point.
                ++stall;
            }
            if (stall >= config.gn_stall_window) {
                lm_mode = true;  // permanent switch
            }
        } else {
            Eigen::Matrix<double, 12, 12> ad = a;
            for (int k = 0; k < 12; ++k) {
                ad(k, k) += lambda * std::max(a(k, k), 1e-12);
            }
            const Vector12 step = Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 12, 12>>(ad)
                                      .solve(-g);
            const ParameterVector xn = x + step;
            bool eval_ok = true;
            Evaluation evn;
            try {
                evn = eval(xn);
            } catch (const std::runtime_error&) {
                eval_ok = false;
            }
            const double cost_n =
                eval_ok ? robust_cost(evn.residual, config.huber_delta) : cost;
            if (eval_ok && cost_n < cost) {
                x = xn;
                ev = evn;
                cost = cost_n;
                lambda /= config.lm_lambda_factor;
                accepted = true;
                if (step.norm() <= config.step_tolerance * (x.norm() + config.step_tolerance)) {
                    converged = true;
                }
            } else {
                lambda *= config.lm_lambda_factor;
            }
        }

        if (!converged && ev.residual.norm() <= config.residual_tolerance) {
            converged = true;
        }
        if (converged) break;

        if (accepted) {
            try {
                j = jac(x);
            } catch (const std::runtime_error&) {
                jacobian_failed = true;
                break;
            }
        }
    }

    if (!jacobian_failed) {
        try {
            j = jac(x);
        } catch (const std::runtime_error&) {
            // keep the last valid Jacobian for reporting
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
    const auto& sv = svd.singularValues();
    est.jacobian_rank = matrix_rank(j, config.rank_tolerance);
    const double smin = sv(sv.size() - 1);
    est.condition_number = (smin > 0.0) ? (sv(0) / smin) * (sv(0) / smin)
                                        : std::numeric_limits<double>::infinity();

    est.pose1 = pose_from_parameters(x);
    est.motion = motion_from_parameters(x);
    est.converged = converged;
    est.iterations = iter;
    est.final_residual_norm = ev.residual.norm();
    est.excluded_features = ev.excluded;
    return est;
}

}  // namespace terranav
