#pragma once

#include <Eigen/Core>

namespace terranav {

using Vector3 = Eigen::Vector3d;
using Vector2 = Eigen::Vector2d;
using Matrix3 = Eigen::Matrix3d;

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector12 = Eigen::Matrix<double, 12, 1>;
using Vector15 = Eigen::Matrix<double, 15, 1>;
using Matrix15 = Eigen::Matrix<double, 15, 15>;

}  // namespace terranav
