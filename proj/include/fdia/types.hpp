#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace fdia {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Throws std::runtime_error when a required condition fails.
inline void ensure(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

inline bool all_finite(const Eigen::Ref<const Mat>& m) {
  return m.allFinite();
}

// Centralized finite-difference step sizes. Steps are per coordinate type:
// joint angles in rad, joint rates in rad/s. The Hessian step is larger
// because it differences an already finite-differenced gradient.
namespace fd {
inline constexpr double kJointStep = 1e-6;       // rad, Jacobian / dM/dq probes
inline constexpr double kHessianStep = 1e-4;     // rad, outer step for grad differencing
inline constexpr double kSensorPosStep = 1e-6;   // rad, attacker position channels
inline constexpr double kSensorVelStep = 1e-5;   // rad/s, attacker velocity channels
}  // namespace fd

}  // namespace fdia
