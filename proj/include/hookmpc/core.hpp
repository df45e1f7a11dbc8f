/*
 Copyright 2026 The hookmpc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef HOOKMPC_CORE_HPP
#define HOOKMPC_CORE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace hookmpc {

inline constexpr int kNumCoords = 8;   // generalized coordinates
inline constexpr int kStateDim = 16;   // coordinates + velocities
inline constexpr int kInputDim = 4;    // thrust + body torques
inline constexpr int kNoiseDim = 16;   // additive disturbance on every state

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using StateVec = Eigen::Matrix<double, kStateDim, 1>;
using InputVec = Eigen::Matrix<double, kInputDim, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat16 = Eigen::Matrix<double, kStateDim, kStateDim>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

/// World-from-body rotation for yaw-pitch-roll (Z-Y-X) Euler angles.
inline Mat3 rotation_zyx(double roll, double pitch, double yaw) {
  const double cr = std::cos(roll), sr = std::sin(roll);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  Mat3 r;
  r << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
       sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
       -sp, cp * sr, cp * cr;
  return r;
}

/// Maps Z-Y-X Euler angle rates to the body angular velocity.
inline Mat3 euler_rate_map(double roll, double pitch) {
  const double cr = std::cos(roll), sr = std::sin(roll);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  Mat3 e;
  e << 1.0, 0.0, -sp,
       0.0, cr, sr * cp,
       0.0, -sr, cr * cp;
  return e;
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Central-difference step size used for all Jacobians in this project.
inline double fd_step(double x) {
  return std::max(1e-6, 1e-6 * std::abs(x));
}

/// Deterministic per-index seed derivation (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Samples a point inside the ellipsoid {x : x' W^{-1} x <= 1}. With
/// probability `boundary_prob` the sample lies on the boundary, which
/// stresses the bound while remaining inside it.
class EllipsoidSampler {
 public:
  explicit EllipsoidSampler(const Eigen::MatrixXd& shape) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shape);
    factor_ = es.eigenvectors() *
              es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }

  Eigen::VectorXd sample(std::mt19937_64& rng,
                         double boundary_prob = 0.1) const {
    const int n = static_cast<int>(factor_.rows());
    Eigen::VectorXd dir(n);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < n; ++i) dir(i) = normal(rng);
    const double norm = dir.norm();
    if (norm < 1e-300) return Eigen::VectorXd::Zero(n);
    dir /= norm;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double radius = 1.0;
    if (uni(rng) >= boundary_prob) {
      // uniform in the ball: r = u^{1/n}
      radius = std::pow(uni(rng), 1.0 / static_cast<double>(n));
    }
    return factor_ * (radius * dir);
  }

 private:
  Eigen::MatrixXd factor_;
};

inline Eigen::VectorXd sample_in_ellipsoid(const Eigen::MatrixXd& shape,
                                           std::mt19937_64& rng,
                                           double boundary_prob = 0.1) {
  return EllipsoidSampler(shape).sample(rng, boundary_prob);
}

}  // namespace hookmpc

#endif  // HOOKMPC_CORE_HPP
