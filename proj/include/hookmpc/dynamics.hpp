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

#ifndef HOOKMPC_DYNAMICS_HPP
#define HOOKMPC_DYNAMICS_HPP

#include <stdexcept>
#include <string>

#include "hookmpc/core.hpp"

namespace hookmpc {

/**
 * Generalized plant state of the 8-DoF aerial manipulator.
 *
 * Coordinates q = [x, y, z, roll, pitch, yaw, alpha, beta]: quadrotor
 * position (m), Z-Y-X Euler attitude (rad) and the two passive pole joint
 * angles (rad, alpha about body x, beta about the intermediate y axis).
 * v holds the corresponding time derivatives.
 */
struct GeneralizedState {
  Vec8 q = Vec8::Zero();
  Vec8 v = Vec8::Zero();

  StateVec packed() const {
    StateVec x;
    x.head<8>() = q;
    x.tail<8>() = v;
    return x;
  }

  static GeneralizedState from_packed(const StateVec& x) {
    GeneralizedState s;
    s.q = x.head<8>();
    s.v = x.tail<8>();
    return s;
  }
};

/// Collective thrust (N, along body z) and body torques (N m).
struct ControlInput {
  double thrust = 0.0;
  Vec3 torque = Vec3::Zero();

  InputVec packed() const {
    InputVec u;
    u << thrust, torque.x(), torque.y(), torque.z();
    return u;
  }

  static ControlInput from_packed(const InputVec& u) {
    ControlInput c;
    c.thrust = u(0);
    c.torque = u.tail<3>();
    return c;
  }
};

/// Physical parameters of the quadrotor/pole/hook assembly.
///
/// Numerical defaults are stand-ins chosen so that hover thrust is about
/// 7 N; they are not measured values.
struct ModelParams {
  double mass_quad = 0.605;            // kg
  Vec3 inertia{1.5e-3, 1.5e-3, 2.6e-3};  // kg m^2, body-diagonal
  double pole_length = 0.4;            // m, joint to lumped tip mass
  double hook_mass = 0.1;              // kg, pole + hook lumped at the tip
  double hook_tip_offset = 0.02;       // m, hook point beyond the tip mass
  double payload_hook_standoff = 0.05; // m, payload hook above payload com
  double payload_hook_radius = 0.03;   // m, catch radius of the payload hook
  double gravity = 9.81;               // m/s^2
  double joint_damping = 0.01;         // N m s, viscous, both pole joints
  double joint_inertia = 1e-5;         // kg m^2, residual pole joint inertia
  double thrust_max = 16.0;            // N
  Vec3 torque_max{0.15, 0.15, 0.05};   // N m per axis

  void validate() const {
    if (!(mass_quad > 0.0) || !(hook_mass > 0.0) || !(pole_length > 0.0) ||
        !(inertia.minCoeff() > 0.0) || !(payload_hook_standoff > 0.0) ||
        !(payload_hook_radius > 0.0) || !(gravity > 0.0)) {
      throw std::invalid_argument(
          "ModelParams: masses, lengths, inertias must be positive");
    }
    if (joint_damping < 0.0 || joint_inertia < 0.0 || hook_tip_offset < 0.0) {
      throw std::invalid_argument(
          "ModelParams: damping, joint inertia, tip offset must be >= 0");
    }
  }
};

/// Uncertain physical parameters; entry 0 is the payload mass (kg).
struct UncertainParams {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(1);

  double payload_mass() const { return theta(0); }

  static UncertainParams payload(double mass) {
    UncertainParams p;
    p.theta = Eigen::VectorXd::Constant(1, mass);
    return p;
  }

  void validate() const {
    if (theta.size() < 1) {
      throw std::invalid_argument("UncertainParams: need at least one entry");
    }
    if (theta(0) < 0.0) {
      throw std::invalid_argument("UncertainParams: payload mass must be >= 0");
    }
  }
};

/// Pose of the payload body (position of its center of mass + rotation).
struct PayloadPose {
  Vec3 position = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();
};

/// Position of the hook mounted on top of the payload,
/// r_com + R * e3 * standoff.
inline Vec3 payload_hook_position(const PayloadPose& pose, double standoff) {
  return pose.position + pose.rotation.col(2) * standoff;
}

namespace detail {

/// Pole direction in the quad body frame: Rx(alpha) * Ry(beta) * (-e3).
inline Vec3 pole_dir_body(double ca, double sa, double cb, double sb) {
  return Vec3(-sb, sa * cb, -ca * cb);
}

struct PoleKinematics {
  Mat3 rot;                          // world from body
  Vec3 dir_world;                    // unit pole direction in world frame
  Eigen::Matrix<double, 3, 5> jac;   // d(dir_world)/d(roll,pitch,yaw,alpha,beta)
};

/// World pole direction and its Jacobian w.r.t. the five angles.
inline PoleKinematics pole_kinematics(const Vec8& q) {
  PoleKinematics k;
  const double ca = std::cos(q(6)), sa = std::sin(q(6));
  const double cb = std::cos(q(7)), sb = std::sin(q(7));
  k.rot = rotation_zyx(q(3), q(4), q(5));
  const Vec3 pb = pole_dir_body(ca, sa, cb, sb);
  const Vec3 d_alpha(0.0, ca * cb, sa * cb);
  const Vec3 d_beta(-cb, -sa * sb, ca * sb);
  k.dir_world = k.rot * pb;
  const Mat3 emap = euler_rate_map(q(3), q(4));
  k.jac.leftCols<3>() = -k.rot * skew(pb) * emap;
  k.jac.col(3) = k.rot * d_alpha;
  k.jac.col(4) = k.rot * d_beta;
  return k;
}

}  // namespace detail

/// World position of the hook reference point at the end of the pole.
inline Vec3 hook_position(const GeneralizedState& xi, const ModelParams& mp) {
  const auto kin = detail::pole_kinematics(xi.q);
  return xi.q.head<3>() +
         (mp.pole_length + mp.hook_tip_offset) * kin.dir_world;
}

/// Jacobian of hook_position w.r.t. the 8 generalized coordinates.
inline Eigen::Matrix<double, 3, 8> hook_position_jacobian(
    const GeneralizedState& xi, const ModelParams& mp) {
  const auto kin = detail::pole_kinematics(xi.q);
  Eigen::Matrix<double, 3, 8> j;
  j.leftCols<3>().setIdentity();
  j.rightCols<5>() = (mp.pole_length + mp.hook_tip_offset) * kin.jac;
  return j;
}

/// Payload center of mass while hanging from the hook (payload upright).
inline Vec3 attached_payload_position(const GeneralizedState& xi,
                                      const ModelParams& mp) {
  return hook_position(xi, mp) - Vec3(0, 0, mp.payload_hook_standoff);
}

/**
 * Continuous-time equations of motion.
 *
 * Quadrotor rigid body with thrust along body z and body torques, plus a
 * rigid massless pole of length L attached below the center of mass by two
 * passive damped revolute joints, carrying the hook mass and the payload
 * mass lumped at the tip. Assembled via d'Alembert's principle; see the
 * energy-conservation tests for the validation of the Lagrangian structure.
 *
 * Returns [v; generalized accelerations].
 */
inline StateVec continuous_dynamics(const GeneralizedState& xi,
                                    const ControlInput& u,
                                    const UncertainParams& theta,
                                    const ModelParams& mp) {
  if (!all_finite(xi.q) || !all_finite(xi.v) || !std::isfinite(u.thrust) ||
      !all_finite(u.torque) || !all_finite(theta.theta)) {
    throw std::invalid_argument("continuous_dynamics: non-finite input");
  }
  const double tip_mass = mp.hook_mass + theta.payload_mass();
  const double length = mp.pole_length;

  const double ca = std::cos(xi.q(6)), sa = std::sin(xi.q(6));
  const double cb = std::cos(xi.q(7)), sb = std::sin(xi.q(7));
  const Vec3 pb = detail::pole_dir_body(ca, sa, cb, sb);
  const Vec3 d_alpha(0.0, ca * cb, sa * cb);
  const Vec3 d_beta(-cb, -sa * sb, ca * sb);
  const Mat3 rot = rotation_zyx(xi.q(3), xi.q(4), xi.q(5));
  const Mat3 emap = euler_rate_map(xi.q(3), xi.q(4));

  Eigen::Matrix<double, 3, 5> tip_jac;  // d(tip velocity)/d(angle rates) / L
  tip_jac.leftCols<3>() = -rot * skew(pb) * emap;
  tip_jac.col(3) = rot * d_alpha;
  tip_jac.col(4) = rot * d_beta;
  const Eigen::Matrix<double, 3, 5> tip_jac_l = length * tip_jac;

  // mass matrix
  Mat8 mass = Mat8::Zero();
  mass.topLeftCorner<3, 3>() =
      (mp.mass_quad + tip_mass) * Mat3::Identity();
  mass.topRightCorner<3, 5>() = tip_mass * tip_jac_l;
  mass.bottomLeftCorner<5, 3>() = mass.topRightCorner<3, 5>().transpose();
  Eigen::Matrix<double, 5, 5> ang =
      tip_mass * tip_jac_l.transpose() * tip_jac_l;
  ang.topLeftCorner<3, 3>() +=
      emap.transpose() * mp.inertia.asDiagonal() * emap;
  ang(3, 3) += mp.joint_inertia;
  ang(4, 4) += mp.joint_inertia;
  mass.bottomRightCorner<5, 5>() = ang;

  // velocity products
  const Vec3 euler_rates = xi.v.segment<3>(3);
  const double alpha_dot = xi.v(6), beta_dot = xi.v(7);
  const Vec3 omega = emap * euler_rates;
  const Vec3 pb_dot = d_alpha * alpha_dot + d_beta * beta_dot;

  const double cr = std::cos(xi.q(3)), sr = std::sin(xi.q(3));
  const double cp = std::cos(xi.q(4)), sp = std::sin(xi.q(4));
  Mat3 emap_dot;
  emap_dot << 0.0, 0.0, -cp * xi.v(4),
      0.0, -sr * xi.v(3), cr * cp * xi.v(3) - sr * sp * xi.v(4),
      0.0, -cr * xi.v(3), -sr * cp * xi.v(3) - cr * sp * xi.v(4);
  const Vec3 omega_dot0 = emap_dot * euler_rates;

  const Vec3 dd_aa(0.0, -sa * cb, ca * cb);
  const Vec3 dd_ab(0.0, -ca * sb, -sa * sb);
  const Vec3 dd_bb(sb, -sa * cb, ca * cb);
  const Vec3 pb_ddot0 = dd_aa * (alpha_dot * alpha_dot) +
                        2.0 * dd_ab * (alpha_dot * beta_dot) +
                        dd_bb * (beta_dot * beta_dot);

  // tip acceleration with zero generalized accelerations
  const Vec3 tip_bias =
      length * (rot * (omega.cross(omega.cross(pb)) +
                       2.0 * omega.cross(pb_dot) + omega_dot0.cross(pb) +
                       pb_ddot0));

  const Vec3 e3(0.0, 0.0, 1.0);
  Vec8 rhs;
  rhs.head<3>() = u.thrust * rot.col(2) -
                  (mp.mass_quad + tip_mass) * mp.gravity * e3 -
                  tip_mass * tip_bias;
  Eigen::Matrix<double, 5, 1> ang_rhs =
      tip_jac_l.transpose() *
      (-tip_mass * mp.gravity * e3 - tip_mass * tip_bias);
  const Vec3 j_omega = mp.inertia.asDiagonal() * omega;
  ang_rhs.head<3>() +=
      emap.transpose() *
      (u.torque - mp.inertia.asDiagonal() * omega_dot0 - omega.cross(j_omega));
  ang_rhs(3) -= mp.joint_damping * alpha_dot;
  ang_rhs(4) -= mp.joint_damping * beta_dot;
  rhs.tail<5>() = ang_rhs;

  Eigen::LDLT<Mat8> ldlt(mass);
  if (ldlt.info() != Eigen::Success) {
    throw std::runtime_error("continuous_dynamics: singular mass matrix");
  }
  const Vec8 accel = ldlt.solve(rhs);
  StateVec deriv;
  deriv.head<8>() = xi.v;
  deriv.tail<8>() = accel;
  if (!all_finite(deriv)) {
    throw std::runtime_error("continuous_dynamics: non-finite result");
  }
  return deriv;
}

/// One classical RK4 step of the continuous dynamics; bit-deterministic.
inline GeneralizedState step(const GeneralizedState& xi, const ControlInput& u,
                             const UncertainParams& theta,
                             const ModelParams& mp, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  const StateVec x0 = xi.packed();
  const StateVec k1 = continuous_dynamics(xi, u, theta, mp);
  const StateVec k2 = continuous_dynamics(
      GeneralizedState::from_packed(x0 + 0.5 * dt * k1), u, theta, mp);
  const StateVec k3 = continuous_dynamics(
      GeneralizedState::from_packed(x0 + 0.5 * dt * k2), u, theta, mp);
  const StateVec k4 = continuous_dynamics(
      GeneralizedState::from_packed(x0 + dt * k3), u, theta, mp);
  return GeneralizedState::from_packed(
      x0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

/// Predictive transition: the payload mass is zeroed in phases 1, 2, 5 and
/// taken from theta in phases 3, 4.
inline GeneralizedState predictive_step(const GeneralizedState& xi,
                                        const ControlInput& u,
                                        const UncertainParams& theta,
                                        const ModelParams& mp, int phase,
                                        double dt) {
  if (phase < 1 || phase > 5) {
    throw std::invalid_argument("predictive_step: phase must be in 1..5");
  }
  if (phase == 3 || phase == 4) return step(xi, u, theta, mp, dt);
  UncertainParams zero = theta;
  zero.theta(0) = 0.0;
  return step(xi, u, zero, mp, dt);
}

/**
 * Central finite-difference Jacobians of the predictive transition.
 *
 * A = d(phi_p)/d(state) (16x16). The first n_theta columns of G hold
 * d(phi_p)/d(theta); the remaining 16 columns are the identity because the
 * disturbance enters every state additively.
 */
inline void jacobians(const GeneralizedState& xi, const ControlInput& u,
                      const UncertainParams& theta, const ModelParams& mp,
                      int phase, double dt, Mat16& a_mat,
                      Eigen::Matrix<double, kStateDim, Eigen::Dynamic>& g_mat) {
  const int n_theta = static_cast<int>(theta.theta.size());
  const StateVec x0 = xi.packed();
  a_mat.setZero();
  g_mat.resize(kStateDim, n_theta + kNoiseDim);
  g_mat.setZero();
  for (int i = 0; i < kStateDim; ++i) {
    const double h = fd_step(x0(i));
    StateVec xp = x0, xm = x0;
    xp(i) += h;
    xm(i) -= h;
    const StateVec fp =
        predictive_step(GeneralizedState::from_packed(xp), u, theta, mp, phase,
                        dt)
            .packed();
    const StateVec fm =
        predictive_step(GeneralizedState::from_packed(xm), u, theta, mp, phase,
                        dt)
            .packed();
    if (!all_finite(fp) || !all_finite(fm)) {
      throw std::runtime_error("jacobians: non-finite perturbation result");
    }
    a_mat.col(i) = (fp - fm) / (2.0 * h);
  }
  for (int i = 0; i < n_theta; ++i) {
    const double h = fd_step(theta.theta(i));
    UncertainParams tp = theta, tm = theta;
    tp.theta(i) += h;
    tm.theta(i) -= h;
    // keep the payload mass a valid parameter under perturbation
    const StateVec fp = predictive_step(xi, u, tp, mp, phase, dt).packed();
    const StateVec fm = predictive_step(xi, u, tm, mp, phase, dt).packed();
    if (!all_finite(fp) || !all_finite(fm)) {
      throw std::runtime_error("jacobians: non-finite perturbation result");
    }
    g_mat.col(i) = (fp - fm) / (2.0 * h);
  }
  g_mat.rightCols(kNoiseDim).setIdentity();
}

/// Total mechanical energy; used by the conservation tests.
inline double mechanical_energy(const GeneralizedState& xi,
                                const UncertainParams& theta,
                                const ModelParams& mp) {
  const double tip_mass = mp.hook_mass + theta.payload_mass();
  const auto kin = detail::pole_kinematics(xi.q);
  const Vec3 tip_pos =
      xi.q.head<3>() + mp.pole_length * kin.dir_world;
  const Vec3 tip_vel =
      xi.v.head<3>() + mp.pole_length * (kin.jac * xi.v.tail<5>());
  const Mat3 emap = euler_rate_map(xi.q(3), xi.q(4));
  const Vec3 omega = emap * xi.v.segment<3>(3);
  const double kinetic =
      0.5 * mp.mass_quad * xi.v.head<3>().squaredNorm() +
      0.5 * tip_mass * tip_vel.squaredNorm() +
      0.5 * omega.dot(mp.inertia.asDiagonal() * omega) +
      0.5 * mp.joint_inertia * (xi.v(6) * xi.v(6) + xi.v(7) * xi.v(7));
  const double potential =
      mp.gravity * (mp.mass_quad * xi.q(2) + tip_mass * tip_pos.z());
  return kinetic + potential;
}

}  // namespace hookmpc

#endif  // HOOKMPC_DYNAMICS_HPP
