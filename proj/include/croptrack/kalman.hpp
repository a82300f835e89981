#pragma once

#include <stdexcept>

#include <Eigen/Core>

#include "croptrack/image.hpp"

namespace croptrack {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Mat2x4 = Eigen::Matrix<double, 2, 4>;
using Mat4x2 = Eigen::Matrix<double, 4, 2>;

/// Estimate (x, y, dx, dy) in pixels and pixels/frame, with its covariance.
struct KalmanState {
  Vec4 mean = Vec4::Zero();
  Mat4 cov = Mat4::Identity();

  [[nodiscard]] Point2 position() const { return {mean(0), mean(1)}; }
};

struct KalmanModel {
  Mat4 transition = Mat4::Identity();      // F
  Mat2x4 measurement = Mat2x4::Zero();     // H
  Mat4 process_noise = Mat4::Zero();       // Q
  Mat2 measurement_noise = Mat2::Identity();  // R
};

/// Result of a measurement update, with the intermediate terms kept for logging.
struct Correction {
  KalmanState state;
  Vec2 innovation = Vec2::Zero();
  Mat2 innovation_cov = Mat2::Identity();
  Mat4x2 gain = Mat4x2::Zero();
};

/// Raised when H P H^T + R cannot be inverted.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Noise and prior settings for the constant-velocity tracker.
struct KalmanNoise {
  double process = 0.01;          // q, px^2/frame^2
  double measurement = 1.0;       // r, px^2
  double initial_position_var = 1.0;
  double initial_velocity_var = 100.0;
};

/// Time update: mean' = F mean, cov' = F cov F^T + Q (symmetrized).
[[nodiscard]] KalmanState predict(const KalmanState& s, const KalmanModel& m);

/// H mean.
[[nodiscard]] Vec2 expected_measurement(const KalmanState& s, const KalmanModel& m);

/// Measurement update with the standard gain K = P H^T (H P H^T + R)^-1.
/// Throws SingularMatrixError if the innovation covariance has |det| <= 1e-12 max|S_ij|^2.
[[nodiscard]] Correction correct(const KalmanState& s, const KalmanModel& m, const Vec2& z);

/// Squared Mahalanobis distance of measurement z from the predicted measurement.
[[nodiscard]] double innovation_distance2(const KalmanState& s, const KalmanModel& m, const Vec2& z);

/// Constant-velocity model with unit frame step, position-only measurement, Q = q I4, R = r I2.
[[nodiscard]] KalmanModel constant_velocity_model(double q, double r);

/// State at a detected position with zero velocity and diagonal prior covariance.
[[nodiscard]] KalmanState initial_state(Point2 position, const KalmanNoise& noise);

/// 2x2 inverse in closed form. Throws SingularMatrixError naming `what` when |det| <= 1e-12 max|a_ij|^2.
[[nodiscard]] Mat2 invert2(const Mat2& a, const char* what);

}  // namespace croptrack
