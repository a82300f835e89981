#include "croptrack/kalman.hpp"

#include <cmath>

#include <fmt/core.h>

namespace croptrack {
namespace {

// Scale-relative: |det| must exceed this fraction of the squared largest entry, so tiny but
// well-conditioned covariances (e.g. R = 1e-9 I) still invert.
constexpr double kMinRelativeDeterminant = 1e-12;

Mat4 symmetrized(const Mat4& p) { return 0.5 * (p + p.transpose()); }

}  // namespace

Mat2 invert2(const Mat2& a, const char* what) {
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const double scale = a.cwiseAbs().maxCoeff();
  if (!(std::abs(det) > kMinRelativeDeterminant * scale * scale)) {
    throw SingularMatrixError(fmt::format("{} is singular (det = {:g})", what, det));
  }
  Mat2 inv;
  inv << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
  return inv / det;
}

KalmanState predict(const KalmanState& s, const KalmanModel& m) {
  const Mat4& f = m.transition;
  return {f * s.mean, symmetrized(f * s.cov * f.transpose() + m.process_noise)};
}

Vec2 expected_measurement(const KalmanState& s, const KalmanModel& m) { return m.measurement * s.mean; }

Correction correct(const KalmanState& s, const KalmanModel& m, const Vec2& z) {
  const Mat2x4& h = m.measurement;
  const Vec2 v = z - expected_measurement(s, m);
  const Mat2 innovation_cov = h * s.cov * h.transpose() + m.measurement_noise;
  const Mat4x2 k = s.cov * h.transpose() * invert2(innovation_cov, "innovation covariance (H P H^T + R)");

  Correction out;
  out.state.mean = s.mean + k * v;
  out.state.cov = symmetrized((Mat4::Identity() - k * h) * s.cov);
  out.innovation = v;
  out.innovation_cov = innovation_cov;
  out.gain = k;
  return out;
}

double innovation_distance2(const KalmanState& s, const KalmanModel& m, const Vec2& z) {
  const Mat2x4& h = m.measurement;
  const Vec2 v = z - expected_measurement(s, m);
  const Mat2 innovation_cov = h * s.cov * h.transpose() + m.measurement_noise;
  return v.dot(invert2(innovation_cov, "innovation covariance (H P H^T + R)") * v);
}

KalmanModel constant_velocity_model(double q, double r) {
  if (!(q >= 0.0) || !std::isfinite(q)) {
    throw std::invalid_argument(fmt::format("constant_velocity_model: process noise q must be >= 0, got {}", q));
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument(fmt::format("constant_velocity_model: measurement noise r must be > 0, got {}", r));
  }
  KalmanModel m;
  // clang-format off
  m.transition << 1, 0, 1, 0,
                  0, 1, 0, 1,
                  0, 0, 1, 0,
                  0, 0, 0, 1;
  m.measurement << 1, 0, 0, 0,
                   0, 1, 0, 0;
  // clang-format on
  m.process_noise = q * Mat4::Identity();
  m.measurement_noise = r * Mat2::Identity();
  return m;
}

KalmanState initial_state(Point2 position, const KalmanNoise& noise) {
  KalmanState s;
  s.mean << position.x, position.y, 0.0, 0.0;
  s.cov = Vec4(noise.initial_position_var, noise.initial_position_var, noise.initial_velocity_var,
               noise.initial_velocity_var)
              .asDiagonal();
  return s;
}

}  // namespace croptrack
