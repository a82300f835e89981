#pragma once

#include <optional>
#include <span>
#include <vector>

#include "croptrack/image.hpp"

namespace croptrack {

/// Polynomial with coeffs[i] multiplying x^i.
struct PolyModel {
  std::vector<double> coeffs;

  [[nodiscard]] int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// a * exp(b x)
struct ExpModel {
  double a = 1.0;
  double b = 0.0;
};

struct Intersection {
  double x = 0.0;
  double value = 0.0;  // F(x) at the crossing
};

struct Minimum {
  double x = 0.0;
  double value = 0.0;  // F(x) + G(x)
};

/// Floor applied to exponential-fit targets before taking logs.
inline constexpr double kExpFitFloor = 1e-4;

[[nodiscard]] double euclidean_distance(Point2 p, Point2 q);

/// Min-max scaling to [0,1]. Throws std::invalid_argument for fewer than two values or a constant series.
[[nodiscard]] std::vector<double> normalize(std::span<const double> series);

/// Least-squares polynomial of the given degree via Householder QR of the Vandermonde matrix.
/// Requires more distinct abscissae than the degree.
[[nodiscard]] PolyModel polyfit(std::span<const double> xs, std::span<const double> ys, int degree);

/// Exponential fit: log-linear least squares for a start, then up to 50 Gauss-Newton steps on the
/// untransformed residuals (stopping when the step is below 1e-10). Targets are clamped to max(y, floor).
[[nodiscard]] ExpModel expfit(std::span<const double> xs, std::span<const double> ys, double floor = kExpFitFloor);

[[nodiscard]] double eval_poly(const PolyModel& m, double x);
[[nodiscard]] double eval_exp(const ExpModel& m, double x);

/// Root-mean-square of model(x_i) - y_i.
[[nodiscard]] double rms_residual(const PolyModel& m, std::span<const double> xs, std::span<const double> ys);
[[nodiscard]] double rms_residual(const ExpModel& m, std::span<const double> xs, std::span<const double> ys);

/// Smallest x in [lo, hi] where F(x) = G(x), located by a sign-change scan and bisection to 1e-6.
/// Returns nothing when F - G does not change sign on the range.
[[nodiscard]] std::optional<Intersection> find_intersection(const PolyModel& f, const ExpModel& g, double lo,
                                                            double hi);

/// Minimizer of F + G on [lo, hi]: grid scan at `step`, then golden-section refinement around the best node.
[[nodiscard]] Minimum argmin_sum(const PolyModel& f, const ExpModel& g, double lo, double hi, double step = 1e-3);

}  // namespace croptrack
