#include "croptrack/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/core.h>

namespace croptrack {
namespace {

constexpr int kMaxGaussNewtonIterations = 50;
constexpr double kGaussNewtonTolerance = 1e-10;
constexpr double kBisectionWidth = 1e-6;
constexpr int kIntersectionScanSteps = 10000;

void check_pairs(std::span<const double> xs, std::span<const double> ys, const char* what) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument(fmt::format("{}: {} x values but {} y values", what, xs.size(), ys.size()));
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw std::invalid_argument(fmt::format("{}: non-finite data at index {}", what, i));
    }
  }
}

std::size_t distinct_count(std::span<const double> xs) { return std::set<double>(xs.begin(), xs.end()).size(); }

double sum_squares(double a, double b, std::span<const double> xs, std::span<const double> ys) {
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = a * std::exp(b * xs[i]) - ys[i];
    s += r * r;
  }
  return s;
}

}  // namespace

double euclidean_distance(Point2 p, Point2 q) { return std::hypot(q.x - p.x, q.y - p.y); }

std::vector<double> normalize(std::span<const double> series) {
  if (series.size() < 2) throw std::invalid_argument("normalize: need at least two values");
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  const double min = *lo;
  const double range = *hi - *lo;
  if (!(range > 0.0) || !std::isfinite(range)) {
    throw std::invalid_argument("normalize: series is constant, scaling undefined");
  }
  std::vector<double> out(series.size());
  std::transform(series.begin(), series.end(), out.begin(), [&](double v) { return (v - min) / range; });
  // Guard the endpoints against rounding in the division.
  out[static_cast<std::size_t>(lo - series.begin())] = 0.0;
  out[static_cast<std::size_t>(hi - series.begin())] = 1.0;
  return out;
}

PolyModel polyfit(std::span<const double> xs, std::span<const double> ys, int degree) {
  check_pairs(xs, ys, "polyfit");
  if (degree < 0) throw std::invalid_argument("polyfit: negative degree");
  const auto cols = static_cast<Eigen::Index>(degree) + 1;
  if (distinct_count(xs) <= static_cast<std::size_t>(degree)) {
    throw std::invalid_argument(fmt::format("polyfit: degree {} needs at least {} distinct points, got {}", degree,
                                            degree + 1, distinct_count(xs)));
  }

  const auto rows = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd vander(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    double p = 1.0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      vander(r, c) = p;
      p *= xs[static_cast<std::size_t>(r)];
    }
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(ys.data(), rows);
  const Eigen::VectorXd sol = vander.colPivHouseholderQr().solve(rhs);
  return {std::vector<double>(sol.data(), sol.data() + sol.size())};
}

ExpModel expfit(std::span<const double> xs, std::span<const double> ys_raw, double floor) {
  check_pairs(xs, ys_raw, "expfit");
  if (distinct_count(xs) < 2) throw std::invalid_argument("expfit: need at least two distinct x values");

  std::vector<double> ys(ys_raw.begin(), ys_raw.end());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    ys[i] = std::max(ys[i], floor);
    if (!(ys[i] > 0.0)) {
      throw std::invalid_argument(fmt::format("expfit: non-positive value {} at index {}", ys[i], i));
    }
  }

  // ln y = ln a + b x
  std::vector<double> logs(ys.size());
  std::transform(ys.begin(), ys.end(), logs.begin(), [](double v) { return std::log(v); });
  const auto line = polyfit(xs, logs, 1);
  double a = std::exp(line.coeffs[0]);
  double b = line.coeffs[1];

  double sse = sum_squares(a, b, xs, ys);
  for (int it = 0; it < kMaxGaussNewtonIterations; ++it) {
    // Normal equations of the 2-parameter Jacobian [e^{bx}, a x e^{bx}].
    double jaa = 0, jab = 0, jbb = 0, ga = 0, gb = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = std::exp(b * xs[i]);
      const double da = e;
      const double db = a * xs[i] * e;
      const double r = a * e - ys[i];
      jaa += da * da;
      jab += da * db;
      jbb += db * db;
      ga += da * r;
      gb += db * r;
    }
    const double det = jaa * jbb - jab * jab;
    if (!(std::abs(det) > std::numeric_limits<double>::min())) break;
    double step_a = -(jbb * ga - jab * gb) / det;
    double step_b = -(jaa * gb - jab * ga) / det;

    // Halve the step until it keeps a > 0 and does not increase the residual.
    bool accepted = false;
    for (int h = 0; h < 40; ++h) {
      const double na = a + step_a;
      const double nb = b + step_b;
      if (na > 0.0) {
        const double nsse = sum_squares(na, nb, xs, ys);
        if (nsse <= sse) {
          a = na;
          b = nb;
          sse = nsse;
          accepted = true;
          break;
        }
      }
      step_a *= 0.5;
      step_b *= 0.5;
    }
    if (!accepted || std::max(std::abs(step_a), std::abs(step_b)) < kGaussNewtonTolerance) break;
  }
  return {a, b};
}

double eval_poly(const PolyModel& m, double x) {
  double acc = 0.0;
  for (auto it = m.coeffs.rbegin(); it != m.coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double eval_exp(const ExpModel& m, double x) { return m.a * std::exp(m.b * x); }

double rms_residual(const PolyModel& m, std::span<const double> xs, std::span<const double> ys) {
  check_pairs(xs, ys, "rms_residual");
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) s += std::pow(eval_poly(m, xs[i]) - ys[i], 2);
  return std::sqrt(s / static_cast<double>(xs.size()));
}

double rms_residual(const ExpModel& m, std::span<const double> xs, std::span<const double> ys) {
  check_pairs(xs, ys, "rms_residual");
  if (xs.empty()) return 0.0;
  return std::sqrt(sum_squares(m.a, m.b, xs, ys) / static_cast<double>(xs.size()));
}

std::optional<Intersection> find_intersection(const PolyModel& f, const ExpModel& g, double lo, double hi) {
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument(fmt::format("find_intersection: invalid range [{}, {}]", lo, hi));
  }
  const auto diff = [&](double x) { return eval_poly(f, x) - eval_exp(g, x); };
  const auto hit = [&](double x) { return Intersection{x, eval_poly(f, x)}; };

  double left = lo;
  double d_left = diff(left);
  if (d_left == 0.0) return hit(left);
  for (int i = 1; i <= kIntersectionScanSteps; ++i) {
    const double right = i == kIntersectionScanSteps ? hi : lo + (hi - lo) * i / kIntersectionScanSteps;
    const double d_right = diff(right);
    if (d_right == 0.0) return hit(right);
    if ((d_left < 0.0) != (d_right < 0.0)) {
      double a = left;
      double b = right;
      double da = d_left;
      while (b - a >= kBisectionWidth) {
        const double mid = 0.5 * (a + b);
        const double dm = diff(mid);
        if (dm == 0.0) return hit(mid);
        if ((dm < 0.0) == (da < 0.0)) {
          a = mid;
          da = dm;
        } else {
          b = mid;
        }
      }
      return hit(0.5 * (a + b));
    }
    left = right;
    d_left = d_right;
  }
  return std::nullopt;
}

Minimum argmin_sum(const PolyModel& f, const ExpModel& g, double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument(fmt::format("argmin_sum: grid step must be > 0, got {}", step));
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument(fmt::format("argmin_sum: invalid range [{}, {}]", lo, hi));
  }
  const auto total = [&](double x) { return eval_poly(f, x) + eval_exp(g, x); };

  const auto n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
  const auto node = [&](long long i) { return std::min(hi, lo + static_cast<double>(i) * step); };
  double best_x = lo;
  double best = total(lo);
  for (long long i = 1; i <= n + 1; ++i) {
    const double x = i <= n ? node(i) : hi;
    const double v = total(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }

  // Golden-section search on the bracket around the best grid node.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(lo, best_x - step);
  double b = std::min(hi, best_x + step);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = total(c);
  double fd = total(d);
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = total(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = total(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double v = total(x);
  if (v <= best) return {x, v};
  return {best_x, best};
}

}  // namespace croptrack
