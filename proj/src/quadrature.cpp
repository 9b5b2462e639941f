#include "radharm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "radharm/error.hpp"

namespace radharm {

namespace {

// Returns (P_n(x), P_n'(x)).
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussLegendreRule gauss_legendre(int n) {
  require(n >= 2 && n <= 256, "gauss_legendre: order must be in [2, 256]");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

PanelGrid::PanelGrid(std::vector<double> breaks, int order)
    : breaks_(std::move(breaks)), order_(order) {
  require(breaks_.size() >= 2, "PanelGrid: need at least one panel");
  for (std::size_t i = 1; i < breaks_.size(); ++i)
    require(breaks_[i] > breaks_[i - 1], "PanelGrid: breaks must increase");
  const GaussLegendreRule rule = gauss_legendre(order);
  nodes_.reserve(panel_count() * order);
  weights_.reserve(panel_count() * order);
  for (std::size_t p = 0; p + 1 < breaks_.size(); ++p) {
    const double mid = 0.5 * (breaks_[p] + breaks_[p + 1]);
    const double half = 0.5 * (breaks_[p + 1] - breaks_[p]);
    for (int k = 0; k < order; ++k) {
      nodes_.push_back(mid + half * rule.nodes[k]);
      weights_.push_back(half * rule.weights[k]);
    }
  }
}

std::size_t PanelGrid::panel_of(double x) const {
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  if (it == breaks_.begin()) return 0;
  const auto idx = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return std::min(idx, panel_count() - 1);
}

PanelGrid PanelGrid::refined() const {
  std::vector<double> b;
  b.reserve(2 * breaks_.size());
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    b.push_back(breaks_[i]);
    b.push_back(0.5 * (breaks_[i] + breaks_[i + 1]));
  }
  b.push_back(breaks_.back());
  return PanelGrid(std::move(b), order_);
}

PanelGrid graded_radial_grid(double r_max, std::size_t panels, int order) {
  require(r_max > 0.0, "graded_radial_grid: r_max must be positive");
  require(panels >= 2, "graded_radial_grid: need at least two panels");
  std::vector<double> b{0.0};
  for (double x = 1.0 / 64.0; x < std::min(1.0, r_max) && b.size() < panels / 2; x *= 2.0)
    b.push_back(x);
  const double start = b.size() > 1 ? 2.0 * b.back() : r_max / static_cast<double>(panels);
  const double from = std::min(start, r_max);
  if (from < r_max) {
    if (from > b.back()) b.push_back(from);
    const std::size_t rest = panels > b.size() - 1 ? panels - (b.size() - 1) : 1;
    const double width = (r_max - from) / static_cast<double>(rest);
    for (std::size_t i = 1; i <= rest; ++i) b.push_back(i == rest ? r_max : from + width * i);
  } else {
    b.push_back(r_max);
  }
  return PanelGrid(std::move(b), order);
}

PanelGrid graded_spectral_grid(double lambda_min, double lambda_max, double max_width,
                               int order) {
  require(lambda_min > 0.0 && lambda_max > lambda_min,
          "graded_spectral_grid: need 0 < lambda_min < lambda_max");
  require(max_width > 0.0, "graded_spectral_grid: max_width must be positive");
  std::vector<double> b{0.0, lambda_min};
  for (double x = 2.0 * lambda_min; x < std::min(1.0, lambda_max); x *= 2.0) b.push_back(x);
  const double from = b.back() < 1.0 ? std::min(1.0, lambda_max) : b.back();
  if (from > b.back()) b.push_back(from);
  if (from < lambda_max) {
    const auto n = static_cast<std::size_t>(std::ceil((lambda_max - from) / max_width - 1e-12));
    const double width = (lambda_max - from) / static_cast<double>(n);
    for (std::size_t i = 1; i <= n; ++i) b.push_back(i == n ? lambda_max : from + width * i);
  }
  return PanelGrid(std::move(b), order);
}

}  // namespace radharm
