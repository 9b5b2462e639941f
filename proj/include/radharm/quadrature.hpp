#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace radharm {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Newton iteration on the Legendre recurrence; exact to rounding for n <= 256.
GaussLegendreRule gauss_legendre(int n);

/// Composite Gauss-Legendre quadrature over consecutive panels.
///
/// Nodes are stored panel by panel in increasing order, so a grid function is
/// just a vector aligned with nodes(). Integration is a dot product with
/// weights().
class PanelGrid {
 public:
  PanelGrid() = default;
  PanelGrid(std::vector<double> breaks, int order);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> breaks() const { return breaks_; }
  int order() const { return order_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t panel_count() const { return breaks_.empty() ? 0 : breaks_.size() - 1; }
  double lower() const { return breaks_.front(); }
  double upper() const { return breaks_.back(); }

  /// Index of the panel containing x (clamped to the grid range).
  std::size_t panel_of(double x) const;

  /// Returns a grid with every panel split in two.
  PanelGrid refined() const;

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0));
    R sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(nodes_[i]);
    return sum;
  }

 private:
  std::vector<double> breaks_;
  int order_ = 0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Radial grid on [0, r_max]: geometric panels on [0, 1] (ratio 2, first
/// break at 1/64), uniform panels beyond, `panels` panels in total.
PanelGrid graded_radial_grid(double r_max, std::size_t panels, int order = 16);

/// Spectral grid on [0, lambda_max]: a first panel [0, lambda_min], geometric
/// panels up to 1, then uniform panels of width at most `max_width`.
PanelGrid graded_spectral_grid(double lambda_min, double lambda_max, double max_width,
                               int order = 16);

}  // namespace radharm
