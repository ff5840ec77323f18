#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spemb {

/// Node i sits at (x[i], y[i]); the ranges are the exact min/max of the
/// stored entries.
struct SpectralCoords {
  std::vector<double> x;
  std::vector<double> y;
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;

  std::size_t size() const { return x.size(); }
};

/// dim×dim intensities, row-major. Row 0 holds the smallest y bin and
/// column 0 the smallest x bin.
struct EmbeddedImage {
  int dim = 0;
  std::vector<double> intensities;

  EmbeddedImage() = default;
  explicit EmbeddedImage(int d);

  double& at(int row, int col) { return intensities[static_cast<std::size_t>(row) * dim + col]; }
  double at(int row, int col) const { return intensities[static_cast<std::size_t>(row) * dim + col]; }
  double mass() const;
  std::size_t nonzero_count() const;

  friend bool operator==(const EmbeddedImage&, const EmbeddedImage&) = default;
};

namespace layout {

SpectralCoords spectral_layout(std::span<const double> u2, std::span<const double> u3);

/// Equal-width bin of `v` in [lo, hi]: half-open bins, the last one closed.
/// A collapsed range (lo == hi) maps to the center bin (dim - 1) / 2.
int bin_index(double v, double lo, double hi, int dim);

/// Sums node values into the pixel each node's coordinates fall into.
EmbeddedImage rasterize(const SpectralCoords& coords, std::span<const double> values, int dim);

/// Number of nodes that share their pixel with at least one other node.
std::size_t collision_count(const SpectralCoords& coords, int dim);

}  // namespace layout
}  // namespace spemb
