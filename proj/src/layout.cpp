#include <spemb/error.hpp>
#include <spemb/layout.hpp>

#include <algorithm>
#include <cmath>

namespace spemb {

EmbeddedImage::EmbeddedImage(int d) : dim(d) {
  if (d < 1) throw Error("image dimension must be >= 1");
  intensities.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), 0.0);
}

double EmbeddedImage::mass() const {
  double total = 0.0;
  for (double v : intensities) total += v;
  return total;
}

std::size_t EmbeddedImage::nonzero_count() const {
  return static_cast<std::size_t>(std::count_if(intensities.begin(), intensities.end(), [](double v) { return v != 0.0; }));
}

namespace layout {

SpectralCoords spectral_layout(std::span<const double> u2, std::span<const double> u3) {
  if (u2.size() != u3.size()) throw Error("eigenvector lengths differ");
  if (u2.empty()) throw Error("spectral layout needs at least one node");
  SpectralCoords c;
  c.x.assign(u2.begin(), u2.end());
  c.y.assign(u3.begin(), u3.end());
  const auto [xmin, xmax] = std::minmax_element(c.x.begin(), c.x.end());
  const auto [ymin, ymax] = std::minmax_element(c.y.begin(), c.y.end());
  c.x_min = *xmin, c.x_max = *xmax;
  c.y_min = *ymin, c.y_max = *ymax;
  return c;
}

int bin_index(double v, double lo, double hi, int dim) {
  if (dim < 1) throw Error("image dimension must be >= 1");
  if (!(lo <= hi)) throw Error("bin range is inverted");
  if (v < lo || v > hi) throw Error("value outside bin range");
  if (lo == hi) return (dim - 1) / 2;
  const double t = (v - lo) / (hi - lo) * dim;
  return std::min(static_cast<int>(std::floor(t)), dim - 1);
}

EmbeddedImage rasterize(const SpectralCoords& coords, std::span<const double> values, int dim) {
  if (coords.x.size() != values.size() || coords.y.size() != values.size()) {
    throw Error("coordinate and value counts differ");
  }
  EmbeddedImage image(dim);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int col = bin_index(coords.x[i], coords.x_min, coords.x_max, dim);
    const int row = bin_index(coords.y[i], coords.y_min, coords.y_max, dim);
    image.at(row, col) += values[i];
  }
  return image;
}

std::size_t collision_count(const SpectralCoords& coords, int dim) {
  std::vector<std::size_t> hits(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const int col = bin_index(coords.x[i], coords.x_min, coords.x_max, dim);
    const int row = bin_index(coords.y[i], coords.y_min, coords.y_max, dim);
    ++hits[static_cast<std::size_t>(row) * dim + col];
  }
  std::size_t total = 0;
  for (std::size_t h : hits) {
    if (h > 1) total += h;
  }
  return total;
}

}  // namespace layout
}  // namespace spemb
