#pragma once

#include <spemb/layout.hpp>

#include <iosfwd>
#include <string>
#include <string_view>

namespace spemb {

enum class ImageFormat { Pgm, Csv };
enum class Scaling { Linear, Log1p };

struct ImageWriteSettings {
  ImageFormat format = ImageFormat::Pgm;
  Scaling scaling = Scaling::Linear;
  int max_gray = 255;
};

namespace image_io {

Scaling scaling_from_string(std::string_view name);
std::string_view to_string(Scaling scaling);

/// Binary PGM (P5). Gray level = round(g(v) / g(v_max) * max_gray) with g the
/// identity or ln(1 + v). The top image row is the largest y bin. Samples
/// are one byte for max_gray < 256 and two bytes big-endian otherwise.
void write_pgm(const EmbeddedImage& image, const ImageWriteSettings& settings, std::ostream& out);

/// Gray levels in stored row order (row 0 = smallest y bin), as written.
std::vector<int> gray_levels(const EmbeddedImage& image, const ImageWriteSettings& settings);

/// dim lines of dim comma-separated values in shortest round-trip form,
/// largest y bin first.
void write_csv(const EmbeddedImage& image, std::ostream& out);

/// Dispatches on settings.format.
void write_image(const EmbeddedImage& image, const ImageWriteSettings& settings, std::ostream& out);

struct PgmImage {
  int width = 0;
  int height = 0;
  int max_gray = 0;
  std::vector<int> pixels;  ///< row-major, top row first
};

PgmImage read_pgm(std::istream& in);
EmbeddedImage read_csv(std::istream& in);

}  // namespace image_io
}  // namespace spemb
