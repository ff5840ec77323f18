#include <spemb/error.hpp>
#include <spemb/image_io.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "text_lines.hpp"

namespace spemb::image_io {

Scaling scaling_from_string(std::string_view name) {
  if (name == "linear") return Scaling::Linear;
  if (name == "log1p") return Scaling::Log1p;
  throw Error("unknown scaling '" + std::string(name) + "'");
}

std::string_view to_string(Scaling scaling) { return scaling == Scaling::Linear ? "linear" : "log1p"; }

std::vector<int> gray_levels(const EmbeddedImage& image, const ImageWriteSettings& settings) {
  if (settings.max_gray < 1 || settings.max_gray > 65535) throw Error("max_gray must be in [1, 65535]");
  const auto g = [&](double v) { return settings.scaling == Scaling::Linear ? v : std::log1p(v); };
  const double top = g(*std::max_element(image.intensities.begin(), image.intensities.end()));

  std::vector<int> levels(image.intensities.size(), 0);
  if (!(top > 0.0)) return levels;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    levels[i] = static_cast<int>(std::lround(g(image.intensities[i]) / top * settings.max_gray));
  }
  return levels;
}

void write_pgm(const EmbeddedImage& image, const ImageWriteSettings& settings, std::ostream& out) {
  const std::vector<int> levels = gray_levels(image, settings);
  const int dim = image.dim;
  out << "P5\n" << dim << ' ' << dim << '\n' << settings.max_gray << '\n';
  const bool wide = settings.max_gray > 255;
  std::string row;
  for (int r = dim - 1; r >= 0; --r) {
    row.clear();
    for (int c = 0; c < dim; ++c) {
      const int v = levels[static_cast<std::size_t>(r) * dim + c];
      if (wide) row.push_back(static_cast<char>((v >> 8) & 0xff));
      row.push_back(static_cast<char>(v & 0xff));
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_csv(const EmbeddedImage& image, std::ostream& out) {
  for (int r = image.dim - 1; r >= 0; --r) {
    for (int c = 0; c < image.dim; ++c) {
      if (c > 0) out << ',';
      out << detail::format_real(image.at(r, c));
    }
    out << '\n';
  }
}

void write_image(const EmbeddedImage& image, const ImageWriteSettings& settings, std::ostream& out) {
  if (settings.format == ImageFormat::Pgm) {
    write_pgm(image, settings, out);
  } else {
    write_csv(image, out);
  }
}

namespace {

int read_header_int(std::istream& in) {
  // Header fields are separated by whitespace; `#` starts a comment.
  while (true) {
    const int ch = in.peek();
    if (ch == '#') {
      std::string skip;
      std::getline(in, skip);
    } else if (std::isspace(ch)) {
      in.get();
    } else {
      break;
    }
  }
  int v = 0;
  if (!(in >> v) || v < 0) throw Error("malformed PGM header");
  return v;
}

}  // namespace

PgmImage read_pgm(std::istream& in) {
  char magic[2] = {};
  if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '5') throw Error("not a binary PGM (P5)");
  PgmImage img;
  img.width = read_header_int(in);
  img.height = read_header_int(in);
  img.max_gray = read_header_int(in);
  if (img.max_gray < 1 || img.max_gray > 65535) throw Error("PGM maxval out of range");
  if (!std::isspace(in.get())) throw Error("malformed PGM header");

  const bool wide = img.max_gray > 255;
  const std::size_t count = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  img.pixels.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    int v = in.get();
    if (wide && v != EOF) {
      const int lo = in.get();
      v = lo == EOF ? EOF : (v << 8) | lo;
    }
    if (v == EOF) throw Error("PGM pixel data truncated");
    img.pixels[i] = v;
  }
  if (in.peek() != EOF) throw Error("trailing bytes after PGM pixel data");
  return img;
}

EmbeddedImage read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(detail::to_real(cell, number));
    rows.push_back(std::move(row));
  }
  const int dim = static_cast<int>(rows.size());
  EmbeddedImage image(dim);
  for (int i = 0; i < dim; ++i) {
    if (static_cast<int>(rows[i].size()) != dim) throw ParseError(static_cast<std::size_t>(i + 1), "CSV image is not square");
    for (int c = 0; c < dim; ++c) image.at(dim - 1 - i, c) = rows[i][c];
  }
  return image;
}

}  // namespace spemb::image_io
