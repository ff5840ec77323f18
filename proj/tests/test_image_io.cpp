#include <doctest.h>

#include <spemb/error.hpp>
#include <spemb/image_io.hpp>

#include <cmath>
#include <random>
#include <sstream>

using namespace spemb;

namespace {

// Builds an image from rows given bottom (row 0, smallest y) first.
EmbeddedImage image_of(const std::vector<std::vector<double>>& rows) {
  EmbeddedImage img(static_cast<int>(rows.size()));
  for (int r = 0; r < img.dim; ++r)
    for (int c = 0; c < img.dim; ++c) img.at(r, c) = rows[r][c];
  return img;
}

std::string pgm_bytes(const EmbeddedImage& img, ImageWriteSettings s = {}) {
  std::ostringstream out;
  image_io::write_pgm(img, s, out);
  return out.str();
}

std::vector<int> payload(const std::string& pgm, std::size_t count) {
  std::vector<int> out;
  for (std::size_t i = pgm.size() - count; i < pgm.size(); ++i) out.push_back(static_cast<unsigned char>(pgm[i]));
  return out;
}

}  // namespace

TEST_CASE("PGM examples") {
  SUBCASE("linear anti-diagonal") {
    const std::string bytes = pgm_bytes(image_of({{0, 1}, {1, 0}}));
    CHECK(bytes.rfind("P5\n2 2\n255\n", 0) == 0);
    CHECK(bytes.size() == std::string("P5\n2 2\n255\n").size() + 4);
    // Stored row 1 ([1,0]) is the top image row.
    CHECK(payload(bytes, 4) == std::vector<int>{255, 0, 0, 255});
    CHECK(payload(pgm_bytes(image_of({{1, 0}, {0, 1}})), 4) == std::vector<int>{0, 255, 255, 0});
  }
  SUBCASE("all zero") {
    CHECK(payload(pgm_bytes(image_of({{0, 0}, {0, 0}})), 4) == std::vector<int>{0, 0, 0, 0});
  }
  SUBCASE("log1p on a single-row pair") {
    // round(ln 2 / ln 4 * 255) = round(127.5)
    const long expected = std::lround(std::log1p(1.0) / std::log1p(3.0) * 255.0);
    CHECK(expected == 128);
    EmbeddedImage img(2);
    img.at(1, 0) = 1.0;
    img.at(1, 1) = 3.0;
    ImageWriteSettings s;
    s.scaling = Scaling::Log1p;
    CHECK(payload(pgm_bytes(img, s), 4) == std::vector<int>{128, 255, 0, 0});
  }
  SUBCASE("top row is the largest y bin") {
    CHECK(payload(pgm_bytes(image_of({{4, 0}, {0, 2}})), 4) == std::vector<int>{0, 128, 255, 0});
  }
  SUBCASE("two-byte samples") {
    ImageWriteSettings s;
    s.max_gray = 65535;
    const std::string bytes = pgm_bytes(image_of({{1}}), s);
    CHECK(bytes == std::string("P5\n1 1\n65535\n\xff\xff", 15));
  }
  SUBCASE("max_gray bounds") {
    ImageWriteSettings s;
    s.max_gray = 0;
    CHECK_THROWS_AS(pgm_bytes(image_of({{1}}), s), Error);
    s.max_gray = 65536;
    CHECK_THROWS_AS(pgm_bytes(image_of({{1}}), s), Error);
  }
}

TEST_CASE("CSV examples") {
  std::ostringstream a;
  image_io::write_csv(image_of({{0, 1}, {2, 3}}), a);
  CHECK(a.str() == "2,3\n0,1\n");
  std::ostringstream b;
  image_io::write_csv(image_of({{5}}), b);
  CHECK(b.str() == "5\n");
  std::ostringstream c;
  image_io::write_csv(image_of({{0.1, 1e-300}, {2.5e17, 1.0 / 3.0}}), c);
  CHECK(c.str() == "2.5e+17,0.3333333333333333\n0.1,1e-300\n");
}

TEST_CASE("write_image dispatches on format") {
  ImageWriteSettings s;
  s.format = ImageFormat::Csv;
  std::ostringstream out;
  image_io::write_image(image_of({{0, 1}, {2, 3}}), s, out);
  CHECK(out.str() == "2,3\n0,1\n");
}

TEST_CASE("scaling names") {
  CHECK(image_io::scaling_from_string("linear") == Scaling::Linear);
  CHECK(image_io::scaling_from_string("log1p") == Scaling::Log1p);
  CHECK(image_io::to_string(Scaling::Log1p) == "log1p");
  CHECK_THROWS_AS(image_io::scaling_from_string("gamma"), Error);
}

TEST_CASE("random images: PGM re-parse and CSV round trip") {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> heavy(0.3);
  for (int trial = 0; trial < 25; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 30);
    EmbeddedImage img(dim);
    for (double& v : img.intensities) v = rng() % 3 == 0 ? 0.0 : heavy(rng);
    ImageWriteSettings s;
    s.scaling = trial % 2 ? Scaling::Log1p : Scaling::Linear;
    s.max_gray = trial % 5 == 0 ? 1000 : trial % 3 == 0 ? 1 : 255;

    const std::string bytes = pgm_bytes(img, s);
    CHECK(pgm_bytes(img, s) == bytes);
    std::istringstream in(bytes);
    const image_io::PgmImage pgm = image_io::read_pgm(in);
    CHECK(pgm.width == dim);
    CHECK(pgm.height == dim);
    CHECK(pgm.max_gray == s.max_gray);
    REQUIRE(pgm.pixels.size() == static_cast<std::size_t>(dim) * dim);
    const std::vector<int> levels = image_io::gray_levels(img, s);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) {
        const int px = pgm.pixels[static_cast<std::size_t>(r) * dim + c];
        CHECK(px >= 0);
        CHECK(px <= s.max_gray);
        CHECK(px == levels[static_cast<std::size_t>(dim - 1 - r) * dim + c]);
        // Independent evaluation of the gray-level formula.
        const auto g = [&](double v) { return s.scaling == Scaling::Log1p ? std::log1p(v) : v; };
        double peak = 0.0;
        for (double v : img.intensities) peak = std::max(peak, v);
        const double v = img.at(dim - 1 - r, c);
        const long want = peak > 0.0 ? std::lround(g(v) / g(peak) * s.max_gray) : 0;
        CHECK(px == want);
      }
    }

    std::ostringstream csv;
    image_io::write_csv(img, csv);
    std::istringstream back(csv.str());
    CHECK(image_io::read_csv(back) == img);
  }
}

TEST_CASE("malformed PGM and CSV input") {
  std::istringstream bad_magic("P2\n1 1\n255\n0");
  CHECK_THROWS_AS(image_io::read_pgm(bad_magic), Error);
  std::istringstream short_data(std::string("P5\n2 2\n255\n\x01\x02", 13));
  CHECK_THROWS_AS(image_io::read_pgm(short_data), Error);
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(image_io::read_csv(ragged), Error);
  std::istringstream word("1,x\n3,4\n");
  CHECK_THROWS_AS(image_io::read_csv(word), Error);
}
