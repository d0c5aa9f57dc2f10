#include <catch_amalgamated.hpp>

#include "leafbench/raster.hpp"
#include "oracles.hpp"

using namespace leafbench;

TEST_CASE("raster shape invariants", "[raster]") {
  Raster gray(4, 3, ColorSpace::gray);
  CHECK(gray.channels() == 1);
  CHECK(gray.size() == 12);
  Raster rgb(4, 3, ColorSpace::srgb, 7);
  CHECK(rgb.channels() == 3);
  CHECK(rgb.size() == 36);
  CHECK(rgb.at(3, 2, 2) == 7);
  CHECK_THROWS_AS(Raster(0, 3, ColorSpace::gray), Error);
  CHECK_THROWS_AS(Raster(2, 2, ColorSpace::gray, std::vector<std::uint8_t>(5)), Error);
  try {
    Raster(-1, 1, ColorSpace::srgb);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_dimension);
  }
}

TEST_CASE("reflect101 mirrors without repeating the edge", "[raster]") {
  for (int n : {1, 2, 3, 7, 16})
    for (int i = -40; i < 40; ++i) CHECK(reflect101(i, n) == oracle::reflect(i, n));
  CHECK(reflect101(-1, 5) == 1);
  CHECK(reflect101(-2, 5) == 2);
  CHECK(reflect101(5, 5) == 3);
}

TEST_CASE("quantize rounds half away from zero and clips", "[raster]") {
  CHECK(quantize_sample(10.2) == 10);
  CHECK(quantize_sample(-3.7) == 0);
  CHECK(quantize_sample(260.0) == 255);
  CHECK(quantize_sample(127.5) == 128);
  CHECK(quantize_sample(0.49) == 0);
  CHECK(quantize_sample(254.5) == 255);
  Plane p(3, 1);
  p.samples = {10.2, -3.7, 127.5};
  const Raster q = quantize(p);
  CHECK(q.space() == ColorSpace::gray);
  CHECK(q.samples()[0] == 10);
  CHECK(q.samples()[1] == 0);
  CHECK(q.samples()[2] == 128);
}

TEST_CASE("bilinear resize", "[raster]") {
  SECTION("constant stays constant") {
    const Raster c(13, 7, ColorSpace::srgb, 100);
    for (auto [w, h] : {std::pair{256, 256}, std::pair{5, 3}, std::pair{13, 7}, std::pair{40, 2}}) {
      const Raster r = resize_bilinear(c, w, h);
      CHECK(r.width() == w);
      CHECK(r.height() == h);
      CHECK(std::all_of(r.samples().begin(), r.samples().end(), [](auto v) { return v == 100; }));
    }
  }
  SECTION("identical dims copy exactly") {
    RandomStream rng(3);
    const Raster img = testing::random_raster(rng, 9, 11, ColorSpace::srgb);
    CHECK(resize_bilinear(img, 9, 11) == img);
  }
  SECTION("2x1 to 4x1 matches the scalar oracle") {
    const Raster src(2, 1, ColorSpace::gray, std::vector<std::uint8_t>{0, 255});
    const Raster r = resize_bilinear(src, 4, 1);
    const std::vector<double> row{0.0, 255.0};
    for (int x = 0; x < 4; ++x) CHECK(r.at(x, 0) == oracle::round_clip(oracle::bilinear_1d(row, 4, x)));
    CHECK(std::vector<int>(r.samples().begin(), r.samples().end()) == std::vector<int>{0, 64, 191, 255});
  }
  // Summation order differs from the oracle, so exact .5 ties may round either way.
  SECTION("separable oracle on random images, up and down") {
    RandomStream rng(11);
    for (int t = 0; t < 5; ++t) {
      const Raster img = testing::random_raster(rng, 5 + t, 4 + 2 * t, ColorSpace::gray);
      for (auto [w, h] : {std::pair{17, 9}, std::pair{3, 2}}) {
        const Raster r = resize_bilinear(img, w, h);
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x) {
            std::vector<double> col;
            for (int sy = 0; sy < img.height(); ++sy) {
              std::vector<double> row;
              for (int sx = 0; sx < img.width(); ++sx) row.push_back(img.at(sx, sy));
              col.push_back(oracle::bilinear_1d(row, w, x));
            }
            CHECK(std::abs(int(r.at(x, y)) - int(oracle::round_clip(oracle::bilinear_1d(col, h, y)))) <= 1);
          }
      }
    }
  }
}

TEST_CASE("luma/chroma conversion", "[raster]") {
  SECTION("achromatic fixed point and exhaustive gray round trip") {
    for (int v = 0; v < 256; ++v) {
      const Raster px(1, 1, ColorSpace::srgb, static_cast<std::uint8_t>(v));
      const Raster ycc = to_luma_chroma(px);
      CHECK(ycc.at(0, 0, 0) == v);
      CHECK(ycc.at(0, 0, 1) == 128);
      CHECK(ycc.at(0, 0, 2) == 128);
      CHECK(testing::max_abs_diff(from_luma_chroma(ycc), px) <= 1);
    }
  }
  SECTION("pure red has Y = round(0.299 * 255) = 76") {
    const Raster red(1, 1, ColorSpace::srgb, std::vector<std::uint8_t>{255, 0, 0});
    CHECK(to_luma_chroma(red).at(0, 0, 0) == 76);
  }
  SECTION("10^4 random triples round trip within one level") {
    RandomStream rng(2024);
    const Raster img = testing::random_raster(rng, 100, 100, ColorSpace::srgb);
    const Raster ycc = to_luma_chroma(img);
    CHECK(ycc.space() == ColorSpace::luma_chroma);
    CHECK(testing::max_abs_diff(from_luma_chroma(ycc), img) <= 1);
  }
  SECTION("wrong color space is rejected") {
    const Raster gray(2, 2, ColorSpace::gray);
    CHECK_THROWS_AS(to_luma_chroma(gray), Error);
  }
}

TEST_CASE("planes split and merge losslessly", "[raster]") {
  RandomStream rng(5);
  const Raster img = testing::random_raster(rng, 6, 4, ColorSpace::srgb);
  std::vector<Plane> planes;
  for (int c = 0; c < 3; ++c) planes.push_back(extract_plane(img, c));
  CHECK(merge_planes(planes, ColorSpace::srgb) == img);
}
