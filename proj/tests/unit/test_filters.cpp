#include <catch_amalgamated.hpp>

#include <cmath>

#include "leafbench/filters.hpp"
#include "leafbench/noise.hpp"
#include "oracles.hpp"

using namespace leafbench;

namespace {

Raster impulse(int w, int h, int x, int y) {
  Raster img(w, h, ColorSpace::gray, 0);
  img.at(x, y) = 255;
  return img;
}

Plane random_plane(RandomStream& rng, int w, int h) {
  Plane p(w, h);
  for (auto& v : p.samples) v = rng.uniform() * 255.0;
  return p;
}

}  // namespace

TEST_CASE("kernel validation", "[filters]") {
  CHECK_THROWS_AS(Kernel(2, 3, std::vector<double>(6)), Error);
  CHECK_THROWS_AS(Kernel(3, 3, std::vector<double>(8)), Error);
  double sum = 0;
  for (double c : box_kernel(5).coefficients) sum += c;
  CHECK(std::abs(sum - 1.0) < 1e-12);
  for (int k : {3, 5, 9, 15}) {
    sum = 0;
    for (double t : gaussian_taps(k, auto_gaussian_sigma(k))) sum += t;
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(gaussian_taps(5, 0.0), Error);
}

TEST_CASE("convolve2d", "[filters]") {
  RandomStream rng(17);
  SECTION("single tap is the identity") {
    const Plane p = random_plane(rng, 8, 8);
    CHECK(convolve2d(p, Kernel()).samples == p.samples);
  }
  SECTION("box kernel on an impulse spreads 255/9") {
    Plane p(7, 7, 0.0);
    p.at(3, 3) = 255.0;
    const Plane out = convolve2d(p, box_kernel(3));
    for (int y = 2; y <= 4; ++y)
      for (int x = 2; x <= 4; ++x) CHECK(std::abs(out.at(x, y) - 255.0 / 9.0) < 1e-12);
    CHECK(out.at(0, 0) == 0.0);
  }
  SECTION("matches the quadruple-loop oracle for asymmetric kernels") {
    for (int t = 0; t < 50; ++t) {
      const Plane p = random_plane(rng, 8, 8);
      std::vector<double> k(9);
      for (auto& c : k) c = rng.uniform() * 2.0 - 1.0;
      const Plane out = convolve2d(p, Kernel(3, 3, k));
      const auto ref = oracle::convolve(p.samples, 8, 8, k, 3, 3);
      for (std::size_t i = 0; i < ref.size(); ++i) REQUIRE(std::abs(out.samples[i] - ref[i]) < 1e-10);
    }
  }
  SECTION("kernel larger than the image is rejected") {
    try {
      convolve2d(Plane(3, 3), box_kernel(5));
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::kernel_too_large);
    }
  }
}

TEST_CASE("mean filter", "[filters]") {
  const Raster flat(10, 10, ColorSpace::srgb, 77);
  CHECK(mean_filter(flat, 5) == flat);

  const Raster spot = mean_filter(impulse(11, 11, 5, 5), 5);
  for (int y = 3; y <= 7; ++y)
    for (int x = 3; x <= 7; ++x) CHECK(spot.at(x, y) == 10);
  CHECK(spot.at(2, 5) == 0);

  RandomStream rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto space = t % 2 ? ColorSpace::srgb : ColorSpace::gray;
    const Raster img = testing::random_raster(rng, 5 + t % 12, 5 + (t * 7) % 12, space);
    REQUIRE(mean_filter(img, 5) == oracle::mean(img, 5));
    REQUIRE(mean_filter(img, 3) == oracle::mean(img, 3));
  }
}

TEST_CASE("gaussian filter", "[filters]") {
  CHECK(std::abs(auto_gaussian_sigma(5) - 1.1) < 1e-12);
  const Raster flat(10, 10, ColorSpace::srgb, 200);
  CHECK(gaussian_filter(flat, 5) == flat);

  RandomStream rng(2);
  SECTION("separable pass equals the full outer-product convolution") {
    for (int t = 0; t < 10; ++t) {
      const Plane p = random_plane(rng, 12, 9);
      const auto taps = gaussian_taps(5, 1.1);
      const Plane sep = convolve_separable(p, taps, taps);
      const Plane full = convolve2d(p, outer_product(taps, taps));
      for (std::size_t i = 0; i < sep.samples.size(); ++i) REQUIRE(std::abs(sep.samples[i] - full.samples[i]) < 1e-9);
    }
  }
  SECTION("matches the definitional 2-D oracle within one level") {
    for (int t = 0; t < 50; ++t) {
      const Raster img = testing::random_raster(rng, 5 + t % 12, 6 + t % 11, ColorSpace::srgb);
      const Raster out = gaussian_filter(img, 5);
      for (int c = 0; c < 3; ++c) {
        const auto ref = oracle::gaussian_unquantized(img, c, 5, 1.1);
        for (int i = 0; i < img.width() * img.height(); ++i)
          REQUIRE(std::abs(int(out.samples()[i * 3 + c]) - int(oracle::round_clip(ref[i]))) <= 1);
      }
    }
  }
}

TEST_CASE("median selection networks select the median", "[filters]") {
  for (int n : {1, 3, 9}) {
    const auto& net = detail::cached_median_network(n);
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<int> v(n);
      for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1;
      for (auto [a, b] : net)
        if (v[a] > v[b]) std::swap(v[a], v[b]);
      const int ones = __builtin_popcount(static_cast<unsigned>(mask));
      REQUIRE(v[n / 2] == (ones > n / 2 ? 1 : 0));
    }
  }
  RandomStream rng(3);
  for (int n : {25, 49, 81}) {
    const auto& net = detail::cached_median_network(n);
    for (int t = 0; t < 2000; ++t) {
      std::vector<int> v(n);
      for (auto& x : v) x = static_cast<int>(rng.next() % 256);
      std::vector<int> sorted = v;
      std::sort(sorted.begin(), sorted.end());
      for (auto [a, b] : net)
        if (v[a] > v[b]) std::swap(v[a], v[b]);
      REQUIRE(v[n / 2] == sorted[n / 2]);
    }
  }
}

TEST_CASE("median filter", "[filters]") {
  const Raster flat(10, 10, ColorSpace::srgb, 9);
  CHECK(median_filter(flat, 5) == flat);
  CHECK(median_filter(impulse(9, 9, 4, 4), 3) == Raster(9, 9, ColorSpace::gray, 0));

  RandomStream rng(4);
  for (int t = 0; t < 50; ++t) {
    const auto space = t % 2 ? ColorSpace::srgb : ColorSpace::gray;
    const Raster img = testing::random_raster(rng, 5 + t % 12, 5 + (t * 5) % 12, space);
    REQUIRE(median_filter(img, 5) == oracle::median(img, 5));
    REQUIRE(median_filter(img, 3) == oracle::median(img, 3));
  }
  const Raster big = testing::random_raster(rng, 16, 16, ColorSpace::gray);
  CHECK(median_filter(big, 7) == oracle::median(big, 7));
}

TEST_CASE("bilateral filter", "[filters]") {
  const Raster flat(12, 12, ColorSpace::srgb, 150);
  CHECK(bilateral_filter(flat, 9, 75, 75) == flat);

  RandomStream rng(5);
  SECTION("matches the double-loop oracle") {
    for (int t = 0; t < 50; ++t) {
      const auto space = t % 2 ? ColorSpace::srgb : ColorSpace::gray;
      const Raster img = testing::random_raster(rng, 9 + t % 8, 9 + (t * 3) % 8, space);
      REQUIRE(testing::max_abs_diff(bilateral_filter(img, 9, 75, 75), oracle::bilateral(img, 9, 75, 75)) <= 1);
      REQUIRE(testing::max_abs_diff(bilateral_filter(img, 5, 20, 3), oracle::bilateral(img, 5, 20, 3)) <= 1);
    }
  }
  SECTION("huge color sigma tends to the spatial gaussian") {
    const Raster img = testing::random_raster(rng, 14, 14, ColorSpace::gray);
    CHECK(testing::max_abs_diff(bilateral_filter(img, 5, 1e7, 2.0), oracle::spatial_gaussian(img, 5, 2.0)) <= 1);
  }
  SECTION("step edge survives better than gaussian smoothing") {
    Raster step(16, 16, ColorSpace::gray, 0);
    for (int y = 0; y < 16; ++y)
      for (int x = 8; x < 16; ++x) step.at(x, y) = 255;
    const Raster bi = bilateral_filter(step, 9, 75, 75);
    const Raster ga = gaussian_filter(step, 9, 75.0);
    int dev_bi = 0, dev_ga = 0;
    for (int y = 0; y < 16; ++y)
      for (int x : {7, 8}) {
        dev_bi = std::max(dev_bi, std::abs(int(bi.at(x, y)) - int(step.at(x, y))));
        dev_ga = std::max(dev_ga, std::abs(int(ga.at(x, y)) - int(step.at(x, y))));
      }
    CHECK(dev_bi < dev_ga);
  }
}

TEST_CASE("non-local means", "[filters]") {
  const Raster flat(20, 20, ColorSpace::srgb, 90);
  CHECK(nlm_filter(flat, 10, 10, 7, 21) == flat);

  RandomStream rng(6);
  SECTION("single channel matches the triple-loop oracle") {
    for (int t = 0; t < 50; ++t) {
      const int w = 5 + t % 12, h = 5 + (t * 7) % 12;
      const Raster img = testing::random_raster(rng, w, h, ColorSpace::gray);
      const auto [tw, sw] = t % 3 == 0 ? std::pair{7, 21} : std::pair{3, 5};
      const Raster out = nlm_filter(img, 10, 10, tw, sw);
      const auto ref = oracle::nlm_gray(img, 10, tw, sw);
      for (int i = 0; i < w * h; ++i) REQUIRE(std::abs(int(out.samples()[i]) - int(oracle::round_clip(ref[i]))) <= 1);
    }
  }
  SECTION("color input is filtered per luma/chroma plane") {
    for (int t = 0; t < 10; ++t) {
      const Raster img = testing::random_raster(rng, 10, 10, ColorSpace::srgb);
      const Raster ycc = to_luma_chroma(img);
      std::vector<Plane> planes;
      for (int c = 0; c < 3; ++c) {
        const Raster one = merge_planes(std::vector<Plane>{extract_plane(ycc, c)}, ColorSpace::gray);
        Plane p(10, 10);
        p.samples = oracle::nlm_gray(one, c == 0 ? 12.0 : 6.0, 3, 5);
        planes.push_back(p);
      }
      const Raster ref = from_luma_chroma(planes[0], planes[1], planes[2]);
      REQUIRE(testing::max_abs_diff(nlm_filter(img, 12, 6, 3, 5), ref) <= 1);
    }
  }
  SECTION("invalid windows and strengths") {
    const Raster img(16, 16, ColorSpace::gray);
    try {
      nlm_filter(img, 10, 10, 9, 7);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::invalid_window);
    }
    try {
      nlm_filter(img, 0, 10, 7, 21);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::invalid_strength);
    }
  }
}

// Pooled over 10 seeds with the default strengths. Single seeds scatter around the bound
// (0.10 to 0.26 per seed on a 16x16 patch).
TEST_CASE("non-local means flattens a noisy flat patch", "[filters]") {
  auto variance = [](const Raster& img) {
    double m = 0, v = 0;
    for (auto x : img.samples()) m += x;
    m /= img.size();
    for (auto x : img.samples()) v += (x - m) * (x - m);
    return v / (img.size() - 1);
  };
  const Raster flat(16, 16, ColorSpace::srgb, 128);
  double in_var = 0, out_var = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RandomStream s = derive_stream(seed, 0);
    const Raster noisy = add_gaussian(flat, 0.0, 0.01, s);
    const Raster out = apply_filter(noisy, FilterSpec::of(FilterKind::nlm));
    in_var += variance(noisy);
    out_var += variance(out);
  }
  CAPTURE(out_var / in_var);
  CHECK(out_var < 0.25 * in_var);
}

TEST_CASE("apply_filter dispatch and defaults", "[filters]") {
  RandomStream rng(7);
  const Raster img = testing::random_raster(rng, 24, 24, ColorSpace::srgb);
  FilterSpec mean5 = FilterSpec::of(FilterKind::mean);
  CHECK(apply_filter(img, mean5) == mean_filter(img, 5));
  CHECK(apply_filter(img, FilterSpec::of(FilterKind::gaussian)) == gaussian_filter(img, 5));
  CHECK(apply_filter(img, FilterSpec::of(FilterKind::median)) == median_filter(img, 5));

  const FilterSpec bi = FilterSpec::of(FilterKind::bilateral);
  CHECK(bi.diameter == 9);
  CHECK(bi.sigma_color == 75.0);
  CHECK(bi.sigma_space == 75.0);
  CHECK(apply_filter(img, bi) == bilateral_filter(img, 9, 75, 75));

  const FilterSpec nl = FilterSpec::of(FilterKind::nlm);
  CHECK(nl.h == 10.0);
  CHECK(nl.h_color == 10.0);
  CHECK(nl.template_window == 7);
  CHECK(nl.search_window == 21);
  CHECK(apply_filter(img, nl) == nlm_filter(img, 10, 10, 7, 21));

  CHECK(filter_label(FilterKind::nlm) == "bm3d");
  CHECK(parse_filter_kind("bm3d") == FilterKind::nlm);
  CHECK(parse_filter_kind("nlm") == FilterKind::nlm);
  FilterSpec bad = FilterSpec::of(FilterKind::median);
  bad.kernel_size = 4;
  CHECK_THROWS_AS(apply_filter(img, bad), Error);
  CHECK(default_filters().size() == 5);
}
