#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include "desk_corpus.hpp"
#include "leafbench/pipeline.hpp"
#include "oracles.hpp"

using namespace leafbench;

namespace {

Raster gradient(int size) {
  Raster img(size, size, ColorSpace::srgb);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      img.at(x, y, 0) = static_cast<std::uint8_t>(40 + x * 150 / size);
      img.at(x, y, 1) = static_cast<std::uint8_t>(60 + y * 120 / size);
      img.at(x, y, 2) = static_cast<std::uint8_t>(90 + (x + y) * 60 / (2 * size));
    }
  return img;
}

GridConfig small_grid() {
  GridConfig cfg;
  cfg.master_seed = 11;
  cfg.image_size = 32;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST_CASE("experiment plans", "[pipeline]") {
  CHECK(plan_experiment(ExperimentId::E01) == std::vector<Stage>{NoiseStage{}, FilterStage{}});
  CHECK(plan_experiment(ExperimentId::E05) ==
        std::vector<Stage>{NoiseStage{}, ClaheStage{{0.5, {5, 5}}}, FilterStage{}});
  CHECK(plan_experiment(ExperimentId::E09) ==
        std::vector<Stage>{NoiseStage{}, FilterStage{}, ClaheStage{{0.5, {5, 5}}}});
  CHECK(plan_experiment(ExperimentId::E02) ==
        std::vector<Stage>{NoiseStage{}, ClaheStage{{2.0, {8, 8}}}, FilterStage{}});
  CHECK(plan_experiment(ExperimentId::E06) ==
        std::vector<Stage>{NoiseStage{}, FilterStage{}, ClaheStage{{2.0, {8, 8}}}});
  const std::vector<std::pair<double, int>> settings{{2.0, 8}, {2.0, 5}, {1.0, 5}, {0.5, 5}};
  for (int i = 0; i < 4; ++i) {
    const auto cd = static_cast<ExperimentId>(1 + i), dc = static_cast<ExperimentId>(5 + i);
    CHECK(experiment_order(cd) == StageOrder::clahe_then_denoise);
    CHECK(experiment_order(dc) == StageOrder::denoise_then_clahe);
    CHECK(experiment_clahe(cd) == ClaheParams{settings[i].first, {settings[i].second, settings[i].second}});
    CHECK(experiment_clahe(dc) == experiment_clahe(cd));
  }
  CHECK_FALSE(experiment_clahe(ExperimentId::E01));
  CHECK(experiment_heading(ExperimentId::E01) == "Denoise");
  CHECK(experiment_heading(ExperimentId::E02) == "CD (2.0,8)");
  CHECK(experiment_heading(ExperimentId::E09) == "DC (0.5,5)");
  for (auto e : all_experiments) CHECK(parse_experiment(experiment_name(e)) == e);
}

TEST_CASE("run_cell", "[pipeline]") {
  SECTION("zero-strength noise and a mean filter keep a constant image") {
    const Raster flat(32, 32, ColorSpace::srgb, 120);
    const auto r = run_cell(flat, NoiseSpec::gaussian(0.0, 0.0), FilterSpec::of(FilterKind::mean), ExperimentId::E01);
    CHECK(r.metrics.mse == 0.0);
    CHECK(r.enhanced == flat);
  }
  SECTION("E06 is E01 followed by CLAHE") {
    const Raster img = testing::make_leaf_image(3, 0, 64);
    NoiseSpec n = NoiseSpec::speckle();
    n.seed = 5;
    for (const FilterSpec& f : default_filters()) {
      const auto e01 = run_cell(img, n, f, ExperimentId::E01, {}, 2);
      const auto e06 = run_cell(img, n, f, ExperimentId::E06, {}, 2);
      CHECK(e06.enhanced == clahe(e01.enhanced, {2.0, {8, 8}}));
      const Raster noisy = apply_noise(img, n, 2);
      CHECK(e01.enhanced == apply_filter(noisy, f));
    }
  }
  SECTION("metrics compare against the clean image") {
    const Raster img = gradient(64);
    NoiseSpec n = NoiseSpec::uniform();
    n.seed = 8;
    const auto r = run_cell(img, n, FilterSpec::of(FilterKind::median), ExperimentId::E03);
    CHECK(r.metrics == evaluate(img, r.enhanced));
  }
  SECTION("median beats mean on salt and pepper over a smooth gradient") {
    const Raster img = gradient(256);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      NoiseSpec n = NoiseSpec::salt_pepper(0.05);
      n.seed = seed;
      const double med = run_cell(img, n, FilterSpec::of(FilterKind::median), ExperimentId::E01).metrics.psnr;
      const double avg = run_cell(img, n, FilterSpec::of(FilterKind::mean), ExperimentId::E01).metrics.psnr;
      CAPTURE(seed, med, avg);
      CHECK(med > avg);
    }
  }
  SECTION("stage errors carry the stage name") {
    const Raster tiny(4, 4, ColorSpace::srgb, 10);
    try {
      run_cell(tiny, NoiseSpec::gaussian(), FilterSpec::of(FilterKind::mean), ExperimentId::E01);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::kernel_too_large);
      CHECK(std::string(e.what()).find("stage filter") != std::string::npos);
    }
  }
}

TEST_CASE("aggregation", "[pipeline]") {
  std::vector<RunRecord> recs;
  RunRecord a;
  a.image_id = 0;
  a.metrics = {10, 0.5, 30.0, 0.1, 1.2};
  RunRecord b = a;
  b.image_id = 1;
  b.metrics = {20, 0.7, 32.0, 0.3, 1.4};
  recs = {a, b};
  auto rows = aggregate(recs);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].mean.psnr == 31.0);
  CHECK(rows[0].mean.mse == 15.0);
  CHECK(rows[0].n_images == 2);
  CHECK(rows[0].n_excluded_psnr == 0);

  RunRecord c = a;
  c.image_id = 2;
  c.metrics = {0, 1, std::numeric_limits<double>::infinity(), 0, 2};
  rows = aggregate({a, b, c});
  CHECK(rows[0].mean.psnr == 31.0);
  CHECK(rows[0].n_images == 3);
  CHECK(rows[0].n_excluded_psnr == 1);
  CHECK(rows[0].mean.mse == 10.0);

  rows = aggregate({c});
  CHECK(std::isinf(rows[0].mean.psnr));
}

TEST_CASE("aggregation ignores record order", "[pipeline]") {
  std::vector<RunRecord> recs;
  RandomStream rng(1);
  for (std::uint64_t i = 0; i < 40; ++i)
    for (auto f : all_filter_kinds) {
      RunRecord r;
      r.image_id = i;
      r.filter = f;
      r.metrics = {rng.uniform() * 100, rng.uniform(), 20 + rng.uniform() * 20, rng.uniform(), 1 + rng.uniform()};
      recs.push_back(r);
    }
  const auto ref = aggregate(recs);
  std::mt19937 shuffle_rng(5);
  for (int t = 0; t < 5; ++t) {
    std::shuffle(recs.begin(), recs.end(), shuffle_rng);
    REQUIRE(aggregate(recs) == ref);
  }
}

TEST_CASE("full grid", "[pipeline]") {
  const auto corpus = testing::make_desk_corpus(9, 2, 48);
  GridConfig cfg = small_grid();
  const GridResult res = run_grid(corpus, cfg);
  CHECK(res.aggregates.size() == 180);
  CHECK(res.records.size() == 360);
  CHECK(res.failures.empty());
  for (const auto& row : res.aggregates) CHECK(row.n_images == 2);

  SECTION("deterministic across runs and thread counts") {
    cfg.threads = 3;
    const GridResult again = run_grid(corpus, cfg);
    CHECK(again.aggregates == res.aggregates);
  }
  SECTION("each record matches an isolated run_cell") {
    for (const auto& rec : res.records) {
      if (rec.image_id != 1 || rec.filter == FilterKind::nlm) continue;
      NoiseSpec n;
      for (const auto& d : default_noises())
        if (d.kind == rec.noise) n = d;
      n.seed = noise_seed(cfg.master_seed, n.kind);
      const auto cell = run_cell(resize_bilinear(corpus[1], 32, 32), n, FilterSpec::of(rec.filter), rec.experiment,
                                 {}, rec.image_id);
      REQUIRE(cell.metrics == rec.metrics);
    }
  }
}

TEST_CASE("grid over files records failures and continues", "[pipeline]") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(LEAFBENCH_TEST_SCRATCH) / "pipeline_corpus";
  fs::remove_all(dir);
  auto paths = testing::write_desk_corpus(dir, 4, 2, 40);
  std::ofstream(dir / "leaf_bad.png") << "garbage";
  paths.push_back(dir / "leaf_bad.png");
  GridConfig cfg = small_grid();
  cfg.filters = {FilterSpec::of(FilterKind::median)};
  cfg.experiments = {ExperimentId::E01, ExperimentId::E09};
  std::vector<std::uint64_t> done;
  cfg.on_image_done = [&](std::uint64_t i, const std::string&) { done.push_back(i); };
  const GridResult res = run_grid(paths, cfg);
  REQUIRE(res.failures.size() == 1);
  CHECK(res.failures[0].image_id == 2);
  CHECK(res.aggregates.size() == 8);
  CHECK(done.size() == 3);
  for (const auto& row : res.aggregates) CHECK(row.n_images == 2);

  CHECK_THROWS_AS(run_grid(std::vector<Raster>{}, cfg), Error);
}

TEST_CASE("benchmark_filter", "[pipeline]") {
  const auto images = testing::make_desk_corpus(1, 3, 32);
  const TimingRecord t = benchmark_filter(FilterSpec::of(FilterKind::median), images, 3, NoiseKind::gaussian);
  CHECK(t.elapsed_min <= t.elapsed_max);
  CHECK(t.image_count == 3);
  CHECK(t.repetitions == 3);
  try {
    benchmark_filter(FilterSpec::of(FilterKind::median), {}, 3);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_image_list);
  }
  CHECK_THROWS_AS(benchmark_filter(FilterSpec::of(FilterKind::median), images, 2), Error);
}
