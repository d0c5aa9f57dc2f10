#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "leafbench/clahe.hpp"
#include "leafbench/filters.hpp"
#include "leafbench/image_io.hpp"
#include "leafbench/metrics.hpp"
#include "leafbench/noise.hpp"

namespace leafbench {

enum class ExperimentId { E01, E02, E03, E04, E05, E06, E07, E08, E09 };

inline constexpr std::array<ExperimentId, 9> all_experiments = {
    ExperimentId::E01, ExperimentId::E02, ExperimentId::E03, ExperimentId::E04, ExperimentId::E05,
    ExperimentId::E06, ExperimentId::E07, ExperimentId::E08, ExperimentId::E09};

enum class StageOrder { none, clahe_then_denoise, denoise_then_clahe };

inline std::string_view experiment_name(ExperimentId id) {
  static constexpr std::array<std::string_view, 9> names = {"E01", "E02", "E03", "E04", "E05",
                                                            "E06", "E07", "E08", "E09"};
  return names[static_cast<std::size_t>(id)];
}

inline std::optional<ExperimentId> parse_experiment(std::string_view s) {
  for (auto id : all_experiments)
    if (experiment_name(id) == s) return id;
  return std::nullopt;
}

inline StageOrder experiment_order(ExperimentId id) {
  const auto i = static_cast<int>(id);
  if (i == 0) return StageOrder::none;
  return i <= 4 ? StageOrder::clahe_then_denoise : StageOrder::denoise_then_clahe;
}

/// CLAHE settings of E02-E05, repeated for E06-E09.
inline std::optional<ClaheParams> experiment_clahe(ExperimentId id) {
  static constexpr std::array<std::pair<double, int>, 4> settings = {{{2.0, 8}, {2.0, 5}, {1.0, 5}, {0.5, 5}}};
  const auto i = static_cast<int>(id);
  if (i == 0) return std::nullopt;
  const auto [clip, grid] = settings[static_cast<std::size_t>((i - 1) % 4)];
  return ClaheParams{clip, {grid, grid}};
}

/// Column heading used in the tables: Denoise, CD (2.0,8), ..., DC (0.5,5).
inline std::string experiment_heading(ExperimentId id) {
  const auto order = experiment_order(id);
  if (order == StageOrder::none) return "Denoise";
  const auto p = *experiment_clahe(id);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s (%.1f,%d)", order == StageOrder::clahe_then_denoise ? "CD" : "DC",
                p.clip_limit, p.tile_grid.gx);
  return buf;
}

struct NoiseStage {
  friend bool operator==(const NoiseStage&, const NoiseStage&) = default;
};
struct FilterStage {
  friend bool operator==(const FilterStage&, const FilterStage&) = default;
};
struct ClaheStage {
  ClaheParams params;
  friend bool operator==(const ClaheStage&, const ClaheStage&) = default;
};
using Stage = std::variant<NoiseStage, FilterStage, ClaheStage>;

inline std::string_view stage_name(const Stage& s) {
  if (std::holds_alternative<NoiseStage>(s)) return "noise";
  if (std::holds_alternative<FilterStage>(s)) return "filter";
  return "clahe";
}

inline std::vector<Stage> plan_experiment(ExperimentId id) {
  switch (experiment_order(id)) {
    case StageOrder::none: return {NoiseStage{}, FilterStage{}};
    case StageOrder::clahe_then_denoise: return {NoiseStage{}, ClaheStage{*experiment_clahe(id)}, FilterStage{}};
    case StageOrder::denoise_then_clahe: return {NoiseStage{}, FilterStage{}, ClaheStage{*experiment_clahe(id)}};
  }
  return {};
}

namespace detail {

template <typename F>
decltype(auto) run_stage(std::string_view stage, F&& f) {
  try {
    return std::forward<F>(f)();
  } catch (const Error& e) {
    throw Error(e.code(), "stage " + std::string(stage) + ": " + e.detail());
  }
}

}  // namespace detail

struct CellResult {
  Raster enhanced;
  MetricVector metrics;
};

/// Run one (noise, filter, experiment) cell on a clean image. Noise uses
/// derive_stream(noise.seed, image_index). Metrics compare against `clean`.
inline CellResult run_cell(const Raster& clean, const NoiseSpec& noise, const FilterSpec& filter, ExperimentId exp,
                           const MetricConfig& metric_config = {}, std::uint64_t image_index = 0) {
  Raster current = clean;
  for (const Stage& stage : plan_experiment(exp)) {
    const auto name = stage_name(stage);
    current = detail::run_stage(name, [&] {
      if (std::holds_alternative<NoiseStage>(stage)) return apply_noise(current, noise, image_index);
      if (std::holds_alternative<FilterStage>(stage)) return apply_filter(current, filter);
      return clahe(current, std::get<ClaheStage>(stage).params);
    });
  }
  MetricVector m = detail::run_stage("metrics", [&] { return evaluate(clean, current, metric_config); });
  return {std::move(current), m};
}

struct RunRecord {
  std::uint64_t image_id = 0;
  NoiseKind noise = NoiseKind::gaussian;
  FilterKind filter = FilterKind::mean;
  ExperimentId experiment = ExperimentId::E01;
  MetricVector metrics;
};

struct AggregateRow {
  NoiseKind noise = NoiseKind::gaussian;
  FilterKind filter = FilterKind::mean;
  ExperimentId experiment = ExperimentId::E01;
  MetricVector mean;
  std::uint64_t n_images = 0;
  std::uint64_t n_excluded_psnr = 0;

  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

inline auto cell_key(NoiseKind n, FilterKind f, ExperimentId e) {
  return std::tuple{static_cast<int>(n), static_cast<int>(f), static_cast<int>(e)};
}

struct ImageFailure {
  std::uint64_t image_id = 0;
  std::string source;
  std::string message;
};

struct GridConfig {
  std::uint64_t master_seed = 0;
  std::vector<NoiseSpec> noises = default_noises();
  std::vector<FilterSpec> filters = default_filters();
  std::vector<ExperimentId> experiments{all_experiments.begin(), all_experiments.end()};
  MetricConfig metric_config{};
  int image_size = 256;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::function<void(std::uint64_t, const std::string&)> on_image_done;
};

struct GridResult {
  std::vector<RunRecord> records;
  std::vector<AggregateRow> aggregates;
  std::vector<ImageFailure> failures;
};

/// Arithmetic means per (noise, filter, experiment); +inf PSNR values are excluded from
/// the PSNR mean and counted. Rows come out in canonical key order.
inline std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records) {
  struct Acc {
    double mse = 0, ssim = 0, psnr = 0, nrmse = 0, nmi = 0;
    std::uint64_t n = 0, excluded = 0;
  };
  std::map<std::tuple<int, int, int>, Acc> cells;
  // Sum in image order so results do not depend on record order.
  std::vector<const RunRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const RunRecord* a, const RunRecord* b) {
    return std::tuple_cat(cell_key(a->noise, a->filter, a->experiment), std::tuple{a->image_id}) <
           std::tuple_cat(cell_key(b->noise, b->filter, b->experiment), std::tuple{b->image_id});
  });
  for (const RunRecord* r : sorted) {
    Acc& a = cells[cell_key(r->noise, r->filter, r->experiment)];
    a.mse += r->metrics.mse;
    a.ssim += r->metrics.ssim;
    a.nrmse += r->metrics.nrmse;
    a.nmi += r->metrics.nmi;
    if (std::isinf(r->metrics.psnr))
      ++a.excluded;
    else
      a.psnr += r->metrics.psnr;
    ++a.n;
  }
  std::vector<AggregateRow> rows;
  rows.reserve(cells.size());
  for (const auto& [key, a] : cells) {
    AggregateRow row;
    row.noise = static_cast<NoiseKind>(std::get<0>(key));
    row.filter = static_cast<FilterKind>(std::get<1>(key));
    row.experiment = static_cast<ExperimentId>(std::get<2>(key));
    const double n = static_cast<double>(a.n);
    row.mean.mse = a.mse / n;
    row.mean.ssim = a.ssim / n;
    row.mean.nrmse = a.nrmse / n;
    row.mean.nmi = a.nmi / n;
    row.mean.psnr = a.excluded == a.n ? std::numeric_limits<double>::infinity()
                                      : a.psnr / static_cast<double>(a.n - a.excluded);
    row.n_images = a.n;
    row.n_excluded_psnr = a.excluded;
    rows.push_back(row);
  }
  return rows;
}

namespace detail {

/// All configured cells for one clean 256x256 image. Each noise realization is shared by
/// every (filter, experiment) cell; the denoised image of E01 feeds every DC experiment
/// and each CLAHE(noisy) feeds every filter of the matching CD experiment.
inline std::vector<RunRecord> run_image(const Raster& clean, std::uint64_t image_id, const GridConfig& cfg) {
  std::vector<RunRecord> out;
  auto record = [&](const NoiseSpec& n, const FilterSpec& f, ExperimentId e, const Raster& enhanced) {
    out.push_back({image_id, n.kind, f.kind, e, run_stage("metrics", [&] {
                     return evaluate(clean, enhanced, cfg.metric_config);
                   })});
  };
  auto wanted = [&](ExperimentId e) {
    return std::find(cfg.experiments.begin(), cfg.experiments.end(), e) != cfg.experiments.end();
  };
  for (const NoiseSpec& base : cfg.noises) {
    NoiseSpec noise = base;
    noise.seed = noise_seed(cfg.master_seed, base.kind);
    const Raster noisy = run_stage("noise", [&] { return apply_noise(clean, noise, image_id); });

    std::map<int, Raster> clahe_noisy;
    for (ExperimentId e : cfg.experiments)
      if (experiment_order(e) == StageOrder::clahe_then_denoise)
        clahe_noisy.emplace(static_cast<int>(e), run_stage("clahe", [&] { return clahe(noisy, *experiment_clahe(e)); }));

    for (const FilterSpec& filter : cfg.filters) {
      const bool need_denoised = std::any_of(cfg.experiments.begin(), cfg.experiments.end(), [](ExperimentId e) {
        return experiment_order(e) != StageOrder::clahe_then_denoise;
      });
      std::optional<Raster> denoised;
      if (need_denoised) denoised = run_stage("filter", [&] { return apply_filter(noisy, filter); });
      for (ExperimentId e : all_experiments) {
        if (!wanted(e)) continue;
        switch (experiment_order(e)) {
          case StageOrder::none: record(noise, filter, e, *denoised); break;
          case StageOrder::clahe_then_denoise:
            record(noise, filter, e,
                   run_stage("filter", [&] { return apply_filter(clahe_noisy.at(static_cast<int>(e)), filter); }));
            break;
          case StageOrder::denoise_then_clahe:
            record(noise, filter, e, run_stage("clahe", [&] { return clahe(*denoised, *experiment_clahe(e)); }));
            break;
        }
      }
    }
  }
  return out;
}

using ImageLoader = std::function<Raster(std::size_t)>;

inline GridResult run_grid_impl(std::size_t count, const ImageLoader& load, const std::vector<std::string>& sources,
                                const GridConfig& cfg) {
  if (count == 0) fail(Errc::empty_corpus, "corpus contains no images");
  if (cfg.noises.empty() || cfg.filters.empty() || cfg.experiments.empty())
    fail(Errc::invalid_argument, "noise, filter and experiment lists must be non-empty");
  for (const auto& n : cfg.noises) n.validate();
  for (const auto& f : cfg.filters) f.validate();
  cfg.metric_config.validate();

  std::vector<std::vector<RunRecord>> per_image(count);
  std::vector<std::optional<ImageFailure>> failed(count);
  std::atomic<std::size_t> next{0};
  std::mutex log_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        const Raster original = load(i);
        const Raster clean = resize_bilinear(original, cfg.image_size, cfg.image_size);
        per_image[i] = run_image(clean, i, cfg);
      } catch (const std::exception& e) {
        failed[i] = ImageFailure{i, sources[i], e.what()};
      }
      if (cfg.on_image_done) {
        std::lock_guard lock(log_mu);
        cfg.on_image_done(i, failed[i] ? "failed: " + failed[i]->message : "ok");
      }
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  GridResult result;
  for (std::size_t i = 0; i < count; ++i) {
    if (failed[i]) result.failures.push_back(*failed[i]);
    for (auto& r : per_image[i]) result.records.push_back(r);
  }
  if (result.records.empty()) fail(Errc::empty_corpus, "every corpus image failed");
  std::stable_sort(result.records.begin(), result.records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tuple_cat(cell_key(a.noise, a.filter, a.experiment), std::tuple{a.image_id}) <
           std::tuple_cat(cell_key(b.noise, b.filter, b.experiment), std::tuple{b.image_id});
  });
  result.aggregates = aggregate(result.records);
  return result;
}

}  // namespace detail

/// Full grid over in-memory images; image_id is the position in `corpus`.
inline GridResult run_grid(const std::vector<Raster>& corpus, const GridConfig& cfg) {
  std::vector<std::string> sources(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) sources[i] = "#" + std::to_string(i);
  return detail::run_grid_impl(corpus.size(), [&](std::size_t i) { return corpus[i]; }, sources, cfg);
}

/// Full grid over image files; image_id is the position in `paths`. Unreadable files are
/// recorded as failures and skipped.
inline GridResult run_grid(const std::vector<std::filesystem::path>& paths, const GridConfig& cfg) {
  std::vector<std::string> sources;
  sources.reserve(paths.size());
  for (const auto& p : paths) sources.push_back(p.string());
  return detail::run_grid_impl(paths.size(), [&](std::size_t i) { return load_image(paths[i]); }, sources, cfg);
}

struct TimingRecord {
  FilterKind filter = FilterKind::mean;
  std::optional<NoiseKind> noise;
  std::size_t image_count = 0;
  int repetitions = 0;
  double elapsed_min = 0.0;
  double elapsed_max = 0.0;
  std::uint64_t checksum = 0;
};

/// Wall-clock seconds to filter every image, repeated; single-threaded.
inline TimingRecord benchmark_filter(const FilterSpec& spec, const std::vector<Raster>& images, int repetitions,
                                     std::optional<NoiseKind> noise = std::nullopt) {
  if (images.empty()) fail(Errc::empty_image_list, "benchmark needs at least one image");
  if (repetitions < 3) fail(Errc::invalid_argument, "benchmark needs at least 3 repetitions");
  spec.validate();
  TimingRecord rec{spec.kind, noise, images.size(), repetitions, std::numeric_limits<double>::infinity(), 0.0, 0};
  for (int r = 0; r < repetitions; ++r) {
    std::uint64_t checksum = 0;
    const auto start = std::chrono::steady_clock::now();
    for (const Raster& img : images) {
      const Raster out = apply_filter(img, spec);
      for (auto s : out.samples()) checksum += s;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    rec.elapsed_min = std::min(rec.elapsed_min, elapsed.count());
    rec.elapsed_max = std::max(rec.elapsed_max, elapsed.count());
    rec.checksum = checksum;
  }
  return rec;
}

}  // namespace leafbench
