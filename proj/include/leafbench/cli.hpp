#pragma once

// Command-line front end. run_cli() is the whole program minus main(), so tests can drive
// it with in-memory streams.
//
//   leafbench noise   --kind K [--mean M --variance V --amount A --lo L --hi H] --seed S IN OUT
//   leafbench filter  --kind K [--kernel-size N --sigma S --diameter D ...] IN OUT
//   leafbench clahe   --clip F --grid GXxGY IN OUT
//   leafbench metrics REF TEST
//   leafbench run     --config cfg.json [--threads N]
//   leafbench bench   --config cfg.json [--images N] [--repetitions R]
//   leafbench report  CSV [-o tables.md]
//
// IN/OUT are either two image files or two directories. Exit status: 0 ok, 1 usage or
// configuration error, 2 runtime error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leafbench/config.hpp"
#include "leafbench/image_io.hpp"
#include "leafbench/report.hpp"

namespace leafbench {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_runtime = 2 };

namespace cli {

/// Thrown for problems the user can fix by changing the command line or config.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Applies `op` to one file or to every image under a directory, mirroring the relative
/// layout. The callback receives the image and its corpus index.
template <typename Op>
void map_images(const std::filesystem::path& in, const std::filesystem::path& out, Op op, std::ostream& log) {
  namespace fs = std::filesystem;
  if (fs::is_directory(in)) {
    const auto paths = discover_images(in);
    if (paths.empty()) fail(Errc::empty_corpus, "no images under " + in.string());
    for (std::size_t i = 0; i < paths.size(); ++i) {
      fs::path target = out / fs::relative(paths[i], in);
      target.replace_extension(".png");
      fs::create_directories(target.parent_path());
      save_image(op(load_image(paths[i]), i), target);
      log << paths[i].string() << " -> " << target.string() << '\n';
    }
    return;
  }
  if (!fs::exists(in)) fail(Errc::io, "no such file: " + in.string());
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_image(op(load_image(in), 0), out);
}

inline TileGrid parse_grid(const std::string& text) {
  static const std::regex pattern(R"((\d+)[xX](\d+))");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw UsageError("--grid expects GXxGY, got '" + text + "'");
  return {std::stoi(m[1].str()), std::stoi(m[2].str())};
}

/// Leading images of the corpus, repeated cyclically when the corpus is smaller than
/// `count`, each resized and optionally noised the same way `run` does it.
inline std::vector<Raster> timing_images(const RunConfig& cfg, std::size_t count) {
  const auto paths = discover_images(cfg.corpus_dir);
  if (paths.empty()) fail(Errc::empty_corpus, "no images under " + cfg.corpus_dir.string());
  std::vector<Raster> base;
  for (std::size_t i = 0; i < std::min(count, paths.size()); ++i)
    base.push_back(resize_bilinear(load_image(paths[i]), cfg.image_size, cfg.image_size));
  std::vector<Raster> images;
  images.reserve(count);
  std::optional<NoiseSpec> noise;
  if (cfg.timing.noise)
    for (const auto& n : cfg.noises)
      if (n.kind == *cfg.timing.noise) noise = n;
  if (cfg.timing.noise && !noise) {
    noise = NoiseSpec{};
    noise->kind = *cfg.timing.noise;
  }
  if (noise) noise->seed = noise_seed(cfg.master_seed, noise->kind);
  for (std::size_t i = 0; i < count; ++i) {
    const Raster& clean = base[i % base.size()];
    images.push_back(noise ? apply_noise(clean, *noise, i) : clean);
  }
  return images;
}

inline void write_run_outputs(const GridResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  emit_csv(result.aggregates, dir / "aggregate.csv", dir / "aggregate_full.csv");
  write_text(dir / "records.csv", records_csv(result.records));
  bool complete = true;
  try {
    emit_markdown_tables(result.aggregates, dir / "tables.md");
  } catch (const Error& e) {
    if (e.code() != Errc::incomplete_block) throw;
    complete = false;  // partial experiment lists have no full table layout
  }
  if (!complete) std::filesystem::remove(dir / "tables.md");
  if (!result.failures.empty()) {
    std::string text = "source,error\n";
    for (const auto& f : result.failures) text += f.source + ",\"" + f.message + "\"\n";
    write_text(dir / "failures.csv", text);
  }
}

}  // namespace cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rice-leaf image enhancement benchmark: noise, filters, CLAHE, metrics.", "leafbench"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string in_path, out_path;

  // noise
  auto* noise_cmd = app.add_subcommand("noise", "Add one noise model to an image or a directory of images");
  std::string noise_kind;
  NoiseSpec noise_spec;
  noise_cmd->add_option("--kind", noise_kind, "gaussian | salt_pepper | speckle | uniform")->required();
  noise_cmd->add_option("--mean", noise_spec.mean, "Gaussian mean (fraction of 255)");
  noise_cmd->add_option("--variance", noise_spec.variance, "Gaussian/speckle variance");
  noise_cmd->add_option("--amount", noise_spec.amount, "Salt-and-pepper pixel fraction");
  noise_cmd->add_option("--lo", noise_spec.lo, "Uniform lower bound (intensity levels)");
  noise_cmd->add_option("--hi", noise_spec.hi, "Uniform upper bound (intensity levels)");
  std::uint64_t master_seed = 0;
  noise_cmd->add_option("--seed", master_seed, "Master seed")->required();
  noise_cmd->add_option("input", in_path, "Input image or directory")->required();
  noise_cmd->add_option("output", out_path, "Output image or directory")->required();

  // filter
  auto* filter_cmd = app.add_subcommand("filter", "Denoise an image or a directory of images");
  std::string filter_kind;
  FilterSpec filter_spec;
  std::optional<double> filter_sigma;
  filter_cmd->add_option("--kind", filter_kind, "mean | gaussian | median | bilateral | nlm (alias bm3d)")->required();
  filter_cmd->add_option("--kernel-size", filter_spec.kernel_size, "Window size for mean/gaussian/median");
  filter_cmd->add_option("--sigma", filter_sigma, "Gaussian sigma (default derived from kernel size)");
  filter_cmd->add_option("--diameter", filter_spec.diameter, "Bilateral window");
  filter_cmd->add_option("--sigma-color", filter_spec.sigma_color, "Bilateral range sigma");
  filter_cmd->add_option("--sigma-space", filter_spec.sigma_space, "Bilateral spatial sigma");
  filter_cmd->add_option("--nlm-h", filter_spec.h, "NLM luma strength");
  filter_cmd->add_option("--nlm-h-color", filter_spec.h_color, "NLM chroma strength");
  filter_cmd->add_option("--template-window", filter_spec.template_window, "NLM patch size");
  filter_cmd->add_option("--search-window", filter_spec.search_window, "NLM search size");
  filter_cmd->add_option("input", in_path, "Input image or directory")->required();
  filter_cmd->add_option("output", out_path, "Output image or directory")->required();

  // clahe
  auto* clahe_cmd = app.add_subcommand("clahe", "Contrast limited adaptive histogram equalization");
  ClaheParams clahe_params;
  std::string grid_text = "8x8";
  clahe_cmd->add_option("--clip", clahe_params.clip_limit, "Clip limit")->required();
  clahe_cmd->add_option("--grid", grid_text, "Tile grid as GXxGY")->required();
  clahe_cmd->add_option("input", in_path, "Input image or directory")->required();
  clahe_cmd->add_option("output", out_path, "Output image or directory")->required();

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "Print mse,ssim,psnr,nrmse,nmi for one pair");
  std::string ref_path, test_path;
  metrics_cmd->add_option("reference", ref_path, "Reference image")->required();
  metrics_cmd->add_option("test", test_path, "Test image")->required();

  // run
  auto* run_cmd = app.add_subcommand("run", "Run the experiment grid described by a JSON config");
  std::string config_path;
  std::optional<unsigned> threads;
  run_cmd->add_option("--config", config_path, "JSON config")->required();
  run_cmd->add_option("--threads", threads, "Worker threads (default: hardware parallelism)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Time every configured filter, single-threaded");
  std::optional<std::size_t> bench_images;
  std::optional<int> bench_reps;
  bench_cmd->add_option("--config", config_path, "JSON config")->required();
  bench_cmd->add_option("--images", bench_images, "Images per repetition (default from config)");
  bench_cmd->add_option("--repetitions", bench_reps, "Repetitions, at least 3 (default from config)");

  // report
  auto* report_cmd = app.add_subcommand("report", "Render aggregate CSV as Markdown tables");
  std::string csv_path, md_path;
  report_cmd->add_option("csv", csv_path, "aggregate.csv or aggregate_full.csv")->required();
  report_cmd->add_option("-o,--output", md_path, "Write here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help("", CLI::AppFormatMode::Normal);
    return exit_usage;
  }

  const CLI::App* active = app.get_subcommands().front();
  try {
    if (active == noise_cmd) {
      const auto kind = parse_noise_kind(noise_kind);
      if (!kind) throw cli::UsageError("unknown noise kind '" + noise_kind + "'");
      noise_spec.kind = *kind;
      noise_spec.seed = noise_seed(master_seed, *kind);
      try {
        noise_spec.validate();
      } catch (const Error& e) {
        throw cli::UsageError(e.what());
      }
      cli::map_images(in_path, out_path,
                      [&](const Raster& img, std::size_t i) { return apply_noise(img, noise_spec, i); }, err);
    } else if (active == filter_cmd) {
      const auto kind = parse_filter_kind(filter_kind);
      if (!kind) throw cli::UsageError("unknown filter kind '" + filter_kind + "'");
      filter_spec.kind = *kind;
      filter_spec.sigma = filter_sigma;
      try {
        filter_spec.validate();
      } catch (const Error& e) {
        throw cli::UsageError(e.what());
      }
      cli::map_images(in_path, out_path, [&](const Raster& img, std::size_t) { return apply_filter(img, filter_spec); },
                      err);
    } else if (active == clahe_cmd) {
      clahe_params.tile_grid = cli::parse_grid(grid_text);
      try {
        clahe_params.validate();
      } catch (const Error& e) {
        throw cli::UsageError(e.what());
      }
      cli::map_images(in_path, out_path, [&](const Raster& img, std::size_t) { return clahe(img, clahe_params); }, err);
    } else if (active == metrics_cmd) {
      const MetricVector m = evaluate(load_image(ref_path), load_image(test_path));
      out << format_metric(m.mse) << ',' << format_metric(m.ssim) << ',' << format_metric(m.psnr) << ','
          << format_metric(m.nrmse) << ',' << format_metric(m.nmi) << '\n';
    } else if (active == run_cmd) {
      RunConfig cfg = load_run_config(config_path);
      if (threads) cfg.threads = *threads;
      const auto paths = discover_images(cfg.corpus_dir);
      GridConfig grid = cfg.grid();
      grid.on_image_done = [&](std::uint64_t i, const std::string& status) {
        err << "[" << i + 1 << "/" << paths.size() << "] " << paths[i].string() << ": " << status << '\n';
      };
      const GridResult result = run_grid(paths, grid);
      cli::write_run_outputs(result, cfg.output_dir);
      out << "wrote " << (cfg.output_dir / "aggregate.csv").string() << " (" << result.aggregates.size() << " rows, "
          << result.failures.size() << " failed images)\n";
    } else if (active == bench_cmd) {
      RunConfig cfg = load_run_config(config_path);
      if (bench_images) cfg.timing.image_count = *bench_images;
      if (bench_reps) cfg.timing.repetitions = *bench_reps;
      if (cfg.timing.image_count == 0) throw cli::UsageError("--images must be positive");
      if (cfg.timing.repetitions < 3) throw cli::UsageError("--repetitions must be at least 3");
      const auto images = cli::timing_images(cfg, cfg.timing.image_count);
      std::vector<TimingRecord> records;
      for (const FilterSpec& f : cfg.filters) {
        records.push_back(benchmark_filter(f, images, cfg.timing.repetitions, cfg.timing.noise));
        err << filter_label(f.kind) << ": " << format_2dp(records.back().elapsed_min) << '-'
            << format_2dp(records.back().elapsed_max) << " s\n";
      }
      std::filesystem::create_directories(cfg.output_dir);
      write_text(cfg.output_dir / "timing.csv", timing_csv(records));
      write_text(cfg.output_dir / "timing.md", timing_markdown(records));
      out << timing_markdown(records);
    } else if (active == report_cmd) {
      const std::string md = markdown_tables(parse_aggregate_csv(read_text(csv_path)));
      if (md_path.empty())
        out << md;
      else
        write_text(md_path, md);
    }
  } catch (const cli::UsageError& e) {
    err << "error: " << e.what() << '\n' << active->help("", CLI::AppFormatMode::Normal);
    return exit_usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    // Config validation problems are usage errors; everything else happened while working.
    return e.code() == Errc::invalid_argument && (active == run_cmd || active == bench_cmd) ? exit_usage
                                                                                            : exit_runtime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime;
  }
  return exit_ok;
}

}  // namespace leafbench
