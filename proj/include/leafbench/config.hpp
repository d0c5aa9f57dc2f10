#pragma once

// JSON run configuration.
//
// {
//   "corpus_dir": "leaves/",            required, must exist
//   "output_dir": "out/",               required, created if missing
//   "master_seed": 42,                  required, unsigned 64-bit
//   "noises":   [{"kind": "gaussian", "mean": 0, "variance": 0.01}, ...],
//   "filters":  [{"kind": "median", "kernel_size": 5}, ...],
//   "experiments": ["E01", ..., "E09"],
//   "metric_config": {"data_range": 255, "ssim_window": 7, "ssim_k1": 0.01,
//                     "ssim_k2": 0.03, "nmi_bins": 100},
//   "timing": {"image_count": 500, "repetitions": 3, "noise": "gaussian"},
//   "image_size": 256,
//   "threads": 0
// }
//
// Relative paths are resolved against the directory holding the config file.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "leafbench/pipeline.hpp"
#include "leafbench/report.hpp"

namespace leafbench {

struct TimingConfig {
  std::size_t image_count = 500;
  int repetitions = 3;
  std::optional<NoiseKind> noise = NoiseKind::gaussian;
};

struct RunConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path output_dir;
  std::uint64_t master_seed = 0;
  std::vector<NoiseSpec> noises = default_noises();
  std::vector<FilterSpec> filters = default_filters();
  std::vector<ExperimentId> experiments{all_experiments.begin(), all_experiments.end()};
  MetricConfig metric_config{};
  TimingConfig timing{};
  int image_size = 256;
  unsigned threads = 0;

  GridConfig grid() const {
    GridConfig g;
    g.master_seed = master_seed;
    g.noises = noises;
    g.filters = filters;
    g.experiments = experiments;
    g.metric_config = metric_config;
    g.image_size = image_size;
    g.threads = threads;
    return g;
  }
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void config_error(const std::string& field, const std::string& what) {
  fail(Errc::invalid_argument, "config field '" + field + "': " + what);
}

template <typename T>
T get_field(const json& obj, const std::string& key, const std::string& path, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(path + key, e.what());
  }
}

inline NoiseSpec parse_noise(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind")) config_error(path + "kind", "required field missing");
  const auto kind = parse_noise_kind(get_field<std::string>(j, "kind", path, ""));
  if (!kind) config_error(path + "kind", "unknown noise kind");
  NoiseSpec s;
  switch (*kind) {
    case NoiseKind::gaussian: s = NoiseSpec::gaussian(); break;
    case NoiseKind::salt_pepper: s = NoiseSpec::salt_pepper(); break;
    case NoiseKind::speckle: s = NoiseSpec::speckle(); break;
    case NoiseKind::uniform: s = NoiseSpec::uniform(); break;
  }
  s.mean = get_field(j, "mean", path, s.mean);
  s.variance = get_field(j, "variance", path, s.variance);
  s.amount = get_field(j, "amount", path, s.amount);
  s.lo = get_field(j, "lo", path, s.lo);
  s.hi = get_field(j, "hi", path, s.hi);
  try {
    s.validate();
  } catch (const Error& e) {
    config_error(path.substr(0, path.size() - 1), e.detail());
  }
  return s;
}

inline FilterSpec parse_filter(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind")) config_error(path + "kind", "required field missing");
  const auto kind = parse_filter_kind(get_field<std::string>(j, "kind", path, ""));
  if (!kind) config_error(path + "kind", "unknown filter kind");
  FilterSpec s = FilterSpec::of(*kind);
  s.kernel_size = get_field(j, "kernel_size", path, s.kernel_size);
  if (j.contains("sigma") && !j.at("sigma").is_null()) s.sigma = get_field(j, "sigma", path, 0.0);
  s.diameter = get_field(j, "diameter", path, s.diameter);
  s.sigma_color = get_field(j, "sigma_color", path, s.sigma_color);
  s.sigma_space = get_field(j, "sigma_space", path, s.sigma_space);
  s.h = get_field(j, "h", path, s.h);
  s.h_color = get_field(j, "h_color", path, s.h_color);
  s.template_window = get_field(j, "template_window", path, s.template_window);
  s.search_window = get_field(j, "search_window", path, s.search_window);
  try {
    s.validate();
  } catch (const Error& e) {
    config_error(path.substr(0, path.size() - 1), e.detail());
  }
  return s;
}

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() ? base / path : path;
}

}  // namespace detail

/// Parse and validate a run configuration. Validation failures are Errc::invalid_argument
/// and name the offending field.
inline RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  using detail::config_error;
  if (!j.is_object()) config_error("<root>", "expected a JSON object");
  RunConfig cfg;
  for (const char* required : {"corpus_dir", "output_dir", "master_seed"})
    if (!j.contains(required)) config_error(required, "required field missing");

  cfg.corpus_dir = detail::resolve(base_dir, detail::get_field<std::string>(j, "corpus_dir", "", ""));
  std::error_code ec;
  if (!std::filesystem::is_directory(cfg.corpus_dir, ec))
    config_error("corpus_dir", "directory does not exist: " + cfg.corpus_dir.string());
  cfg.output_dir = detail::resolve(base_dir, detail::get_field<std::string>(j, "output_dir", "", ""));
  if (!j.at("master_seed").is_number_unsigned()) config_error("master_seed", "must be an unsigned integer");
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();

  if (j.contains("noises")) {
    const auto& arr = j.at("noises");
    if (!arr.is_array() || arr.empty()) config_error("noises", "must be a non-empty array");
    cfg.noises.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      cfg.noises.push_back(detail::parse_noise(arr[i], "noises[" + std::to_string(i) + "]."));
  }
  if (j.contains("filters")) {
    const auto& arr = j.at("filters");
    if (!arr.is_array() || arr.empty()) config_error("filters", "must be a non-empty array");
    cfg.filters.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      cfg.filters.push_back(detail::parse_filter(arr[i], "filters[" + std::to_string(i) + "]."));
  }
  if (j.contains("experiments")) {
    const auto& arr = j.at("experiments");
    if (!arr.is_array() || arr.empty()) config_error("experiments", "must be a non-empty array");
    cfg.experiments.clear();
    for (const auto& e : arr) {
      const auto id = e.is_string() ? parse_experiment(e.get<std::string>()) : std::nullopt;
      if (!id) config_error("experiments", "unknown experiment " + e.dump());
      cfg.experiments.push_back(*id);
    }
  }
  if (j.contains("metric_config")) {
    const auto& m = j.at("metric_config");
    const std::string p = "metric_config.";
    cfg.metric_config.data_range = detail::get_field(m, "data_range", p, cfg.metric_config.data_range);
    cfg.metric_config.ssim_window = detail::get_field(m, "ssim_window", p, cfg.metric_config.ssim_window);
    cfg.metric_config.ssim_k1 = detail::get_field(m, "ssim_k1", p, cfg.metric_config.ssim_k1);
    cfg.metric_config.ssim_k2 = detail::get_field(m, "ssim_k2", p, cfg.metric_config.ssim_k2);
    cfg.metric_config.nmi_bins = detail::get_field(m, "nmi_bins", p, cfg.metric_config.nmi_bins);
    try {
      cfg.metric_config.validate();
    } catch (const Error& e) {
      config_error("metric_config", e.detail());
    }
  }
  if (j.contains("timing")) {
    const auto& t = j.at("timing");
    cfg.timing.image_count = detail::get_field(t, "image_count", "timing.", cfg.timing.image_count);
    cfg.timing.repetitions = detail::get_field(t, "repetitions", "timing.", cfg.timing.repetitions);
    if (t.contains("noise")) {
      if (t.at("noise").is_null()) {
        cfg.timing.noise = std::nullopt;
      } else {
        cfg.timing.noise = parse_noise_kind(detail::get_field<std::string>(t, "noise", "timing.", ""));
        if (!cfg.timing.noise) config_error("timing.noise", "unknown noise kind");
      }
    }
    if (cfg.timing.image_count == 0) config_error("timing.image_count", "must be positive");
    if (cfg.timing.repetitions < 3) config_error("timing.repetitions", "must be at least 3");
  }
  cfg.image_size = detail::get_field(j, "image_size", "", cfg.image_size);
  if (cfg.image_size <= 0) config_error("image_size", "must be positive");
  cfg.threads = detail::get_field(j, "threads", "", cfg.threads);
  return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::invalid_argument, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_run_config(j, path.parent_path());
}

}  // namespace leafbench
