#pragma once

// CSV and Markdown emission for aggregate rows, per-image records and timings.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "leafbench/pipeline.hpp"

namespace leafbench {

inline constexpr std::string_view aggregate_csv_header =
    "noise,filter,experiment,mse,ssim,psnr,nrmse,nmi,n_images,n_excluded_psnr";

/// Shortest representation that parses back to the same double; "inf" for +infinity.
inline std::string format_exact(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Two decimals for display tables.
inline std::string format_2dp(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Single-pair metric rendering: zero prints as "0", other whole numbers keep a ".0".
inline std::string format_metric(double v) {
  if (v == 0.0) return "0";
  std::string s = format_exact(v);
  if (std::isfinite(v) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

inline double parse_double(std::string_view s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    fail(Errc::decode, "not a number: '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline std::vector<AggregateRow> sorted_rows(std::vector<AggregateRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const AggregateRow& a, const AggregateRow& b) {
    return cell_key(a.noise, a.filter, a.experiment) < cell_key(b.noise, b.filter, b.experiment);
  });
  return rows;
}

enum class CsvPrecision { display, exact };

inline std::string aggregate_csv(const std::vector<AggregateRow>& rows, CsvPrecision precision) {
  const auto fmt = precision == CsvPrecision::exact ? format_exact : format_2dp;
  std::ostringstream out;
  out << aggregate_csv_header << '\n';
  for (const auto& r : sorted_rows(rows)) {
    out << noise_name(r.noise) << ',' << filter_label(r.filter) << ',' << experiment_name(r.experiment) << ','
        << fmt(r.mean.mse) << ',' << fmt(r.mean.ssim) << ',' << fmt(r.mean.psnr) << ',' << fmt(r.mean.nrmse) << ','
        << fmt(r.mean.nmi) << ',' << r.n_images << ',' << r.n_excluded_psnr << '\n';
  }
  return out.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  out << text;
  if (!out) fail(Errc::io, "write failed for " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes `path` with two-decimal metrics and `full_path` with exact round-trip values.
inline void emit_csv(const std::vector<AggregateRow>& rows, const std::filesystem::path& path,
                     const std::filesystem::path& full_path) {
  if (rows.empty()) fail(Errc::invalid_argument, "no aggregate rows to write");
  write_text(path, aggregate_csv(rows, CsvPrecision::display));
  write_text(full_path, aggregate_csv(rows, CsvPrecision::exact));
}

inline std::vector<AggregateRow> parse_aggregate_csv(std::string_view text) {
  std::vector<AggregateRow> rows;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != aggregate_csv_header) fail(Errc::decode, "unexpected CSV header: " + std::string(line));
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 10) fail(Errc::decode, "line " + std::to_string(line_no) + ": expected 10 fields");
    AggregateRow r;
    const auto noise = parse_noise_kind(f[0]);
    const auto filter = parse_filter_kind(f[1]);
    const auto exp = parse_experiment(f[2]);
    if (!noise || !filter || !exp) fail(Errc::decode, "line " + std::to_string(line_no) + ": unknown cell key");
    r.noise = *noise;
    r.filter = *filter;
    r.experiment = *exp;
    r.mean = {parse_double(f[3]), parse_double(f[4]), parse_double(f[5]), parse_double(f[6]), parse_double(f[7])};
    r.n_images = static_cast<std::uint64_t>(parse_double(f[8]));
    r.n_excluded_psnr = static_cast<std::uint64_t>(parse_double(f[9]));
    rows.push_back(r);
  }
  return rows;
}

inline std::string_view noise_title(NoiseKind k) {
  switch (k) {
    case NoiseKind::gaussian: return "Gaussian";
    case NoiseKind::salt_pepper: return "Salt-and-pepper";
    case NoiseKind::speckle: return "Speckle";
    case NoiseKind::uniform: return "Random";
  }
  return "?";
}

inline std::string_view filter_title(FilterKind k) {
  switch (k) {
    case FilterKind::mean: return "mean";
    case FilterKind::gaussian: return "Gaussian";
    case FilterKind::median: return "Median";
    case FilterKind::bilateral: return "Bilateral";
    case FilterKind::nlm: return "BM3D";
  }
  return "?";
}

/// One table per (noise, filter) block: metric rows x the nine experiment columns.
inline std::string markdown_tables(const std::vector<AggregateRow>& rows) {
  std::map<std::pair<int, int>, std::map<int, const AggregateRow*>> blocks;
  for (const auto& r : rows)
    blocks[{static_cast<int>(r.noise), static_cast<int>(r.filter)}][static_cast<int>(r.experiment)] = &r;
  for (const auto& [key, cells] : blocks)
    for (auto e : all_experiments)
      if (!cells.contains(static_cast<int>(e)))
        fail(Errc::incomplete_block, std::string(noise_name(static_cast<NoiseKind>(key.first))) + "/" +
                                         std::string(filter_label(static_cast<FilterKind>(key.second))) +
                                         " is missing " + std::string(experiment_name(e)));

  std::ostringstream out;
  int table = 0;
  for (const auto& [key, cells] : blocks) {
    const auto noise = static_cast<NoiseKind>(key.first);
    const auto filter = static_cast<FilterKind>(key.second);
    out << "Table " << ++table << ". Performance of " << filter_title(filter) << " filter denoising images with "
        << noise_title(noise) << " Noise\n\n| Metric |";
    for (auto e : all_experiments) out << ' ' << experiment_heading(e) << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < all_experiments.size(); ++i) out << "---|";
    out << '\n';
    const std::pair<const char*, double MetricVector::*> metric_rows[] = {{"MSE", &MetricVector::mse},
                                                                          {"SSIM", &MetricVector::ssim},
                                                                          {"PSNR", &MetricVector::psnr},
                                                                          {"NRMSE", &MetricVector::nrmse},
                                                                          {"NMI", &MetricVector::nmi}};
    for (const auto& [label, field] : metric_rows) {
      out << "| " << label << " |";
      for (auto e : all_experiments) out << ' ' << format_2dp(cells.at(static_cast<int>(e))->mean.*field) << " |";
      out << '\n';
    }
    out << '\n';
  }
  return out.str();
}

inline void emit_markdown_tables(const std::vector<AggregateRow>& rows, const std::filesystem::path& path) {
  write_text(path, markdown_tables(rows));
}

inline std::string records_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << "image_id,noise,filter,experiment,mse,ssim,psnr,nrmse,nmi\n";
  for (const auto& r : records)
    out << r.image_id << ',' << noise_name(r.noise) << ',' << filter_label(r.filter) << ','
        << experiment_name(r.experiment) << ',' << format_exact(r.metrics.mse) << ','
        << format_exact(r.metrics.ssim) << ',' << format_exact(r.metrics.psnr) << ','
        << format_exact(r.metrics.nrmse) << ',' << format_exact(r.metrics.nmi) << '\n';
  return out.str();
}

inline std::string timing_csv(const std::vector<TimingRecord>& records) {
  std::ostringstream out;
  out << "filter,noise,image_count,repetitions,elapsed_min,elapsed_max\n";
  for (const auto& t : records) {
    out << filter_label(t.filter) << ',' << (t.noise ? noise_name(*t.noise) : std::string_view("none")) << ','
        << t.image_count << ',' << t.repetitions << ',' << format_exact(t.elapsed_min) << ','
        << format_exact(t.elapsed_max) << '\n';
  }
  return out.str();
}

inline std::string timing_markdown(const std::vector<TimingRecord>& records) {
  std::ostringstream out;
  out << "| Filter | Time for denoising " << (records.empty() ? 0 : records.front().image_count)
      << " images (in seconds) |\n|---|---|\n";
  for (const auto& t : records)
    out << "| " << filter_title(t.filter) << " | " << format_2dp(t.elapsed_min) << '-' << format_2dp(t.elapsed_max)
        << " |\n";
  return out.str();
}

}  // namespace leafbench
