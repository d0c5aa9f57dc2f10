#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>
#include <string_view>

#include "leafbench/random.hpp"
#include "leafbench/raster.hpp"

namespace leafbench {

enum class NoiseKind { gaussian, salt_pepper, speckle, uniform };

inline constexpr std::array<NoiseKind, 4> all_noise_kinds = {NoiseKind::gaussian, NoiseKind::salt_pepper,
                                                             NoiseKind::speckle, NoiseKind::uniform};

inline std::string_view noise_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::salt_pepper: return "salt_pepper";
    case NoiseKind::speckle: return "speckle";
    case NoiseKind::uniform: return "uniform";
  }
  return "?";
}

inline std::optional<NoiseKind> parse_noise_kind(std::string_view s) {
  for (auto k : all_noise_kinds)
    if (noise_name(k) == s) return k;
  if (s == "random") return NoiseKind::uniform;
  return std::nullopt;
}

/// Tagged noise model. Gaussian/speckle variance is on the normalized [0,1] intensity
/// scale; uniform bounds are on the 0-255 scale.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::gaussian;
  double mean = 0.0;
  double variance = 0.01;
  double amount = 0.05;
  double lo = -20.0;
  double hi = 20.0;
  std::uint64_t seed = 0;

  static NoiseSpec gaussian(double mean = 0.0, double variance = 0.01) {
    NoiseSpec s;
    s.kind = NoiseKind::gaussian;
    s.mean = mean;
    s.variance = variance;
    return s;
  }
  static NoiseSpec salt_pepper(double amount = 0.05) {
    NoiseSpec s;
    s.kind = NoiseKind::salt_pepper;
    s.amount = amount;
    return s;
  }
  static NoiseSpec speckle(double variance = 0.01) {
    NoiseSpec s;
    s.kind = NoiseKind::speckle;
    s.variance = variance;
    return s;
  }
  static NoiseSpec uniform(double lo = -20.0, double hi = 20.0) {
    NoiseSpec s;
    s.kind = NoiseKind::uniform;
    s.lo = lo;
    s.hi = hi;
    return s;
  }

  void validate() const {
    if (!(variance >= 0.0) || !std::isfinite(variance))
      fail(Errc::invalid_argument, "noise variance must be >= 0");
    if (!(amount >= 0.0 && amount <= 1.0)) fail(Errc::invalid_argument, "salt_pepper amount must lie in [0,1]");
    if (!(lo <= hi)) fail(Errc::invalid_argument, "uniform noise requires lo <= hi");
    if (!std::isfinite(mean) || !std::isfinite(lo) || !std::isfinite(hi))
      fail(Errc::invalid_argument, "noise parameters must be finite");
  }

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// The four models with the default strengths used by the benchmark grid.
inline std::vector<NoiseSpec> default_noises() {
  return {NoiseSpec::gaussian(), NoiseSpec::salt_pepper(), NoiseSpec::speckle(), NoiseSpec::uniform()};
}

inline Raster add_gaussian(const Raster& img, double mean, double variance, RandomStream& stream) {
  if (!(variance >= 0.0)) fail(Errc::invalid_argument, "gaussian variance must be >= 0");
  const double sigma = std::sqrt(variance);
  Raster out = img;
  for (auto& s : out.samples()) s = quantize_sample(s + 255.0 * (mean + sigma * stream.normal()));
  return out;
}

/// Whole pixels (all channels) are forced to 0 or 255.
inline Raster add_salt_pepper(const Raster& img, double amount, RandomStream& stream) {
  if (!(amount >= 0.0 && amount <= 1.0)) fail(Errc::invalid_argument, "salt_pepper amount must lie in [0,1]");
  Raster out = img;
  auto samples = out.samples();
  const std::size_t ch = static_cast<std::size_t>(img.channels());
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    if (!(stream.uniform() < amount)) continue;
    const std::uint8_t value = stream.uniform() < 0.5 ? 0 : 255;
    for (std::size_t c = 0; c < ch; ++c) samples[p * ch + c] = value;
  }
  return out;
}

inline Raster add_speckle(const Raster& img, double variance, RandomStream& stream) {
  if (!(variance >= 0.0)) fail(Errc::invalid_argument, "speckle variance must be >= 0");
  const double sigma = std::sqrt(variance);
  Raster out = img;
  for (auto& s : out.samples()) {
    const double v = s;
    s = quantize_sample(v + v * sigma * stream.normal());
  }
  return out;
}

inline Raster add_uniform(const Raster& img, double lo, double hi, RandomStream& stream) {
  if (!(lo <= hi)) fail(Errc::invalid_argument, "uniform noise requires lo <= hi");
  const double span = hi - lo;
  Raster out = img;
  for (auto& s : out.samples()) s = quantize_sample(s + lo + span * stream.uniform());
  return out;
}

inline Raster apply_noise(const Raster& img, const NoiseSpec& spec, RandomStream& stream) {
  spec.validate();
  switch (spec.kind) {
    case NoiseKind::gaussian: return add_gaussian(img, spec.mean, spec.variance, stream);
    case NoiseKind::salt_pepper: return add_salt_pepper(img, spec.amount, stream);
    case NoiseKind::speckle: return add_speckle(img, spec.variance, stream);
    case NoiseKind::uniform: return add_uniform(img, spec.lo, spec.hi, stream);
  }
  return img;
}

/// Noise for corpus image `image_index`, drawn from derive_stream(spec.seed, image_index).
inline Raster apply_noise(const Raster& img, const NoiseSpec& spec, std::uint64_t image_index) {
  RandomStream stream = derive_stream(spec.seed, image_index);
  return apply_noise(img, spec, stream);
}

/// Seed for one noise kind under a master seed, so each kind gets an independent family of streams.
inline std::uint64_t noise_seed(std::uint64_t master_seed, NoiseKind kind) noexcept {
  std::uint64_t state = master_seed ^ (0xa0761d6478bd642fULL * (static_cast<std::uint64_t>(kind) + 1));
  return splitmix64(state);
}

}  // namespace leafbench
