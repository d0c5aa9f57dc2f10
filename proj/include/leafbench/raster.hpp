#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "leafbench/error.hpp"

namespace leafbench {

enum class ColorSpace { srgb, gray, luma_chroma };

inline const char* color_space_name(ColorSpace s) {
  switch (s) {
    case ColorSpace::srgb: return "srgb";
    case ColorSpace::gray: return "gray";
    case ColorSpace::luma_chroma: return "luma_chroma";
  }
  return "?";
}

/// 8-bit interleaved image. Samples are stored row-major, channel-interleaved.
class Raster {
 public:
  Raster() = default;

  Raster(int width, int height, ColorSpace space, std::uint8_t fill = 0)
      : width_(width), height_(height), channels_(space == ColorSpace::gray ? 1 : 3), space_(space) {
    check_dims();
    samples_.assign(size(), fill);
  }

  Raster(int width, int height, ColorSpace space, std::vector<std::uint8_t> samples)
      : width_(width), height_(height), channels_(space == ColorSpace::gray ? 1 : 3), space_(space),
        samples_(std::move(samples)) {
    check_dims();
    if (samples_.size() != size())
      fail(Errc::invalid_dimension, "sample count " + std::to_string(samples_.size()) + " does not match " +
                                        std::to_string(width_) + "x" + std::to_string(height_) + "x" +
                                        std::to_string(channels_));
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  ColorSpace space() const noexcept { return space_; }
  bool empty() const noexcept { return samples_.empty(); }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_) * static_cast<std::size_t>(channels_);
  }
  std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_); }

  std::span<const std::uint8_t> samples() const noexcept { return samples_; }
  std::span<std::uint8_t> samples() noexcept { return samples_; }

  std::uint8_t at(int x, int y, int c = 0) const noexcept { return samples_[index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c = 0) noexcept { return samples_[index(x, y, c)]; }

  std::size_t index(int x, int y, int c = 0) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  bool same_shape(const Raster& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  void check_dims() const {
    if (width_ <= 0 || height_ <= 0)
      fail(Errc::invalid_dimension,
           "raster dimensions must be positive, got " + std::to_string(width_) + "x" + std::to_string(height_));
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  ColorSpace space_ = ColorSpace::gray;
  std::vector<std::uint8_t> samples_;
};

/// Real-valued single-channel working buffer.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> samples;

  Plane() = default;
  Plane(int w, int h, double fill = 0.0) : width(w), height(h), samples(static_cast<std::size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) fail(Errc::invalid_dimension, "plane dimensions must be positive");
  }

  double at(int x, int y) const noexcept { return samples[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) noexcept { return samples[static_cast<std::size_t>(y) * width + x]; }
};

/// Reflect-101 index extension: ... p2 p1 | p0 p1 p2 ... (edge not repeated).
inline int reflect101(int i, int n) noexcept {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return i;
}

/// Round half away from zero, clip to [0, 255].
inline std::uint8_t quantize_sample(double v) noexcept {
  const double r = std::round(v);
  if (!(r > 0.0)) return 0;
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

inline Raster quantize(const Plane& p) {
  Raster out(p.width, p.height, ColorSpace::gray);
  auto dst = out.samples();
  for (std::size_t i = 0; i < p.samples.size(); ++i) dst[i] = quantize_sample(p.samples[i]);
  return out;
}

inline Plane extract_plane(const Raster& img, int channel) {
  Plane p(img.width(), img.height());
  const auto src = img.samples();
  const std::size_t stride = static_cast<std::size_t>(img.channels());
  for (std::size_t i = 0; i < p.samples.size(); ++i) p.samples[i] = src[i * stride + channel];
  return p;
}

/// Quantize each plane into the matching channel of a raster with the given space.
inline Raster merge_planes(std::span<const Plane> planes, ColorSpace space) {
  Raster out(planes.front().width, planes.front().height, space);
  const int channels = out.channels();
  if (static_cast<int>(planes.size()) != channels)
    fail(Errc::invalid_argument, "plane count does not match channel count of target space");
  auto dst = out.samples();
  for (int c = 0; c < channels; ++c) {
    const auto& src = planes[c].samples;
    for (std::size_t i = 0; i < src.size(); ++i) dst[i * channels + c] = quantize_sample(src[i]);
  }
  return out;
}

/// Bilinear resampling with half-pixel-center alignment.
inline Raster resize_bilinear(const Raster& img, int w, int h) {
  if (w <= 0 || h <= 0)
    fail(Errc::invalid_dimension, "target size must be positive, got " + std::to_string(w) + "x" + std::to_string(h));
  if (w == img.width() && h == img.height()) return img;

  struct Tap {
    int i0, i1;
    double frac;
  };
  auto taps = [](int src, int dst) {
    std::vector<Tap> t(static_cast<std::size_t>(dst));
    const double scale = static_cast<double>(src) / dst;
    for (int i = 0; i < dst; ++i) {
      double s = (i + 0.5) * scale - 0.5;
      s = std::clamp(s, 0.0, static_cast<double>(src - 1));
      const int i0 = static_cast<int>(std::floor(s));
      const int i1 = std::min(i0 + 1, src - 1);
      t[i] = {i0, i1, s - i0};
    }
    return t;
  };
  const auto tx = taps(img.width(), w);
  const auto ty = taps(img.height(), h);

  Raster out(w, h, img.space());
  const int ch = img.channels();
  for (int y = 0; y < h; ++y) {
    const auto [y0, y1, fy] = ty[y];
    for (int x = 0; x < w; ++x) {
      const auto [x0, x1, fx] = tx[x];
      for (int c = 0; c < ch; ++c) {
        const double top = img.at(x0, y0, c) * (1.0 - fx) + img.at(x1, y0, c) * fx;
        const double bottom = img.at(x0, y1, c) * (1.0 - fx) + img.at(x1, y1, c) * fx;
        out.at(x, y, c) = quantize_sample(top * (1.0 - fy) + bottom * fy);
      }
    }
  }
  return out;
}

// BT.601 full-range YCbCr, chroma offset 128.
struct Ycc {
  double y, cb, cr;
};
struct Rgb {
  double r, g, b;
};

inline Ycc rgb_to_ycc(double r, double g, double b) noexcept {
  return {0.299 * r + 0.587 * g + 0.114 * b, 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b,
          128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b};
}

inline Rgb ycc_to_rgb(double y, double cb, double cr) noexcept {
  const double u = cb - 128.0;
  const double v = cr - 128.0;
  return {y + 1.402 * v, y - 0.344136 * u - 0.714136 * v, y + 1.772 * u};
}

inline Raster to_luma_chroma(const Raster& img) {
  if (img.space() != ColorSpace::srgb)
    fail(Errc::wrong_color_space, std::string("to_luma_chroma expects srgb, got ") + color_space_name(img.space()));
  Raster out(img.width(), img.height(), ColorSpace::luma_chroma);
  const auto src = img.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); i += 3) {
    const Ycc v = rgb_to_ycc(src[i], src[i + 1], src[i + 2]);
    dst[i] = quantize_sample(v.y);
    dst[i + 1] = quantize_sample(v.cb);
    dst[i + 2] = quantize_sample(v.cr);
  }
  return out;
}

inline Raster from_luma_chroma(const Raster& img) {
  if (img.space() != ColorSpace::luma_chroma)
    fail(Errc::wrong_color_space,
         std::string("from_luma_chroma expects luma_chroma, got ") + color_space_name(img.space()));
  Raster out(img.width(), img.height(), ColorSpace::srgb);
  const auto src = img.samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < src.size(); i += 3) {
    const Rgb v = ycc_to_rgb(src[i], src[i + 1], src[i + 2]);
    dst[i] = quantize_sample(v.r);
    dst[i + 1] = quantize_sample(v.g);
    dst[i + 2] = quantize_sample(v.b);
  }
  return out;
}

/// Recompose srgb from real-valued luma/chroma planes, quantizing once.
inline Raster from_luma_chroma(const Plane& y, const Plane& cb, const Plane& cr) {
  Raster out(y.width, y.height, ColorSpace::srgb);
  auto dst = out.samples();
  for (std::size_t i = 0; i < y.samples.size(); ++i) {
    const Rgb v = ycc_to_rgb(y.samples[i], cb.samples[i], cr.samples[i]);
    dst[3 * i] = quantize_sample(v.r);
    dst[3 * i + 1] = quantize_sample(v.g);
    dst[3 * i + 2] = quantize_sample(v.b);
  }
  return out;
}

}  // namespace leafbench
