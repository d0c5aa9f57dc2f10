#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "leafbench/raster.hpp"

namespace leafbench {

struct TileGrid {
  int gx = 8;
  int gy = 8;
  friend bool operator==(const TileGrid&, const TileGrid&) = default;
};

struct ClaheParams {
  double clip_limit = 2.0;
  TileGrid tile_grid{};

  void validate() const {
    if (!(clip_limit > 0.0) || !std::isfinite(clip_limit)) fail(Errc::invalid_argument, "clip limit must be > 0");
    if (tile_grid.gx < 1 || tile_grid.gy < 1) fail(Errc::invalid_argument, "tile grid must be at least 1x1");
  }

  friend bool operator==(const ClaheParams&, const ClaheParams&) = default;
};

using Histogram = std::array<std::int64_t, 256>;
using LookupTable = std::array<std::uint8_t, 256>;

/// v -> round((cdf(v) - cdf_min) / (N - cdf_min) * 255); identity when all mass sits in one bin.
inline LookupTable equalization_lut(const Histogram& hist) {
  LookupTable lut{};
  std::int64_t total = 0;
  for (auto c : hist) total += c;
  std::int64_t cdf_min = 0;
  for (auto c : hist)
    if (c > 0) {
      cdf_min = c;
      break;
    }
  if (total == cdf_min) {
    for (int v = 0; v < 256; ++v) lut[v] = static_cast<std::uint8_t>(v);
    return lut;
  }
  const double denom = static_cast<double>(total - cdf_min);
  std::int64_t cdf = 0;
  for (int v = 0; v < 256; ++v) {
    cdf += hist[v];
    lut[v] = quantize_sample(static_cast<double>(cdf - cdf_min) / denom * 255.0);
  }
  return lut;
}

inline Histogram histogram_of(const Raster& gray) {
  Histogram h{};
  for (auto s : gray.samples()) ++h[s];
  return h;
}

/// Global histogram equalization of a single-channel image.
inline Raster histogram_equalize(const Raster& img) {
  if (img.channels() != 1)
    fail(Errc::wrong_color_space, "histogram_equalize expects a single-channel image");
  const LookupTable lut = equalization_lut(histogram_of(img));
  Raster out = img;
  for (auto& s : out.samples()) s = lut[s];
  return out;
}

/// Absolute per-bin cap: max(1, round(clip_limit * tile_area / 256)).
inline std::int64_t clip_threshold(const ClaheParams& params, std::int64_t tile_area) {
  if (tile_area <= 0) fail(Errc::invalid_argument, "tile area must be positive");
  const double raw = std::round(params.clip_limit * static_cast<double>(tile_area) / 256.0);
  if (!(raw >= 1.0)) return 1;
  if (raw > 9.0e18) return static_cast<std::int64_t>(9.0e18);
  return static_cast<std::int64_t>(raw);
}

/// Clip every bin at `limit` and hand the excess back: an equal share to every bin, then
/// one extra count per bin from bin 0 upward for the remainder.
inline Histogram clip_histogram(Histogram hist, std::int64_t limit) {
  std::int64_t excess = 0;
  for (auto& c : hist)
    if (c > limit) {
      excess += c - limit;
      c = limit;
    }
  const std::int64_t share = excess / 256;
  const std::int64_t residual = excess % 256;
  for (auto& c : hist) c += share;
  for (std::int64_t i = 0; i < residual; ++i) ++hist[static_cast<std::size_t>(i)];
  return hist;
}

namespace detail {

struct TileLayout {
  int tile_w, tile_h;
  int padded_w, padded_h;
};

inline TileLayout tile_layout(int w, int h, const TileGrid& grid) {
  if (w < grid.gx || h < grid.gy)
    fail(Errc::invalid_dimension, "image " + std::to_string(w) + "x" + std::to_string(h) +
                                      " is smaller than the tile grid");
  const int tw = (w + grid.gx - 1) / grid.gx;
  const int th = (h + grid.gy - 1) / grid.gy;
  if (tw < 2 || th < 2)
    fail(Errc::grid_too_fine, "tiles of " + std::to_string(tw) + "x" + std::to_string(th) + " are below 2x2");
  return {tw, th, tw * grid.gx, th * grid.gy};
}

}  // namespace detail

/// One equalization table per tile, row-major over the grid.
struct TileMapping {
  TileGrid grid;
  int tile_w = 0;
  int tile_h = 0;
  std::vector<LookupTable> luts;

  const LookupTable& at(int tx, int ty) const noexcept { return luts[static_cast<std::size_t>(ty) * grid.gx + tx]; }
};

/// Per-tile clipped-histogram tables for a single-channel image, padded by reflect-101 on
/// the right/bottom to a multiple of the grid.
inline TileMapping tile_mapping(const Raster& gray, const ClaheParams& params) {
  params.validate();
  if (gray.channels() != 1) fail(Errc::wrong_color_space, "tile_mapping expects a single-channel image");
  const auto layout = detail::tile_layout(gray.width(), gray.height(), params.tile_grid);
  TileMapping m{params.tile_grid, layout.tile_w, layout.tile_h, {}};
  m.luts.reserve(static_cast<std::size_t>(params.tile_grid.gx) * params.tile_grid.gy);
  const std::int64_t limit = clip_threshold(params, static_cast<std::int64_t>(layout.tile_w) * layout.tile_h);
  for (int ty = 0; ty < params.tile_grid.gy; ++ty)
    for (int tx = 0; tx < params.tile_grid.gx; ++tx) {
      Histogram hist{};
      for (int y = ty * layout.tile_h; y < (ty + 1) * layout.tile_h; ++y) {
        const int sy = reflect101(y, gray.height());
        for (int x = tx * layout.tile_w; x < (tx + 1) * layout.tile_w; ++x)
          ++hist[gray.at(reflect101(x, gray.width()), sy)];
      }
      m.luts.push_back(equalization_lut(clip_histogram(hist, limit)));
    }
  return m;
}

namespace detail {

/// Bilinear blend of the four nearest tile-center tables, on the real scale.
inline Plane clahe_plane(const Raster& gray, const ClaheParams& params) {
  const TileMapping m = tile_mapping(gray, params);
  const int w = gray.width();
  const int h = gray.height();
  struct Blend {
    int t0, t1;
    double frac;
  };
  auto blends = [](int n, int tile, int tiles) {
    std::vector<Blend> b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double f = (i + 0.5) / tile - 0.5;
      const int t0 = static_cast<int>(std::floor(f));
      b[i] = {std::clamp(t0, 0, tiles - 1), std::clamp(t0 + 1, 0, tiles - 1), f - t0};
    }
    return b;
  };
  const auto bx = blends(w, m.tile_w, m.grid.gx);
  const auto by = blends(h, m.tile_h, m.grid.gy);
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    const auto& [ty0, ty1, fy] = by[y];
    for (int x = 0; x < w; ++x) {
      const auto& [tx0, tx1, fx] = bx[x];
      const auto v = gray.at(x, y);
      const double top = m.at(tx0, ty0)[v] * (1.0 - fx) + m.at(tx1, ty0)[v] * fx;
      const double bottom = m.at(tx0, ty1)[v] * (1.0 - fx) + m.at(tx1, ty1)[v] * fx;
      out.at(x, y) = top * (1.0 - fy) + bottom * fy;
    }
  }
  return out;
}

}  // namespace detail

/// Contrast limited adaptive histogram equalization. Color images are equalized on luma only.
inline Raster clahe(const Raster& img, const ClaheParams& params) {
  params.validate();
  if (img.channels() == 1) return quantize(detail::clahe_plane(img, params));

  const Raster ycc = img.space() == ColorSpace::srgb ? to_luma_chroma(img) : img;
  Raster luma(img.width(), img.height(), ColorSpace::gray);
  {
    const auto src = ycc.samples();
    auto dst = luma.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[3 * i];
  }
  const Plane y = detail::clahe_plane(luma, params);
  const Plane cb = extract_plane(ycc, 1);
  const Plane cr = extract_plane(ycc, 2);
  if (img.space() == ColorSpace::srgb) return from_luma_chroma(y, cb, cr);
  std::array planes{y, cb, cr};
  return merge_planes(planes, img.space());
}

}  // namespace leafbench
