#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "leafbench/raster.hpp"

namespace leafbench {

/// Odd-sized 2-D impulse response, row-major.
struct Kernel {
  int width = 1;
  int height = 1;
  std::vector<double> coefficients{1.0};

  Kernel() = default;
  Kernel(int w, int h, std::vector<double> c) : width(w), height(h), coefficients(std::move(c)) {
    if (w <= 0 || h <= 0 || w % 2 == 0 || h % 2 == 0)
      fail(Errc::invalid_argument, "kernel dimensions must be odd and positive");
    if (coefficients.size() != static_cast<std::size_t>(w) * h)
      fail(Errc::invalid_argument, "kernel coefficient count does not match its dimensions");
  }

  double at(int i, int j) const noexcept { return coefficients[static_cast<std::size_t>(j) * width + i]; }
};

inline Kernel box_kernel(int k) {
  return Kernel(k, k, std::vector<double>(static_cast<std::size_t>(k) * k, 1.0 / (static_cast<double>(k) * k)));
}

/// Sigma used when none is given: 0.3*((k-1)*0.5 - 1) + 0.8.
inline double auto_gaussian_sigma(int k) noexcept { return 0.3 * ((k - 1) * 0.5 - 1.0) + 0.8; }

inline std::vector<double> gaussian_taps(int k, double sigma) {
  if (k <= 0 || k % 2 == 0) fail(Errc::invalid_argument, "gaussian kernel size must be odd");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(Errc::invalid_sigma, "gaussian sigma must be > 0");
  const int r = k / 2;
  std::vector<double> taps(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    taps[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += taps[i + r];
  }
  for (auto& t : taps) t /= sum;
  return taps;
}

inline Kernel outer_product(const std::vector<double>& col, const std::vector<double>& row) {
  std::vector<double> c;
  c.reserve(col.size() * row.size());
  for (double a : col)
    for (double b : row) c.push_back(a * b);
  return Kernel(static_cast<int>(row.size()), static_cast<int>(col.size()), std::move(c));
}

namespace detail {

inline void require_fits(int w, int h, int kw, int kh) {
  if (kw > w || kh > h)
    fail(Errc::kernel_too_large, "kernel " + std::to_string(kw) + "x" + std::to_string(kh) + " exceeds image " +
                                     std::to_string(w) + "x" + std::to_string(h));
}

inline void require_odd_window(int k, const char* what) {
  if (k < 1 || k % 2 == 0) fail(Errc::invalid_argument, std::string(what) + " must be odd and positive");
}

/// Reflect-101 index table covering [-pad, n + pad).
inline std::vector<int> border_index(int n, int pad) {
  std::vector<int> idx(static_cast<std::size_t>(n + 2 * pad));
  for (int i = -pad; i < n + pad; ++i) idx[i + pad] = reflect101(i, n);
  return idx;
}

/// Interleaved 8-bit image extended by `pad` on every side with reflect-101.
struct PaddedImage {
  int width = 0;  // padded width
  int height = 0;
  int channels = 0;
  int pad = 0;
  std::vector<std::uint8_t> data;

  const std::uint8_t* row(int y) const noexcept {
    return data.data() + static_cast<std::size_t>(y) * width * channels;
  }
};

inline PaddedImage pad_image(const Raster& img, int pad) {
  PaddedImage p;
  p.channels = img.channels();
  p.pad = pad;
  p.width = img.width() + 2 * pad;
  p.height = img.height() + 2 * pad;
  p.data.resize(static_cast<std::size_t>(p.width) * p.height * p.channels);
  const auto xs = border_index(img.width(), pad);
  const auto ys = border_index(img.height(), pad);
  std::size_t o = 0;
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x)
      for (int c = 0; c < p.channels; ++c) p.data[o++] = img.at(xs[x], ys[y], c);
  return p;
}

/// 1-D convolution along rows (horizontal) of a plane with reflect-101 borders.
inline Plane convolve_rows(const Plane& p, const std::vector<double>& taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  const auto xs = border_index(p.width, r);
  Plane out(p.width, p.height);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += taps[i + r] * p.at(xs[x - i + r], y);
      out.at(x, y) = acc;
    }
  return out;
}

inline Plane convolve_cols(const Plane& p, const std::vector<double>& taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  const auto ys = border_index(p.height, r);
  Plane out(p.width, p.height);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) {
      double acc = 0.0;
      for (int j = -r; j <= r; ++j) acc += taps[j + r] * p.at(x, ys[y - j + r]);
      out.at(x, y) = acc;
    }
  return out;
}

}  // namespace detail

/// 2-D convolution O(m,n) = sum_{i,j} K(i,j) I(m-i, n-j), reflect-101 borders, same-size output.
inline Plane convolve2d(const Plane& p, const Kernel& k) {
  detail::require_fits(p.width, p.height, k.width, k.height);
  const int rx = k.width / 2;
  const int ry = k.height / 2;
  const auto xs = detail::border_index(p.width, rx);
  const auto ys = detail::border_index(p.height, ry);
  Plane out(p.width, p.height);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) {
      double acc = 0.0;
      for (int j = -ry; j <= ry; ++j) {
        const int sy = ys[y - j + ry];
        for (int i = -rx; i <= rx; ++i) acc += k.at(i + rx, j + ry) * p.at(xs[x - i + rx], sy);
      }
      out.at(x, y) = acc;
    }
  return out;
}

/// Separable convolution with a column and a row pass.
inline Plane convolve_separable(const Plane& p, const std::vector<double>& col_taps,
                                const std::vector<double>& row_taps) {
  detail::require_fits(p.width, p.height, static_cast<int>(row_taps.size()), static_cast<int>(col_taps.size()));
  return detail::convolve_cols(detail::convolve_rows(p, row_taps), col_taps);
}

/// k x k box average per channel. Window sums are exact integers, so the result does not
/// depend on summation order.
inline Raster mean_filter(const Raster& img, int k) {
  detail::require_odd_window(k, "mean kernel size");
  detail::require_fits(img.width(), img.height(), k, k);
  const int r = k / 2;
  const int w = img.width();
  const int h = img.height();
  const int ch = img.channels();
  const auto pad = detail::pad_image(img, r);
  const int pw = pad.width;
  const double area = static_cast<double>(k) * k;

  // Vertical k-row sums for every padded column, updated incrementally per output row.
  std::vector<std::int32_t> col(static_cast<std::size_t>(pw) * ch, 0);
  for (int j = 0; j < k; ++j) {
    const auto* row = pad.row(j);
    for (std::size_t i = 0; i < col.size(); ++i) col[i] += row[i];
  }
  Raster out(w, h, img.space());
  auto dst = out.samples();
  for (int y = 0; y < h; ++y) {
    if (y > 0) {
      const auto* add = pad.row(y + k - 1);
      const auto* sub = pad.row(y - 1);
      for (std::size_t i = 0; i < col.size(); ++i) col[i] += add[i] - sub[i];
    }
    for (int c = 0; c < ch; ++c) {
      std::int32_t sum = 0;
      for (int i = 0; i < k; ++i) sum += col[static_cast<std::size_t>(i) * ch + c];
      for (int x = 0; x < w; ++x) {
        if (x > 0) sum += col[static_cast<std::size_t>(x + k - 1) * ch + c] - col[static_cast<std::size_t>(x - 1) * ch + c];
        dst[(static_cast<std::size_t>(y) * w + x) * ch + c] = quantize_sample(sum / area);
      }
    }
  }
  return out;
}

/// Separable Gaussian per channel; sigma defaults to auto_gaussian_sigma(k).
inline Raster gaussian_filter(const Raster& img, int k, std::optional<double> sigma = std::nullopt) {
  detail::require_odd_window(k, "gaussian kernel size");
  const double s = sigma.value_or(auto_gaussian_sigma(k));
  const auto taps = gaussian_taps(k, s);
  detail::require_fits(img.width(), img.height(), k, k);
  std::vector<Plane> planes;
  planes.reserve(static_cast<std::size_t>(img.channels()));
  for (int c = 0; c < img.channels(); ++c) planes.push_back(convolve_separable(extract_plane(img, c), taps, taps));
  return merge_planes(planes, img.space());
}

namespace detail {

using Comparator = std::pair<std::uint16_t, std::uint16_t>;

/// Comparators of Batcher's odd-even merge sort on n inputs, pruned to those that
/// can influence output position n/2. Inputs past n act as +inf and never move.
inline std::vector<Comparator> median_network(int n) {
  int size = 1;
  while (size < n) size *= 2;
  std::vector<Comparator> all;
  for (int p = 1; p < size; p *= 2)
    for (int k = p; k >= 1; k /= 2)
      for (int j = k % p; j + k < size; j += 2 * k)
        for (int i = 0; i < k && i + j + k < size; ++i)
          if ((i + j) / (2 * p) == (i + j + k) / (2 * p) && i + j + k < n)
            all.emplace_back(static_cast<std::uint16_t>(i + j), static_cast<std::uint16_t>(i + j + k));

  std::vector<bool> needed(static_cast<std::size_t>(n), false);
  needed[static_cast<std::size_t>(n / 2)] = true;
  std::vector<Comparator> kept;
  for (auto it = all.rbegin(); it != all.rend(); ++it) {
    if (needed[it->first] || needed[it->second]) {
      needed[it->first] = needed[it->second] = true;
      kept.push_back(*it);
    }
  }
  std::reverse(kept.begin(), kept.end());
  return kept;
}

inline const std::vector<Comparator>& cached_median_network(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<Comparator>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, median_network(n)).first;
  return it->second;
}

}  // namespace detail

/// Exact k x k median per channel. Each output row is computed by running a
/// selection network elementwise over the k*k shifted copies of the row.
inline Raster median_filter(const Raster& img, int k) {
  detail::require_odd_window(k, "median kernel size");
  detail::require_fits(img.width(), img.height(), k, k);
  const int r = k / 2;
  const int w = img.width();
  const int h = img.height();
  const int ch = img.channels();
  const std::size_t row_len = static_cast<std::size_t>(w) * ch;
  const int n = k * k;
  const auto& network = detail::cached_median_network(n);
  const auto pad = detail::pad_image(img, r);

  std::vector<std::uint8_t> lanes(static_cast<std::size_t>(n) * row_len);
  Raster out(w, h, img.space());
  auto dst = out.samples();
  for (int y = 0; y < h; ++y) {
    for (int j = 0; j < k; ++j) {
      const auto* src = pad.row(y + j);
      for (int i = 0; i < k; ++i)
        std::copy_n(src + static_cast<std::size_t>(i) * ch, row_len,
                    lanes.data() + static_cast<std::size_t>(j * k + i) * row_len);
    }
    for (const auto& [a, b] : network) {
      std::uint8_t* __restrict pa = lanes.data() + a * row_len;
      std::uint8_t* __restrict pb = lanes.data() + b * row_len;
      for (std::size_t s = 0; s < row_len; ++s) {
        const std::uint8_t lo = std::min(pa[s], pb[s]);
        const std::uint8_t hi = std::max(pa[s], pb[s]);
        pa[s] = lo;
        pb[s] = hi;
      }
    }
    std::copy_n(lanes.data() + static_cast<std::size_t>(n / 2) * row_len, row_len,
                dst.begin() + static_cast<std::ptrdiff_t>(y * row_len));
  }
  return out;
}

/// Edge-preserving average over the disc of radius diameter/2. Range distance is the L1
/// difference summed over channels; weights use the unfiltered input.
inline Raster bilateral_filter(const Raster& img, int diameter, double sigma_color, double sigma_space) {
  if (diameter < 3 || diameter % 2 == 0) fail(Errc::invalid_argument, "bilateral diameter must be odd and >= 3");
  if (!(sigma_color > 0.0) || !(sigma_space > 0.0)) fail(Errc::invalid_sigma, "bilateral sigmas must be > 0");
  detail::require_fits(img.width(), img.height(), diameter, diameter);
  const int r = diameter / 2;
  const int w = img.width();
  const int h = img.height();
  const int ch = img.channels();
  const auto pad = detail::pad_image(img, r);
  const std::size_t pstride = static_cast<std::size_t>(pad.width) * ch;

  struct Tap {
    std::ptrdiff_t offset;
    double weight;
  };
  std::vector<Tap> taps;
  taps.reserve(static_cast<std::size_t>(diameter) * diameter);
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy > r * r) continue;
      taps.push_back({static_cast<std::ptrdiff_t>(dy) * static_cast<std::ptrdiff_t>(pstride) + dx * ch,
                      std::exp(-(dx * dx + dy * dy) / (2.0 * sigma_space * sigma_space))});
    }
  std::vector<double> color(static_cast<std::size_t>(255 * ch + 1));
  for (std::size_t d = 0; d < color.size(); ++d)
    color[d] = std::exp(-(static_cast<double>(d) * static_cast<double>(d)) / (2.0 * sigma_color * sigma_color));

  Raster out(w, h, img.space());
  auto dst = out.samples();
  std::array<double, 3> acc{};
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* row = pad.data.data() + static_cast<std::size_t>(y + r) * pstride + static_cast<std::size_t>(r) * ch;
    for (int x = 0; x < w; ++x) {
      const std::uint8_t* center = row + static_cast<std::size_t>(x) * ch;
      double wsum = 0.0;
      acc.fill(0.0);
      if (ch == 1) {
        for (const auto& t : taps) {
          const int v = center[t.offset];
          const double wt = t.weight * color[static_cast<std::size_t>(std::abs(v - center[0]))];
          wsum += wt;
          acc[0] += wt * v;
        }
      } else {
        for (const auto& t : taps) {
          const std::uint8_t* q = center + t.offset;
          const int d = std::abs(q[0] - center[0]) + std::abs(q[1] - center[1]) + std::abs(q[2] - center[2]);
          const double wt = t.weight * color[static_cast<std::size_t>(d)];
          wsum += wt;
          acc[0] += wt * q[0];
          acc[1] += wt * q[1];
          acc[2] += wt * q[2];
        }
      }
      auto* out_px = dst.data() + (static_cast<std::size_t>(y) * w + x) * ch;
      for (int c = 0; c < ch; ++c) out_px[c] = quantize_sample(acc[c] / wsum);
    }
  }
  return out;
}

namespace detail {

/// Non-local means on one 8-bit plane. Patch distances for each search offset are box
/// sums of a squared-difference image, so the cost per offset is O(pixels).
inline Plane nlm_plane(const Plane& src, double strength, int template_window, int search_window) {
  const int w = src.width;
  const int h = src.height;
  const int tr = template_window / 2;
  const int sr = search_window / 2;
  const int pad = tr + sr;
  const int pw = w + 2 * pad;
  const int ph = h + 2 * pad;
  const auto xs = border_index(w, pad);
  const auto ys = border_index(h, pad);
  std::vector<std::int32_t> padded(static_cast<std::size_t>(pw) * ph);
  for (int y = 0; y < ph; ++y)
    for (int x = 0; x < pw; ++x)
      padded[static_cast<std::size_t>(y) * pw + x] = static_cast<std::int32_t>(src.at(xs[x], ys[y]));

  // weight = exp(-S / (T * s^2)) with S the integer patch sum of squared differences
  // and T the template area. Weights below exp(-30) are treated as zero; the last table
  // entry is that zero so lookups can clamp instead of branch.
  const double area = static_cast<double>(template_window) * template_window;
  const double scale = 1.0 / (area * strength * strength);
  const auto table_size = static_cast<std::size_t>(std::min(30.0 / scale, area * 255.0 * 255.0)) + 2;
  std::vector<float> table(table_size);
  for (std::size_t s = 0; s + 1 < table_size; ++s)
    table[s] = static_cast<float>(std::exp(-static_cast<double>(s) * scale));
  table.back() = 0.0f;
  const auto last = static_cast<std::int32_t>(table_size - 1);

  // The patch distance of (p, p + d) equals that of (p + d, p), so only half of the
  // offsets are evaluated and each weight feeds both pixels. For offset d the centers
  // p cover the image plus the image shifted by -d, which supplies the -d weights of
  // pixels whose partner lies outside the image.
  std::vector<std::int32_t> diff;
  std::vector<std::int32_t> colsum;
  std::vector<std::int32_t> boxsum;
  std::vector<float> weight;
  std::vector<float> wsum(static_cast<std::size_t>(w) * h, 0.0f);
  std::vector<float> acc(static_cast<std::size_t>(w) * h, 0.0f);

  for (int dy = 0; dy <= sr; ++dy) {
    for (int dx = -sr; dx <= sr; ++dx) {
      if (dy == 0 && dx < 0) continue;
      const int x0 = std::min(0, -dx);
      const int x1 = std::max(w, w - dx);
      const int y0 = -dy;
      const int rw = x1 - x0;
      const int rh = h - y0;
      const int ew = rw + 2 * tr;
      const int eh = rh + 2 * tr;
      diff.resize(static_cast<std::size_t>(ew) * eh);
      colsum.assign(static_cast<std::size_t>(ew), 0);
      boxsum.resize(static_cast<std::size_t>(rw));
      weight.resize(static_cast<std::size_t>(rw));
      for (int y = 0; y < eh; ++y) {
        const std::int32_t* a = padded.data() + static_cast<std::size_t>(y + y0 - tr + pad) * pw + x0 - tr + pad;
        const std::int32_t* b = a + static_cast<std::ptrdiff_t>(dy) * pw + dx;
        std::int32_t* d = diff.data() + static_cast<std::size_t>(y) * ew;
        for (int x = 0; x < ew; ++x) {
          const std::int32_t e = a[x] - b[x];
          d[x] = e * e;
        }
      }
      for (int j = 0; j < template_window; ++j) {
        const std::int32_t* d = diff.data() + static_cast<std::size_t>(j) * ew;
        for (int x = 0; x < ew; ++x) colsum[x] += d[x];
      }
      for (int ry = 0; ry < rh; ++ry) {
        if (ry > 0) {
          const std::int32_t* add = diff.data() + static_cast<std::size_t>(ry + template_window - 1) * ew;
          const std::int32_t* sub = diff.data() + static_cast<std::size_t>(ry - 1) * ew;
          for (int x = 0; x < ew; ++x) colsum[x] += add[x] - sub[x];
        }
        std::fill(boxsum.begin(), boxsum.end(), 0);
        for (int i = 0; i < template_window; ++i) {
          const std::int32_t* cs = colsum.data() + i;
          for (int x = 0; x < rw; ++x) boxsum[x] += cs[x];
        }
        for (int x = 0; x < rw; ++x) weight[x] = table[static_cast<std::size_t>(std::min(boxsum[x], last))];

        const int y = ry + y0;
        // p = (x, y) inside the image: weight of its neighbour p + d.
        if (y >= 0) {
          float* ws = wsum.data() + static_cast<std::size_t>(y) * w;
          float* ac = acc.data() + static_cast<std::size_t>(y) * w;
          const std::int32_t* q = padded.data() + static_cast<std::size_t>(y + pad + dy) * pw + pad + dx;
          const float* wt = weight.data() - x0;
          for (int x = 0; x < w; ++x) {
            ws[x] += wt[x];
            ac[x] += wt[x] * static_cast<float>(q[x]);
          }
        }
        // p + d inside the image: the same weight for the reverse offset.
        if ((dx != 0 || dy != 0) && y + dy < h) {
          const int lo = -dx;
          const int hi = w - dx;
          float* ws = wsum.data() + static_cast<std::size_t>(y + dy) * w + dx;
          float* ac = acc.data() + static_cast<std::size_t>(y + dy) * w + dx;
          const std::int32_t* q = padded.data() + static_cast<std::size_t>(y + pad) * pw + pad;
          const float* wt = weight.data() - x0;
          for (int x = lo; x < hi; ++x) {
            ws[x] += wt[x];
            ac[x] += wt[x] * static_cast<float>(q[x]);
          }
        }
      }
    }
  }
  Plane out(w, h);
  for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] = acc[i] / wsum[i];
  return out;
}

}  // namespace detail

/// Non-local means. Color input is filtered in luma/chroma with `h` on luma and `h_color`
/// on both chroma planes; gray input uses `h`.
inline Raster nlm_filter(const Raster& img, double h, double h_color, int template_window, int search_window) {
  if (template_window < 1 || search_window < 1 || template_window % 2 == 0 || search_window % 2 == 0)
    fail(Errc::invalid_window, "nlm windows must be odd and positive");
  if (template_window > search_window) fail(Errc::invalid_window, "nlm template window exceeds search window");
  if (!(h > 0.0) || !(h_color > 0.0) || !std::isfinite(h) || !std::isfinite(h_color))
    fail(Errc::invalid_strength, "nlm strengths must be > 0");

  if (img.channels() == 1) {
    std::array planes{detail::nlm_plane(extract_plane(img, 0), h, template_window, search_window)};
    return merge_planes(planes, img.space());
  }
  const Raster source = img.space() == ColorSpace::srgb ? to_luma_chroma(img) : img;
  const Plane y = detail::nlm_plane(extract_plane(source, 0), h, template_window, search_window);
  const Plane cb = detail::nlm_plane(extract_plane(source, 1), h_color, template_window, search_window);
  const Plane cr = detail::nlm_plane(extract_plane(source, 2), h_color, template_window, search_window);
  if (img.space() == ColorSpace::srgb) return from_luma_chroma(y, cb, cr);
  std::array planes{y, cb, cr};
  return merge_planes(planes, img.space());
}

enum class FilterKind { mean, gaussian, median, bilateral, nlm };

inline constexpr std::array<FilterKind, 5> all_filter_kinds = {FilterKind::mean, FilterKind::gaussian,
                                                               FilterKind::median, FilterKind::bilateral,
                                                               FilterKind::nlm};

inline std::string_view filter_name(FilterKind k) {
  switch (k) {
    case FilterKind::mean: return "mean";
    case FilterKind::gaussian: return "gaussian";
    case FilterKind::median: return "median";
    case FilterKind::bilateral: return "bilateral";
    case FilterKind::nlm: return "nlm";
  }
  return "?";
}

/// Name used in reports; the non-local means filter is labeled "bm3d".
inline std::string_view filter_label(FilterKind k) { return k == FilterKind::nlm ? "bm3d" : filter_name(k); }

inline std::optional<FilterKind> parse_filter_kind(std::string_view s) {
  for (auto k : all_filter_kinds)
    if (filter_name(k) == s) return k;
  if (s == "bm3d") return FilterKind::nlm;
  return std::nullopt;
}

struct FilterSpec {
  FilterKind kind = FilterKind::mean;
  int kernel_size = 5;
  std::optional<double> sigma;  // gaussian; empty means auto
  int diameter = 9;
  double sigma_color = 75.0;
  double sigma_space = 75.0;
  double h = 10.0;
  double h_color = 10.0;
  int template_window = 7;
  int search_window = 21;

  static FilterSpec of(FilterKind kind) {
    FilterSpec s;
    s.kind = kind;
    return s;
  }

  void validate() const {
    switch (kind) {
      case FilterKind::mean:
      case FilterKind::gaussian:
      case FilterKind::median:
        if (kernel_size < 3 || kernel_size % 2 == 0)
          fail(Errc::invalid_argument, "kernel_size must be odd and >= 3");
        if (kind == FilterKind::gaussian && sigma && !(*sigma > 0.0))
          fail(Errc::invalid_sigma, "gaussian sigma must be > 0");
        break;
      case FilterKind::bilateral:
        if (diameter < 3 || diameter % 2 == 0) fail(Errc::invalid_argument, "diameter must be odd and >= 3");
        if (!(sigma_color > 0.0) || !(sigma_space > 0.0)) fail(Errc::invalid_sigma, "bilateral sigmas must be > 0");
        break;
      case FilterKind::nlm:
        if (template_window < 1 || search_window < 1 || template_window % 2 == 0 || search_window % 2 == 0 ||
            template_window > search_window)
          fail(Errc::invalid_window, "nlm windows must be odd with template <= search");
        if (!(h > 0.0) || !(h_color > 0.0)) fail(Errc::invalid_strength, "nlm strengths must be > 0");
        break;
    }
  }

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

inline std::vector<FilterSpec> default_filters() {
  return {FilterSpec::of(FilterKind::mean), FilterSpec::of(FilterKind::gaussian), FilterSpec::of(FilterKind::median),
          FilterSpec::of(FilterKind::bilateral), FilterSpec::of(FilterKind::nlm)};
}

inline Raster apply_filter(const Raster& img, const FilterSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case FilterKind::mean: return mean_filter(img, spec.kernel_size);
    case FilterKind::gaussian: return gaussian_filter(img, spec.kernel_size, spec.sigma);
    case FilterKind::median: return median_filter(img, spec.kernel_size);
    case FilterKind::bilateral: return bilateral_filter(img, spec.diameter, spec.sigma_color, spec.sigma_space);
    case FilterKind::nlm: return nlm_filter(img, spec.h, spec.h_color, spec.template_window, spec.search_window);
  }
  return img;
}

}  // namespace leafbench
