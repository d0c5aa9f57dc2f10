#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "leafbench/raster.hpp"

namespace leafbench {

struct MetricConfig {
  double data_range = 255.0;
  int ssim_window = 7;
  double ssim_k1 = 0.01;
  double ssim_k2 = 0.03;
  int nmi_bins = 100;

  void validate() const {
    if (!(data_range > 0.0)) fail(Errc::invalid_argument, "data_range must be > 0");
    if (ssim_window < 3 || ssim_window % 2 == 0) fail(Errc::invalid_argument, "ssim_window must be odd and >= 3");
    if (!(ssim_k1 > 0.0) || !(ssim_k2 > 0.0)) fail(Errc::invalid_argument, "ssim stabilizers must be > 0");
    if (nmi_bins < 2) fail(Errc::invalid_argument, "nmi_bins must be >= 2");
  }

  friend bool operator==(const MetricConfig&, const MetricConfig&) = default;
};

struct MetricVector {
  double mse = 0.0;
  double ssim = 1.0;
  double psnr = std::numeric_limits<double>::infinity();
  double nrmse = 0.0;
  double nmi = 2.0;

  friend bool operator==(const MetricVector&, const MetricVector&) = default;
};

namespace detail {

inline void require_same_shape(const Raster& a, const Raster& b) {
  if (!a.same_shape(b))
    fail(Errc::shape_mismatch, std::to_string(a.width()) + "x" + std::to_string(a.height()) + "x" +
                                   std::to_string(a.channels()) + " vs " + std::to_string(b.width()) + "x" +
                                   std::to_string(b.height()) + "x" + std::to_string(b.channels()));
}

inline double mse_unchecked(const Raster& a, const Raster& b) {
  const auto x = a.samples();
  const auto y = b.samples();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(x.size());
}

inline double psnr_from_mse(double mse, double data_range) {
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(data_range * data_range / mse);
}

/// 2-D inclusive prefix sums with a zero first row/column.
inline std::vector<double> integral(const std::vector<double>& v, int w, int h) {
  std::vector<double> s(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
  for (int y = 0; y < h; ++y) {
    double row = 0.0;
    for (int x = 0; x < w; ++x) {
      row += v[static_cast<std::size_t>(y) * w + x];
      s[static_cast<std::size_t>(y + 1) * (w + 1) + x + 1] = s[static_cast<std::size_t>(y) * (w + 1) + x + 1] + row;
    }
  }
  return s;
}

inline double ssim_channel(const Raster& a, const Raster& b, int c, const MetricConfig& cfg) {
  const int w = a.width();
  const int h = a.height();
  const int win = cfg.ssim_window;
  const std::size_t n = a.pixel_count();
  // Window sums are integers well below 2^53, so prefix sums in double are exact.
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = a.samples()[i * a.channels() + c];
    y[i] = b.samples()[i * b.channels() + c];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto sx = integral(x, w, h), sy = integral(y, w, h), sxx = integral(xx, w, h), syy = integral(yy, w, h),
             sxy = integral(xy, w, h);
  const double np = static_cast<double>(win) * win;
  const double cov_norm = np / (np - 1.0);
  const double c1 = (cfg.ssim_k1 * cfg.data_range) * (cfg.ssim_k1 * cfg.data_range);
  const double c2 = (cfg.ssim_k2 * cfg.data_range) * (cfg.ssim_k2 * cfg.data_range);
  auto box = [&](const std::vector<double>& s, int x0, int y0) {
    const std::size_t stride = static_cast<std::size_t>(w) + 1;
    return s[(y0 + win) * stride + x0 + win] - s[y0 * stride + x0 + win] - s[(y0 + win) * stride + x0] +
           s[y0 * stride + x0];
  };
  double total = 0.0;
  for (int y0 = 0; y0 + win <= h; ++y0)
    for (int x0 = 0; x0 + win <= w; ++x0) {
      const double ux = box(sx, x0, y0) / np;
      const double uy = box(sy, x0, y0) / np;
      const double vx = cov_norm * (box(sxx, x0, y0) / np - ux * ux);
      const double vy = cov_norm * (box(syy, x0, y0) / np - uy * uy);
      const double vxy = cov_norm * (box(sxy, x0, y0) / np - ux * uy);
      total += ((2.0 * ux * uy + c1) * (2.0 * vxy + c2)) / ((ux * ux + uy * uy + c1) * (vx + vy + c2));
    }
  return total / (static_cast<double>(w - win + 1) * (h - win + 1));
}

inline double entropy_nats(const std::vector<std::int64_t>& counts, double total) {
  double hsum = 0.0;
  for (auto c : counts)
    if (c > 0) {
      const double p = static_cast<double>(c) / total;
      hsum -= p * std::log(p);
    }
  return hsum;
}

inline int nmi_bin(std::uint8_t v, int bins) {
  const int b = static_cast<int>(static_cast<double>(v) * bins / 255.0);
  return b >= bins ? bins - 1 : b;
}

}  // namespace detail

/// Mean squared difference over all samples and channels.
inline double mse(const Raster& ref, const Raster& test) {
  detail::require_same_shape(ref, test);
  return detail::mse_unchecked(ref, test);
}

/// 10 log10(L^2 / MSE); +inf when the images are identical.
inline double psnr(const Raster& ref, const Raster& test, const MetricConfig& cfg = {}) {
  detail::require_same_shape(ref, test);
  return detail::psnr_from_mse(detail::mse_unchecked(ref, test), cfg.data_range);
}

/// Mean SSIM over all full uniform windows, averaged over channels. Variances use the
/// sample (N-1) normalization.
inline double ssim(const Raster& ref, const Raster& test, const MetricConfig& cfg = {}) {
  cfg.validate();
  detail::require_same_shape(ref, test);
  if (ref.width() < cfg.ssim_window || ref.height() < cfg.ssim_window)
    fail(Errc::image_too_small, "image is smaller than the SSIM window");
  double sum = 0.0;
  for (int c = 0; c < ref.channels(); ++c) sum += detail::ssim_channel(ref, test, c, cfg);
  return sum / ref.channels();
}

/// sqrt(MSE) normalized by the reference's root-mean-square intensity.
inline double nrmse(const Raster& ref, const Raster& test) {
  detail::require_same_shape(ref, test);
  double energy = 0.0;
  for (auto s : ref.samples()) energy += static_cast<double>(s) * s;
  if (energy == 0.0) fail(Errc::zero_reference, "reference image is all zero");
  return std::sqrt(detail::mse_unchecked(ref, test)) / std::sqrt(energy / static_cast<double>(ref.size()));
}

/// (H(ref) + H(test)) / H(ref, test) over an equal-width joint histogram on [0, 255].
/// When the joint entropy is zero (both images constant) the images carry no shared
/// information and the score is 1.
inline double nmi(const Raster& ref, const Raster& test, const MetricConfig& cfg = {}) {
  cfg.validate();
  detail::require_same_shape(ref, test);
  const int bins = cfg.nmi_bins;
  std::vector<std::int64_t> joint(static_cast<std::size_t>(bins) * bins, 0);
  std::vector<std::int64_t> hx(static_cast<std::size_t>(bins), 0), hy(static_cast<std::size_t>(bins), 0);
  const auto a = ref.samples();
  const auto b = test.samples();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int bx = detail::nmi_bin(a[i], bins);
    const int by = detail::nmi_bin(b[i], bins);
    ++joint[static_cast<std::size_t>(bx) * bins + by];
    ++hx[bx];
    ++hy[by];
  }
  const double total = static_cast<double>(a.size());
  const double h_joint = detail::entropy_nats(joint, total);
  if (h_joint == 0.0) return 1.0;
  return (detail::entropy_nats(hx, total) + detail::entropy_nats(hy, total)) / h_joint;
}

inline MetricVector evaluate(const Raster& ref, const Raster& test, const MetricConfig& cfg = {}) {
  cfg.validate();
  detail::require_same_shape(ref, test);
  MetricVector m;
  m.mse = detail::mse_unchecked(ref, test);
  m.psnr = detail::psnr_from_mse(m.mse, cfg.data_range);
  m.ssim = ssim(ref, test, cfg);
  m.nrmse = nrmse(ref, test);
  m.nmi = nmi(ref, test, cfg);
  return m;
}

}  // namespace leafbench
