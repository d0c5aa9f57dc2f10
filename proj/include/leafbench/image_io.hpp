#pragma once

// PNG and JPEG codecs on top of libpng (simplified API) and libjpeg.

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <jpeglib.h>

#include "leafbench/raster.hpp"

namespace leafbench {

namespace detail {

enum class FileKind { png, jpeg, unknown };

inline FileKind sniff(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  unsigned char head[8] = {};
  in.read(reinterpret_cast<char*>(head), sizeof head);
  const auto got = in.gcount();
  static constexpr unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  if (got >= 8 && std::memcmp(head, png_sig, 8) == 0) return FileKind::png;
  if (got >= 3 && head[0] == 0xff && head[1] == 0xd8 && head[2] == 0xff) return FileKind::jpeg;
  return FileKind::unknown;
}

inline Raster decode_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    fail(Errc::decode, path.string() + ": " + image.message);

  // Read with an alpha channel so stored color values are kept untouched, then drop it.
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGBA : PNG_FORMAT_GA;
  const int in_ch = color ? 4 : 2;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    fail(Errc::decode, path.string() + ": " + msg);
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  Raster out(w, h, color ? ColorSpace::srgb : ColorSpace::gray);
  auto dst = out.samples();
  const int out_ch = out.channels();
  const std::size_t n = out.pixel_count();
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < out_ch; ++c) dst[i * out_ch + c] = buf[i * in_ch + c];
  return out;
}

inline void encode_png(const Raster& img, const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = img.channels() == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.samples().data(), 0, nullptr))
    fail(Errc::io, path.string() + ": " + image.message);
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

inline void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline Raster decode_jpeg(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) fail(Errc::io, "cannot open " + path.string());

  jpeg_decompress_struct cinfo;
  JpegErrorManager jerr;
  cinfo.err = jpeg_std_error(&jerr.base);
  jerr.base.error_exit = jpeg_error_exit;
  // Declared before setjmp so no destructor is skipped by longjmp.
  std::vector<std::uint8_t> pixels;
  int width = 0, height = 0, channels = 0;
  if (setjmp(jerr.jump)) {
    jpeg_destroy_decompress(&cinfo);
    fail(Errc::decode, path.string() + ": " + jerr.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file.get());
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.jpeg_color_space == JCS_CMYK || cinfo.jpeg_color_space == JCS_YCCK) {
    std::strcpy(jerr.message, "CMYK JPEG is not supported");
    std::longjmp(jerr.jump, 1);
  }
  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  channels = cinfo.output_components;
  pixels.resize(static_cast<std::size_t>(width) * height * channels);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * channels;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  const bool truncated = cinfo.err->num_warnings > 0;
  jpeg_destroy_decompress(&cinfo);
  if (truncated) fail(Errc::decode, path.string() + ": corrupt or truncated JPEG data");
  return Raster(width, height, channels == 1 ? ColorSpace::gray : ColorSpace::srgb, std::move(pixels));
}

inline void encode_jpeg(const Raster& img, const std::filesystem::path& path, int quality) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) fail(Errc::io, "cannot write " + path.string());
  jpeg_compress_struct cinfo;
  JpegErrorManager jerr;
  cinfo.err = jpeg_std_error(&jerr.base);
  jerr.base.error_exit = jpeg_error_exit;
  if (setjmp(jerr.jump)) {
    jpeg_destroy_compress(&cinfo);
    fail(Errc::io, path.string() + ": " + jerr.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_stdio_dest(&cinfo, file.get());
  cinfo.image_width = static_cast<JDIMENSION>(img.width());
  cinfo.image_height = static_cast<JDIMENSION>(img.height());
  cinfo.input_components = img.channels();
  cinfo.in_color_space = img.channels() == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  const auto samples = img.samples();
  const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels();
  while (cinfo.next_scanline < cinfo.image_height) {
    auto* row = const_cast<JSAMPLE*>(samples.data() + cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
}

inline std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return ext;
}

}  // namespace detail

/// Decode a PNG or JPEG file. Alpha is dropped; gray files stay single-channel.
inline Raster load_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) fail(Errc::io, "no such file: " + path.string());
  switch (detail::sniff(path)) {
    case detail::FileKind::png: return detail::decode_png(path);
    case detail::FileKind::jpeg: return detail::decode_jpeg(path);
    case detail::FileKind::unknown: break;
  }
  fail(Errc::decode, path.string() + ": not a PNG or JPEG file");
}

/// Encode by extension: .jpg/.jpeg writes JPEG, anything else PNG.
/// luma_chroma rasters are written as their raw three channels.
inline void save_image(const Raster& img, const std::filesystem::path& path, int jpeg_quality = 95) {
  const std::string ext = detail::lower_extension(path);
  if (ext == ".jpg" || ext == ".jpeg")
    detail::encode_jpeg(img, path, jpeg_quality);
  else
    detail::encode_png(img, path);
}

inline bool is_image_path(const std::filesystem::path& path) {
  const std::string ext = detail::lower_extension(path);
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

/// Recursive corpus discovery in lexicographic path order.
inline std::vector<std::filesystem::path> discover_images(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) fail(Errc::io, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> found;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && is_image_path(entry.path())) found.push_back(entry.path());
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace leafbench
