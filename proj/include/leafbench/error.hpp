#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace leafbench {

enum class Errc {
  io,
  decode,
  invalid_dimension,
  wrong_color_space,
  kernel_too_large,
  invalid_sigma,
  invalid_window,
  invalid_strength,
  grid_too_fine,
  shape_mismatch,
  image_too_small,
  zero_reference,
  empty_image_list,
  empty_corpus,
  incomplete_block,
  invalid_argument,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::io: return "IoError";
    case Errc::decode: return "DecodeError";
    case Errc::invalid_dimension: return "InvalidDimension";
    case Errc::wrong_color_space: return "WrongColorSpace";
    case Errc::kernel_too_large: return "KernelTooLarge";
    case Errc::invalid_sigma: return "InvalidSigma";
    case Errc::invalid_window: return "InvalidWindow";
    case Errc::invalid_strength: return "InvalidStrength";
    case Errc::grid_too_fine: return "GridTooFine";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::image_too_small: return "ImageTooSmall";
    case Errc::zero_reference: return "ZeroReference";
    case Errc::empty_image_list: return "EmptyImageList";
    case Errc::empty_corpus: return "EmptyCorpus";
    case Errc::incomplete_block: return "IncompleteBlock";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Error";
}

/// Every failure raised by the library carries one of the Errc kinds.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), detail_(what) {}

  Errc code() const noexcept { return code_; }
  /// The message without the error-name prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace leafbench
