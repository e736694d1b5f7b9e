#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "sel/core/error.hpp"

namespace sel::cli {

/// 8-bit raster, row-major, channel-interleaved.
struct RasterImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 1;  // 1 = gray, 3 = RGB
  std::vector<std::uint8_t> pixels;

  std::size_t pixel_count() const noexcept { return width * height; }
  std::uint8_t at(std::size_t x, std::size_t y, std::size_t channel) const {
    return pixels.at((y * width + x) * channels + channel);
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

namespace detail {

class PnmCursor {
 public:
  explicit PnmCursor(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  unsigned long read_uint(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) fail(ErrorCode::TruncatedPayload, std::string("missing ") + what);
    if (!std::isdigit(bytes_[pos_])) fail(ErrorCode::UnsupportedFormat, std::string("bad ") + what);
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFUL) fail(ErrorCode::UnsupportedFormat, std::string(what) + " too large");
      ++pos_;
    }
    return value;
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }
  std::size_t size() const noexcept { return bytes_.size(); }
  std::uint8_t byte(std::size_t i) const { return bytes_[i]; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Decodes PGM (P2/P5) and PPM (P3/P6) with maxval <= 255. Sample values are
/// kept as stored; they are not rescaled to 255.
inline RasterImage decode_pnm(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') fail(ErrorCode::UnsupportedFormat, "missing P magic");
  const char kind = static_cast<char>(bytes[1]);
  bool ascii = false;
  std::size_t channels = 1;
  switch (kind) {
    case '2': ascii = true; channels = 1; break;
    case '3': ascii = true; channels = 3; break;
    case '5': ascii = false; channels = 1; break;
    case '6': ascii = false; channels = 3; break;
    default: fail(ErrorCode::UnsupportedFormat, std::string("unsupported magic P") + kind);
  }
  detail::PnmCursor cur(bytes);
  cur.advance(2);
  if (cur.pos() < cur.size() && !std::isspace(cur.byte(cur.pos())) && cur.byte(cur.pos()) != '#')
    fail(ErrorCode::UnsupportedFormat, "malformed magic");

  RasterImage img;
  img.width = cur.read_uint("width");
  img.height = cur.read_uint("height");
  const auto maxval = cur.read_uint("maxval");
  img.channels = channels;
  if (img.width == 0 || img.height == 0) fail(ErrorCode::UnsupportedFormat, "zero image dimension");
  if (maxval == 0) fail(ErrorCode::UnsupportedFormat, "maxval must be positive");
  if (maxval > 255) fail(ErrorCode::MaxvalTooLarge, "maxval " + std::to_string(maxval) + " exceeds 255");

  const std::size_t samples = img.width * img.height * channels;
  img.pixels.reserve(samples);
  if (ascii) {
    for (std::size_t i = 0; i < samples; ++i) {
      cur.skip_space_and_comments();
      if (cur.pos() >= cur.size()) fail(ErrorCode::TruncatedPayload, "ASCII payload ends early");
      const auto v = cur.read_uint("sample");
      if (v > maxval) fail(ErrorCode::UnsupportedFormat, "sample exceeds maxval");
      img.pixels.push_back(static_cast<std::uint8_t>(v));
    }
  } else {
    // exactly one whitespace byte separates maxval from the raster
    if (cur.pos() >= cur.size()) fail(ErrorCode::TruncatedPayload, "no raster after header");
    cur.advance(1);
    if (cur.size() - cur.pos() < samples) fail(ErrorCode::TruncatedPayload, "binary payload ends early");
    for (std::size_t i = 0; i < samples; ++i) {
      const auto v = cur.byte(cur.pos() + i);
      if (v > maxval) fail(ErrorCode::UnsupportedFormat, "sample exceeds maxval");
      img.pixels.push_back(v);
    }
  }
  return img;
}

inline RasterImage read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::MissingFile, path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pnm(bytes);
}

/// Binary (P5/P6) or ASCII (P2/P3) encoding with maxval 255.
inline std::vector<std::uint8_t> encode_pnm(const RasterImage& img, bool binary = true) {
  const char magic = img.channels == 1 ? (binary ? '5' : '2') : (binary ? '6' : '3');
  std::string header = std::string("P") + magic + "\n" + std::to_string(img.width) + " " +
                       std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  if (binary) {
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  } else {
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      const auto text = std::to_string(img.pixels[i]) + ((i + 1) % (img.width * img.channels) ? " " : "\n");
      out.insert(out.end(), text.begin(), text.end());
    }
  }
  return out;
}

inline void write_pnm(const RasterImage& img, const std::filesystem::path& path, bool binary = true) {
  const auto bytes = encode_pnm(img, binary);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace sel::cli
