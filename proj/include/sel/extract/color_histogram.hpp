#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "sel/cli/pnm.hpp"
#include "sel/extract/moments.hpp"

namespace sel::extract {

enum class Channel { Gray, Red, Green, Blue };

constexpr std::string_view to_string(Channel c) noexcept {
  switch (c) {
    case Channel::Gray: return "gray";
    case Channel::Red: return "red";
    case Channel::Green: return "green";
    case Channel::Blue: return "blue";
  }
  return "gray";
}

struct ColorHistogram {
  Channel channel = Channel::Gray;
  std::array<std::uint64_t, 256> bins{};

  std::uint64_t total() const noexcept {
    std::uint64_t t = 0;
    for (auto b : bins) t += b;
    return t;
  }
};

/// One histogram for a gray image, three (R, G, B) for a color image.
inline std::vector<ColorHistogram> color_histogram(const cli::RasterImage& img) {
  if (img.channels != 1 && img.channels != 3)
    fail(ErrorCode::UnsupportedDepth, "expected 1 or 3 channels, got " + std::to_string(img.channels));
  if (img.pixels.size() != img.pixel_count() * img.channels)
    fail(ErrorCode::UnsupportedDepth, "pixel buffer does not match dimensions");

  std::vector<ColorHistogram> out;
  if (img.channels == 1) {
    out.push_back({Channel::Gray, {}});
  } else {
    out.push_back({Channel::Red, {}});
    out.push_back({Channel::Green, {}});
    out.push_back({Channel::Blue, {}});
  }
  for (std::size_t i = 0; i < img.pixels.size(); ++i) ++out[i % img.channels].bins[img.pixels[i]];
  return out;
}

/// Moments of the intensity distribution, each bin weighted by its count.
/// Matches moments() on the expanded pixel vector.
inline MomentSummary histogram_moments(const ColorHistogram& h) {
  const auto total = h.total();
  if (total < 2) fail(ErrorCode::TooShort, "histogram needs at least 2 pixels");
  return detail::weighted_moments(static_cast<double>(total), [&](auto&& f) {
    for (std::size_t v = 0; v < h.bins.size(); ++v)
      if (h.bins[v]) f(static_cast<double>(v), static_cast<double>(h.bins[v]));
  });
}

}  // namespace sel::extract
