#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fundusmark/raster.hpp"

namespace fundusmark {

// Key material and payload geometry handed to the receiver. Serialized as
// UTF-8 key=value lines; format_version must come first, unknown keys are
// ignored.
struct SidecarMeta {
  int format_version = 1;
  std::vector<std::uint8_t> key;
  std::size_t payload_width = 0;
  std::size_t payload_height = 0;
  double gain_k = 2.0;
  double threshold_multiplier = 2.0;
  Rect nroi;

  friend bool operator==(const SidecarMeta&, const SidecarMeta&) = default;
};

std::string format_sidecar(const SidecarMeta& meta);
SidecarMeta parse_sidecar(std::string_view text);

void write_sidecar(const std::filesystem::path& path, const SidecarMeta& meta);
SidecarMeta read_sidecar(const std::filesystem::path& path);

}  // namespace fundusmark
