#include "support/fixtures.hpp"

#include <map>

namespace fundusmark::testing {

WatermarkPayload stripe_payload(std::size_t side) {
  std::vector<std::uint8_t> bits(side * side, 1);
  // Zero rows span [6/16, 9/16) of the height, at least two rows when side >= 4.
  const std::size_t first = 6 * side / 16, last = (9 * side + 15) / 16;
  for (std::size_t y = first; y < last; ++y) std::fill_n(bits.begin() + static_cast<long>(y * side), side, 0);
  return {side, side, std::move(bits)};
}

const ColorImage& phantom(int variant) {
  static std::map<int, ColorImage> cache;
  auto it = cache.find(variant);
  if (it == cache.end()) it = cache.emplace(variant, render_phantom(standard_phantom(variant))).first;
  return it->second;
}

const Localization& phantom_localization(int variant) {
  static std::map<int, Localization> cache;
  auto it = cache.find(variant);
  if (it == cache.end()) it = cache.emplace(variant, localize(phantom(variant))).first;
  return it->second;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("fundusmark-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fundusmark::testing
