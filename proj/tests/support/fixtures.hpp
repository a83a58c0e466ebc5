#pragma once

#include <filesystem>
#include <string>

#include <fundusmark/fundusmark.hpp>

namespace fundusmark::testing {

// Square payload of ones with a full-width stripe of zero rows (three rows
// at side 16).
// Full-width stripes survive the 3x3 majority filter unchanged.
WatermarkPayload stripe_payload(std::size_t side = 16);

// Rendered phantom, cached per variant for the life of the process.
const ColorImage& phantom(int variant);
const Localization& phantom_localization(int variant);

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace fundusmark::testing
