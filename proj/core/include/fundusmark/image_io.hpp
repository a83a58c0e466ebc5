#pragma once

#include <cstdint>
#include <filesystem>

#include "fundusmark/raster.hpp"

namespace fundusmark {

// PNG (any bit depth/colour type), binary PGM (P5) or PPM (P6). Gray inputs
// are replicated into all three planes. Throws ReadError.
ColorImage read_image(const std::filesystem::path& path);

// 8-bit PNG output; samples are rounded half up and clamped. Throws WriteError.
void write_png(const std::filesystem::path& path, const ColorImage& img);
void write_png(const std::filesystem::path& path, const GrayImage& img);
void write_png(const std::filesystem::path& path, const BinaryMask& mask);

std::uint8_t quantize_sample(double v);
GrayImage quantize(const GrayImage& img);
ColorImage quantize(const ColorImage& img);

}  // namespace fundusmark
