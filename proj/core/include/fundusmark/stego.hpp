#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fundusmark/anatomy.hpp"
#include "fundusmark/raster.hpp"

namespace fundusmark {

class SessionKey {
 public:
  explicit SessionKey(std::vector<std::uint8_t> bytes);

  // UTF-8 text, or raw bytes when prefixed with "hex:".
  static SessionKey parse(std::string_view text);
  static SessionKey from_hex(std::string_view hex);

  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }
  std::string hex() const;

  friend bool operator==(const SessionKey&, const SessionKey&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
};

// Chips in {-1, +1}.
using PnSequence = std::vector<std::int8_t>;

// Seed: FNV-1a-64 over key bytes followed by the little-endian 64-bit bit
// index (a zero seed becomes the FNV offset basis). Stream: xorshift64*; a
// chip is +1 when bit 63 of the output is set.
PnSequence pn_generate(const SessionKey& key, std::uint64_t bit_index, std::size_t length);

struct WatermarkPayload {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> bits;  // row-major, 1 = bit one

  WatermarkPayload() = default;
  WatermarkPayload(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits);
  static WatermarkPayload from_mask(const BinaryMask& mask);

  std::size_t size() const noexcept { return bits.size(); }
  std::size_t zero_bits() const;
  BinaryMask to_mask() const;
};

struct EmbedParams {
  double gain = 2.0;                  // k
  double threshold_multiplier = 2.0;  // T

  void validate() const;
};

// Maximum payload bits for an image of the given size: |HH| / 64.
std::size_t embedding_capacity(std::size_t rows, std::size_t cols);

// HH += k * PN_i for every payload bit i equal to 0, then inverse DWT.
GrayImage embed(const GrayImage& gray, const WatermarkPayload& payload, const SessionKey& key,
                const EmbedParams& params = {});

struct ExtractionReport {
  std::vector<double> correlations;
  double mean_correlation = 0.0;
  double threshold = 0.0;  // T * mean_correlation
  std::vector<std::uint8_t> bits;
  BinaryMask recovered;
  BinaryMask filtered;
};

// Bit i is 0 when correlations[i] > multiplier * mean, else 1.
ExtractionReport decide_bits(std::vector<double> correlations, double threshold_multiplier);

ExtractionReport extract(const GrayImage& watermarked, const SessionKey& key,
                         std::size_t payload_width, std::size_t payload_height,
                         const EmbedParams& params = {});

struct FundusEmbedding {
  ColorImage image;
  NroiRegion nroi;
  GrayImage nroi_gray;         // cover green plane of the NROI
  GrayImage nroi_watermarked;  // its clamped watermarked replacement
};

FundusEmbedding embed_fundus(const ColorImage& fundus, const WatermarkPayload& payload,
                             const SessionKey& key, const EmbedParams& params,
                             const Localization& located);

struct FundusExtraction {
  Localization located;
  ExtractionReport report;
};

FundusExtraction extract_fundus(const ColorImage& watermarked, const SessionKey& key,
                                std::size_t payload_width, std::size_t payload_height,
                                const EmbedParams& params = {},
                                const LocalizationParams& localization = {});

}  // namespace fundusmark
