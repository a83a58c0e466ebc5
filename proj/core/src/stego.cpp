#include "fundusmark/stego.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "fundusmark/metrics.hpp"
#include "fundusmark/preprocess.hpp"
#include "fundusmark/wavelet.hpp"

namespace fundusmark {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
constexpr std::uint64_t kXorshiftMultiplier = 2685821657736338717ULL;
constexpr std::size_t kChipsPerBit = 64;

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

SessionKey::SessionKey(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {
  if (bytes_.empty()) throw InvalidArgument("session key is empty");
}

SessionKey SessionKey::parse(std::string_view text) {
  constexpr std::string_view kHexPrefix = "hex:";
  if (text.substr(0, kHexPrefix.size()) == kHexPrefix) return from_hex(text.substr(kHexPrefix.size()));
  return SessionKey(std::vector<std::uint8_t>(text.begin(), text.end()));
}

SessionKey SessionKey::from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw InvalidArgument("hex key has an odd number of digits");
  std::vector<std::uint8_t> bytes;
  bytes.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = hex_digit(hex[i]);
    const int lo = hex_digit(hex[i + 1]);
    if (hi < 0 || lo < 0) throw InvalidArgument("hex key contains a non-hex digit");
    bytes.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
  }
  return SessionKey(std::move(bytes));
}

std::string SessionKey::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (std::uint8_t b : bytes_) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

PnSequence pn_generate(const SessionKey& key, std::uint64_t bit_index, std::size_t length) {
  if (length < 1) throw InvalidArgument("pn sequence length must be positive");
  std::uint64_t state = kFnvOffset;
  auto absorb = [&state](std::uint8_t byte) {
    state ^= byte;
    state *= kFnvPrime;
  };
  for (std::uint8_t b : key.bytes()) absorb(b);
  for (int i = 0; i < 8; ++i) absorb(static_cast<std::uint8_t>(bit_index >> (8 * i)));
  if (state == 0) state = kFnvOffset;

  PnSequence chips(length);
  for (auto& chip : chips) {
    state ^= state >> 12;
    state ^= state << 25;
    state ^= state >> 27;
    const std::uint64_t out = state * kXorshiftMultiplier;
    chip = (out >> 63) ? 1 : -1;
  }
  return chips;
}

WatermarkPayload::WatermarkPayload(std::size_t w, std::size_t h, std::vector<std::uint8_t> b)
    : width(w), height(h), bits(std::move(b)) {
  if (width == 0 || height == 0) throw InvalidArgument("watermark payload is empty");
  if (bits.size() != width * height) throw DimensionError("payload bits do not match width x height");
  for (auto& bit : bits) bit = bit ? 1 : 0;
}

WatermarkPayload WatermarkPayload::from_mask(const BinaryMask& mask) {
  return {mask.cols(), mask.rows(), std::vector<std::uint8_t>(mask.values().begin(), mask.values().end())};
}

std::size_t WatermarkPayload::zero_bits() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{0}));
}

BinaryMask WatermarkPayload::to_mask() const { return {height, width, bits}; }

void EmbedParams::validate() const {
  if (!(gain >= 0.0) || !std::isfinite(gain)) throw InvalidArgument("gain must be finite and non-negative");
  if (!(threshold_multiplier > 0.0) || !std::isfinite(threshold_multiplier)) {
    throw InvalidArgument("threshold multiplier must be finite and positive");
  }
}

std::size_t embedding_capacity(std::size_t rows, std::size_t cols) {
  return ((rows + 1) / 2) * ((cols + 1) / 2) / kChipsPerBit;
}

namespace {

void check_capacity(std::size_t bits, std::size_t rows, std::size_t cols) {
  const std::size_t capacity = embedding_capacity(rows, cols);
  if (bits > capacity) {
    throw CapacityError("payload of " + std::to_string(bits) + " bits exceeds the capacity of " +
                        std::to_string(capacity) + " bits for a " + std::to_string(cols) + "x" +
                        std::to_string(rows) + " region");
  }
}

}  // namespace

GrayImage embed(const GrayImage& gray, const WatermarkPayload& payload, const SessionKey& key,
                const EmbedParams& params) {
  params.validate();
  check_capacity(payload.size(), gray.rows(), gray.cols());
  SubbandSet bands = dwt2_haar(gray);
  const std::size_t chips = bands.hh.size();
  for (std::size_t i = 0; i < payload.size(); ++i) {
    if (payload.bits[i] != 0) continue;
    const PnSequence pn = pn_generate(key, i, chips);
    for (std::size_t j = 0; j < chips; ++j) bands.hh[j] += params.gain * pn[j];
  }
  return idwt2_haar(bands);
}

ExtractionReport decide_bits(std::vector<double> correlations, double threshold_multiplier) {
  if (correlations.empty()) throw InvalidArgument("no correlations to decide");
  ExtractionReport report;
  report.correlations = std::move(correlations);
  const double sum = std::accumulate(report.correlations.begin(), report.correlations.end(), 0.0);
  report.mean_correlation = sum / static_cast<double>(report.correlations.size());
  report.threshold = threshold_multiplier * report.mean_correlation;
  report.bits.reserve(report.correlations.size());
  for (double c : report.correlations) report.bits.push_back(c > report.threshold ? 0 : 1);
  return report;
}

ExtractionReport extract(const GrayImage& watermarked, const SessionKey& key,
                         std::size_t payload_width, std::size_t payload_height,
                         const EmbedParams& params) {
  params.validate();
  if (payload_width == 0 || payload_height == 0) throw InvalidArgument("payload dimensions must be positive");
  const std::size_t n = payload_width * payload_height;
  check_capacity(n, watermarked.rows(), watermarked.cols());

  const SubbandSet bands = dwt2_haar(watermarked);
  const std::span<const double> hh = bands.hh.values();
  std::vector<double> chips(hh.size());
  std::vector<double> correlations(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PnSequence pn = pn_generate(key, i, hh.size());
    for (std::size_t j = 0; j < pn.size(); ++j) chips[j] = pn[j];
    correlations[i] = pearson(hh, chips);
  }

  ExtractionReport report = decide_bits(std::move(correlations), params.threshold_multiplier);
  report.recovered = BinaryMask(payload_height, payload_width, report.bits);
  report.filtered = majority_filter3(report.recovered);
  return report;
}

FundusEmbedding embed_fundus(const ColorImage& fundus, const WatermarkPayload& payload,
                             const SessionKey& key, const EmbedParams& params,
                             const Localization& located) {
  const Rect& rect = located.nroi.rect;
  const ColorImage patch = crop(fundus, rect);
  FundusEmbedding result;
  result.nroi = located.nroi;
  result.nroi_gray = green_channel(patch);
  const ColorImage marked_patch = recombine_color(patch, embed(result.nroi_gray, payload, key, params));
  result.nroi_watermarked = marked_patch.green();
  result.image = overlay(fundus, marked_patch, rect);
  return result;
}

FundusExtraction extract_fundus(const ColorImage& watermarked, const SessionKey& key,
                                std::size_t payload_width, std::size_t payload_height,
                                const EmbedParams& params, const LocalizationParams& localization) {
  params.validate();
  if (payload_width == 0 || payload_height == 0) throw InvalidArgument("payload dimensions must be positive");
  FundusExtraction result;
  result.located = localize(watermarked, localization);
  const GrayImage gray = green_channel(crop(watermarked, result.located.nroi.rect));
  result.report = extract(gray, key, payload_width, payload_height, params);
  return result;
}

}  // namespace fundusmark
