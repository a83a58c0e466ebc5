#include "fundusmark/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace fundusmark {

namespace {

bool has_png_signature(const std::vector<unsigned char>& bytes) {
  static constexpr unsigned char kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kSig, 8) == 0;
}

ColorImage decode_png(const std::vector<unsigned char>& bytes, const std::string& name) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw ReadError(name + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw ReadError(name + ": " + msg);
  }
  ColorImage out(image.height, image.width);
  for (std::size_t i = 0; i < static_cast<std::size_t>(image.width) * image.height; ++i) {
    out.red()[i] = pixels[3 * i];
    out.green()[i] = pixels[3 * i + 1];
    out.blue()[i] = pixels[3 * i + 2];
  }
  return out;
}

// Netpbm header token, skipping whitespace and '#' comments.
std::string next_token(const std::vector<unsigned char>& bytes, std::size_t& pos) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  std::string tok;
  while (pos < bytes.size() && !std::isspace(bytes[pos])) tok.push_back(static_cast<char>(bytes[pos++]));
  return tok;
}

ColorImage decode_netpbm(const std::vector<unsigned char>& bytes, const std::string& name) {
  std::size_t pos = 0;
  const std::string magic = next_token(bytes, pos);
  if (magic != "P5" && magic != "P6") throw ReadError(name + ": unsupported image format");
  const int channels = magic == "P6" ? 3 : 1;
  long width = 0, height = 0, maxval = 0;
  try {
    width = std::stol(next_token(bytes, pos));
    height = std::stol(next_token(bytes, pos));
    maxval = std::stol(next_token(bytes, pos));
  } catch (const std::exception&) {
    throw ReadError(name + ": malformed netpbm header");
  }
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
    throw ReadError(name + ": malformed netpbm header");
  }
  ++pos;  // single whitespace before the raster
  const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
  const std::size_t count = static_cast<std::size_t>(width * height) * channels;
  if (bytes.size() < pos + count * sample_bytes) throw ReadError(name + ": truncated raster");

  ColorImage out(static_cast<std::size_t>(height), static_cast<std::size_t>(width));
  auto sample = [&](std::size_t i) {
    const std::size_t at = pos + i * sample_bytes;
    const unsigned v = sample_bytes == 2 ? (bytes[at] << 8u) | bytes[at + 1] : bytes[at];
    return static_cast<double>(quantize_sample(v * 255.0 / static_cast<double>(maxval)));
  };
  for (std::size_t i = 0; i < static_cast<std::size_t>(width * height); ++i) {
    if (channels == 3) {
      out.red()[i] = sample(3 * i);
      out.green()[i] = sample(3 * i + 1);
      out.blue()[i] = sample(3 * i + 2);
    } else {
      out.red()[i] = out.green()[i] = out.blue()[i] = sample(i);
    }
  }
  return out;
}

void encode_png(const std::filesystem::path& path, std::vector<unsigned char> pixels,
                std::size_t rows, std::size_t cols, bool color) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(cols);
  image.height = static_cast<png_uint_32>(rows);
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels.data(), 0, nullptr)) {
    throw WriteError(path.string() + ": " + image.message);
  }
}

}  // namespace

std::uint8_t quantize_sample(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::floor(v + 0.5));
}

GrayImage quantize(const GrayImage& img) {
  GrayImage out(img.rows(), img.cols());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = quantize_sample(img[i]);
  return out;
}

ColorImage quantize(const ColorImage& img) {
  return {quantize(img.red()), quantize(img.green()), quantize(img.blue())};
}

ColorImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReadError(path.string() + ": cannot open file");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.empty()) throw ReadError(path.string() + ": empty file");
  if (has_png_signature(bytes)) return decode_png(bytes, path.string());
  return decode_netpbm(bytes, path.string());
}

void write_png(const std::filesystem::path& path, const ColorImage& img) {
  std::vector<unsigned char> pixels(img.rows() * img.cols() * 3);
  for (std::size_t i = 0; i < img.rows() * img.cols(); ++i) {
    pixels[3 * i] = quantize_sample(img.red()[i]);
    pixels[3 * i + 1] = quantize_sample(img.green()[i]);
    pixels[3 * i + 2] = quantize_sample(img.blue()[i]);
  }
  encode_png(path, std::move(pixels), img.rows(), img.cols(), true);
}

void write_png(const std::filesystem::path& path, const GrayImage& img) {
  std::vector<unsigned char> pixels(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) pixels[i] = quantize_sample(img[i]);
  encode_png(path, std::move(pixels), img.rows(), img.cols(), false);
}

void write_png(const std::filesystem::path& path, const BinaryMask& mask) {
  write_png(path, mask_to_gray(mask));
}

}  // namespace fundusmark
