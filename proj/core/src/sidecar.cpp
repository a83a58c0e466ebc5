#include "fundusmark/sidecar.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace fundusmark {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

template <typename T>
T parse_number(const std::map<std::string, std::string, std::less<>>& fields, std::string_view key) {
  const auto it = fields.find(key);
  if (it == fields.end()) throw SidecarError("sidecar is missing '" + std::string(key) + "'");
  T value{};
  const std::string& text = it->second;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw SidecarError("sidecar field '" + std::string(key) + "' is not a number: " + text);
  }
  return value;
}

std::vector<std::uint8_t> parse_hex(std::string_view hex) {
  if (hex.empty() || hex.size() % 2 != 0) throw SidecarError("sidecar key is not a hex byte string");
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    unsigned v = 0;
    const auto res = std::from_chars(hex.data() + i, hex.data() + i + 2, v, 16);
    if (res.ec != std::errc() || res.ptr != hex.data() + i + 2) {
      throw SidecarError("sidecar key is not a hex byte string");
    }
    out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

}  // namespace

std::string format_sidecar(const SidecarMeta& meta) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string key;
  for (std::uint8_t b : meta.key) {
    key.push_back(kDigits[b >> 4]);
    key.push_back(kDigits[b & 0x0f]);
  }
  std::ostringstream out;
  out << "format_version=" << meta.format_version << '\n'
      << "key=" << key << '\n'
      << "payload_width=" << meta.payload_width << '\n'
      << "payload_height=" << meta.payload_height << '\n'
      << "gain_k=" << format_double(meta.gain_k) << '\n'
      << "threshold_multiplier=" << format_double(meta.threshold_multiplier) << '\n'
      << "nroi_x=" << meta.nroi.left() << '\n'
      << "nroi_y=" << meta.nroi.top() << '\n'
      << "nroi_w=" << meta.nroi.width << '\n'
      << "nroi_h=" << meta.nroi.height << '\n';
  return out.str();
}

SidecarMeta parse_sidecar(std::string_view text) {
  std::map<std::string, std::string, std::less<>> fields;
  bool first = true;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    const std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw SidecarError("sidecar line without '=': " + std::string(line));
    const std::string name(trim(line.substr(0, eq)));
    if (first && name != "format_version") throw SidecarError("sidecar must start with format_version");
    first = false;
    fields[name] = std::string(trim(line.substr(eq + 1)));
  }
  if (first) throw SidecarError("sidecar is empty");

  SidecarMeta meta;
  meta.format_version = parse_number<int>(fields, "format_version");
  if (meta.format_version != 1) {
    throw SidecarError("unsupported sidecar version " + std::to_string(meta.format_version));
  }
  const auto key = fields.find("key");
  if (key == fields.end()) throw SidecarError("sidecar is missing 'key'");
  meta.key = parse_hex(key->second);
  meta.payload_width = parse_number<std::size_t>(fields, "payload_width");
  meta.payload_height = parse_number<std::size_t>(fields, "payload_height");
  meta.gain_k = parse_number<double>(fields, "gain_k");
  meta.threshold_multiplier = parse_number<double>(fields, "threshold_multiplier");
  meta.nroi = {{parse_number<int>(fields, "nroi_x"), parse_number<int>(fields, "nroi_y")},
               parse_number<int>(fields, "nroi_w"),
               parse_number<int>(fields, "nroi_h")};
  if (meta.payload_width == 0 || meta.payload_height == 0 || meta.nroi.width <= 0 || meta.nroi.height <= 0 ||
      meta.nroi.left() < 0 || meta.nroi.top() < 0) {
    throw SidecarError("sidecar counts must be positive");
  }
  if (!(meta.gain_k >= 0.0) || !(meta.threshold_multiplier > 0.0)) {
    throw SidecarError("sidecar gain or threshold multiplier out of range");
  }
  return meta;
}

void write_sidecar(const std::filesystem::path& path, const SidecarMeta& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw WriteError(path.string() + ": cannot open for writing");
  out << format_sidecar(meta);
  if (!out) throw WriteError(path.string() + ": write failed");
}

SidecarMeta read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReadError(path.string() + ": cannot open sidecar");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sidecar(buf.str());
}

}  // namespace fundusmark
