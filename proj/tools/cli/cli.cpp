#include "cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <fundusmark/fundusmark.hpp>

#include "cli/draw.hpp"

namespace fundusmark::cli {

namespace fs = std::filesystem;

namespace {

std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

class Emitter {
 public:
  explicit Emitter(std::ostream& out) : out_(out) {}

  void operator()(std::string_view key, double v) { out_ << key << '=' << number(v) << '\n'; }
  void operator()(std::string_view key, int v) { out_ << key << '=' << v << '\n'; }
  void operator()(std::string_view key, std::size_t v) { out_ << key << '=' << v << '\n'; }
  void operator()(std::string_view key, std::string_view v) { out_ << key << '=' << v << '\n'; }

  void rect(std::string_view prefix, const Rect& r) {
    (*this)(std::string(prefix) + "_x", r.left());
    (*this)(std::string(prefix) + "_y", r.top());
    (*this)(std::string(prefix) + "_w", r.width);
    (*this)(std::string(prefix) + "_h", r.height);
  }

 private:
  std::ostream& out_;
};

struct LocalizationFlags {
  double search_length_factor = 1.0;
  int wiener_window = 7;
  int median_window = 22;
  int area_open_min = 100;
  bool otsu = false;
  std::optional<double> threshold;

  LocalizationParams params() const {
    LocalizationParams p;
    p.search_length_factor = search_length_factor;
    p.filter.wiener_window = wiener_window;
    p.filter.median_window = median_window;
    p.filter.area_open_min = area_open_min;
    p.filter.binarize_threshold = threshold;
    return p;
  }
};

void add_localization_flags(CLI::App& app, LocalizationFlags& f) {
  app.add_option("--search-length-factor", f.search_length_factor, "Search space length in disc diameters")
      ->capture_default_str();
  app.add_option("--wiener-window", f.wiener_window, "Wiener filter window")->capture_default_str();
  app.add_option("--median-window", f.median_window, "Background median window")->capture_default_str();
  app.add_option("--area-open-min", f.area_open_min, "Smallest vessel component kept")->capture_default_str();
  auto* otsu = app.add_flag("--otsu", f.otsu, "Binarize with Otsu's threshold (default)");
  auto* fixed = app.add_option("--threshold", f.threshold, "Fixed binarization threshold");
  otsu->excludes(fixed);
}

struct EmbedFlags {
  std::string key;
  double gain = 2.0;
  double threshold_mult = 2.0;
};

void add_embed_flags(CLI::App& app, EmbedFlags& f, bool key_required) {
  auto* key = app.add_option("--key", f.key, "Session key: UTF-8 text or hex:<bytes>");
  if (key_required) key->required();
  app.add_option("--gain", f.gain, "Embedding gain k")->capture_default_str();
  app.add_option("--threshold-mult", f.threshold_mult, "Extraction threshold multiplier T")->capture_default_str();
}

EmbedParams embed_params(const EmbedFlags& f) {
  EmbedParams p;
  p.gain = f.gain;
  p.threshold_multiplier = f.threshold_mult;
  p.validate();
  return p;
}

// Payload image: a pixel is a one bit when its channel mean is at least 128.
WatermarkPayload read_payload(const fs::path& path) {
  const ColorImage img = read_image(path);
  BinaryMask mask(img.rows(), img.cols());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double mean = (img.red()[i] + img.green()[i] + img.blue()[i]) / 3.0;
    mask[i] = mean >= 128.0 ? 1 : 0;
  }
  return WatermarkPayload::from_mask(mask);
}

void warn_on_degenerate_payload(const WatermarkPayload& payload, std::ostream& err) {
  const double zero_fraction = static_cast<double>(payload.zero_bits()) / static_cast<double>(payload.size());
  if (zero_fraction < 0.1 || zero_fraction > 0.9) {
    err << "warning: " << number(100.0 * zero_fraction)
        << "% of payload bits are zero; extraction is unreliable below 10% or above 90%\n";
  }
}

void emit_localization(Emitter& emit, const Localization& loc) {
  emit("od_center_x", loc.disc.center.x);
  emit("od_center_y", loc.disc.center.y);
  emit("od_diameter", loc.disc.diameter);
  emit("od_radius", loc.disc.radius);
  emit("ellipse_center_x", loc.ellipse.center.x);
  emit("ellipse_center_y", loc.ellipse.center.y);
  emit("direction", loc.direction);
  emit.rect("search", loc.search.rect);
  emit("search_clipped", loc.search.clipped ? 1 : 0);
  emit("macula_x", loc.macula.selected.point.x);
  emit("macula_y", loc.macula.selected.point.y);
  emit("macula_distance", loc.macula.selected.distance);
  emit("macula_candidates", loc.macula.candidates.size());
  emit("macula_in_space", loc.macula.in_space);
  emit("macula_min_distance", loc.macula.min_distance);
  emit("macula_mean_distance", loc.macula.mean_distance);
  emit("macula_max_distance", loc.macula.max_distance);
  emit.rect("nroi", loc.nroi.rect);
  emit("capacity_bits", embedding_capacity(static_cast<std::size_t>(loc.nroi.rect.height),
                                           static_cast<std::size_t>(loc.nroi.rect.width)));
}

// ---------------------------------------------------------------- locate

struct LocateCommand {
  std::string input;
  std::string overlay;
  LocalizationFlags loc;

  int run(std::ostream& out, std::ostream&) const {
    const ColorImage fundus = read_image(input);
    const Localization located = localize(fundus, loc.params());
    Emitter emit(out);
    emit_localization(emit, located);
    if (!overlay.empty()) write_png(overlay, annotate(fundus, located));
    return kOk;
  }
};

// ---------------------------------------------------------------- embed

struct EmbedCommand {
  std::string fundus_path;
  std::string watermark_path;
  std::string output;
  EmbedFlags embed;
  LocalizationFlags loc;

  int run(std::ostream& out, std::ostream& err) const {
    const SessionKey key = SessionKey::parse(embed.key);
    const EmbedParams params = embed_params(embed);
    const ColorImage fundus = read_image(fundus_path);
    const WatermarkPayload payload = read_payload(watermark_path);
    warn_on_degenerate_payload(payload, err);

    const Localization located = localize(fundus, loc.params());
    const FundusEmbedding result = embed_fundus(fundus, payload, key, params, located);
    const ColorImage written = quantize(result.image);

    SidecarMeta meta;
    meta.key.assign(key.bytes().begin(), key.bytes().end());
    meta.payload_width = payload.width;
    meta.payload_height = payload.height;
    meta.gain_k = params.gain;
    meta.threshold_multiplier = params.threshold_multiplier;
    meta.nroi = result.nroi.rect;

    const fs::path sidecar = output + ".meta";
    write_png(output, written);
    write_sidecar(sidecar, meta);

    Emitter emit(out);
    emit("output", output);
    emit("sidecar", sidecar.string());
    emit.rect("nroi", result.nroi.rect);
    emit("payload_width", payload.width);
    emit("payload_height", payload.height);
    emit("zero_bits", payload.zero_bits());
    emit("capacity_bits", embedding_capacity(result.nroi_gray.rows(), result.nroi_gray.cols()));
    const PsnrResult quality = psnr(result.nroi_gray, crop(written.green(), result.nroi.rect));
    if (quality.identical) {
      emit("psnr_db", "identical");
    } else {
      emit("psnr_db", quality.value_db);
    }
    return kOk;
  }
};

// ---------------------------------------------------------------- extract

struct ExtractCommand {
  std::string input;
  std::string output;
  std::string sidecar;
  std::string truth;
  std::size_t width = 0;
  std::size_t height = 0;
  EmbedFlags embed;
  LocalizationFlags loc;

  int run(std::ostream& out, std::ostream& err) const {
    // Explicit flags win; otherwise the sidecar (named or next to the input)
    // supplies key and sizes.
    std::optional<SidecarMeta> meta;
    if (!sidecar.empty() || embed.key.empty()) {
      meta = read_sidecar(sidecar.empty() ? input + ".meta" : sidecar);
    }
    const SessionKey key = !embed.key.empty() ? SessionKey::parse(embed.key) : SessionKey(meta->key);
    const std::size_t w = width ? width : (meta ? meta->payload_width : 0);
    const std::size_t h = height ? height : (meta ? meta->payload_height : 0);
    if (w == 0 || h == 0) throw InvalidArgument("payload size unknown: pass --width and --height or a sidecar");
    EmbedParams params;
    params.threshold_multiplier = meta && embed.key.empty() ? meta->threshold_multiplier : embed.threshold_mult;
    params.validate();

    const ColorImage watermarked = read_image(input);
    std::optional<BinaryMask> expected;
    if (!truth.empty()) {
      expected = read_payload(truth).to_mask();
      if (expected->cols() != w || expected->rows() != h) {
        throw DimensionError("truth image does not match the payload size");
      }
    }

    const FundusExtraction result = extract_fundus(watermarked, key, w, h, params, loc.params());
    if (meta && !(meta->nroi == result.located.nroi.rect)) {
      err << "warning: relocated NROI differs from the one recorded in the sidecar\n";
    }
    write_png(output, result.report.filtered);

    const ExtractionReport& report = result.report;
    Emitter emit(out);
    emit("output", output);
    emit.rect("nroi", result.located.nroi.rect);
    emit("payload_width", w);
    emit("payload_height", h);
    emit("mean_correlation", report.mean_correlation);
    emit("threshold", report.threshold);
    double lo = report.correlations.front(), hi = lo;
    for (double c : report.correlations) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    emit("min_correlation", lo);
    emit("max_correlation", hi);
    const auto zeros = static_cast<std::size_t>(std::count(report.bits.begin(), report.bits.end(), 0));
    emit("zero_bits", zeros);
    if (expected) {
      emit("ber", bit_error_rate(report.filtered, *expected));
      emit("ber_unfiltered", bit_error_rate(report.recovered, *expected));
      std::vector<double> a(expected->values().begin(), expected->values().end());
      std::vector<double> b(report.filtered.values().begin(), report.filtered.values().end());
      try {
        emit("pearson", pearson(a, b));
      } catch (const DegenerateInput&) {
        err << "warning: correlation undefined for a constant image\n";
        emit("pearson", "undefined");
      }
    }
    return kOk;
  }
};

// ---------------------------------------------------------------- stages

// Default payload for the stage dump: horizontal stripes scaled to the
// largest square not exceeding 16x16 that fits the NROI.
WatermarkPayload stage_payload(std::size_t capacity) {
  std::size_t side = 16;
  while (side > 1 && side * side > capacity) --side;
  if (side < 2) throw CapacityError("NROI is too small for any payload");
  std::vector<std::uint8_t> bits(side * side, 1);
  // Zero rows span [6/16, 9/16) of the height, at least two rows when side >= 4.
  const std::size_t first = 6 * side / 16, last = (9 * side + 15) / 16;
  for (std::size_t y = first; y < last; ++y) std::fill_n(bits.begin() + static_cast<long>(y * side), side, 0);
  return {side, side, std::move(bits)};
}

ColorImage mark_points(const GrayImage& base, std::span<const Point2> points, const Rgb& c) {
  ColorImage img = to_color(base);
  for (const auto& p : points) draw_cross(img, p, 4, c);
  return img;
}

struct StagesCommand {
  std::string input;
  std::string directory;
  std::string watermark;
  EmbedFlags embed;
  LocalizationFlags loc;

  int run(std::ostream& out, std::ostream& err) const {
    const ColorImage fundus = read_image(input);
    const fs::path dir(directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw WriteError(directory + ": cannot create directory");

    LocalizationTrace trace;
    const Localization located = localize(fundus, loc.params(), &trace);
    const SessionKey key = SessionKey::parse(embed.key.empty() ? "fundusmark-stages" : embed.key);
    const std::size_t capacity = embedding_capacity(static_cast<std::size_t>(located.nroi.rect.height),
                                                    static_cast<std::size_t>(located.nroi.rect.width));
    const WatermarkPayload payload = watermark.empty() ? stage_payload(capacity) : read_payload(watermark);
    if (!watermark.empty()) warn_on_degenerate_payload(payload, err);
    const FundusEmbedding embedded = embed_fundus(fundus, payload, key, embed_params(embed), located);

    // Region around the anatomy: the disc together with the search space.
    const int r = static_cast<int>(std::ceil(located.disc.radius));
    const Rect disc_box{{static_cast<int>(std::floor(located.disc.center.x)) - r,
                         static_cast<int>(std::floor(located.disc.center.y)) - r},
                        2 * r + 2, 2 * r + 2};
    const int left = std::min(disc_box.left(), located.search.rect.left());
    const int top = std::min(disc_box.top(), located.search.rect.top());
    const Rect roi = intersect({{left, top},
                                std::max(disc_box.right(), located.search.rect.right()) - left,
                                std::max(disc_box.bottom(), located.search.rect.bottom()) - top},
                               fundus.bounds());

    std::vector<std::string> written;
    auto save = [&](const std::string& name, const auto& img) {
      const fs::path path = dir / name;
      write_png(path, img);
      written.push_back(path.string());
    };

    save("01_gray.png", trace.gray);
    save("02_filtered.png", trace.background);
    save("03_vessel_tree.png", trace.vessels);
    save("04_thinned.png", trace.skeleton);
    {
      ColorImage img = to_color(mask_to_gray(trace.skeleton));
      draw_corners(img, trace.vessel_corners, kRed);
      draw_cross(img, located.ellipse.center, 8, kYellow);
      save("05_corners_overlay.png", img);
    }
    save("06_roi.png", crop(fundus, roi));
    save("07_binarized.png", trace.disc_mask);
    {
      ColorImage img = to_color(mask_to_gray(trace.disc_edges));
      draw_corners(img, trace.disc_corners, kRed);
      draw_line(img, to_point(located.disc.rim_first), to_point(located.disc.rim_second), kCyan);
      draw_cross(img, located.disc.center, 8, kCyan);
      save("08_diameter_overlay.png", img);
    }
    save("09_intensity_points.png", mark_points(trace.gray, trace.intensity_points, kRed));
    save("10_search_space.png", annotate(fundus, located));
    save("11_nroi.png", crop(fundus, located.nroi.rect));
    save("12_green_nroi.png", embedded.nroi_gray);
    save("13_watermarked_nroi.png", embedded.nroi_watermarked);
    save("14_final_overlay.png", embedded.image);

    Emitter emit(out);
    for (std::size_t i = 0; i < written.size(); ++i) emit("stage_" + std::to_string(i + 1), written[i]);
    emit.rect("nroi", located.nroi.rect);
    emit("payload_width", payload.width);
    emit("payload_height", payload.height);
    return kOk;
  }
};

int report(std::ostream& err, int code, std::string_view what) {
  err << "fundusmark: " << what << '\n';
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Blind watermarking of retinal fundus images outside the diagnostic region",
               "fundusmark"};
  app.require_subcommand(1);

  LocateCommand locate;
  auto* locate_cmd = app.add_subcommand("locate", "Locate optic disc, macula and the embedding region");
  locate_cmd->add_option("input", locate.input, "Fundus image (PNG, PGM or PPM)")->required();
  locate_cmd->add_option("--overlay", locate.overlay, "Write an annotated PNG");
  add_localization_flags(*locate_cmd, locate.loc);

  EmbedCommand embed;
  auto* embed_cmd = app.add_subcommand("embed", "Embed a binary watermark into the NROI");
  embed_cmd->add_option("fundus", embed.fundus_path, "Cover fundus image")->required();
  embed_cmd->add_option("watermark", embed.watermark_path, "Binary watermark image")->required();
  embed_cmd->add_option("output", embed.output, "Output PNG; the sidecar goes to <output>.meta")->required();
  add_embed_flags(*embed_cmd, embed.embed, true);
  add_localization_flags(*embed_cmd, embed.loc);

  ExtractCommand extract;
  auto* extract_cmd = app.add_subcommand("extract", "Recover the watermark from a watermarked image");
  extract_cmd->add_option("input", extract.input, "Watermarked fundus image")->required();
  extract_cmd->add_option("output", extract.output, "Recovered watermark PNG")->required();
  extract_cmd->add_option("--sidecar", extract.sidecar, "Sidecar file (default <input>.meta)");
  extract_cmd->add_option("--truth", extract.truth, "Original watermark, for BER and correlation");
  extract_cmd->add_option("--width", extract.width, "Payload width when no sidecar is used");
  extract_cmd->add_option("--height", extract.height, "Payload height when no sidecar is used");
  add_embed_flags(*extract_cmd, extract.embed, false);
  add_localization_flags(*extract_cmd, extract.loc);

  StagesCommand stages;
  auto* stages_cmd = app.add_subcommand("stages", "Write every intermediate pipeline image");
  stages_cmd->add_option("input", stages.input, "Fundus image")->required();
  stages_cmd->add_option("directory", stages.directory, "Output directory")->required();
  stages_cmd->add_option("--watermark", stages.watermark, "Binary watermark image (default: built-in stripes)");
  add_embed_flags(*stages_cmd, stages.embed, false);
  add_localization_flags(*stages_cmd, stages.loc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*locate_cmd) return locate.run(out, err);
    if (*embed_cmd) return embed.run(out, err);
    if (*extract_cmd) return extract.run(out, err);
    return stages.run(out, err);
  } catch (const ReadError& e) {
    return report(err, kUnreadable, e.what());
  } catch (const LocalizationError& e) {
    return report(err, kLocalizationFailed, std::string("localization failed at ") + e.what());
  } catch (const CapacityError& e) {
    return report(err, kCapacityExceeded, e.what());
  } catch (const SidecarError& e) {
    return report(err, kMalformedSidecar, e.what());
  } catch (const WriteError& e) {
    return report(err, kUnwritable, e.what());
  } catch (const Error& e) {
    return report(err, kUsage, e.what());
  }
}

}  // namespace fundusmark::cli
