#pragma once

#include <span>
#include <vector>

#include "edgetext/decoder.hpp"
#include "edgetext/encoder.hpp"

namespace edgetext {

// Row-major H x W x C float raster. Pixel (row r, col c) sits at image
// coordinate (x = c, y = r).
class Raster {
 public:
  Raster() = default;
  Raster(int height, int width, int channels = 1, float fill = 0.0f);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  bool same_shape(const Raster& other) const {
    return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
  }

  float& at(int row, int col, int channel = 0) { return data_[index(row, col, channel)]; }
  float at(int row, int col, int channel = 0) const { return data_[index(row, col, channel)]; }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int row, int col, int channel) const {
    return (static_cast<std::size_t>(row) * width_ + col) * channels_ + channel;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

inline constexpr int kTruncationChannels = 8;
inline constexpr double kDefaultShrinkRatio = 0.7;
inline constexpr double kDefaultSigmaFrac = 0.05;
inline constexpr float kHeatBinarizeThreshold = 0.3f;
inline constexpr double kDefaultConfThreshold = 0.5;
inline constexpr int kDefaultMinArea = 16;

// Per-image supervision stack. edge_params holds 2P channels: the top edge's
// flattened parameters followed by the bottom edge's.
struct LabelMaps {
  Raster concentric;     // 1 channel, {0, 1}
  Raster edge_heat;      // 1 channel, (0, 1]
  Raster trunc_offsets;  // 8 channels
  Raster edge_params;    // 2 * mask.free_count() channels
};

struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(Pixel, Pixel) = default;
  Point2 point() const { return {static_cast<double>(x), static_cast<double>(y)}; }
};

struct CenterLine {
  std::vector<Pixel> path;  // 8-connected, start first
  std::size_t component_area = 0;

  Pixel start() const { return path.front(); }
  Pixel end() const { return path.back(); }
  Pixel midpoint() const { return path[path.size() / 2]; }
};

struct ConcentricMask {
  Raster mask;
  double offset = 0.0;      // inward offset distance in pixels
  bool collapsed = false;   // shrinking left no pixel set
};

// Pixels inside the polygon whose distance to its boundary is at least
// d = area * (1 - r^2) / perimeter.
ConcentricMask render_concentric_mask(const TextPolygon& poly, double shrink_ratio, int height,
                                      int width);

// exp(-dist^2 / (2 sigma^2)) to the nearest point of either edge polyline,
// sigma = sigma_frac * mean chord length of the two edges.
Raster render_edge_heatmap(const EdgePair& edges, double sigma_frac, int height, int width);

Raster binarize(const Raster& map, float threshold);

// Offsets to the four truncation points: channels 0-3 hold (tp_s_t - start,
// tp_s_b - start) at the start pixel, channels 4-7 hold (tp_e_t - end,
// tp_e_b - end) at the end pixel.
void write_truncation_offsets(const CurveBoxLabel& label, const CenterLine& centerline,
                              Raster& offsets);
Raster render_truncation_offsets(const CurveBoxLabel& label, const CenterLine& centerline,
                                 int height, int width);

// One centerline per 8-connected component of mask > 0.5: Zhang-Suen thinning,
// pruned to the longest skeleton path. Start is the leftmost end (ties: top).
std::vector<CenterLine> extract_centerline(const Raster& mask);

struct RenderConfig {
  ParamMask mask = ParamMask::default_mask();
  int points_per_edge = kDefaultPointsPerEdge;
  double shrink_ratio = kDefaultShrinkRatio;
  double sigma_frac = kDefaultSigmaFrac;
};

struct RenderedScene {
  LabelMaps maps;
  std::vector<CurveBoxLabel> labels;  // one per input polygon
  std::vector<bool> collapsed;        // concentric mask vanished for that text
};

// Encodes every polygon and renders the full supervision stack. Offsets and
// parameters are anchored on the centerlines extracted from the rendered
// concentric mask, so decode_maps sees the same pixels.
RenderedScene render_label_maps(std::span<const TextPolygon> polys, int height, int width,
                                const RenderConfig& cfg = {});

struct DecodeConfig {
  ParamMask mask = ParamMask::default_mask();
  double conf_threshold = kDefaultConfThreshold;
  int min_area = kDefaultMinArea;
  ReconstructionConfig reconstruction;
};

// Threshold the concentric map, take one centerline per component, read the
// curve parameters at the centerline midpoint and the truncation points from
// the endpoint offsets, and rebuild the contours.
std::vector<TextPolygon> decode_maps(const LabelMaps& maps, const DecodeConfig& cfg = {});

}  // namespace edgetext
