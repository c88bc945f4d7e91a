#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edgetext/encoder.hpp"

namespace edgetext {

inline constexpr int kDefaultSamples = 100;

struct ReconstructionConfig {
  // Samples per edge on the inclusive grid over [-0.5, 0.5].
  int samples = kDefaultSamples;
};

struct NormalizedSamples {
  Polyline top;
  Polyline bottom;
};

// x_i = -0.5 + i / (N - 1), i = 0..N-1; y from each edge's polynomial.
std::vector<double> sample_grid(int samples);
NormalizedSamples sample_normalized(const CurveBoxLabel& label, const ReconstructionConfig& cfg = {});

// Inverse of normalize_edge: scale by |end - start|, translate so the first
// point lands on start, rotate about start by +chord_angle(start, end).
Polyline denormalize(std::span<const Point2> points, Point2 start, Point2 end);

struct Reconstruction {
  TextPolygon polygon;
  bool self_intersecting = false;
};

// Top curve left to right followed by the bottom curve right to left (2N
// vertices). Pathological parameters may produce a self-intersecting outline;
// it is flagged, not rejected.
Reconstruction reconstruct_curve_box(const CurveBoxLabel& label, const ReconstructionConfig& cfg = {});

struct BatchItem {
  std::optional<Reconstruction> result;
  std::string error;

  bool ok() const { return result.has_value(); }
};

// Elementwise identical to reconstruct_curve_box. Work is split across
// `workers` threads (0 = hardware concurrency); results keep input order and a
// failing item does not abort the rest.
std::vector<BatchItem> reconstruct_batch(std::span<const CurveBoxLabel> labels,
                                         const ReconstructionConfig& cfg = {}, unsigned workers = 0);

}  // namespace edgetext
