#pragma once

#include <span>

#include "edgetext/curvefit.hpp"
#include "edgetext/geometry.hpp"

namespace edgetext {

// Both edges run left to right in reading direction.
struct EdgePair {
  Polyline top;
  Polyline bottom;
};

struct TruncationPoints {
  Point2 start_top;
  Point2 end_top;
  Point2 start_bottom;
  Point2 end_bottom;

  friend bool operator==(const TruncationPoints&, const TruncationPoints&) = default;
};

// Everything needed to rebuild one text contour.
struct CurveBoxLabel {
  CurveParams top;
  CurveParams bottom;
  TruncationPoints truncation;

  friend bool operator==(const CurveBoxLabel&, const CurveBoxLabel&) = default;
};

inline constexpr int kDefaultPointsPerEdge = 7;

// Top edge is points [0, k); the bottom edge is points [k, 2k) reversed so it
// also runs in reading direction.
EdgePair split_edges(const TextPolygon& poly);

// First and last point of each directed edge. Throws kDegenerateChord if an
// edge starts where it ends.
TruncationPoints pick_truncation_points(const EdgePair& edges);

// Maps an edge into the normalized frame: rotate (p - start) by
// -chord_angle(start, end), subtract the middle point (mean of zero-based
// indices floor((k-1)/2) and floor(k/2)), divide by the chord length. The
// chord ends up horizontal with unit length.
Polyline normalize_edge(std::span<const Point2> edge, Point2 start, Point2 end);

// Splits, resamples each edge to points_per_edge (only when its point count
// differs), normalizes and fits both curves with one mask.
CurveBoxLabel encode_text(const TextPolygon& poly, const ParamMask& mask = ParamMask::default_mask(),
                          int points_per_edge = kDefaultPointsPerEdge);

}  // namespace edgetext
