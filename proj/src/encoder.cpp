#include "edgetext/encoder.hpp"

#include <algorithm>
#include <string>

#include "edgetext/error.hpp"

namespace edgetext {

EdgePair split_edges(const TextPolygon& poly) {
  const auto& pts = poly.points();
  if (pts.size() < 4 || pts.size() % 2 != 0) {
    throw Error(ErrorKind::kMalformedAnnotation,
                "cannot split " + std::to_string(pts.size()) + " points into two equal edges");
  }
  const std::size_t k = pts.size() / 2;
  EdgePair edges;
  edges.top.assign(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(k));
  edges.bottom.assign(pts.rbegin(), pts.rbegin() + static_cast<std::ptrdiff_t>(k));
  return edges;
}

TruncationPoints pick_truncation_points(const EdgePair& edges) {
  if (edges.top.size() < 2 || edges.bottom.size() < 2) {
    throw Error(ErrorKind::kMalformedAnnotation, "edges need at least two points");
  }
  TruncationPoints tp{edges.top.front(), edges.top.back(), edges.bottom.front(), edges.bottom.back()};
  if (tp.start_top == tp.end_top || tp.start_bottom == tp.end_bottom) {
    throw Error(ErrorKind::kDegenerateChord, "edge starts where it ends");
  }
  return tp;
}

Polyline normalize_edge(std::span<const Point2> edge, Point2 start, Point2 end) {
  if (edge.size() < 2) throw Error(ErrorKind::kInvalidArgument, "edge needs at least two points");
  const double theta = chord_angle(start, end);
  const double d = euclidean_distance(start, end);

  Polyline rotated;
  rotated.reserve(edge.size());
  for (const auto& p : edge) rotated.push_back(rotation_apply(-theta, p - start));

  const std::size_t k = edge.size();
  const Point2 mid = 0.5 * (rotated[(k - 1) / 2] + rotated[k / 2]);
  const double inv_d = 1.0 / d;
  for (auto& p : rotated) p = inv_d * (p - mid);
  return rotated;
}

namespace {

CurveParams encode_edge(const Polyline& edge, Point2 start, Point2 end, const ParamMask& mask,
                        int points_per_edge) {
  const Polyline sampled = static_cast<int>(edge.size()) == points_per_edge
                               ? edge
                               : resample_polyline(edge, points_per_edge);
  return fit_poly(normalize_edge(sampled, start, end), mask);
}

}  // namespace

CurveBoxLabel encode_text(const TextPolygon& poly, const ParamMask& mask, int points_per_edge) {
  if (points_per_edge < std::max(2, mask.free_count())) {
    throw Error(ErrorKind::kInsufficientPoints,
                std::to_string(points_per_edge) + " points per edge cannot determine " +
                    std::to_string(mask.free_count()) + " parameters (mask " + mask.to_string() + ")");
  }
  const EdgePair edges = split_edges(poly);
  CurveBoxLabel label;
  label.truncation = pick_truncation_points(edges);
  label.top = encode_edge(edges.top, label.truncation.start_top, label.truncation.end_top, mask,
                          points_per_edge);
  label.bottom = encode_edge(edges.bottom, label.truncation.start_bottom,
                             label.truncation.end_bottom, mask, points_per_edge);
  return label;
}

}  // namespace edgetext
