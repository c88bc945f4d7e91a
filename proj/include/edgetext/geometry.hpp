#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace edgetext {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend Point2 operator*(Point2 p, double s) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

using Polyline = std::vector<Point2>;

// Annotation contour: points [0, k) run along the top edge in reading
// direction, points [k, 2k) come back along the bottom edge.
class TextPolygon {
 public:
  TextPolygon() = default;
  // Throws kMalformedAnnotation unless the count is even, >= 4 and every
  // coordinate is finite.
  explicit TextPolygon(std::vector<Point2> points);

  const std::vector<Point2>& points() const { return points_; }
  std::span<const Point2> view() const { return points_; }
  std::size_t size() const { return points_.size(); }
  std::size_t half() const { return points_.size() / 2; }
  bool empty() const { return points_.empty(); }

  friend bool operator==(const TextPolygon&, const TextPolygon&) = default;

 private:
  std::vector<Point2> points_;
};

struct SimilarityTransform {
  double angle = 0.0;  // radians
  Point2 translation;
  double scale = 1.0;

  // Throws kInvalidArgument on non-positive or non-finite scale.
  SimilarityTransform(double angle, Point2 translation, double scale);

  Point2 apply(Point2 p) const;
  Polyline apply(std::span<const Point2> pts) const;
  TextPolygon apply(const TextPolygon& poly) const;
};

// [cos -sin; sin cos] * p
Point2 rotation_apply(double theta, Point2 p);

// Signed angle in (-pi, pi] of end - start. Throws kDegenerateChord when the
// points coincide.
double chord_angle(Point2 start, Point2 end);

double euclidean_distance(Point2 p, Point2 q);

// Shoelace area, positive for counter-clockwise in a y-up frame.
double signed_area(std::span<const Point2> poly);
double polygon_area(std::span<const Point2> poly);
double polygon_perimeter(std::span<const Point2> poly);

// Distance from p to the closed segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

// Even-odd point-in-polygon test.
bool point_in_polygon(Point2 p, std::span<const Point2> poly);

// True when two non-adjacent edges of the closed polygon cross.
bool self_intersects(std::span<const Point2> poly);

struct IouOptions {
  double samples_per_pixel = 2.0;
  int min_rows = 64;
};

struct IouResult {
  double value = 0.0;
  // Either input has area below one square pixel.
  bool degenerate = false;
};

// Scanline rasterization over the joint bounding box. Each row contributes the
// exact span lengths of both polygons (even-odd fill), so the only
// discretization is along y.
IouResult polygon_iou(std::span<const Point2> a, std::span<const Point2> b,
                      const IouOptions& options = {});
IouResult polygon_iou(const TextPolygon& a, const TextPolygon& b,
                      const IouOptions& options = {});

// k points equally spaced by arc length; endpoints are copied exactly.
// Throws kDegenerateChord for a zero-length polyline, kInvalidArgument for
// fewer than two points or k < 2.
Polyline resample_polyline(std::span<const Point2> pts, int k);

}  // namespace edgetext
