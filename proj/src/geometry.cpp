#include "edgetext/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "edgetext/error.hpp"

namespace edgetext {

TextPolygon::TextPolygon(std::vector<Point2> points) : points_(std::move(points)) {
  if (points_.size() < 4 || points_.size() % 2 != 0) {
    throw Error(ErrorKind::kMalformedAnnotation,
                "text polygon needs an even number (>= 4) of points, got " +
                    std::to_string(points_.size()));
  }
  for (const auto& p : points_) {
    if (!p.finite()) throw Error(ErrorKind::kMalformedAnnotation, "non-finite polygon coordinate");
  }
}

SimilarityTransform::SimilarityTransform(double angle, Point2 translation, double scale)
    : angle(angle), translation(translation), scale(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(angle) || !translation.finite()) {
    throw Error(ErrorKind::kInvalidArgument, "similarity transform needs finite values and scale > 0");
  }
}

Point2 SimilarityTransform::apply(Point2 p) const {
  return scale * rotation_apply(angle, p) + translation;
}

Polyline SimilarityTransform::apply(std::span<const Point2> pts) const {
  Polyline out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(apply(p));
  return out;
}

TextPolygon SimilarityTransform::apply(const TextPolygon& poly) const {
  return TextPolygon(apply(poly.view()));
}

Point2 rotation_apply(double theta, Point2 p) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

double chord_angle(Point2 start, Point2 end) {
  const Point2 v = end - start;
  if (v.x == 0.0 && v.y == 0.0) {
    throw Error(ErrorKind::kDegenerateChord, "coincident chord endpoints");
  }
  const double a = std::atan2(v.y, v.x);
  // atan2 may return -pi for (-x, -0.0).
  return a <= -std::numbers::pi ? std::numbers::pi : a;
}

double euclidean_distance(Point2 p, Point2 q) { return std::hypot(p.x - q.x, p.y - q.y); }

double signed_area(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % n];
    acc += a.x * b.y - b.x * a.y;
  }
  return 0.5 * acc;
}

double polygon_area(std::span<const Point2> poly) { return std::abs(signed_area(poly)); }

double polygon_perimeter(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  if (n < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += euclidean_distance(poly[i], poly[(i + 1) % n]);
  return acc;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  if (len2 == 0.0) return euclidean_distance(p, a);
  const double t = std::clamp(((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2, 0.0, 1.0);
  return euclidean_distance(p, a + t * ab);
}

bool point_in_polygon(Point2 p, std::span<const Point2> poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

namespace {

double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_cross(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// Sorted crossing abscissae of the closed polygon with the line y = const.
void scanline_crossings(std::span<const Point2> poly, double y, std::vector<double>& xs) {
  xs.clear();
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if ((a.y > y) != (b.y > y)) xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
  }
  std::sort(xs.begin(), xs.end());
}

double span_length(const std::vector<double>& xs) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2) acc += xs[i + 1] - xs[i];
  return acc;
}

// Both inputs are sorted even-odd crossing lists; returns the union length.
double union_length(const std::vector<double>& a, const std::vector<double>& b,
                    std::vector<std::pair<double, double>>& scratch) {
  scratch.clear();
  for (std::size_t i = 0; i + 1 < a.size(); i += 2) scratch.emplace_back(a[i], a[i + 1]);
  for (std::size_t i = 0; i + 1 < b.size(); i += 2) scratch.emplace_back(b[i], b[i + 1]);
  std::sort(scratch.begin(), scratch.end());
  double acc = 0.0;
  double lo = 0.0, hi = 0.0;
  bool open = false;
  for (const auto& [s, e] : scratch) {
    if (!open) {
      lo = s;
      hi = e;
      open = true;
    } else if (s <= hi) {
      hi = std::max(hi, e);
    } else {
      acc += hi - lo;
      lo = s;
      hi = e;
    }
  }
  if (open) acc += hi - lo;
  return acc;
}

}  // namespace

bool self_intersects(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  if (n < 4) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a1 = poly[i];
    const Point2& a2 = poly[(i + 1) % n];
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
      if (segments_cross(a1, a2, poly[j], poly[(j + 1) % n])) return true;
    }
  }
  return false;
}

IouResult polygon_iou(std::span<const Point2> a, std::span<const Point2> b,
                      const IouOptions& options) {
  IouResult result;
  const double area_a = polygon_area(a);
  const double area_b = polygon_area(b);
  result.degenerate = area_a < 1.0 || area_b < 1.0;
  if (area_a == 0.0 || area_b == 0.0) return result;

  double ymin = a[0].y, ymax = a[0].y;
  for (const auto* poly : {&a, &b}) {
    for (const auto& p : *poly) {
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  const double height = ymax - ymin;
  if (!(height > 0.0)) return result;
  const int rows = std::max(options.min_rows,
                            static_cast<int>(std::ceil(height * options.samples_per_pixel)));
  const double dy = height / rows;

  std::vector<double> xa, xb;
  std::vector<std::pair<double, double>> scratch;
  double inter = 0.0, uni = 0.0;
  for (int r = 0; r < rows; ++r) {
    const double y = ymin + (r + 0.5) * dy;
    scanline_crossings(a, y, xa);
    scanline_crossings(b, y, xb);
    const double la = span_length(xa);
    const double lb = span_length(xb);
    if (la == 0.0 && lb == 0.0) continue;
    const double lu = union_length(xa, xb, scratch);
    uni += lu;
    inter += la + lb - lu;
  }
  if (uni > 0.0) result.value = std::clamp(inter / uni, 0.0, 1.0);
  return result;
}

IouResult polygon_iou(const TextPolygon& a, const TextPolygon& b, const IouOptions& options) {
  return polygon_iou(a.view(), b.view(), options);
}

Polyline resample_polyline(std::span<const Point2> pts, int k) {
  if (pts.size() < 2 || k < 2) {
    throw Error(ErrorKind::kInvalidArgument, "resample needs >= 2 input points and k >= 2");
  }
  std::vector<double> cumulative(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + euclidean_distance(pts[i - 1], pts[i]);
  }
  const double total = cumulative.back();
  if (!(total > 0.0)) throw Error(ErrorKind::kDegenerateChord, "zero-length polyline");

  Polyline out;
  out.reserve(k);
  out.push_back(pts.front());
  std::size_t seg = 1;
  for (int j = 1; j + 1 < k; ++j) {
    const double target = total * j / (k - 1);
    while (seg + 1 < pts.size() && cumulative[seg] < target) ++seg;
    const double len = cumulative[seg] - cumulative[seg - 1];
    const double t = len > 0.0 ? (target - cumulative[seg - 1]) / len : 0.0;
    out.push_back(pts[seg - 1] + t * (pts[seg] - pts[seg - 1]));
  }
  out.push_back(pts.back());
  return out;
}

}  // namespace edgetext
