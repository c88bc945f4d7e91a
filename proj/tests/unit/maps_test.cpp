#include <doctest.h>

#include <cmath>
#include <random>

#include "edgetext/error.hpp"
#include "edgetext/maps.hpp"
#include "edgetext/synth.hpp"

using namespace edgetext;

namespace {

TextPolygon rect_poly(double x0, double y0, double x1, double y1) {
  return TextPolygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

int count_set(const Raster& r) {
  int n = 0;
  for (float v : r.data()) n += v > 0.5f;
  return n;
}

Raster bar(int h, int w, int r0, int c0, int rows, int cols, Raster base = {}) {
  Raster m = base.height() ? base : Raster(h, w);
  for (int r = r0; r < r0 + rows; ++r)
    for (int c = c0; c < c0 + cols; ++c) m.at(r, c) = 1.0f;
  return m;
}

}  // namespace

TEST_CASE("concentric mask of a rectangle is the inward offset rectangle") {
  const TextPolygon poly = rect_poly(10, 10, 30, 14);
  const ConcentricMask cm = render_concentric_mask(poly, 0.7, 40, 40);
  const double d = 80.0 * (1 - 0.49) / 48.0;
  CHECK(cm.offset == doctest::Approx(d));
  CHECK_FALSE(cm.collapsed);
  for (int r = 0; r < 40; ++r) {
    for (int c = 0; c < 40; ++c) {
      const bool expected = c >= 10 + d && c <= 30 - d && r >= 10 + d && r <= 14 - d;
      CHECK((cm.mask.at(r, c) > 0.5f) == expected);
    }
  }
  CHECK(count_set(cm.mask) > 0);
}

TEST_CASE("concentric mask area grows with the shrink ratio") {
  synth::Rng rng(3);
  synth::Placement place;
  place.center = {100, 60};
  place.min_length = 60;
  place.max_length = 150;
  for (int trial = 0; trial < 10; ++trial) {
    const TextPolygon poly = synth::sinusoid_ribbon(rng, 7, place).polygon;
    int previous = -1;
    for (double r : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
      const int area = count_set(render_concentric_mask(poly, r, 200, 220).mask);
      CHECK(area >= previous);
      previous = area;
    }
  }
  const TextPolygon poly = rect_poly(10, 10, 60, 30);
  const int full = count_set(render_concentric_mask(poly, 0.999, 40, 80).mask);
  int inside = 0;
  for (int r = 10; r <= 30; ++r)
    for (int c = 10; c <= 60; ++c) inside += point_in_polygon({double(c), double(r)}, poly.view());
  CHECK(full >= inside - 150);  // d -> 0 keeps everything but the rim
  CHECK_THROWS_AS(render_concentric_mask(poly, 1.0, 40, 80), Error);
}

TEST_CASE("concentric mask collapse is flagged") {
  // A sliver that contains no pixel centre once shrunk.
  const ConcentricMask cm = render_concentric_mask(rect_poly(10.2, 10.2, 12.0, 10.8), 0.7, 20, 20);
  CHECK(cm.collapsed);
  CHECK(count_set(cm.mask) == 0);
}

TEST_CASE("edge heatmap values") {
  const EdgePair edges{{{10, 10}, {110, 10}}, {{10, 50}, {110, 50}}};
  const Raster heat = render_edge_heatmap(edges, 0.05, 60, 130);
  const double sigma = 5.0;
  CHECK(heat.at(10, 50) == doctest::Approx(1.0));
  CHECK(heat.at(15, 50) == doctest::Approx(std::exp(-0.5)).epsilon(1e-6));
  CHECK(heat.at(30, 50) < 0.012);  // 20 px = 4 sigma from both edges
  CHECK(heat.at(10 + 3 * int(sigma) + 1, 50) < 0.012);
  for (float v : heat.data()) {
    CHECK(v <= 1.0f);
    CHECK(v >= 0.0f);
  }
}

TEST_CASE("edge heatmap is monotone in distance to the edges") {
  synth::Rng rng(9);
  synth::Placement place;
  place.center = {60, 40};
  place.min_length = 50;
  place.max_length = 80;
  const TextPolygon poly = synth::sinusoid_ribbon(rng, 7, place).polygon;
  const EdgePair edges = split_edges(poly);
  const Raster heat = render_edge_heatmap(edges, 0.08, 100, 130);
  std::vector<std::pair<double, float>> samples;
  for (int r = 0; r < 100; r += 3) {
    for (int c = 0; c < 130; c += 3) {
      const Point2 p{double(c), double(r)};
      double d = 1e9;
      for (const auto* line : {&edges.top, &edges.bottom})
        for (std::size_t i = 0; i + 1 < line->size(); ++i)
          d = std::min(d, point_segment_distance(p, (*line)[i], (*line)[i + 1]));
      samples.push_back({d, heat.at(r, c)});
    }
  }
  std::sort(samples.begin(), samples.end(), [](auto a, auto b) { return a.first < b.first; });
  for (std::size_t i = 1; i < samples.size(); ++i) CHECK(samples[i].second <= samples[i - 1].second);
}

TEST_CASE("extract_centerline") {
  const auto lines = extract_centerline(bar(12, 40, 4, 5, 4, 20));
  REQUIRE(lines.size() == 1);
  const CenterLine& cl = lines[0];
  CHECK(cl.component_area == 80);
  for (const Pixel& p : cl.path) CHECK(std::abs(p.y - 5.5) <= 1.0);
  CHECK(cl.start().x <= 5 + 3);
  CHECK(cl.end().x >= 24 - 3);
  CHECK(cl.start().x < cl.end().x);
  for (std::size_t i = 1; i < cl.path.size(); ++i) {
    CHECK(std::max(std::abs(cl.path[i].x - cl.path[i - 1].x), std::abs(cl.path[i].y - cl.path[i - 1].y)) == 1);
  }

  CHECK(extract_centerline(Raster(10, 10)).empty());
  CHECK(extract_centerline(bar(30, 40, 20, 5, 4, 20, bar(30, 40, 2, 5, 4, 20))).size() == 2);

  const auto dot = extract_centerline(bar(10, 10, 4, 4, 2, 2));
  REQUIRE(dot.size() == 1);
  CHECK(dot[0].path.size() == 1);
}

TEST_CASE("truncation offsets") {
  const TextPolygon rect = rect_poly(10, 10, 50, 20);
  const CurveBoxLabel label = encode_text(rect);
  CenterLine cl;
  cl.path = {{15, 15}, {16, 15}, {45, 15}};
  const Raster off = render_truncation_offsets(label, cl, 30, 60);
  CHECK(off.channels() == 8);
  // Start offsets point at the two left corners: same length, mirrored y.
  CHECK(off.at(15, 15, 0) == doctest::Approx(-5));
  CHECK(off.at(15, 15, 1) == doctest::Approx(-5));
  CHECK(off.at(15, 15, 2) == doctest::Approx(-5));
  CHECK(off.at(15, 15, 3) == doctest::Approx(5));
  CHECK(off.at(15, 45, 4) == doctest::Approx(5));
  CHECK(off.at(15, 45, 7) == doctest::Approx(5));
  CHECK(off.at(15, 16, 0) == 0.0f);

  CenterLine at_corner;
  at_corner.path = {{10, 10}, {30, 15}};
  const Raster zero = render_truncation_offsets(label, at_corner, 30, 60);
  CHECK(zero.at(10, 10, 0) == 0.0f);
  CHECK(zero.at(10, 10, 1) == 0.0f);
}

TEST_CASE("decode_maps round trips rendered labels") {
  synth::Rng rng(5);
  const auto texts = synth::two_instance_scene(rng, 256, 256);
  const RenderedScene one = render_label_maps(std::span(texts).first(1), 256, 256);
  const auto decoded = decode_maps(one.maps);
  REQUIRE(decoded.size() == 1);
  CHECK(polygon_iou(decoded[0], texts[0]).value >= 0.8);

  const RenderedScene both = render_label_maps(texts, 256, 256);
  const auto two = decode_maps(both.maps);
  REQUIRE(two.size() == 2);
  for (const auto& gt : texts) {
    double best = 0.0;
    for (const auto& p : two) best = std::max(best, polygon_iou(p, gt).value);
    CHECK(best >= 0.8);
  }
  CHECK(two.size() <= extract_centerline(binarize(both.maps.concentric, 0.5f)).size());
}

TEST_CASE("decode_maps on empty confidence and wrong shapes") {
  LabelMaps maps{Raster(64, 64), Raster(64, 64), Raster(64, 64, 8), Raster(64, 64, 6)};
  CHECK(decode_maps(maps).empty());
  maps.edge_params = Raster(64, 64, 4);
  CHECK_THROWS_AS(decode_maps(maps), Error);
}

TEST_CASE("tiny components are discarded") {
  LabelMaps maps{bar(64, 64, 10, 10, 3, 3), Raster(64, 64), Raster(64, 64, 8), Raster(64, 64, 6)};
  CHECK(decode_maps(maps).empty());
}
