#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "edgetext/encoder.hpp"
#include "edgetext/error.hpp"
#include "edgetext/synth.hpp"

using namespace edgetext;

namespace {

// Outline whose edges are y = curve(x) and y = thickness + curve(x) on
// k evenly spaced abscissae in [-0.5, 0.5].
TextPolygon outline(double (*curve)(double), double thickness, int k, const SimilarityTransform& t) {
  std::vector<Point2> top, bottom;
  for (int j = 0; j < k; ++j) {
    const double x = -0.5 + static_cast<double>(j) / (k - 1);
    top.push_back(t.apply(Point2{x, curve(x)}));
    bottom.push_back(t.apply(Point2{x, thickness + curve(x)}));
  }
  top.insert(top.end(), bottom.rbegin(), bottom.rend());
  return TextPolygon(top);
}

double parabola(double x) { return 0.2 * x * x; }

}  // namespace

TEST_CASE("split_edges") {
  const EdgePair quad = split_edges(TextPolygon({{0, 0}, {10, 0}, {10, 2}, {0, 2}}));
  CHECK(quad.top == Polyline{{0, 0}, {10, 0}});
  CHECK(quad.bottom == Polyline{{0, 2}, {10, 2}});

  std::vector<Point2> fourteen;
  for (int i = 0; i < 14; ++i) fourteen.push_back({static_cast<double>(i), static_cast<double>(i % 3)});
  const EdgePair e14 = split_edges(TextPolygon(fourteen));
  CHECK(e14.top.size() == 7);
  CHECK(e14.bottom.size() == 7);
  CHECK(e14.bottom.front() == fourteen.back());

  const TextPolygon six({{0, 0}, {5, 1}, {10, 0}, {10, 3}, {5, 4}, {0, 3}});
  const EdgePair e6 = split_edges(six);
  CHECK(e6.top.front() == six.points()[0]);
  CHECK(e6.top.back() == six.points()[2]);
  CHECK(e6.bottom.front() == six.points()[5]);
  CHECK(e6.bottom.back() == six.points()[3]);
}

TEST_CASE("odd point counts are malformed") {
  try {
    TextPolygon({{0, 0}, {1, 0}, {2, 0}, {2, 1}, {0, 1}});
    FAIL("expected malformed annotation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kMalformedAnnotation);
  }
}

TEST_CASE("pick_truncation_points") {
  EdgePair edges{{{0, 0}, {5, 1}, {10, 0}}, {{0, 2}, {5, 3}, {10, 2}}};
  const TruncationPoints tp = pick_truncation_points(edges);
  CHECK(tp.start_top == Point2{0, 0});
  CHECK(tp.end_top == Point2{10, 0});
  const TruncationPoints quad = pick_truncation_points(split_edges(TextPolygon({{0, 0}, {10, 0}, {10, 2}, {0, 2}})));
  CHECK(quad.start_bottom == Point2{0, 2});
  CHECK(quad.end_bottom == Point2{10, 2});

  edges.top.back() = edges.top.front();
  try {
    pick_truncation_points(edges);
    FAIL("expected degenerate chord");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerateChord);
  }
}

TEST_CASE("truncation points follow a rotation of the text") {
  const TextPolygon poly({{0, 0}, {50, 8}, {100, 0}, {100, 20}, {50, 28}, {0, 20}});
  const SimilarityTransform quarter(std::numbers::pi / 2, {0, 0}, 1.0);
  const CurveBoxLabel a = encode_text(poly);
  const CurveBoxLabel b = encode_text(quarter.apply(poly));
  for (auto [pa, pb] : {std::pair{a.truncation.start_top, b.truncation.start_top},
                        std::pair{a.truncation.end_top, b.truncation.end_top},
                        std::pair{a.truncation.start_bottom, b.truncation.start_bottom},
                        std::pair{a.truncation.end_bottom, b.truncation.end_bottom}}) {
    CHECK(euclidean_distance(quarter.apply(pa), pb) < 1e-9);
  }
  CHECK(a.top.coefficient(2) == doctest::Approx(b.top.coefficient(2)).epsilon(1e-9));
}

TEST_CASE("normalize_edge") {
  const Polyline flat{{0, 0}, {5, 0}, {10, 0}};
  const Polyline n = normalize_edge(flat, flat.front(), flat.back());
  CHECK(n[0].x == doctest::Approx(-0.5));
  CHECK(n[1].x == doctest::Approx(0.0));
  CHECK(n[2].x == doctest::Approx(0.5));
  for (const auto& p : n) CHECK(p.y == doctest::Approx(0.0));

  const Polyline bumpy{{0, 0}, {2, 1}, {5, 1.5}, {7.5, 0.8}, {10, 0}};
  const Polyline base = normalize_edge(bumpy, bumpy.front(), bumpy.back());
  for (const SimilarityTransform& t : {SimilarityTransform(37.0 * std::numbers::pi / 180.0, {100, 50}, 1.0),
                                       SimilarityTransform(0.0, {0, 0}, 3.0)}) {
    const Polyline moved = t.apply(bumpy);
    const Polyline again = normalize_edge(moved, moved.front(), moved.back());
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(euclidean_distance(base[i], again[i]) < 1e-9);
  }
  CHECK_THROWS_AS(normalize_edge(flat, {1, 1}, {1, 1}), Error);
}

TEST_CASE("normalized endpoints are a unit horizontal chord") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-200, 200);
  std::uniform_int_distribution<int> count(2, 12);
  for (int trial = 0; trial < 300; ++trial) {
    Polyline edge(static_cast<std::size_t>(count(rng)));
    for (auto& p : edge) p = {u(rng), u(rng)};
    if (edge.front() == edge.back()) continue;
    const Polyline n = normalize_edge(edge, edge.front(), edge.back());
    CHECK(std::abs(n.back().x - n.front().x - 1.0) < 1e-9);
    CHECK(std::abs(n.back().y - n.front().y) < 1e-9);
  }
}

TEST_CASE("arc-length resampled monotone edges normalize into [-0.75, 0.75]") {
  // The middle sample of an arc-length resampling sits within (L - d) / 2 of
  // the chord centre, so the bound holds whenever L <= 1.5 d.
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 + static_cast<int>(u(rng) * 10);
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (auto& x : xs) x = u(rng) * 100;
    std::sort(xs.begin(), xs.end());
    if (xs.back() - xs.front() < 1.0) continue;
    Polyline edge;
    for (double x : xs) edge.push_back({x, 30 * u(rng)});
    edge.back().y = edge.front().y;
    double length = 0.0;
    for (std::size_t i = 1; i < edge.size(); ++i) length += euclidean_distance(edge[i - 1], edge[i]);
    if (length > 1.5 * euclidean_distance(edge.front(), edge.back())) continue;
    const SimilarityTransform t(u(rng) * 6.0, {u(rng), u(rng)}, 0.5 + u(rng));
    const Polyline moved = resample_polyline(t.apply(edge), 2 + static_cast<int>(u(rng) * 10));
    for (const auto& p : normalize_edge(moved, moved.front(), moved.back())) {
      CHECK(p.x >= -0.75 - 1e-12);
      CHECK(p.x <= 0.75 + 1e-12);
    }
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("encode_text on a rectangle") {
  const TextPolygon rect({{0, 0}, {10, 0}, {10, 2}, {0, 2}});
  const CurveBoxLabel label = encode_text(rect, ParamMask::parse("1(1)+c"), 7);
  // Each edge is translated by its own middle point, so a straight edge
  // normalizes onto y = 0 with no offset.
  CHECK(std::abs(label.top.coefficient(1)) < 1e-12);
  CHECK(std::abs(label.top.constant) < 1e-12);
  CHECK(std::abs(label.bottom.coefficient(1)) < 1e-12);
  CHECK(std::abs(label.bottom.constant) < 1e-12);
  CHECK(label.truncation.start_bottom == Point2{0, 2});
}

TEST_CASE("encode_text recovers a synthesized quadratic") {
  const SimilarityTransform t(0.7, {320, 140}, 150.0);
  const CurveBoxLabel label = encode_text(outline(parabola, 0.3, 7, t), ParamMask::default_mask(), 7);
  CHECK(std::abs(label.top.coefficient(2) - 0.2) < 1e-6);
  CHECK(std::abs(label.bottom.coefficient(2) - 0.2) < 1e-6);
  CHECK(std::abs(label.top.coefficient(1)) < 1e-6);
}

TEST_CASE("encode_text precondition on k") {
  const TextPolygon rect({{0, 0}, {10, 0}, {10, 2}, {0, 2}});
  try {
    encode_text(rect, ParamMask::parse("4(4)+c"), 3);
    FAIL("expected insufficient points");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInsufficientPoints);
  }
}

TEST_CASE("encoding is similarity invariant and deterministic") {
  synth::Rng rng(41);
  synth::Placement place;
  place.max_angle = 1.0;
  for (int trial = 0; trial < 40; ++trial) {
    const TextPolygon poly = synth::sinusoid_ribbon(rng, 9, place).polygon;
    const CurveBoxLabel base = encode_text(poly, ParamMask::parse("3(3)+c"), 7);
    CHECK(encode_text(poly, ParamMask::parse("3(3)+c"), 7) == base);
    const SimilarityTransform t = synth::random_similarity(rng);
    const CurveBoxLabel moved = encode_text(t.apply(poly), ParamMask::parse("3(3)+c"), 7);
    const auto a = base.top.flat(), b = moved.top.flat();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-6);
    CHECK(euclidean_distance(t.apply(base.truncation.end_bottom), moved.truncation.end_bottom) <
          1e-9 * t.scale * 1000);
  }
}
