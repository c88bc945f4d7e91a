#include "edgetext/synth.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "edgetext/error.hpp"

namespace edgetext::synth {

namespace {

constexpr int kReferenceSamples = 100;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Shifts the lowest odd-degree coefficient so f(0.5) == f(-0.5).
void balance_ends(CurveParams& p) {
  const auto& degrees = p.mask.degrees();
  double gap = 0.0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] % 2 == 1) gap += 2.0 * p.coefficients[i] * std::pow(0.5, degrees[i]);
  }
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] % 2 == 1) {
      p.coefficients[i] -= gap / (2.0 * std::pow(0.5, degrees[i]));
      return;
    }
  }
}

// Text-frame outline (unit chord, x in [-0.5, 0.5], y down) to pixels.
TextPolygon place_outline(const Polyline& top, const Polyline& bottom, double length, double angle,
                          Point2 center) {
  const SimilarityTransform t(angle, center, length);
  std::vector<Point2> pts = t.apply(top);
  const Polyline b = t.apply(bottom);
  pts.insert(pts.end(), b.rbegin(), b.rend());
  return TextPolygon(std::move(pts));
}

std::vector<double> abscissae(int k) {
  if (k < 2) throw Error(ErrorKind::kInvalidArgument, "need k >= 2");
  std::vector<double> xs(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) xs[j] = -0.5 + static_cast<double>(j) / (k - 1);
  return xs;
}

Ribbon from_curves(const CurveParams& top, const CurveParams& bottom, double height, int k,
                   const Placement& place, Rng& rng) {
  const double length = uniform(rng, place.min_length, place.max_length);
  const double angle = place.max_angle > 0.0 ? uniform(rng, -place.max_angle, place.max_angle) : 0.0;
  Polyline t, b;
  for (double x : abscissae(k)) {
    t.push_back({x, eval_poly(top, x)});
    b.push_back({x, height + eval_poly(bottom, x)});
  }
  Polyline dt, db;
  for (double x : abscissae(kReferenceSamples)) {
    dt.push_back({x, eval_poly(top, x)});
    db.push_back({x, height + eval_poly(bottom, x)});
  }
  Ribbon r;
  r.polygon = place_outline(t, b, length, angle, place.center);
  r.reference = place_outline(dt, db, length, angle, place.center);
  r.top = top;
  r.bottom = bottom;
  return r;
}

}  // namespace

Ribbon polynomial_ribbon(Rng& rng, const ParamMask& mask, int k, const Placement& place,
                         double coefficient_range) {
  CurveParams top = CurveParams::zeros(mask);
  for (double& c : top.coefficients) c = uniform(rng, -coefficient_range, coefficient_range);
  balance_ends(top);
  CurveParams bottom = top;
  for (double& c : bottom.coefficients) c += uniform(rng, -0.05, 0.05);
  balance_ends(bottom);
  const double height = uniform(rng, 0.2, 0.35);
  return from_curves(top, bottom, height, k, place, rng);
}

Ribbon quadratic_ribbon(Rng& rng, int k, const Placement& place) {
  const ParamMask mask = ParamMask::default_mask();
  CurveParams top = CurveParams::zeros(mask);
  const double sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
  top.coefficients[1] = sign * uniform(rng, 0.2, 0.6);
  CurveParams bottom = top;
  bottom.coefficients[1] += uniform(rng, -0.05, 0.05);
  const double height = uniform(rng, 0.15, 0.3);
  return from_curves(top, bottom, height, k, place, rng);
}

Ribbon sinusoid_ribbon(Rng& rng, int k, const Placement& place) {
  const double amplitude = uniform(rng, 0.03, 0.1);
  const double freq = uniform(rng, 0.5, 1.0);
  const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double height = uniform(rng, 0.2, 0.35);
  const double length = uniform(rng, place.min_length, place.max_length);
  const double angle = place.max_angle > 0.0 ? uniform(rng, -place.max_angle, place.max_angle) : 0.0;
  auto edges = [&](int n) {
    std::pair<Polyline, Polyline> tb;
    for (double x : abscissae(n)) {
      const double y = amplitude * std::sin(2.0 * std::numbers::pi * freq * x + phase);
      tb.first.push_back({x, y});
      tb.second.push_back({x, y + height});
    }
    return tb;
  };
  const auto [t, b] = edges(k);
  const auto [dt, db] = edges(kReferenceSamples);
  Ribbon r;
  r.polygon = place_outline(t, b, length, angle, place.center);
  r.reference = place_outline(dt, db, length, angle, place.center);
  return r;
}

Ribbon noisy_rectangle(Rng& rng, int k, double jitter, const Placement& place) {
  const double length = uniform(rng, place.min_length, place.max_length);
  const double height = length * uniform(rng, 0.1, 0.3);
  std::vector<Point2> clean;
  for (double x : abscissae(k)) clean.push_back({place.center.x + x * length, place.center.y - 0.5 * height});
  const auto xs = abscissae(k);
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
    clean.push_back({place.center.x + *it * length, place.center.y + 0.5 * height});
  }
  std::normal_distribution<double> noise(0.0, jitter);
  std::vector<Point2> noisy = clean;
  for (auto& p : noisy) {
    p.x += noise(rng);
    p.y += noise(rng);
  }
  return Ribbon{TextPolygon(std::move(noisy)), TextPolygon(std::move(clean)), std::nullopt, std::nullopt};
}

SimilarityTransform random_similarity(Rng& rng) {
  return SimilarityTransform(uniform(rng, -std::numbers::pi, std::numbers::pi),
                             {uniform(rng, -1000.0, 1000.0), uniform(rng, -1000.0, 1000.0)},
                             std::exp(uniform(rng, std::log(0.2), std::log(5.0))));
}

std::vector<TextPolygon> two_instance_scene(Rng& rng, int height, int width, int k) {
  std::vector<TextPolygon> texts;
  const ParamMask mask = ParamMask::default_mask();
  for (int slot = 0; slot < 2; ++slot) {
    Placement place;
    // Keep each text inside its half: the chord plus worst-case bulge and
    // thickness stays within the slot for lengths up to 0.7 * width.
    place.min_length = 0.35 * width;
    place.max_length = 0.7 * width;
    place.max_angle = 0.15;
    place.center = {0.5 * width + uniform(rng, -0.1, 0.1) * width,
                    (0.25 + 0.5 * slot) * height - 0.1 * height};
    const double half_slot = 0.25 * height;
    // Shrink the coefficient range for long texts so the outline fits.
    const double range = std::min(0.3, 0.5 * half_slot / place.max_length);
    texts.push_back(polynomial_ribbon(rng, mask, k, place, range).polygon);
  }
  return texts;
}

}  // namespace edgetext::synth
