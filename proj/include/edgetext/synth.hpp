#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "edgetext/curvefit.hpp"
#include "edgetext/geometry.hpp"

namespace edgetext::synth {

using Rng = std::mt19937_64;

struct Ribbon {
  TextPolygon polygon;
  // The shape the annotation stands for: the clean rectangle behind a
  // jittered one, or the generating curves sampled at 100 points per edge.
  TextPolygon reference;
  // Generating curves in the normalized frame, when the edges are exact
  // polynomial images (constant term always zero).
  std::optional<CurveParams> top;
  std::optional<CurveParams> bottom;
};

struct Placement {
  double min_length = 60.0;
  double max_length = 300.0;
  double max_angle = 0.0;  // radians; rotation drawn from [-max_angle, max_angle]
  Point2 center{0.0, 0.0};
};

// Both edges are exact images of polynomials over `mask` whose values at
// x = -0.5 and x = 0.5 agree, sampled at k evenly spaced abscissae (k odd keeps
// the middle sample at x = 0), then mapped to pixels by one similarity.
Ribbon polynomial_ribbon(Rng& rng, const ParamMask& mask, int k, const Placement& place,
                         double coefficient_range = 0.3);

// Exact quadratics with |theta_2| in [0.2, 0.6] and no linear term.
Ribbon quadratic_ribbon(Rng& rng, int k, const Placement& place);

// Top edge follows A sin(2 pi f x + phi); the bottom edge is the same curve
// shifted by the text height.
Ribbon sinusoid_ribbon(Rng& rng, int k, const Placement& place);

// Axis-aligned rectangle with k points per edge; every annotated point gets
// N(0, jitter^2) noise on both axes. reference is the clean rectangle.
Ribbon noisy_rectangle(Rng& rng, int k, double jitter, const Placement& place);

// Random rotation in [-pi, pi), translation in [-1000, 1000]^2, scale in
// [0.2, 5].
SimilarityTransform random_similarity(Rng& rng);

// Two texts in the upper and lower halves of an height x width image.
std::vector<TextPolygon> two_instance_scene(Rng& rng, int height, int width, int k = 7);

}  // namespace edgetext::synth
