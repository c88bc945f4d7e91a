#pragma once

#include <span>

#include "edgetext/curvefit.hpp"
#include "edgetext/encoder.hpp"
#include "edgetext/maps.hpp"

namespace edgetext {

enum class PiMode {
  kNormalized,  // sum |f - g| * (1/N): N-stable Riemann sum of the integral
  kLiteral,     // sum |f - g| without the 1/N factor
};

inline constexpr int kDefaultPiSamples = 100;

// Proportional integral loss between two curves sharing a mask, evaluated on
// x_i = -0.5 + i/N, i = 1..N. Throws kIncompatibleParams on mask mismatch.
double pi_loss(const CurveParams& gt, const CurveParams& pred, int samples = kDefaultPiSamples,
               PiMode mode = PiMode::kNormalized);

double smooth_l1(double pred, double gt);

// 1 - (2 sum(pred * gt) + eps) / (sum(pred) + sum(gt) + eps)
double dice_loss(std::span<const float> pred, std::span<const float> gt, double epsilon = 1.0);
double dice_loss(const Raster& pred, const Raster& gt, double epsilon = 1.0);

// Mean smooth-L1 over the eight truncation coordinates of each label pair.
double truncation_loss(std::span<const TruncationPoints> pred, std::span<const TruncationPoints> gt);

// Mean smooth-L1 over the supervised channels of offset rasters: channels
// 0-3 at each start pixel and 4-7 at each end pixel.
double truncation_loss(const Raster& pred_offsets, const Raster& gt_offsets,
                       std::span<const CenterLine> supervised);

struct LossWeights {
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 1.0;
};

double total_loss(double edge, double truncation, double bep, const LossWeights& weights = {});

}  // namespace edgetext
