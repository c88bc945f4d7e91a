#include "edgetext/losses.hpp"

#include <cmath>
#include <string>

#include "edgetext/error.hpp"

namespace edgetext {

double pi_loss(const CurveParams& gt, const CurveParams& pred, int samples, PiMode mode) {
  if (!(gt.mask == pred.mask)) {
    throw Error(ErrorKind::kIncompatibleParams,
                "masks differ: " + gt.mask.to_string() + " vs " + pred.mask.to_string());
  }
  if (samples < 2) throw Error(ErrorKind::kInvalidArgument, "pi_loss needs N >= 2");
  double acc = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double x = -0.5 + static_cast<double>(i) / samples;
    acc += std::abs(eval_poly(gt, x) - eval_poly(pred, x));
  }
  return mode == PiMode::kNormalized ? acc / samples : acc;
}

double smooth_l1(double pred, double gt) {
  const double e = std::abs(pred - gt);
  return e < 1.0 ? 0.5 * e * e : e - 0.5;
}

double dice_loss(std::span<const float> pred, std::span<const float> gt, double epsilon) {
  if (pred.size() != gt.size()) {
    throw Error(ErrorKind::kShapeMismatch, "dice inputs differ in size");
  }
  double inter = 0.0, sum_pred = 0.0, sum_gt = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    inter += static_cast<double>(pred[i]) * gt[i];
    sum_pred += pred[i];
    sum_gt += gt[i];
  }
  return 1.0 - (2.0 * inter + epsilon) / (sum_pred + sum_gt + epsilon);
}

double dice_loss(const Raster& pred, const Raster& gt, double epsilon) {
  if (!pred.same_shape(gt)) throw Error(ErrorKind::kShapeMismatch, "dice rasters differ in shape");
  return dice_loss(pred.data(), gt.data(), epsilon);
}

double truncation_loss(std::span<const TruncationPoints> pred, std::span<const TruncationPoints> gt) {
  if (pred.size() != gt.size()) {
    throw Error(ErrorKind::kShapeMismatch, "truncation label counts differ");
  }
  if (pred.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const Point2 p[4] = {pred[i].start_top, pred[i].end_top, pred[i].start_bottom, pred[i].end_bottom};
    const Point2 g[4] = {gt[i].start_top, gt[i].end_top, gt[i].start_bottom, gt[i].end_bottom};
    for (int j = 0; j < 4; ++j) acc += smooth_l1(p[j].x, g[j].x) + smooth_l1(p[j].y, g[j].y);
  }
  return acc / (8.0 * pred.size());
}

double truncation_loss(const Raster& pred_offsets, const Raster& gt_offsets,
                       std::span<const CenterLine> supervised) {
  if (!pred_offsets.same_shape(gt_offsets) || pred_offsets.channels() != kTruncationChannels) {
    throw Error(ErrorKind::kShapeMismatch, "offset rasters must share an HxWx8 shape");
  }
  double acc = 0.0;
  std::size_t count = 0;
  auto add = [&](Pixel px, int first) {
    for (int ch = first; ch < first + 4; ++ch) {
      acc += smooth_l1(pred_offsets.at(px.y, px.x, ch), gt_offsets.at(px.y, px.x, ch));
      ++count;
    }
  };
  for (const auto& line : supervised) {
    if (line.path.empty()) continue;
    add(line.start(), 0);
    add(line.end(), 4);
  }
  return count ? acc / count : 0.0;
}

double total_loss(double edge, double truncation, double bep, const LossWeights& weights) {
  return weights.alpha * edge + weights.beta * truncation + weights.gamma * bep;
}

}  // namespace edgetext
