#include "edgetext/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "edgetext/encoder.hpp"
#include "edgetext/error.hpp"

namespace edgetext {

MatchResult match_detections(std::span<const TextPolygon> preds, std::span<const TextPolygon> gts,
                             double iou_threshold, const IouOptions& iou_options) {
  std::vector<MatchedPair> candidates;
  for (std::size_t p = 0; p < preds.size(); ++p) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double iou = polygon_iou(preds[p], gts[g], iou_options).value;
      if (iou >= iou_threshold && iou > 0.0) candidates.push_back({p, g, iou});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const MatchedPair& a, const MatchedPair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.gt < b.gt;
  });
  std::vector<bool> pred_used(preds.size(), false), gt_used(gts.size(), false);
  MatchResult result;
  for (const auto& c : candidates) {
    if (pred_used[c.pred] || gt_used[c.gt]) continue;
    pred_used[c.pred] = gt_used[c.gt] = true;
    result.pairs.push_back(c);
  }
  result.tp = result.pairs.size();
  result.fp = preds.size() - result.tp;
  result.fn = gts.size() - result.tp;
  return result;
}

DetectionScores precision_recall_hmean(std::size_t tp, std::size_t fp, std::size_t fn) {
  DetectionScores s;
  if (tp + fp > 0) s.precision = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) s.recall = 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (s.precision + s.recall > 0.0) {
    s.hmean = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

DetectionScores precision_recall_hmean(const MatchResult& m) {
  return precision_recall_hmean(m.tp, m.fp, m.fn);
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace

FitReport fit_report(std::span<const TextPolygon> corpus, std::span<const ParamMask> settings,
                     const FitOptions& options, std::span<const TextPolygon> references) {
  if (corpus.empty()) throw Error(ErrorKind::kInvalidArgument, "fit report needs a non-empty corpus");
  if (!references.empty() && references.size() != corpus.size()) {
    throw Error(ErrorKind::kShapeMismatch, "reference count differs from corpus size");
  }
  FitReport report;
  for (const ParamMask& mask : settings) {
    FitRow row;
    row.setting = mask.to_string();
    std::vector<double> ious;
    ious.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      try {
        const CurveBoxLabel label = encode_text(corpus[i], mask, options.points_per_edge);
        const Reconstruction rec = reconstruct_curve_box(label, options.reconstruction);
        const TextPolygon& target = references.empty() ? corpus[i] : references[i];
        ious.push_back(polygon_iou(rec.polygon, target, options.iou).value);
      } catch (const Error&) {
        ++row.failures;
      }
    }
    row.samples = ious.size();
    if (!ious.empty()) {
      row.mean_iou = std::accumulate(ious.begin(), ious.end(), 0.0) / static_cast<double>(ious.size());
      row.median_iou = median(std::move(ious));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace edgetext
