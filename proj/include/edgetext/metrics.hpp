#pragma once

#include <span>
#include <string>
#include <vector>

#include "edgetext/decoder.hpp"
#include "edgetext/geometry.hpp"

namespace edgetext {

struct MatchedPair {
  std::size_t pred = 0;
  std::size_t gt = 0;
  double iou = 0.0;
};

struct MatchResult {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<MatchedPair> pairs;
};

inline constexpr double kDefaultIouThreshold = 0.5;

// Greedy one-to-one matching by descending IoU (ties: lower pred index, then
// lower gt index). Pairs at or above the threshold are true positives.
MatchResult match_detections(std::span<const TextPolygon> preds, std::span<const TextPolygon> gts,
                             double iou_threshold = kDefaultIouThreshold,
                             const IouOptions& iou_options = {});

struct DetectionScores {
  double precision = 0.0;  // percent
  double recall = 0.0;     // percent
  double hmean = 0.0;      // percent
};

DetectionScores precision_recall_hmean(std::size_t tp, std::size_t fp, std::size_t fn);
DetectionScores precision_recall_hmean(const MatchResult& m);

struct FitRow {
  std::string setting;
  double mean_iou = 0.0;
  double median_iou = 0.0;
  std::size_t samples = 0;
  std::size_t failures = 0;
};

struct FitReport {
  std::vector<FitRow> rows;
};

struct FitOptions {
  ReconstructionConfig reconstruction;
  int points_per_edge = kDefaultPointsPerEdge;
  IouOptions iou;
};

// Encode -> reconstruct -> IoU for every polygon under each mask. When
// `references` is non-empty the IoU is taken against references[i] (e.g. the
// clean shape behind a jittered annotation) instead of corpus[i]. Polygons that
// fail to encode are counted in `failures` and left out of the statistics.
FitReport fit_report(std::span<const TextPolygon> corpus, std::span<const ParamMask> settings,
                     const FitOptions& options = {}, std::span<const TextPolygon> references = {});

}  // namespace edgetext
