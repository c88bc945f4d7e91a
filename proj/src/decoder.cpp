#include "edgetext/decoder.hpp"

#include <algorithm>
#include <thread>

#include "edgetext/error.hpp"

namespace edgetext {

std::vector<double> sample_grid(int samples) {
  if (samples < 2) throw Error(ErrorKind::kInvalidArgument, "need at least two samples per edge");
  std::vector<double> xs(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) xs[i] = -0.5 + static_cast<double>(i) / (samples - 1);
  xs.back() = 0.5;
  return xs;
}

NormalizedSamples sample_normalized(const CurveBoxLabel& label, const ReconstructionConfig& cfg) {
  const std::vector<double> xs = sample_grid(cfg.samples);
  NormalizedSamples out;
  out.top.reserve(xs.size());
  out.bottom.reserve(xs.size());
  for (double x : xs) {
    out.top.push_back({x, eval_poly(label.top, x)});
    out.bottom.push_back({x, eval_poly(label.bottom, x)});
  }
  return out;
}

Polyline denormalize(std::span<const Point2> points, Point2 start, Point2 end) {
  if (points.empty()) return {};
  const double theta = chord_angle(start, end);
  const double d = euclidean_distance(start, end);
  const Point2 origin = points.front();
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Polyline out;
  out.reserve(points.size());
  for (const auto& p : points) {
    // Scaled and translated point, expressed relative to start.
    const Point2 v = d * (p - origin);
    out.push_back({start.x + (c * v.x - s * v.y), start.y + (s * v.x + c * v.y)});
  }
  return out;
}

Reconstruction reconstruct_curve_box(const CurveBoxLabel& label, const ReconstructionConfig& cfg) {
  const NormalizedSamples normalized = sample_normalized(label, cfg);
  const auto& tp = label.truncation;
  Polyline contour = denormalize(normalized.top, tp.start_top, tp.end_top);
  const Polyline bottom = denormalize(normalized.bottom, tp.start_bottom, tp.end_bottom);
  contour.insert(contour.end(), bottom.rbegin(), bottom.rend());
  Reconstruction out;
  out.self_intersecting = self_intersects(contour);
  out.polygon = TextPolygon(std::move(contour));
  return out;
}

std::vector<BatchItem> reconstruct_batch(std::span<const CurveBoxLabel> labels,
                                         const ReconstructionConfig& cfg, unsigned workers) {
  std::vector<BatchItem> out(labels.size());
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        out[i].result = reconstruct_curve_box(labels[i], cfg);
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, labels.size()));
  if (workers <= 1) {
    run(0, labels.size());
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (labels.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(labels.size(), begin + chunk);
    if (begin < end) pool.emplace_back(run, begin, end);
  }
  pool.clear();
  return out;
}

}  // namespace edgetext
