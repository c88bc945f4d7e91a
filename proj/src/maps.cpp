#include "edgetext/maps.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "edgetext/error.hpp"

namespace edgetext {

Raster::Raster(int height, int width, int channels, float fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 0 || width < 0 || channels < 1) {
    throw Error(ErrorKind::kInvalidArgument, "raster dimensions must be non-negative");
  }
  data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

namespace {

struct Bounds {
  int row0, row1, col0, col1;  // inclusive, clipped to the image
  bool empty() const { return row0 > row1 || col0 > col1; }
};

Bounds pixel_bounds(std::span<const Point2> pts, int height, int width) {
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (const auto& p : pts) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  Bounds b;
  b.col0 = std::max(0, static_cast<int>(std::ceil(xmin)));
  b.col1 = std::min(width - 1, static_cast<int>(std::floor(xmax)));
  b.row0 = std::max(0, static_cast<int>(std::ceil(ymin)));
  b.row1 = std::min(height - 1, static_cast<int>(std::floor(ymax)));
  return b;
}

double polyline_distance(Point2 p, std::span<const Point2> line) {
  double best = std::numeric_limits<double>::infinity();
  if (line.size() == 1) return euclidean_distance(p, line[0]);
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    best = std::min(best, point_segment_distance(p, line[i], line[i + 1]));
  }
  return best;
}

double boundary_distance(Point2 p, std::span<const Point2> poly) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % n]));
  }
  return best;
}

constexpr std::array<int, 8> kDx{1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy{0, 1, 1, 1, 0, -1, -1, -1};

// Binary image with a one-pixel zero border; 8-neighbour helpers index into it.
class Grid {
 public:
  Grid(int height, int width) : h_(height + 2), w_(width + 2), cells_(static_cast<std::size_t>(h_) * w_, 0) {}
  std::uint8_t& at(int row, int col) { return cells_[static_cast<std::size_t>(row + 1) * w_ + col + 1]; }
  std::uint8_t at(int row, int col) const { return cells_[static_cast<std::size_t>(row + 1) * w_ + col + 1]; }

 private:
  int h_, w_;
  std::vector<std::uint8_t> cells_;
};

// Zhang-Suen thinning in place over a (height x width) grid.
void zhang_suen(Grid& g, int height, int width) {
  std::vector<std::pair<int, int>> to_clear;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      to_clear.clear();
      for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
          if (!g.at(r, c)) continue;
          // P2..P9 clockwise from north.
          const int p2 = g.at(r - 1, c), p3 = g.at(r - 1, c + 1), p4 = g.at(r, c + 1);
          const int p5 = g.at(r + 1, c + 1), p6 = g.at(r + 1, c), p7 = g.at(r + 1, c - 1);
          const int p8 = g.at(r, c - 1), p9 = g.at(r - 1, c - 1);
          const int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
          if (b < 2 || b > 6) continue;
          const std::array<int, 9> ring{p2, p3, p4, p5, p6, p7, p8, p9, p2};
          int a = 0;
          for (int i = 0; i < 8; ++i) a += (ring[i] == 0 && ring[i + 1] == 1);
          if (a != 1) continue;
          if (pass == 0) {
            if (p2 * p4 * p6 != 0 || p4 * p6 * p8 != 0) continue;
          } else {
            if (p2 * p4 * p8 != 0 || p2 * p6 * p8 != 0) continue;
          }
          to_clear.emplace_back(r, c);
        }
      }
      for (const auto& [r, c] : to_clear) g.at(r, c) = 0;
      changed = changed || !to_clear.empty();
    }
  }
}

// BFS over 8-connected set pixels of g; returns parent links and the last
// pixel reached at maximum depth (first in visiting order among ties).
struct BfsResult {
  std::vector<int> parent;
  int farthest = -1;
};

BfsResult bfs(const Grid& g, int width, int height, int source) {
  BfsResult res;
  res.parent.assign(static_cast<std::size_t>(width) * height, -2);
  std::vector<int> depth(res.parent.size(), 0);
  std::deque<int> queue{source};
  res.parent[source] = -1;
  res.farthest = source;
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    if (depth[cur] > depth[res.farthest]) res.farthest = cur;
    const int r = cur / width, c = cur % width;
    for (int n = 0; n < 8; ++n) {
      const int rr = r + kDy[n], cc = c + kDx[n];
      if (!g.at(rr, cc)) continue;
      const int id = rr * width + cc;
      if (res.parent[id] != -2) continue;
      res.parent[id] = cur;
      depth[id] = depth[cur] + 1;
      queue.push_back(id);
    }
  }
  return res;
}

}  // namespace

ConcentricMask render_concentric_mask(const TextPolygon& poly, double shrink_ratio, int height,
                                      int width) {
  if (!(shrink_ratio > 0.0 && shrink_ratio < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "shrink ratio must lie in (0, 1)");
  }
  ConcentricMask out;
  out.mask = Raster(height, width);
  const auto pts = poly.view();
  const double perimeter = polygon_perimeter(pts);
  out.offset = perimeter > 0.0
                   ? polygon_area(pts) * (1.0 - shrink_ratio * shrink_ratio) / perimeter
                   : 0.0;
  const Bounds b = pixel_bounds(pts, height, width);
  bool any = false;
  for (int r = b.row0; r <= b.row1; ++r) {
    for (int c = b.col0; c <= b.col1; ++c) {
      const Point2 p{static_cast<double>(c), static_cast<double>(r)};
      if (point_in_polygon(p, pts) && boundary_distance(p, pts) >= out.offset) {
        out.mask.at(r, c) = 1.0f;
        any = true;
      }
    }
  }
  out.collapsed = !any;
  return out;
}

Raster render_edge_heatmap(const EdgePair& edges, double sigma_frac, int height, int width) {
  if (!(sigma_frac > 0.0)) throw Error(ErrorKind::kInvalidArgument, "sigma_frac must be positive");
  if (edges.top.empty() || edges.bottom.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "edge heatmap needs both edges");
  }
  const double chord = 0.5 * (euclidean_distance(edges.top.front(), edges.top.back()) +
                              euclidean_distance(edges.bottom.front(), edges.bottom.back()));
  const double sigma = sigma_frac * chord;
  if (!(sigma > 0.0)) throw Error(ErrorKind::kDegenerateChord, "edges have zero chord length");
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  Raster heat(height, width);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const Point2 p{static_cast<double>(c), static_cast<double>(r)};
      const double d = std::min(polyline_distance(p, edges.top), polyline_distance(p, edges.bottom));
      heat.at(r, c) = static_cast<float>(std::exp(-d * d * inv_two_var));
    }
  }
  return heat;
}

Raster binarize(const Raster& map, float threshold) {
  Raster out(map.height(), map.width(), map.channels());
  auto src = map.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] >= threshold ? 1.0f : 0.0f;
  return out;
}

void write_truncation_offsets(const CurveBoxLabel& label, const CenterLine& centerline,
                              Raster& offsets) {
  if (offsets.channels() != kTruncationChannels) {
    throw Error(ErrorKind::kShapeMismatch, "truncation offsets need 8 channels");
  }
  if (centerline.path.empty()) throw Error(ErrorKind::kInvalidArgument, "empty centerline");
  const auto& tp = label.truncation;
  auto put = [&](Pixel px, int channel, Point2 target) {
    if (px.x < 0 || px.y < 0 || px.x >= offsets.width() || px.y >= offsets.height()) return;
    const Point2 d = target - px.point();
    offsets.at(px.y, px.x, channel) = static_cast<float>(d.x);
    offsets.at(px.y, px.x, channel + 1) = static_cast<float>(d.y);
  };
  put(centerline.start(), 0, tp.start_top);
  put(centerline.start(), 2, tp.start_bottom);
  put(centerline.end(), 4, tp.end_top);
  put(centerline.end(), 6, tp.end_bottom);
}

Raster render_truncation_offsets(const CurveBoxLabel& label, const CenterLine& centerline,
                                 int height, int width) {
  Raster offsets(height, width, kTruncationChannels);
  write_truncation_offsets(label, centerline, offsets);
  return offsets;
}

std::vector<CenterLine> extract_centerline(const Raster& mask) {
  const int h = mask.height(), w = mask.width();
  std::vector<int> component(static_cast<std::size_t>(h) * w, -1);
  std::vector<CenterLine> lines;
  std::vector<int> members;
  int next_id = 0;
  for (int r0 = 0; r0 < h; ++r0) {
    for (int c0 = 0; c0 < w; ++c0) {
      if (mask.at(r0, c0) <= 0.5f || component[r0 * w + c0] >= 0) continue;
      // Flood the component.
      members.clear();
      std::deque<int> queue{r0 * w + c0};
      component[r0 * w + c0] = next_id;
      int rmin = r0, rmax = r0, cmin = c0, cmax = c0;
      while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop_front();
        members.push_back(cur);
        const int r = cur / w, c = cur % w;
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
        for (int n = 0; n < 8; ++n) {
          const int rr = r + kDy[n], cc = c + kDx[n];
          if (rr < 0 || cc < 0 || rr >= h || cc >= w) continue;
          const int id = rr * w + cc;
          if (mask.at(rr, cc) <= 0.5f || component[id] >= 0) continue;
          component[id] = next_id;
          queue.push_back(id);
        }
      }
      const int lh = rmax - rmin + 1, lw = cmax - cmin + 1;
      Grid grid(lh, lw);
      for (int id : members) grid.at(id / w - rmin, id % w - cmin) = 1;
      zhang_suen(grid, lh, lw);

      int first = -1;
      for (int i = 0; i < lh * lw && first < 0; ++i) {
        if (grid.at(i / lw, i % lw)) first = i;
      }
      CenterLine line;
      line.component_area = members.size();
      if (first < 0) {
        // Thinning erased the blob: keep the member nearest its centroid.
        double cy = 0.0, cx = 0.0;
        for (int id : members) {
          cy += id / w;
          cx += id % w;
        }
        cy /= members.size();
        cx /= members.size();
        int best = members.front();
        double best_d = std::numeric_limits<double>::infinity();
        for (int id : members) {
          const double d = std::hypot(id / w - cy, id % w - cx);
          if (d < best_d) {
            best_d = d;
            best = id;
          }
        }
        line.path.push_back({best % w, best / w});
      } else {
        const int a = bfs(grid, lw, lh, first).farthest;
        const BfsResult from_a = bfs(grid, lw, lh, a);
        for (int cur = from_a.farthest; cur != -1; cur = from_a.parent[cur]) {
          line.path.push_back({cur % lw + cmin, cur / lw + rmin});
        }
        const Pixel s = line.path.front(), e = line.path.back();
        if (e.x < s.x || (e.x == s.x && e.y < s.y)) std::reverse(line.path.begin(), line.path.end());
      }
      lines.push_back(std::move(line));
      ++next_id;
    }
  }
  return lines;
}

RenderedScene render_label_maps(std::span<const TextPolygon> polys, int height, int width,
                                const RenderConfig& cfg) {
  RenderedScene scene;
  const int param_channels = 2 * cfg.mask.free_count();
  LabelMaps& maps = scene.maps;
  maps.concentric = Raster(height, width);
  maps.edge_heat = Raster(height, width);
  maps.trunc_offsets = Raster(height, width, kTruncationChannels);
  maps.edge_params = Raster(height, width, param_channels);

  std::vector<int> owner(static_cast<std::size_t>(height) * width, -1);
  for (std::size_t i = 0; i < polys.size(); ++i) {
    scene.labels.push_back(encode_text(polys[i], cfg.mask, cfg.points_per_edge));
    const ConcentricMask cm = render_concentric_mask(polys[i], cfg.shrink_ratio, height, width);
    scene.collapsed.push_back(cm.collapsed);
    const Raster heat = render_edge_heatmap(split_edges(polys[i]), cfg.sigma_frac, height, width);
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        maps.edge_heat.at(r, c) = std::max(maps.edge_heat.at(r, c), heat.at(r, c));
        if (cm.mask.at(r, c) > 0.5f && owner[r * width + c] < 0) {
          owner[r * width + c] = static_cast<int>(i);
          maps.concentric.at(r, c) = 1.0f;
          const std::vector<double> top = scene.labels[i].top.flat();
          const std::vector<double> bottom = scene.labels[i].bottom.flat();
          for (std::size_t ch = 0; ch < top.size(); ++ch) {
            maps.edge_params.at(r, c, static_cast<int>(ch)) = static_cast<float>(top[ch]);
            maps.edge_params.at(r, c, static_cast<int>(top.size() + ch)) = static_cast<float>(bottom[ch]);
          }
        }
      }
    }
  }
  for (const CenterLine& line : extract_centerline(maps.concentric)) {
    const Pixel mid = line.midpoint();
    const int i = owner[mid.y * width + mid.x];
    if (i >= 0) write_truncation_offsets(scene.labels[static_cast<std::size_t>(i)], line, maps.trunc_offsets);
  }
  return scene;
}

std::vector<TextPolygon> decode_maps(const LabelMaps& maps, const DecodeConfig& cfg) {
  const int h = maps.concentric.height(), w = maps.concentric.width();
  const int param_channels = 2 * cfg.mask.free_count();
  auto check = [&](const Raster& r, int channels, const char* name) {
    if (r.height() != h || r.width() != w || r.channels() != channels) {
      throw Error(ErrorKind::kShapeMismatch,
                  std::string(name) + " expected " + std::to_string(h) + "x" + std::to_string(w) +
                      "x" + std::to_string(channels));
    }
  };
  check(maps.concentric, 1, "concentric");
  check(maps.trunc_offsets, kTruncationChannels, "trunc_offsets");
  check(maps.edge_params, param_channels, "edge_params");

  const Raster binary = binarize(maps.concentric, static_cast<float>(cfg.conf_threshold));
  std::vector<TextPolygon> out;
  const int per_edge = cfg.mask.free_count();
  std::vector<double> values(static_cast<std::size_t>(per_edge));
  for (const CenterLine& line : extract_centerline(binary)) {
    if (line.component_area < static_cast<std::size_t>(cfg.min_area)) continue;
    const Pixel mid = line.midpoint();
    CurveBoxLabel label;
    for (int ch = 0; ch < per_edge; ++ch) values[ch] = maps.edge_params.at(mid.y, mid.x, ch);
    label.top = CurveParams::from_flat(cfg.mask, values);
    for (int ch = 0; ch < per_edge; ++ch) values[ch] = maps.edge_params.at(mid.y, mid.x, per_edge + ch);
    label.bottom = CurveParams::from_flat(cfg.mask, values);

    auto offset = [&](Pixel px, int channel) {
      return px.point() + Point2{maps.trunc_offsets.at(px.y, px.x, channel),
                                 maps.trunc_offsets.at(px.y, px.x, channel + 1)};
    };
    label.truncation = {offset(line.start(), 0), offset(line.end(), 4), offset(line.start(), 2),
                        offset(line.end(), 6)};
    const auto& tp = label.truncation;
    if (tp.start_top == tp.end_top || tp.start_bottom == tp.end_bottom) continue;
    out.push_back(reconstruct_curve_box(label, cfg.reconstruction).polygon);
  }
  return out;
}

}  // namespace edgetext
