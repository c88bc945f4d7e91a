#include "edgetext/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "edgetext/decoder.hpp"
#include "edgetext/encoder.hpp"
#include "edgetext/error.hpp"
#include "edgetext/io.hpp"
#include "edgetext/losses.hpp"
#include "edgetext/maps.hpp"
#include "edgetext/metrics.hpp"
#include "edgetext/synth.hpp"

namespace edgetext {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string input, output, format = "canonical-json", mask = "2(2)+c";
  std::string labels, maps_dir, corpus, settings = "1(1)+c,2(2)+c,3(3)+c", json_out;
  std::string pred, gt, pred_format = "canonical-json", mode = "normalized", kind = "ribbon";
  std::string polygons, image_id;
  int k = kDefaultPointsPerEdge, samples = kDefaultSamples, height = 0, width = 0;
  int min_area = kDefaultMinArea, count = 100, pi_samples = kDefaultPiSamples;
  double shrink_ratio = kDefaultShrinkRatio, sigma_frac = kDefaultSigmaFrac;
  double conf_threshold = kDefaultConfThreshold, iou = kDefaultIouThreshold, jitter = 1.0;
  double alpha = 0.5, beta = 0.5, gamma = 1.0;
  std::uint64_t seed = 0;
  bool against_reference = false;
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Splits on commas outside brackets, so "3[1,3]+c,2(2)" gives two masks.
std::vector<ParamMask> parse_settings(const std::string& text) {
  std::vector<ParamMask> out;
  int depth = 0;
  std::string cur;
  for (char ch : text) {
    if (ch == '(' || ch == '[') ++depth;
    if (ch == ')' || ch == ']') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(ParamMask::parse(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(ParamMask::parse(cur));
  if (out.empty()) throw Error(ErrorKind::kInvalidArgument, "no settings given");
  return out;
}

void fill_size(io::AnnotationRecord& rec, int height, int width) {
  if (height > 0) rec.height = height;
  if (width > 0) rec.width = width;
  if (rec.height > 0 && rec.width > 0) return;
  double xmax = 0.0, ymax = 0.0;
  for (const auto& t : rec.texts) {
    for (const auto& p : t.polygon.points()) {
      xmax = std::max(xmax, p.x);
      ymax = std::max(ymax, p.y);
    }
  }
  if (rec.height <= 0) rec.height = static_cast<int>(std::ceil(ymax)) + 1;
  if (rec.width <= 0) rec.width = static_cast<int>(std::ceil(xmax)) + 1;
}

int run_encode(const Options& o, std::ostream& out) {
  const ParamMask mask = ParamMask::parse(o.mask);
  auto records = io::parse_annotations(o.input, io::parse_format(o.format));
  std::vector<io::LabelRecord> labels;
  for (auto& rec : records) {
    io::LabelRecord lr;
    lr.image_id = rec.image_id;
    lr.height = rec.height;
    lr.width = rec.width;
    lr.mask = mask;
    std::vector<TextPolygon> polys;
    for (std::size_t i = 0; i < rec.texts.size(); ++i) {
      if (rec.texts[i].ignore) continue;
      try {
        lr.labels.push_back(encode_text(rec.texts[i].polygon, mask, o.k));
      } catch (const Error& e) {
        throw Error(e.kind(), rec.image_id + " text " + std::to_string(i) + ": " + e.what());
      }
      polys.push_back(rec.texts[i].polygon);
    }
    if (!o.maps_dir.empty()) {
      fill_size(rec, o.height, o.width);
      RenderConfig cfg;
      cfg.mask = mask;
      cfg.points_per_edge = o.k;
      cfg.shrink_ratio = o.shrink_ratio;
      cfg.sigma_frac = o.sigma_frac;
      const RenderedScene scene = render_label_maps(polys, rec.height, rec.width, cfg);
      io::write_label_maps(scene.maps, mask, fs::path(o.maps_dir) / rec.image_id);
    }
    labels.push_back(std::move(lr));
  }
  io::write_file_atomic(o.output, io::serialize_labels(labels));
  out << "encoded " << labels.size() << " image(s)\n";
  return kExitOk;
}

int run_decode(const Options& o, std::ostream& out) {
  std::vector<io::AnnotationRecord> records;
  ReconstructionConfig recon{o.samples};
  if (!o.labels.empty()) {
    for (const auto& lr : io::parse_label_file(o.labels)) {
      io::AnnotationRecord rec{lr.image_id, lr.height, lr.width, {}};
      const auto batch = reconstruct_batch(lr.labels, recon);
      for (std::size_t i = 0; i < batch.size(); ++i) {
        if (!batch[i].ok()) {
          throw Error(ErrorKind::kInvalidArgument,
                      lr.image_id + " label " + std::to_string(i) + ": " + batch[i].error);
        }
        rec.texts.push_back({batch[i].result->polygon, "", false, std::nullopt});
      }
      records.push_back(std::move(rec));
    }
  } else {
    const LabelMaps maps = io::read_label_maps(o.maps_dir);
    DecodeConfig cfg;
    cfg.mask = ParamMask::parse(o.mask);
    cfg.conf_threshold = o.conf_threshold;
    cfg.min_area = o.min_area;
    cfg.reconstruction = recon;
    io::AnnotationRecord rec{fs::path(o.maps_dir).filename().string(), maps.concentric.height(),
                             maps.concentric.width(), {}};
    for (auto& poly : decode_maps(maps, cfg)) rec.texts.push_back({std::move(poly), "", false, std::nullopt});
    records.push_back(std::move(rec));
  }
  io::write_file_atomic(o.output, io::serialize_annotations(records));
  std::size_t n = 0;
  for (const auto& r : records) n += r.texts.size();
  out << "decoded " << n << " polygon(s)\n";
  return kExitOk;
}

int run_fit_report(const Options& o, std::ostream& out) {
  const auto settings = parse_settings(o.settings);
  std::vector<TextPolygon> corpus, references;
  for (const auto& rec : io::parse_annotations(o.corpus, io::parse_format(o.format))) {
    for (const auto& t : rec.texts) {
      if (t.ignore) continue;
      corpus.push_back(t.polygon);
      references.push_back(o.against_reference && t.reference ? *t.reference : t.polygon);
    }
  }
  FitOptions opts;
  opts.reconstruction.samples = o.samples;
  opts.points_per_edge = o.k;
  const FitReport report = fit_report(corpus, settings, opts, references);
  out << "setting      mean_iou  median_iou  samples  failures\n";
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    char line[128];
    std::snprintf(line, sizeof line, "%-12s %8.4f  %10.4f  %7zu  %8zu\n", row.setting.c_str(), row.mean_iou,
                  row.median_iou, row.samples, row.failures);
    out << line;
    rows.push_back({{"setting", row.setting},
                    {"mean_iou", row.mean_iou},
                    {"median_iou", row.median_iou},
                    {"samples", row.samples},
                    {"failures", row.failures}});
  }
  if (!o.json_out.empty()) io::write_file_atomic(o.json_out, nlohmann::json{{"rows", rows}}.dump(2) + "\n");
  return kExitOk;
}

std::map<std::string, io::AnnotationRecord> by_id(std::vector<io::AnnotationRecord> records) {
  std::map<std::string, io::AnnotationRecord> out;
  for (auto& r : records) {
    const std::string id = r.image_id;
    if (!out.emplace(id, std::move(r)).second) {
      throw Error(ErrorKind::kParse, "duplicate image id '" + id + "'");
    }
  }
  return out;
}

int run_eval(const Options& o, std::ostream& out) {
  const auto preds = by_id(io::parse_annotations(o.pred, io::parse_format(o.pred_format)));
  const auto gts = by_id(io::parse_annotations(o.gt, io::parse_format(o.format)));
  std::size_t tp = 0, fp = 0, fn = 0;
  auto collect = [](const io::AnnotationRecord* rec, bool want_ignored) {
    std::vector<TextPolygon> v;
    if (rec) {
      for (const auto& t : rec->texts) {
        if (t.ignore == want_ignored) v.push_back(t.polygon);
      }
    }
    return v;
  };
  std::vector<std::string> ids;
  for (const auto& [id, _] : gts) ids.push_back(id);
  for (const auto& [id, _] : preds) {
    if (!gts.count(id)) ids.push_back(id);
  }
  for (const auto& id : ids) {
    const auto* g = gts.count(id) ? &gts.at(id) : nullptr;
    const auto* p = preds.count(id) ? &preds.at(id) : nullptr;
    const auto care = collect(g, false);
    const auto dont_care = collect(g, true);
    std::vector<TextPolygon> kept;
    // Predictions covering a don't-care region are neither hits nor misses.
    for (auto& poly : collect(p, false)) {
      bool on_ignored = false;
      for (const auto& ig : dont_care) on_ignored = on_ignored || polygon_iou(poly, ig).value >= o.iou;
      if (!on_ignored) kept.push_back(std::move(poly));
    }
    const MatchResult m = match_detections(kept, care, o.iou);
    tp += m.tp;
    fp += m.fp;
    fn += m.fn;
  }
  const DetectionScores s = precision_recall_hmean(tp, fp, fn);
  out << "TP=" << tp << " FP=" << fp << " FN=" << fn << "\n"
      << "P=" << fixed(s.precision, 2) << " R=" << fixed(s.recall, 2) << " H=" << fixed(s.hmean, 2) << "\n";
  if (!o.json_out.empty()) {
    const nlohmann::json j = {{"tp", tp}, {"fp", fp}, {"fn", fn}, {"precision", s.precision},
                              {"recall", s.recall}, {"hmean", s.hmean}};
    io::write_file_atomic(o.json_out, j.dump(2) + "\n");
  }
  return kExitOk;
}

Raster edge_supervision(std::span<const CurveBoxLabel> labels, int height, int width, double sigma_frac,
                        int samples) {
  Raster heat(height, width);
  for (const auto& l : labels) {
    const Reconstruction rec = reconstruct_curve_box(l, {samples});
    const Raster one = render_edge_heatmap(split_edges(rec.polygon), sigma_frac, height, width);
    for (std::size_t i = 0; i < heat.data().size(); ++i) {
      heat.data()[i] = std::max(heat.data()[i], one.data()[i]);
    }
  }
  return heat;
}

int run_loss(const Options& o, std::ostream& out) {
  const auto gt_records = io::parse_label_file(o.gt);
  const auto pred_records = io::parse_label_file(o.pred);
  if (gt_records.size() != pred_records.size()) {
    throw Error(ErrorKind::kShapeMismatch, "label files hold different image counts");
  }
  const PiMode mode = o.mode == "literal" ? PiMode::kLiteral : PiMode::kNormalized;
  double edge_sum = 0.0, bep_sum = 0.0;
  std::size_t edge_n = 0, bep_n = 0;
  std::vector<TruncationPoints> tp_gt, tp_pred;
  for (std::size_t i = 0; i < gt_records.size(); ++i) {
    const auto& g = gt_records[i];
    const auto& p = pred_records[i];
    if (g.labels.size() != p.labels.size()) {
      throw Error(ErrorKind::kShapeMismatch, g.image_id + ": label counts differ");
    }
    for (std::size_t j = 0; j < g.labels.size(); ++j) {
      edge_sum += 0.5 * (pi_loss(g.labels[j].top, p.labels[j].top, o.pi_samples, mode) +
                         pi_loss(g.labels[j].bottom, p.labels[j].bottom, o.pi_samples, mode));
      ++edge_n;
      tp_gt.push_back(g.labels[j].truncation);
      tp_pred.push_back(p.labels[j].truncation);
    }
    if (g.height > 0 && g.width > 0) {
      const Raster gt_heat = binarize(edge_supervision(g.labels, g.height, g.width, o.sigma_frac, o.samples),
                                      kHeatBinarizeThreshold);
      const Raster pred_heat = binarize(edge_supervision(p.labels, g.height, g.width, o.sigma_frac, o.samples),
                                        kHeatBinarizeThreshold);
      bep_sum += dice_loss(pred_heat, gt_heat);
      ++bep_n;
    }
  }
  const double l_edge = edge_n ? edge_sum / edge_n : 0.0;
  const double l_trun = truncation_loss(tp_pred, tp_gt);
  const double l_bep = bep_n ? bep_sum / bep_n : 0.0;
  const double total = total_loss(l_edge, l_trun, l_bep, {o.alpha, o.beta, o.gamma});
  out << "edge=" << fixed(l_edge, 6) << " trun=" << fixed(l_trun, 6) << " bep=" << fixed(l_bep, 6)
      << " total=" << fixed(total, 6) << "\n";
  if (!o.json_out.empty()) {
    const nlohmann::json j = {{"edge", l_edge}, {"trun", l_trun}, {"bep", l_bep}, {"total", total}};
    io::write_file_atomic(o.json_out, j.dump(2) + "\n");
  }
  return kExitOk;
}

int run_render(const Options& o, std::ostream& out) {
  const auto preds = io::parse_annotations(o.polygons, io::AnnotationFormat::kCanonicalJson);
  const io::AnnotationRecord* pred = nullptr;
  for (const auto& r : preds) {
    if (o.image_id.empty() || r.image_id == o.image_id) {
      pred = &r;
      break;
    }
  }
  std::vector<io::AnnotationRecord> gts;
  const io::AnnotationRecord* gt = nullptr;
  if (!o.gt.empty()) {
    gts = io::parse_annotations(o.gt, io::parse_format(o.format));
    for (const auto& r : gts) {
      if (pred ? r.image_id == pred->image_id : (o.image_id.empty() || r.image_id == o.image_id)) {
        gt = &r;
        break;
      }
    }
  }
  int height = o.height, width = o.width;
  if (height <= 0) height = pred ? pred->height : (gt ? gt->height : 0);
  if (width <= 0) width = pred ? pred->width : (gt ? gt->width : 0);
  if (height <= 0 || width <= 0) {
    io::AnnotationRecord bounds;
    if (pred) bounds.texts = pred->texts;
    if (gt) bounds.texts.insert(bounds.texts.end(), gt->texts.begin(), gt->texts.end());
    fill_size(bounds, height, width);
    height = bounds.height;
    width = bounds.width;
  }
  std::vector<io::SvgPolygon> shapes;
  if (gt) {
    for (const auto& t : gt->texts) shapes.push_back({t.polygon.points(), io::QualityTier::kGroundTruth});
  }
  if (pred) {
    for (const auto& t : pred->texts) {
      double best = 1.0;
      if (gt) {
        best = 0.0;
        for (const auto& g : gt->texts) best = std::max(best, polygon_iou(t.polygon, g.polygon).value);
      }
      shapes.push_back({t.polygon.points(), io::tier_for_iou(best)});
    }
  }
  io::write_svg(height, width, shapes, o.output);
  out << "wrote " << shapes.size() << " path(s) to " << o.output << "\n";
  return kExitOk;
}

int run_synth(const Options& o, std::ostream& out) {
  synth::Rng rng(o.seed);
  std::vector<io::AnnotationRecord> records;
  char id[64];
  if (o.kind == "scene") {
    const int h = o.height > 0 ? o.height : 512, w = o.width > 0 ? o.width : 512;
    for (int i = 0; i < o.count; ++i) {
      std::snprintf(id, sizeof id, "scene-%06d", i);
      io::AnnotationRecord rec{id, h, w, {}};
      for (auto& poly : synth::two_instance_scene(rng, h, w, o.k)) {
        rec.texts.push_back({std::move(poly), "", false, std::nullopt});
      }
      records.push_back(std::move(rec));
    }
  } else {
    synth::Placement place;
    place.center = {500.0, 500.0};
    place.max_angle = 0.5;
    const std::vector<ParamMask> ribbon_masks{ParamMask::parse("1(1)+c"), ParamMask::parse("2(2)+c"),
                                              ParamMask::parse("3(3)+c")};
    for (int i = 0; i < o.count; ++i) {
      synth::Ribbon r;
      if (o.kind == "ribbon") {
        r = synth::polynomial_ribbon(rng, ribbon_masks[static_cast<std::size_t>(i) % ribbon_masks.size()], o.k,
                                     place);
      } else if (o.kind == "quadratic") {
        r = synth::quadratic_ribbon(rng, o.k, place);
      } else if (o.kind == "sinusoid") {
        r = synth::sinusoid_ribbon(rng, o.k, place);
      } else if (o.kind == "noisy-rect") {
        r = synth::noisy_rectangle(rng, o.k, o.jitter, place);
      } else {
        throw Error(ErrorKind::kInvalidArgument, "unknown synth kind '" + o.kind + "'");
      }
      std::snprintf(id, sizeof id, "synth-%06d", i);
      io::AnnotatedText text{r.polygon, "", false, std::nullopt};
      if (!(r.reference == r.polygon)) text.reference = r.reference;
      records.push_back({id, 1000, 1000, {std::move(text)}});
    }
  }
  io::write_file_atomic(o.output, io::serialize_annotations(records));
  out << "wrote " << records.size() << " record(s)\n";
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Curve-box text representation toolkit", "edgetext"};
  app.require_subcommand(1);

  auto* encode = app.add_subcommand("encode", "Annotations -> curve-box labels (+ optional label maps)");
  encode->add_option("--input,-i", o.input, "Annotation file")->required();
  encode->add_option("--format", o.format, "canonical-json | icdar-quad | poly14");
  encode->add_option("--mask", o.mask, "Parameter mask, e.g. 2(2)+c");
  encode->add_option("--k", o.k, "Points per edge");
  encode->add_option("--output,-o", o.output, "Label file (JSON lines)")->required();
  encode->add_option("--maps-dir", o.maps_dir, "Write EDGT label maps under DIR/<image_id>/");
  encode->add_option("--shrink-ratio", o.shrink_ratio);
  encode->add_option("--sigma-frac", o.sigma_frac);
  encode->add_option("--height", o.height, "Image height override");
  encode->add_option("--width", o.width, "Image width override");

  auto* decode = app.add_subcommand("decode", "Labels or label maps -> polygons");
  auto* labels_opt = decode->add_option("--labels", o.labels, "Label file");
  auto* maps_opt = decode->add_option("--maps-dir", o.maps_dir, "Directory with EDGT maps");
  labels_opt->excludes(maps_opt);
  decode->add_option("--mask", o.mask, "Mask of the edge_params channels");
  decode->add_option("--samples", o.samples, "Samples per edge");
  decode->add_option("--conf-threshold", o.conf_threshold);
  decode->add_option("--min-area", o.min_area);
  decode->add_option("--output,-o", o.output, "Polygon file (canonical JSON)")->required();

  auto* fit = app.add_subcommand("fit-report", "Fitting ability of parameter settings");
  fit->add_option("--corpus", o.corpus, "Annotation corpus")->required();
  fit->add_option("--format", o.format);
  fit->add_option("--settings", o.settings, "Comma-separated masks, e.g. 1(1),2(2),3(3)");
  fit->add_option("--samples", o.samples);
  fit->add_option("--k", o.k);
  fit->add_option("--json", o.json_out, "Also write the report as JSON");
  fit->add_flag("--against-reference", o.against_reference, "Score against clean reference shapes");

  auto* eval = app.add_subcommand("eval", "Precision / recall / H-mean");
  eval->add_option("--pred", o.pred)->required();
  eval->add_option("--gt", o.gt)->required();
  eval->add_option("--iou", o.iou);
  eval->add_option("--format", o.format, "Ground-truth format");
  eval->add_option("--pred-format", o.pred_format);
  eval->add_option("--json", o.json_out);

  auto* loss = app.add_subcommand("loss", "Loss terms between two label files");
  loss->add_option("--gt", o.gt)->required();
  loss->add_option("--pred", o.pred)->required();
  loss->add_option("--pi-samples", o.pi_samples);
  loss->add_option("--samples", o.samples, "Reconstruction samples for the edge maps");
  loss->add_option("--mode", o.mode)->check(CLI::IsMember({"normalized", "literal"}));
  loss->add_option("--sigma-frac", o.sigma_frac);
  loss->add_option("--alpha", o.alpha);
  loss->add_option("--beta", o.beta);
  loss->add_option("--gamma", o.gamma);
  loss->add_option("--json", o.json_out);

  auto* render = app.add_subcommand("render", "Polygons -> SVG overlay");
  render->add_option("--polygons", o.polygons)->required();
  render->add_option("--gt", o.gt, "Ground truth for IoU quality tiers");
  render->add_option("--format", o.format, "Ground-truth format");
  render->add_option("--image-id", o.image_id);
  render->add_option("--height", o.height);
  render->add_option("--width", o.width);
  render->add_option("--output,-o", o.output)->required();

  auto* syn = app.add_subcommand("synth", "Seeded synthetic corpus");
  syn->add_option("--kind", o.kind)->check(CLI::IsMember({"ribbon", "quadratic", "sinusoid", "noisy-rect", "scene"}));
  syn->add_option("--count", o.count);
  syn->add_option("--seed", o.seed);
  syn->add_option("--k", o.k);
  syn->add_option("--jitter", o.jitter);
  syn->add_option("--height", o.height);
  syn->add_option("--width", o.width);
  syn->add_option("--output,-o", o.output)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*encode) return run_encode(o, out);
    if (*decode) {
      if (o.labels.empty() && o.maps_dir.empty()) {
        err << "error: decode needs --labels or --maps-dir\n";
        return kExitUsage;
      }
      return run_decode(o, out);
    }
    if (*fit) return run_fit_report(o, out);
    if (*eval) return run_eval(o, out);
    if (*loss) return run_loss(o, out);
    if (*render) return run_render(o, out);
    if (*syn) return run_synth(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace edgetext
