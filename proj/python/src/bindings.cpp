#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "edgetext/cli.hpp"
#include "edgetext/decoder.hpp"
#include "edgetext/encoder.hpp"
#include "edgetext/error.hpp"
#include "edgetext/io.hpp"
#include "edgetext/losses.hpp"
#include "edgetext/maps.hpp"
#include "edgetext/metrics.hpp"

namespace py = pybind11;
using namespace edgetext;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<Point2> to_points(const DoubleArray& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw py::value_error("expected an (n, 2) array of points");
  std::vector<Point2> pts(static_cast<std::size_t>(a.shape(0)));
  auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i) pts[i] = {r(i, 0), r(i, 1)};
  return pts;
}

py::array_t<double> from_points(std::span<const Point2> pts) {
  py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    w(i, 0) = pts[i].x;
    w(i, 1) = pts[i].y;
  }
  return out;
}

Raster to_raster(const FloatArray& a) {
  if (a.ndim() != 2 && a.ndim() != 3) throw py::value_error("expected an (H, W) or (H, W, C) array");
  Raster r(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1);
  std::copy(a.data(), a.data() + a.size(), r.data().begin());
  return r;
}

py::array_t<float> from_raster(const Raster& r) {
  py::array_t<float> out({r.height(), r.width(), r.channels()});
  std::copy(r.data().begin(), r.data().end(), out.mutable_data());
  return out;
}

ParamMask mask_arg(const py::object& m) {
  if (py::isinstance<ParamMask>(m)) return m.cast<ParamMask>();
  return ParamMask::parse(m.cast<std::string>());
}

py::dict maps_dict(const LabelMaps& m) {
  py::dict d;
  d["concentric"] = from_raster(m.concentric);
  d["edge_heat"] = from_raster(m.edge_heat);
  d["trunc_offsets"] = from_raster(m.trunc_offsets);
  d["edge_params"] = from_raster(m.edge_params);
  return d;
}

}  // namespace

PYBIND11_MODULE(_edgetext, m) {
  m.doc() = "Curve-box text representation toolkit";

  static py::exception<Error> error_type(m, "EdgetextError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error_type.ptr(), e.what());
    }
  });

  py::class_<ParamMask>(m, "ParamMask")
      .def(py::init(&ParamMask::parse), py::arg("text") = "2(2)+c")
      .def(py::init<int, std::vector<int>, bool>(), py::arg("highest_degree"), py::arg("degrees"),
           py::arg("constant"))
      .def_property_readonly("highest_degree", &ParamMask::highest_degree)
      .def_property_readonly("degrees", &ParamMask::degrees)
      .def_property_readonly("has_constant", &ParamMask::has_constant)
      .def_property_readonly("free_count", &ParamMask::free_count)
      .def("contains", &ParamMask::contains)
      .def("__str__", &ParamMask::to_string)
      .def("__repr__", [](const ParamMask& p) { return "ParamMask('" + p.to_string() + "')"; })
      .def(py::self == py::self);

  py::class_<CurveParams>(m, "CurveParams")
      .def(py::init([](const py::object& mask, std::vector<double> flat) {
             return CurveParams::from_flat(mask_arg(mask), flat);
           }),
           py::arg("mask"), py::arg("flat"))
      .def_readonly("mask", &CurveParams::mask)
      .def_readonly("coefficients", &CurveParams::coefficients)
      .def_readonly("constant", &CurveParams::constant)
      .def("flat", &CurveParams::flat)
      .def("coefficient", &CurveParams::coefficient)
      .def("__call__", [](const CurveParams& p, double x) { return eval_poly(p, x); })
      .def(py::self == py::self);

  py::class_<TruncationPoints>(m, "TruncationPoints")
      .def_property_readonly("start_top", [](const TruncationPoints& t) { return std::pair{t.start_top.x, t.start_top.y}; })
      .def_property_readonly("end_top", [](const TruncationPoints& t) { return std::pair{t.end_top.x, t.end_top.y}; })
      .def_property_readonly("start_bottom",
                             [](const TruncationPoints& t) { return std::pair{t.start_bottom.x, t.start_bottom.y}; })
      .def_property_readonly("end_bottom",
                             [](const TruncationPoints& t) { return std::pair{t.end_bottom.x, t.end_bottom.y}; });

  py::class_<CurveBoxLabel>(m, "CurveBoxLabel")
      .def_readonly("top", &CurveBoxLabel::top)
      .def_readonly("bottom", &CurveBoxLabel::bottom)
      .def_readonly("truncation", &CurveBoxLabel::truncation);

  m.def(
      "encode",
      [](const DoubleArray& polygon, const py::object& mask, int k) {
        return encode_text(TextPolygon(to_points(polygon)), mask_arg(mask), k);
      },
      py::arg("polygon"), py::arg("mask") = "2(2)+c", py::arg("k") = kDefaultPointsPerEdge,
      "Encode an (n, 2) text polygon (top edge, then bottom edge reversed) into a curve-box label.");

  m.def(
      "reconstruct",
      [](const CurveBoxLabel& label, int samples) {
        return from_points(reconstruct_curve_box(label, {samples}).polygon.view());
      },
      py::arg("label"), py::arg("samples") = kDefaultSamples, "Rebuild the (2N, 2) contour of a label.");

  m.def(
      "reconstruct_batch",
      [](const std::vector<CurveBoxLabel>& labels, int samples) {
        std::vector<BatchItem> items;
        {
          py::gil_scoped_release release;
          items = reconstruct_batch(labels, {samples});
        }
        py::list out;
        for (const auto& item : items) {
          if (item.ok()) {
            out.append(from_points(item.result->polygon.view()));
          } else {
            out.append(py::none());
          }
        }
        return out;
      },
      py::arg("labels"), py::arg("samples") = kDefaultSamples,
      "Reconstruct many labels; failed items come back as None.");

  m.def(
      "polygon_iou",
      [](const DoubleArray& a, const DoubleArray& b) {
        const auto pa = to_points(a), pb = to_points(b);
        return polygon_iou(std::span<const Point2>(pa), std::span<const Point2>(pb)).value;
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "pi_loss",
      [](const CurveParams& gt, const CurveParams& pred, int samples, const std::string& mode) {
        if (mode != "normalized" && mode != "literal") throw py::value_error("mode must be normalized or literal");
        return pi_loss(gt, pred, samples, mode == "literal" ? PiMode::kLiteral : PiMode::kNormalized);
      },
      py::arg("gt"), py::arg("pred"), py::arg("samples") = kDefaultPiSamples, py::arg("mode") = "normalized");
  m.def("smooth_l1", &smooth_l1, py::arg("pred"), py::arg("gt"));
  m.def(
      "dice_loss",
      [](const FloatArray& pred, const FloatArray& gt, double eps) {
        if (pred.ndim() != gt.ndim() || !std::equal(pred.shape(), pred.shape() + pred.ndim(), gt.shape())) {
          throw Error(ErrorKind::kShapeMismatch, "dice_loss: shapes differ");
        }
        return dice_loss(std::span<const float>(pred.data(), pred.size()), std::span<const float>(gt.data(), gt.size()),
                         eps);
      },
      py::arg("pred"), py::arg("gt"), py::arg("epsilon") = 1.0);
  m.def(
      "total_loss",
      [](double edge, double trun, double bep, double alpha, double beta, double gamma) {
        return total_loss(edge, trun, bep, {alpha, beta, gamma});
      },
      py::arg("edge"), py::arg("truncation"), py::arg("bep"), py::arg("alpha") = 0.5, py::arg("beta") = 0.5,
      py::arg("gamma") = 1.0);

  m.def(
      "precision_recall_hmean",
      [](std::size_t tp, std::size_t fp, std::size_t fn) {
        const DetectionScores s = precision_recall_hmean(tp, fp, fn);
        return py::make_tuple(s.precision, s.recall, s.hmean);
      },
      py::arg("tp"), py::arg("fp"), py::arg("fn"), "Percentages (P, R, H).");
  m.def(
      "match_detections",
      [](const std::vector<DoubleArray>& preds, const std::vector<DoubleArray>& gts, double iou) {
        std::vector<TextPolygon> p, g;
        for (const auto& a : preds) p.emplace_back(to_points(a));
        for (const auto& a : gts) g.emplace_back(to_points(a));
        const MatchResult r = match_detections(p, g, iou);
        return py::make_tuple(r.tp, r.fp, r.fn);
      },
      py::arg("preds"), py::arg("gts"), py::arg("iou") = kDefaultIouThreshold, "Greedy matching, returns (TP, FP, FN).");

  m.def(
      "render_label_maps",
      [](const std::vector<DoubleArray>& polygons, int height, int width, const py::object& mask, double shrink_ratio,
         double sigma_frac) {
        std::vector<TextPolygon> polys;
        for (const auto& a : polygons) polys.emplace_back(to_points(a));
        RenderConfig cfg;
        cfg.mask = mask_arg(mask);
        cfg.shrink_ratio = shrink_ratio;
        cfg.sigma_frac = sigma_frac;
        return maps_dict(render_label_maps(polys, height, width, cfg).maps);
      },
      py::arg("polygons"), py::arg("height"), py::arg("width"), py::arg("mask") = "2(2)+c",
      py::arg("shrink_ratio") = kDefaultShrinkRatio, py::arg("sigma_frac") = kDefaultSigmaFrac,
      "Render concentric, edge_heat, trunc_offsets and edge_params as (H, W, C) float32 arrays.");
  m.def(
      "decode_maps",
      [](const py::dict& maps, const py::object& mask, double conf_threshold, int min_area, int samples) {
        LabelMaps lm{to_raster(maps["concentric"].cast<FloatArray>()), to_raster(maps["edge_heat"].cast<FloatArray>()),
                     to_raster(maps["trunc_offsets"].cast<FloatArray>()),
                     to_raster(maps["edge_params"].cast<FloatArray>())};
        DecodeConfig cfg;
        cfg.mask = mask_arg(mask);
        cfg.conf_threshold = conf_threshold;
        cfg.min_area = min_area;
        cfg.reconstruction.samples = samples;
        py::list out;
        for (const auto& poly : decode_maps(lm, cfg)) out.append(from_points(poly.view()));
        return out;
      },
      py::arg("maps"), py::arg("mask") = "2(2)+c", py::arg("conf_threshold") = kDefaultConfThreshold,
      py::arg("min_area") = kDefaultMinArea, py::arg("samples") = kDefaultSamples);

  m.def(
      "write_tensor",
      [](const FloatArray& values, const std::string& path, std::vector<std::string> channel_names) {
        io::TensorFile t;
        for (py::ssize_t i = 0; i < values.ndim(); ++i) t.dims.push_back(static_cast<std::uint64_t>(values.shape(i)));
        t.channel_names = std::move(channel_names);
        t.values.assign(values.data(), values.data() + values.size());
        io::write_tensor(t, path);
      },
      py::arg("values"), py::arg("path"), py::arg("channel_names") = std::vector<std::string>{});
  m.def(
      "read_tensor",
      [](const std::string& path) {
        const io::TensorFile t = io::read_tensor(path);
        std::vector<py::ssize_t> shape(t.dims.begin(), t.dims.end());
        py::array_t<float> out(shape);
        std::copy(t.values.begin(), t.values.end(), out.mutable_data());
        return py::make_tuple(out, t.channel_names);
      },
      py::arg("path"), "Returns (array, channel_names).");

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli_main(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a subcommand in-process; returns (exit_code, stdout, stderr).");
}
