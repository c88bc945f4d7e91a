#include "edgetext/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "edgetext/error.hpp"

namespace edgetext::io {

using nlohmann::json;

namespace {

double round9(double v) {
  if (!std::isfinite(v)) throw Error(ErrorKind::kFormat, "non-finite value cannot be serialized");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

json point_json(Point2 p) { return json::array({round9(p.x), round9(p.y)}); }

Point2 point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::kParse, "point must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json polygon_json(const TextPolygon& poly) {
  json arr = json::array();
  for (const auto& p : poly.points()) arr.push_back(point_json(p));
  return arr;
}

TextPolygon polygon_from_json(const json& j, int height, int width) {
  if (!j.is_array()) throw Error(ErrorKind::kParse, "polygon must be an array of points");
  std::vector<Point2> pts;
  pts.reserve(j.size());
  for (const auto& p : j) {
    Point2 q = point_from_json(p);
    if (width > 0) q.x = std::clamp(q.x, 0.0, static_cast<double>(width));
    if (height > 0) q.y = std::clamp(q.y, 0.0, static_cast<double>(height));
    pts.push_back(q);
  }
  return TextPolygon(std::move(pts));
}

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

std::vector<std::string> split_lines(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    std::string line(text.substr(pos, end - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string> split_commas(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

Error line_error(std::size_t line_no, const std::string& what) {
  return Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": " + what);
}

AnnotatedText parse_point_line(const std::string& line, std::size_t line_no, std::size_t point_count) {
  const auto fields = split_commas(line);
  const std::size_t needed = 2 * point_count;
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < needed; i += 2) {
    if (i + 1 >= fields.size()) {
      throw line_error(line_no, "expected " + std::to_string(needed) + " coordinates, got " +
                                    std::to_string(fields.size()));
    }
    const auto x = parse_number(fields[i]);
    const auto y = parse_number(fields[i + 1]);
    if (!x || !y) {
      std::size_t numeric = 0;
      while (numeric < fields.size() && parse_number(fields[numeric])) ++numeric;
      throw line_error(line_no, "expected " + std::to_string(needed) + " coordinates, got " +
                                    std::to_string(numeric));
    }
    pts.push_back({*x, *y});
  }
  AnnotatedText text;
  std::string transcription;
  for (std::size_t i = needed; i < fields.size(); ++i) {
    if (i > needed) transcription += ",";
    transcription += fields[i];
  }
  text.transcription = transcription;
  text.ignore = transcription.starts_with("###");
  try {
    text.polygon = TextPolygon(std::move(pts));
  } catch (const Error& e) {
    throw line_error(line_no, e.what());
  }
  return text;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t uint(int width, const char* what) {
    need(static_cast<std::size_t>(width), what);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::string_view take(std::size_t n, const char* what) {
    need(n, what);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) throw Error(ErrorKind::kFormat, std::string("truncated header: ") + what);
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

AnnotationFormat parse_format(std::string_view name) {
  if (name == "canonical-json" || name == "json") return AnnotationFormat::kCanonicalJson;
  if (name == "icdar-quad" || name == "icdar") return AnnotationFormat::kIcdarQuad;
  if (name == "poly14") return AnnotationFormat::kPoly14;
  throw Error(ErrorKind::kInvalidArgument, "unknown annotation format '" + std::string(name) + "'");
}

std::string to_json_line(const AnnotationRecord& record) {
  json texts = json::array();
  for (const auto& t : record.texts) {
    json jt = {{"polygon", polygon_json(t.polygon)},
               {"transcription", t.transcription},
               {"ignore", t.ignore}};
    if (t.reference) jt["reference"] = polygon_json(*t.reference);
    texts.push_back(std::move(jt));
  }
  const json j = {{"image_id", record.image_id},
                  {"height", record.height},
                  {"width", record.width},
                  {"texts", std::move(texts)}};
  return j.dump();
}

AnnotationRecord annotation_from_json(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, e.what());
  }
  try {
    AnnotationRecord rec;
    rec.image_id = j.at("image_id").get<std::string>();
    rec.height = j.value("height", 0);
    rec.width = j.value("width", 0);
    for (const auto& jt : j.at("texts")) {
      AnnotatedText t;
      t.polygon = polygon_from_json(jt.at("polygon"), rec.height, rec.width);
      t.transcription = jt.value("transcription", std::string());
      t.ignore = jt.value("ignore", false);
      if (jt.contains("reference")) t.reference = polygon_from_json(jt["reference"], rec.height, rec.width);
      rec.texts.push_back(std::move(t));
    }
    return rec;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, e.what());
  }
}

std::string serialize_annotations(const std::vector<AnnotationRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json_line(r);
    out += '\n';
  }
  return out;
}

std::vector<AnnotationRecord> parse_annotations_text(std::string_view text, AnnotationFormat format,
                                                     std::string_view image_id) {
  const auto lines = split_lines(text);
  if (format == AnnotationFormat::kCanonicalJson) {
    std::vector<AnnotationRecord> records;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (trim(lines[i]).empty()) continue;
      try {
        records.push_back(annotation_from_json(lines[i]));
      } catch (const Error& e) {
        throw line_error(i + 1, e.what());
      }
    }
    return records;
  }
  AnnotationRecord rec;
  rec.image_id = std::string(image_id);
  const std::size_t points = format == AnnotationFormat::kIcdarQuad ? 4 : 14;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    rec.texts.push_back(parse_point_line(lines[i], i + 1, points));
  }
  if (rec.texts.empty()) return {};
  return {rec};
}

std::vector<AnnotationRecord> parse_annotations(const std::filesystem::path& path,
                                                AnnotationFormat format) {
  return parse_annotations_text(read_file(path), format, path.stem().string());
}

std::string to_json_line(const LabelRecord& record) {
  json labels = json::array();
  for (const auto& l : record.labels) {
    json top = json::array(), bottom = json::array();
    for (double v : l.top.flat()) top.push_back(round9(v));
    for (double v : l.bottom.flat()) bottom.push_back(round9(v));
    labels.push_back({{"top", std::move(top)},
                      {"bottom", std::move(bottom)},
                      {"truncation",
                       {{"start_top", point_json(l.truncation.start_top)},
                        {"end_top", point_json(l.truncation.end_top)},
                        {"start_bottom", point_json(l.truncation.start_bottom)},
                        {"end_bottom", point_json(l.truncation.end_bottom)}}}});
  }
  const json j = {{"image_id", record.image_id},
                  {"height", record.height},
                  {"width", record.width},
                  {"mask", record.mask.to_string()},
                  {"labels", std::move(labels)}};
  return j.dump();
}

LabelRecord label_record_from_json(std::string_view line) {
  try {
    const json j = json::parse(line);
    LabelRecord rec;
    rec.image_id = j.at("image_id").get<std::string>();
    rec.height = j.value("height", 0);
    rec.width = j.value("width", 0);
    rec.mask = ParamMask::parse(j.at("mask").get<std::string>());
    for (const auto& jl : j.at("labels")) {
      CurveBoxLabel l;
      l.top = CurveParams::from_flat(rec.mask, jl.at("top").get<std::vector<double>>());
      l.bottom = CurveParams::from_flat(rec.mask, jl.at("bottom").get<std::vector<double>>());
      const auto& tp = jl.at("truncation");
      l.truncation = {point_from_json(tp.at("start_top")), point_from_json(tp.at("end_top")),
                      point_from_json(tp.at("start_bottom")), point_from_json(tp.at("end_bottom"))};
      rec.labels.push_back(std::move(l));
    }
    return rec;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, e.what());
  }
}

std::vector<LabelRecord> parse_label_file(const std::filesystem::path& path) {
  const auto lines = split_lines(read_file(path));
  std::vector<LabelRecord> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    try {
      out.push_back(label_record_from_json(lines[i]));
    } catch (const Error& e) {
      throw line_error(i + 1, e.what());
    }
  }
  return out;
}

std::string serialize_labels(const std::vector<LabelRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json_line(r);
    out += '\n';
  }
  return out;
}

bool operator==(const TensorFile& a, const TensorFile& b) {
  return a.dims == b.dims && a.channel_names == b.channel_names && a.values.size() == b.values.size() &&
         std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(float)) == 0;
}

std::string encode_tensor(const TensorFile& tensor) {
  std::uint64_t count = 1;
  for (auto d : tensor.dims) count *= d;
  if (count != tensor.values.size()) {
    throw Error(ErrorKind::kFormat, "payload holds " + std::to_string(tensor.values.size()) +
                                        " values, dims need " + std::to_string(count));
  }
  std::string out(kTensorMagic.begin(), kTensorMagic.end());
  put_u32(out, kTensorVersion);
  put_u32(out, static_cast<std::uint32_t>(tensor.dims.size()));
  for (auto d : tensor.dims) put_u64(out, d);
  put_u32(out, static_cast<std::uint32_t>(tensor.channel_names.size()));
  for (const auto& name : tensor.channel_names) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
  }
  for (float v : tensor.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

TensorFile decode_tensor(std::string_view bytes) {
  Reader in(bytes);
  const auto magic = in.take(4, "magic");
  if (magic != std::string_view(kTensorMagic.data(), kTensorMagic.size())) {
    throw Error(ErrorKind::kFormat, "bad magic (expected EDGT)");
  }
  const auto version = in.uint(4, "version");
  if (version != kTensorVersion) {
    throw Error(ErrorKind::kFormat, "unsupported tensor version " + std::to_string(version));
  }
  const auto rank = in.uint(4, "rank");
  if (rank > 16) throw Error(ErrorKind::kFormat, "rank " + std::to_string(rank) + " too large");
  TensorFile t;
  std::uint64_t count = 1;
  for (std::uint64_t i = 0; i < rank; ++i) {
    const auto d = in.uint(8, "dims");
    if (d != 0 && count > (std::uint64_t{1} << 40) / d) throw Error(ErrorKind::kFormat, "dims too large");
    count *= d;
    t.dims.push_back(d);
  }
  const auto names = in.uint(4, "channel name count");
  if (names != 0 && (rank == 0 || names != t.dims.back())) {
    throw Error(ErrorKind::kFormat, "channel names must match the last dimension");
  }
  for (std::uint64_t i = 0; i < names; ++i) {
    const auto len = in.uint(4, "channel name length");
    t.channel_names.emplace_back(in.take(static_cast<std::size_t>(len), "channel name"));
  }
  if (in.remaining() != count * sizeof(float)) {
    throw Error(ErrorKind::kFormat, "payload length " + std::to_string(in.remaining()) +
                                        " bytes, dims need " + std::to_string(count * sizeof(float)));
  }
  t.values.resize(static_cast<std::size_t>(count));
  for (auto& v : t.values) v = std::bit_cast<float>(static_cast<std::uint32_t>(in.uint(4, "payload")));
  return t;
}

void write_tensor(const TensorFile& tensor, const std::filesystem::path& path) {
  write_file_atomic(path, encode_tensor(tensor));
}

TensorFile read_tensor(const std::filesystem::path& path) {
  try {
    return decode_tensor(read_file(path));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kFormat) throw;
    throw Error(ErrorKind::kFormat, path.string() + ": " + e.what());
  }
}

TensorFile to_tensor(const Raster& raster, std::vector<std::string> channel_names) {
  TensorFile t;
  t.dims = {static_cast<std::uint64_t>(raster.height()), static_cast<std::uint64_t>(raster.width())};
  if (raster.channels() != 1 || !channel_names.empty()) t.dims.push_back(static_cast<std::uint64_t>(raster.channels()));
  t.channel_names = std::move(channel_names);
  t.values.assign(raster.data().begin(), raster.data().end());
  return t;
}

Raster to_raster(const TensorFile& tensor) {
  if (tensor.dims.size() != 2 && tensor.dims.size() != 3) {
    throw Error(ErrorKind::kShapeMismatch, "raster tensors are HxW or HxWxC");
  }
  const int channels = tensor.dims.size() == 3 ? static_cast<int>(tensor.dims[2]) : 1;
  Raster r(static_cast<int>(tensor.dims[0]), static_cast<int>(tensor.dims[1]), channels);
  std::copy(tensor.values.begin(), tensor.values.end(), r.data().begin());
  return r;
}

namespace {

std::vector<std::string> param_channel_names(const ParamMask& mask) {
  std::vector<std::string> names;
  for (const char* edge : {"top", "bottom"}) {
    for (int d : mask.degrees()) names.push_back(std::string(edge) + ":theta" + std::to_string(d));
    if (mask.has_constant()) names.push_back(std::string(edge) + ":c");
  }
  return names;
}

}  // namespace

void write_label_maps(const LabelMaps& maps, const ParamMask& mask, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_tensor(to_tensor(maps.concentric), dir / "concentric.edgt");
  write_tensor(to_tensor(maps.edge_heat), dir / "edge_heat.edgt");
  write_tensor(to_tensor(maps.trunc_offsets, {"tp_s_t.dx", "tp_s_t.dy", "tp_s_b.dx", "tp_s_b.dy",
                                              "tp_e_t.dx", "tp_e_t.dy", "tp_e_b.dx", "tp_e_b.dy"}),
               dir / "trunc_offsets.edgt");
  write_tensor(to_tensor(maps.edge_params, param_channel_names(mask)), dir / "edge_params.edgt");
}

LabelMaps read_label_maps(const std::filesystem::path& dir) {
  LabelMaps maps;
  maps.concentric = to_raster(read_tensor(dir / "concentric.edgt"));
  maps.edge_heat = to_raster(read_tensor(dir / "edge_heat.edgt"));
  maps.trunc_offsets = to_raster(read_tensor(dir / "trunc_offsets.edgt"));
  maps.edge_params = to_raster(read_tensor(dir / "edge_params.edgt"));
  return maps;
}

QualityTier tier_for_iou(double iou) {
  if (iou >= 0.7) return QualityTier::kHigh;
  if (iou >= 0.5) return QualityTier::kMedium;
  return QualityTier::kLow;
}

const char* tier_name(QualityTier tier) {
  switch (tier) {
    case QualityTier::kGroundTruth: return "gt";
    case QualityTier::kHigh: return "high";
    case QualityTier::kMedium: return "medium";
    case QualityTier::kLow: return "low";
  }
  return "low";
}

const char* tier_color(QualityTier tier) {
  switch (tier) {
    case QualityTier::kGroundTruth: return "#00c000";
    case QualityTier::kHigh: return "#0050ff";
    case QualityTier::kMedium: return "#ffc800";
    case QualityTier::kLow: return "#ff0000";
  }
  return "#ff0000";
}

std::string render_svg(int height, int width, const std::vector<SvgPolygon>& polygons) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  for (const auto& poly : polygons) {
    if (poly.points.empty()) continue;
    out << "  <path class=\"" << tier_name(poly.tier) << "\" fill=\"none\" stroke=\"" << tier_color(poly.tier)
        << "\" stroke-width=\"1.5\" d=\"";
    for (std::size_t i = 0; i < poly.points.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%.3f %.3f ", i == 0 ? "M" : "L", poly.points[i].x, poly.points[i].y);
      out << buf;
    }
    out << "Z\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_svg(int height, int width, const std::vector<SvgPolygon>& polygons,
               const std::filesystem::path& path) {
  write_file_atomic(path, render_svg(height, width, polygons));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorKind::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace edgetext::io
