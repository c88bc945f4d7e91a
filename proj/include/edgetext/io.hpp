#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgetext/encoder.hpp"
#include "edgetext/maps.hpp"

namespace edgetext::io {

struct AnnotatedText {
  TextPolygon polygon;
  std::string transcription;
  bool ignore = false;
  // Clean shape for synthetic jittered annotations.
  std::optional<TextPolygon> reference;

  friend bool operator==(const AnnotatedText&, const AnnotatedText&) = default;
};

struct AnnotationRecord {
  std::string image_id;
  int height = 0;  // 0 when the source format carries no image size
  int width = 0;
  std::vector<AnnotatedText> texts;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

enum class AnnotationFormat { kCanonicalJson, kIcdarQuad, kPoly14 };

AnnotationFormat parse_format(std::string_view name);

// canonical-json: one AnnotationRecord object per line.
// icdar-quad: "x1,y1,...,x4,y4,transcription" per line; "###" marks ignore.
// poly14: 28 comma-separated integers per line, optionally followed by a
// transcription. The line-based formats yield one record per file, named
// after the file stem. Errors carry the 1-based line number.
std::vector<AnnotationRecord> parse_annotations(const std::filesystem::path& path,
                                                AnnotationFormat format);
std::vector<AnnotationRecord> parse_annotations_text(std::string_view text, AnnotationFormat format,
                                                     std::string_view image_id = "image");

// Floats are rounded to 9 significant digits.
std::string to_json_line(const AnnotationRecord& record);
AnnotationRecord annotation_from_json(std::string_view line);
std::string serialize_annotations(const std::vector<AnnotationRecord>& records);

// Per-image labels in the label-file format.
struct LabelRecord {
  std::string image_id;
  int height = 0;
  int width = 0;
  ParamMask mask = ParamMask::default_mask();
  std::vector<CurveBoxLabel> labels;

  friend bool operator==(const LabelRecord&, const LabelRecord&) = default;
};

std::string to_json_line(const LabelRecord& record);
LabelRecord label_record_from_json(std::string_view line);
std::vector<LabelRecord> parse_label_file(const std::filesystem::path& path);
std::string serialize_labels(const std::vector<LabelRecord>& records);

// "EDGT" tensor: magic, u32 version, u32 rank, u64 dims[rank], u32 name
// count, (u32 length, bytes) per channel name, then product(dims) float32
// values. Everything little-endian.
struct TensorFile {
  std::vector<std::uint64_t> dims;
  std::vector<std::string> channel_names;
  std::vector<float> values;

  friend bool operator==(const TensorFile& a, const TensorFile& b);
};

inline constexpr std::array<char, 4> kTensorMagic{'E', 'D', 'G', 'T'};
inline constexpr std::uint32_t kTensorVersion = 1;

std::string encode_tensor(const TensorFile& tensor);
TensorFile decode_tensor(std::string_view bytes);
void write_tensor(const TensorFile& tensor, const std::filesystem::path& path);
TensorFile read_tensor(const std::filesystem::path& path);

TensorFile to_tensor(const Raster& raster, std::vector<std::string> channel_names = {});
Raster to_raster(const TensorFile& tensor);

// concentric.edgt, edge_heat.edgt, trunc_offsets.edgt, edge_params.edgt
void write_label_maps(const LabelMaps& maps, const ParamMask& mask, const std::filesystem::path& dir);
LabelMaps read_label_maps(const std::filesystem::path& dir);

enum class QualityTier { kGroundTruth, kHigh, kMedium, kLow };

// IoU >= 0.7 high, [0.5, 0.7) medium, below 0.5 low.
QualityTier tier_for_iou(double iou);
const char* tier_name(QualityTier tier);
const char* tier_color(QualityTier tier);

struct SvgPolygon {
  std::vector<Point2> points;
  QualityTier tier = QualityTier::kHigh;
};

std::string render_svg(int height, int width, const std::vector<SvgPolygon>& polygons);
void write_svg(int height, int width, const std::vector<SvgPolygon>& polygons,
               const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace edgetext::io
