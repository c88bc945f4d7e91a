#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "edgetext/error.hpp"
#include "edgetext/io.hpp"
#include "edgetext/synth.hpp"

using namespace edgetext;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "edgetext_io_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("icdar-quad lines") {
  auto recs = io::parse_annotations_text("0,0,10,0,10,2,0,2,hello\n", io::AnnotationFormat::kIcdarQuad);
  REQUIRE(recs.size() == 1);
  REQUIRE(recs[0].texts.size() == 1);
  CHECK(recs[0].texts[0].polygon.size() == 4);
  CHECK(recs[0].texts[0].transcription == "hello");
  CHECK_FALSE(recs[0].texts[0].ignore);

  recs = io::parse_annotations_text("0,0,10,0,10,2,0,2,###\n", io::AnnotationFormat::kIcdarQuad);
  CHECK(recs[0].texts[0].ignore);

  // Transcriptions may contain commas.
  recs = io::parse_annotations_text("0,0,10,0,10,2,0,2,a,b\n", io::AnnotationFormat::kIcdarQuad);
  CHECK(recs[0].texts[0].transcription == "a,b");

  CHECK(io::parse_annotations_text("", io::AnnotationFormat::kIcdarQuad).empty());
  try {
    io::parse_annotations_text("0,0,10,0,10,2,0,2,x\n0,0,zz,0,10,2,0,2,y\n", io::AnnotationFormat::kIcdarQuad);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("poly14 lines") {
  std::string line;
  for (int i = 0; i < 7; ++i) line += std::to_string(i * 10) + ",0,";
  for (int i = 6; i >= 0; --i) line += std::to_string(i * 10) + ",8" + (i ? "," : "");
  auto recs = io::parse_annotations_text(line + "\n", io::AnnotationFormat::kPoly14);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].texts[0].polygon.size() == 14);

  const std::string short_line = line.substr(0, line.rfind(','));
  try {
    io::parse_annotations_text(line + "\n" + short_line + "\n", io::AnnotationFormat::kPoly14);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kParse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("canonical json round trip") {
  synth::Rng rng(6);
  synth::Placement place;
  place.center = {200, 150};
  std::vector<io::AnnotationRecord> records;
  for (int i = 0; i < 5; ++i) {
    io::AnnotationRecord rec{"img" + std::to_string(i), 400, 500, {}};
    for (int j = 0; j < i; ++j) {
      const auto r = synth::noisy_rectangle(rng, 7, 1.0, place);
      rec.texts.push_back({r.polygon, j % 2 ? "w\"o\\rd" : "", j == 2, r.reference});
    }
    records.push_back(rec);
  }
  const std::string once = io::serialize_annotations(records);
  const fs::path path = scratch("corpus.jsonl");
  io::write_file_atomic(path, once);
  const auto parsed = io::parse_annotations(path, io::AnnotationFormat::kCanonicalJson);
  REQUIRE(parsed.size() == records.size());
  CHECK(io::serialize_annotations(parsed) == once);
  CHECK(io::parse_annotations_text(io::serialize_annotations(parsed), io::AnnotationFormat::kCanonicalJson) ==
        parsed);
  CHECK(parsed[3].texts[2].ignore);
  CHECK(parsed[3].texts[1].transcription == "w\"o\\rd");
  CHECK(parsed[2].texts[0].polygon.points()[0].x ==
        doctest::Approx(records[2].texts[0].polygon.points()[0].x).epsilon(1e-8));
}

TEST_CASE("canonical json rejects malformed lines") {
  CHECK_THROWS_AS(io::parse_annotations_text("{\"image_id\": 3}\n", io::AnnotationFormat::kCanonicalJson), Error);
  CHECK_THROWS_AS(io::parse_annotations_text("{nope\n", io::AnnotationFormat::kCanonicalJson), Error);
  CHECK_THROWS_AS(io::parse_format("xml"), Error);
}

TEST_CASE("label records round trip") {
  synth::Rng rng(10);
  synth::Placement place;
  place.center = {300, 300};
  io::LabelRecord rec{"a", 600, 600, ParamMask::default_mask(), {}};
  for (int i = 0; i < 3; ++i) rec.labels.push_back(encode_text(synth::sinusoid_ribbon(rng, 7, place).polygon));
  const std::string line = io::to_json_line(rec);
  const io::LabelRecord back = io::label_record_from_json(line);
  CHECK(io::to_json_line(back) == line);
  CHECK(back.labels.size() == 3);
  CHECK(back.mask == rec.mask);
}

TEST_CASE("tensor examples") {
  io::TensorFile t{{2, 2}, {}, {0, 1, 2, 3}};
  const fs::path path = scratch("t.edgt");
  io::write_tensor(t, path);
  CHECK(io::read_tensor(path) == t);
  const std::string bytes = io::read_file(path);
  CHECK(bytes.substr(0, 4) == "EDGT");
  float last;
  std::memcpy(&last, bytes.data() + bytes.size() - 4, 4);
  CHECK(last == 3.0f);

  std::string truncated = bytes.substr(0, bytes.size() - 3);
  try {
    io::decode_tensor(truncated);
    FAIL("expected a payload length error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kFormat);
    CHECK(std::string(e.what()).find("payload length") != std::string::npos);
  }

  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(io::decode_tensor(bad), Error);
  CHECK_THROWS_AS(io::decode_tensor("EDG"), Error);

  Raster offsets(5, 6, 8);
  for (std::size_t i = 0; i < offsets.data().size(); ++i) offsets.data()[i] = 0.25f * float(i) - 3.0f;
  const io::TensorFile ot = io::to_tensor(offsets, {"a", "b", "c", "d", "e", "f", "g", "h"});
  const io::TensorFile back = io::decode_tensor(io::encode_tensor(ot));
  CHECK(back == ot);
  CHECK(back.dims == std::vector<std::uint64_t>{5, 6, 8});
  CHECK(io::to_raster(back) == offsets);
}

TEST_CASE("tensor fuzz keeps payload bits") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> rank(1, 4), dim(1, 7);
  std::uniform_int_distribution<std::uint32_t> bits;
  for (int trial = 0; trial < 200; ++trial) {
    io::TensorFile t;
    std::size_t n = 1;
    for (int r = rank(rng); r > 0; --r) {
      t.dims.push_back(dim(rng));
      n *= t.dims.back();
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t b = bits(rng);
      float f;
      std::memcpy(&f, &b, 4);
      t.values.push_back(f);
    }
    const std::string enc = io::encode_tensor(t);
    const io::TensorFile back = io::decode_tensor(enc);
    CHECK(back == t);
    CHECK(io::encode_tensor(back) == enc);
  }
}

TEST_CASE("label maps directory round trip") {
  synth::Rng rng(2);
  const auto texts = synth::two_instance_scene(rng, 128, 128);
  const RenderedScene scene = render_label_maps(texts, 128, 128);
  const fs::path dir = scratch("maps");
  io::write_label_maps(scene.maps, ParamMask::default_mask(), dir);
  const LabelMaps back = io::read_label_maps(dir);
  CHECK(back.concentric == scene.maps.concentric);
  CHECK(back.edge_heat == scene.maps.edge_heat);
  CHECK(back.trunc_offsets == scene.maps.trunc_offsets);
  CHECK(back.edge_params == scene.maps.edge_params);
}

TEST_CASE("svg tiers") {
  CHECK(io::tier_for_iou(0.8) == io::QualityTier::kHigh);
  CHECK(io::tier_for_iou(0.7) == io::QualityTier::kHigh);
  CHECK(io::tier_for_iou(0.6) == io::QualityTier::kMedium);
  CHECK(io::tier_for_iou(0.5) == io::QualityTier::kMedium);
  CHECK(io::tier_for_iou(0.2) == io::QualityTier::kLow);

  const std::string empty = io::render_svg(100, 200, {});
  CHECK(empty.find("<svg") != std::string::npos);
  CHECK(empty.find("</svg>") != std::string::npos);
  CHECK(empty.find("<path") == std::string::npos);

  const std::string one = io::render_svg(100, 200, {{{{0, 0}, {10, 0}, {10, 5}}, io::tier_for_iou(0.8)}});
  CHECK(one.find("class=\"high\"") != std::string::npos);
}
