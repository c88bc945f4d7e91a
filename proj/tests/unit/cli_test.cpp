#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "edgetext/cli.hpp"
#include "edgetext/io.hpp"

using namespace edgetext;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "edgetext_cli_test";
  fs::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"eval", "--pred", "x"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("synth is deterministic and eval on identical files is perfect") {
  const std::string a = scratch("a.jsonl"), b = scratch("b.jsonl");
  CHECK(run({"synth", "--kind", "sinusoid", "--count", "12", "--seed", "4", "-o", a}).code == kExitOk);
  CHECK(run({"synth", "--kind", "sinusoid", "--count", "12", "--seed", "4", "-o", b}).code == kExitOk);
  CHECK(io::read_file(a) == io::read_file(b));
  const Run e = run({"eval", "--pred", a, "--gt", b, "--iou", "0.5"});
  CHECK(e.code == kExitOk);
  CHECK(e.out.find("P=100.00 R=100.00 H=100.00") != std::string::npos);

  CHECK(run({"synth", "--kind", "sinusoid", "--count", "12", "--seed", "5", "-o", b}).code == kExitOk);
  CHECK(io::read_file(a) != io::read_file(b));
}

TEST_CASE("fit-report prints one row per setting") {
  const std::string corpus = scratch("ribbons.jsonl"), json = scratch("fit.json");
  REQUIRE(run({"synth", "--kind", "ribbon", "--count", "9", "--seed", "1", "-o", corpus}).code == kExitOk);
  const Run r = run({"fit-report", "--settings", "1(1),2(2),3(3)", "--corpus", corpus, "--json", json});
  CHECK(r.code == kExitOk);
  int lines = 0;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) lines += !line.empty();
  CHECK(lines == 4);  // header + 3 rows
  CHECK(io::read_file(json).find("\"3(3)\"") != std::string::npos);
  CHECK(run({"fit-report", "--settings", "2(9)", "--corpus", corpus}).code == kExitInput);
}

TEST_CASE("encode reports malformed annotations") {
  const std::string bad = scratch("bad.txt");
  io::write_file_atomic(bad, "0,0,10,0,10,2,0,2,ok\n1,2,3\n");
  const Run r = run({"encode", "--input", bad, "--format", "icdar-quad", "-o", scratch("bad_labels.jsonl")});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(run({"encode", "--input", scratch("missing.jsonl"), "-o", scratch("x.jsonl")}).code == kExitInput);
}

TEST_CASE("encode, decode, loss and render chain") {
  const std::string scenes = scratch("scenes.jsonl"), labels = scratch("labels.jsonl"),
                    polys = scratch("polys.jsonl"), maps = scratch("maps"), from_maps = scratch("from_maps.jsonl"),
                    svg = scratch("out.svg");
  REQUIRE(run({"synth", "--kind", "scene", "--count", "2", "--seed", "3", "--height", "256", "--width", "256", "-o",
               scenes}).code == kExitOk);
  REQUIRE(run({"encode", "--input", scenes, "-o", labels, "--maps-dir", maps}).code == kExitOk);
  REQUIRE(run({"decode", "--labels", labels, "-o", polys}).code == kExitOk);
  CHECK(run({"eval", "--pred", polys, "--gt", scenes}).out.find("H=100.00") != std::string::npos);

  REQUIRE(run({"decode", "--maps-dir", maps + "/scene-000000", "-o", from_maps}).code == kExitOk);
  CHECK(io::parse_annotations(from_maps, io::AnnotationFormat::kCanonicalJson)[0].texts.size() == 2);

  const Run l = run({"loss", "--gt", labels, "--pred", labels});
  CHECK(l.code == kExitOk);
  CHECK(l.out.find("edge=0.000000 trun=0.000000 bep=0.000000") != std::string::npos);

  CHECK(run({"render", "--polygons", polys, "--gt", scenes, "-o", svg}).code == kExitOk);
  CHECK(io::read_file(svg).find("class=\"high\"") != std::string::npos);
}
