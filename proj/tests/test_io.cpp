#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "support.hpp"

namespace matg {
namespace {

namespace fs = std::filesystem;

std::vector<BodyFixture> every_body() {
  std::vector<BodyFixture> out = body_fixtures();
  for (const auto& f : composite_fixtures()) {
    out.push_back({f.name + "_a", f.description, f.a});
    out.push_back({f.name + "_b", f.description, f.b});
  }
  return out;
}

TEST(Io, BodiesRoundTrip) {
  for (const auto& f : every_body()) {
    const std::string text = emit_body(f.body);
    const BodyGrid back = parse_body(text, f.name);
    EXPECT_EQ(emit_body(back), text) << f.name;
    ASSERT_EQ(back.size(), f.body.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      const auto& p = f.body.point(i);
      const auto& q = back.point(i);
      EXPECT_EQ(p.pos, q.pos);
      ASSERT_EQ(p.is_symbolic(), q.is_symbolic());
      if (p.is_symbolic()) {
        EXPECT_EQ(p.symbolic().transplant.a, q.symbolic().transplant.a) << f.name;
        EXPECT_TRUE(same_group(p.symbolic().group, q.symbolic().group)) << f.name;
      } else {
        EXPECT_EQ(p.numeric().model.pre.a, q.numeric().model.pre.a) << f.name;
      }
    }
  }
}

TEST(Io, BundledFilesMatchGenerators) {
  for (const auto& f : every_body()) {
    const fs::path path = fs::path(MATG_FIXTURES) / (f.name + ".json");
    ASSERT_TRUE(fs::exists(path)) << path;
    EXPECT_EQ(read_file(path.string()), emit_body(f.body)) << f.name;
  }
}

TEST(Io, ParseErrorsCarryLocation) {
  try {
    parse_body("{\n  \"dimension\": 2,\n  \"grid\": [1, 1],, \n}", "bad.json");
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("bad.json:3:"), std::string::npos) << e.what();
  }
  EXPECT_MATG_ERROR(parse_body(R"({"dimension": 2, "grid": [1, 1]})"), ParseError);
  EXPECT_MATG_ERROR(parse_body(R"({"dimension": 2, "grid": [2, 1], "points": [
      {"pos": [0, 0], "symbolic": {"group": {"type": "SO"}}},
      {"pos": [0, 0], "symbolic": {"group": {"type": "SO"}}}]})"),
                    ParseError);
  EXPECT_MATG_ERROR(parse_body(R"({"dimension": 2, "grid": [1, 1], "points": [
      {"pos": [0, 0], "symbolic": {"group": {"type": "icosahedral"}}}]})"),
                    UnsupportedDescriptor);
  EXPECT_MATG_ERROR(parse_body(R"({"dimension": 2, "grid": [1, 1], "points": [
      {"pos": [0, 0], "symbolic": {"group": {"type": "axis_rot", "axis": [0, 1]}}}]})"),
                    UnsupportedDescriptor);
  EXPECT_MATG_ERROR(parse_body(R"({"dimension": 4, "grid": [1, 1, 1, 1], "points": []})"), UnsupportedDescriptor);
}

TEST(Io, GroupDescriptorsRoundTrip) {
  const std::vector<MatrixGroup> groups{
      MatrixGroup::trivial(3),
      MatrixGroup::orthogonal(3),
      MatrixGroup::axis_rotation(Vec::of({0, 0, 1}), true, false),
      MatrixGroup::generated(3, {rotation3(Vec::of({0, 0, 1}), std::numbers::pi / 2)}),
      conjugate(MatrixGroup::special_orthogonal(3), Matrix::diag({1, 2, 3})),
  };
  for (const auto& g : groups) EXPECT_TRUE(same_group(group_from_json(to_json(g), 3, "g"), g)) << g.describe();
}

TEST(Io, Fnv1a64) {
  EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
  EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
  EXPECT_EQ(hex64(fnv1a64("foobar")), "85944171f73967e8");
}

TEST(Io, ReportsAndDiagramsAreDeterministic) {
  for (const auto& f : composite_fixtures()) {
    if (f.a.dim() != 2) continue;
    const CompositeReport r1 = analyze_composite(f.a, f.b), r2 = analyze_composite(f.a, f.b);
    EXPECT_EQ(composite_json(r1, f.a).dump(), composite_json(r2, f.a).dump()) << f.name;
    const std::string svg = render_plate_svg(f.a, f.b, r1);
    EXPECT_EQ(svg, render_plate_svg(f.a, f.b, r2)) << f.name;
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("composite"), std::string::npos);
    EXPECT_NE(svg.find(r1.uniform ? ">uniform" : "not uniform"), std::string::npos) << f.name;
  }
}

TEST(Io, TextRendering) {
  const json j = {{"verdict", {{"uniform", true}, {"components", 1}}}, {"warnings", json::array()}};
  const std::string text = render_text(j);
  EXPECT_NE(text.find("uniform: true"), std::string::npos) << text;
}

// --- command line ------------------------------------------------------------

int run(const std::string& args) {
  const std::string cmd = std::string(MATG_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string fixture(const std::string& name) { return (fs::path(MATG_FIXTURES) / (name + ".json")).string(); }

TEST(Cli, ExitCodes) {
  const fs::path dir = fs::path(::testing::TempDir()) / "matg_cli_test";
  fs::create_directories(dir);
  const fs::path bad = dir / "bad.json", unsupported = dir / "unsupported.json";
  std::ofstream(bad) << "{ \"dimension\": 2,";
  std::ofstream(unsupported) << R"({"dimension": 2, "grid": [1, 1], "points": [
      {"pos": [0, 0], "symbolic": {"group": {"type": "icosahedral"}}}]})";
  EXPECT_EQ(run("analyze " + fixture("plate_iso_homog")), 0);
  EXPECT_EQ(run("compose " + fixture("laminate_a") + " " + fixture("laminate_b") + " --output text"), 0);
  EXPECT_EQ(run("analyze " + bad.string()), 2);
  EXPECT_EQ(run("analyze " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(run("analyze " + unsupported.string()), 3);
  EXPECT_EQ(run("compose " + fixture("plate_iso_homog") + " " + fixture("orthotropic_block_a")), 1);
  EXPECT_EQ(run("solve-iso " + fixture("plate_iso_homog")), 3);
  EXPECT_EQ(run("fixtures"), 0);
}

TEST(Cli, WritesDiagram) {
  const fs::path svg = fs::path(::testing::TempDir()) / "matg_cli_plate.svg";
  fs::remove(svg);
  ASSERT_EQ(run("compose " + fixture("contorted_plates_a") + " " + fixture("contorted_plates_b") + " --svg " + svg.string()), 0);
  EXPECT_TRUE(fs::exists(svg));
  EXPECT_EQ(read_file(svg.string()).rfind("<svg", 0), 0u);
}

}  // namespace
}  // namespace matg
