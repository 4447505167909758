#include <gtest/gtest.h>

#include <filesystem>
#include <numbers>
#include <regex>
#include <sstream>

#include "pillowfold/errors.hpp"
#include "pillowfold/io.hpp"
#include "pillowfold/volume.hpp"

using namespace pillowfold;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

int count(const std::string& text, const std::string& needle) {
    int n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

std::vector<std::string> lines_starting(const std::string& text, const std::string& prefix) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(prefix, 0) == 0) out.push_back(line);
    }
    return out;
}

}  // namespace

TEST(ParseCurveSpec, SineArc) {
    const CurveSpec s = parse_curve_spec(R"({"family":"sine-arc","sheet":{"width":1,"length":1.4142135623730951}})");
    EXPECT_EQ(s.curve.family(), Family::SineArc);
    EXPECT_EQ(s.sheet.width, 1.0);
    EXPECT_EQ(s.sheet.length, kSqrt2);
    EXPECT_TRUE(s.metadata.is_null());
}

TEST(ParseCurveSpec, RhombusOutOfDomain) {
    EXPECT_THROW(parse_curve_spec(R"({"family":"rhombus","params":{"h":0.6},"sheet":{"width":1,"length":1.4142135623730951}})"),
                 DomainError);
}

TEST(ParseCurveSpec, PublishedCubic) {
    const CurveSpec s = parse_curve_spec(
        R"({"family":"cubic-bezier","params":{"a":0.1125,"b":0.1125,"c":0.2526,"d":0.2526,"h":0.2543},"sheet":{"width":1,"length":1.4142135623730951}})");
    EXPECT_TRUE(s.curve == CreaseCurve::cubic_bezier(0.1125, 0.1125, 0.2526, 0.2526, 0.2543));
    EXPECT_NEAR(volume_quadrature(s.curve, s.sheet).value, 0.295448, 5e-4);
}

TEST(ParseCurveSpec, UnknownFieldReportsLineAndPath) {
    try {
        parse_curve_spec("{\n  \"family\": \"rhombus\",\n  \"params\": {\"h\": 0.2, \"k\": 1},\n"
                         "  \"sheet\": {\"width\": 1, \"length\": 1.4}\n}");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field(), "params.k");
        EXPECT_EQ(e.line(), 3);
    }
    try {
        parse_curve_spec(R"({"family":"sine-arc","colour":"red"})");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field(), "colour");
    }
}

TEST(ParseCurveSpec, MalformedJson) {
    try {
        parse_curve_spec("{\n\"family\": \"sine-arc\",\n\"sheet\": {\"width\": 1,, }\n}");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
    }
    EXPECT_THROW(parse_curve_spec(R"({"family": 3})"), ParseError);
    EXPECT_THROW(parse_curve_spec(R"({"family":"rhombus","params":{"h":"tall"}})"), ParseError);
    EXPECT_THROW(parse_curve_spec(R"({"params":{"h":0.2}})"), ParseError);
}

TEST(ParseCurveSpec, BadSheet) {
    EXPECT_THROW(parse_curve_spec(R"({"family":"sine-arc","sheet":{"width":0,"length":1}})"), DomainError);
}

TEST(CurveSpecRoundTrip, AllFamilies) {
    const std::vector<CreaseCurve> curves{CreaseCurve::sine_arc(),
                                          CreaseCurve::rectangle(0.1924889059372216),
                                          CreaseCurve::rhombus(0.30547),
                                          CreaseCurve::arc(1.0473777),
                                          CreaseCurve::quad_bezier(0.1 / 3.0, 0.01, 0.2544),
                                          CreaseCurve::cubic_bezier(0.1125, 0.1125, 0.2526, 0.2526, 1.0 / 7.0),
                                          CreaseCurve::polyline({0.1, 0.2 / 3.0, 0.25}, false)};
    for (const auto& c : curves) {
        CurveSpec spec{c, SheetSpec{0.7, 0.7 * kSqrt2}, Json{{"name", "test"}}};
        const std::string text = write_curve_spec(spec);
        const CurveSpec back = parse_curve_spec(text);
        EXPECT_TRUE(back.curve == c) << text;
        EXPECT_EQ(back.sheet.width, spec.sheet.width);
        EXPECT_EQ(back.sheet.length, spec.sheet.length);
        EXPECT_EQ(back.metadata, spec.metadata);
        EXPECT_EQ(write_curve_spec(back), text);
    }
}

TEST(WriteObj, SingleTriangle) {
    FoldedMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.triangles = {{0, 1, 2}};
    m.part_labels = {Part::Top};
    const std::string obj = write_obj(m);
    EXPECT_EQ(lines_starting(obj, "v ").size(), 3u);
    const auto faces = lines_starting(obj, "f ");
    ASSERT_EQ(faces.size(), 1u);
    EXPECT_EQ(faces[0], "f 1 2 3");
}

TEST(WriteObj, EmptyMesh) {
    const std::string obj = write_obj(FoldedMesh{});
    EXPECT_TRUE(lines_starting(obj, "v ").empty());
    EXPECT_TRUE(lines_starting(obj, "f ").empty());
    EXPECT_FALSE(lines_starting(obj, "#").empty());
}

TEST(WriteObj, RoundTripVolume) {
    const FoldedMesh m = build_mesh(CreaseCurve::sine_arc(), SheetSpec{1.0, kSqrt2}, 100);
    const std::string obj = write_obj(m);
    const FoldedMesh back = read_obj(obj);
    ASSERT_EQ(back.vertices.size(), m.vertices.size());
    ASSERT_EQ(back.triangles, m.triangles);
    EXPECT_NEAR(volume_mesh(back).value, volume_mesh(m).value, 1e-9);
    EXPECT_EQ(write_obj(back), obj);
    for (const auto& v : lines_starting(obj, "v ")) {
        EXPECT_TRUE(std::regex_match(v, std::regex(R"(v \S+ \S+ \S+)"))) << v;
    }
}

TEST(WriteObj, Deterministic) {
    const CreaseCurve c = CreaseCurve::quad_bezier(0.2731, 0.2731, 0.2544);
    EXPECT_EQ(write_obj(build_mesh(c, SheetSpec{}, 300)), write_obj(build_mesh(c, SheetSpec{}, 300)));
}

TEST(ReadObj, RejectsGarbage) {
    EXPECT_THROW(read_obj("v 1 2\n"), ParseError);
    EXPECT_THROW(read_obj("v 0 0 0\nf 1 2 3\n"), ParseError);
}

TEST(SvgPattern, SineArcEnvelope) {
    const std::string svg = write_svg_pattern(CreaseCurve::sine_arc(), SheetSpec{1.0, kSqrt2}, 100.0);
    EXPECT_EQ(count(svg, "<rect"), 1);
    EXPECT_EQ(count(svg, "class=\"crease\""), 4);
    EXPECT_EQ(count(svg, "stroke-dasharray"), 4);
    EXPECT_NE(svg.find("width=\"200.000000mm\""), std::string::npos);
    EXPECT_NE(svg.find("height=\"141.421356mm\""), std::string::npos);
}

TEST(SvgPattern, FlatSheetStraightCreases) {
    const std::string svg = write_svg_pattern(CreaseCurve::polyline({0.0}), SheetSpec{1.0, kSqrt2}, 100.0);
    EXPECT_EQ(count(svg, "<rect"), 1);
    std::smatch m;
    std::string rest = svg;
    int creases = 0;
    const std::regex path(R"re(<path class="crease" d="([^"]*)")re");
    while (std::regex_search(rest, m, path)) {
        ++creases;
        // Every point of a straight crease has the same y.
        std::istringstream in(m[1].str());
        std::string cmd;
        double x, y, y0 = -1.0;
        while (in >> cmd >> x >> y) {
            if (y0 < 0.0) y0 = y;
            EXPECT_EQ(y, y0);
        }
        EXPECT_TRUE(y0 == 0.0 || std::abs(y0 - 141.421356) < 1e-6) << y0;
        rest = m.suffix();
    }
    EXPECT_EQ(creases, 4);
}

TEST(SvgPattern, Fig1AddsTongues) {
    const std::string svg =
        write_svg_pattern(CreaseCurve::sine_arc(), SheetSpec{1.0, kSqrt2}, 100.0, PatternLayout::Fig1);
    EXPECT_EQ(count(svg, "<rect"), 0);
    EXPECT_EQ(count(svg, "class=\"cut\""), 1);
    EXPECT_EQ(count(svg, "class=\"crease\""), 4);
    EXPECT_THROW(write_svg_pattern(CreaseCurve::quad_bezier(0.1, 0.3, 0.2), SheetSpec{}, 100.0), InvalidCurveError);
    EXPECT_THROW(write_svg_pattern(CreaseCurve::sine_arc(), SheetSpec{}, 0.0), DomainError);
}

TEST(ResultDocument, Shape) {
    const Json doc = result_document("volume", {{"n", 2000}}, {{"value", 0.5}}, "2026-01-01T00:00:00Z");
    EXPECT_EQ(doc.at("operation"), "volume");
    EXPECT_EQ(doc.at("tool").at("name"), "pillowfold");
    EXPECT_EQ(doc.at("tool").at("version"), std::string(kToolVersion));
    EXPECT_EQ(doc.at("timestamp"), "2026-01-01T00:00:00Z");
    EXPECT_EQ(doc.at("result").at("value"), 0.5);
    EXPECT_FALSE(result_document("volume", {}, {}, "").contains("timestamp"));
}

TEST(ResultDocument, FullPrecisionNumbers) {
    const Json v = to_json(volume_quadrature(CreaseCurve::sine_arc(), SheetSpec{}));
    const double value = Json::parse(v.dump()).at("value").get<double>();
    EXPECT_EQ(value, volume_quadrature(CreaseCurve::sine_arc(), SheetSpec{}).value);
}

TEST(ProfileCsv, HeaderAndRows) {
    const CrossSectionProfile p = compute_profile(CreaseCurve::sine_arc(), 10);
    const std::string csv = profile_csv(p);
    EXPECT_EQ(csv.rfind("x,z\n", 0), 0u);
    EXPECT_EQ(count(csv, "\n"), 12);
}

TEST(WriteFileAtomic, ReplacesContent) {
    const auto dir = std::filesystem::temp_directory_path() / "pillowfold_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "out.txt").string();
    write_file_atomic(path, "first");
    write_file_atomic(path, "second");
    EXPECT_EQ(read_file(path), "second");
    int entries = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) entries += e.is_regular_file() ? 1 : 0;
    EXPECT_EQ(entries, 1);
    std::filesystem::remove_all(dir);
    EXPECT_THROW(read_file((dir / "missing").string()), std::runtime_error);
}

TEST(Fixed6, Format) {
    EXPECT_EQ(fixed6(0.2781499744), "0.278150");
}
