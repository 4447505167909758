#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "pillowfold/api.hpp"
#include "pillowfold/cli.hpp"
#include "pillowfold/io.hpp"

using namespace pillowfold;

namespace {

const std::string kSine = R"({"family":"sine-arc","sheet":{"width":1,"length":1.4142135623730951}})";
const std::string kSteep =
    R"({"family":"quad-bezier","params":{"a":0.1,"b":0.3,"h":0.2},"sheet":{"width":1,"length":1.4142135623730951}})";

std::string with_options(const std::string& doc, const std::string& options) {
    Json j = Json::parse(doc);
    j["options"] = Json::parse(options);
    return j.dump();
}

Json body(const HttpResponse& r) { return Json::parse(r.body); }

}  // namespace

TEST(Api, Healthz) {
    Service s;
    const HttpResponse r = s.handle("GET", "/healthz", "");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(r.body, "ok");
    EXPECT_EQ(r.content_type, "text/plain");
}

TEST(Api, FamiliesCatalog) {
    Service s;
    const HttpResponse r = s.handle("GET", "/api/families", "");
    ASSERT_EQ(r.status, 200);
    const Json j = body(r);
    EXPECT_EQ(j.at("count"), 7);
    EXPECT_EQ(j.at("families").size(), 7u);
    EXPECT_EQ(j.at("operation"), "families");
    EXPECT_EQ(j.at("version"), std::string(kToolVersion));
}

TEST(Api, VolumeOfSineArc) {
    Service s;
    const HttpResponse r = s.handle("POST", "/api/volume", kSine);
    ASSERT_EQ(r.status, 200);
    const Json j = body(r);
    EXPECT_NEAR(j.at("value").get<double>(), 0.278150, 1e-5);
    EXPECT_EQ(j.at("operation"), "volume");
    EXPECT_EQ(j.at("request"), Json::parse(kSine));
}

TEST(Api, ValidateAlways200) {
    Service s;
    const HttpResponse r = s.handle("POST", "/api/validate", kSteep);
    ASSERT_EQ(r.status, 200);
    EXPECT_FALSE(body(r).at("valid").get<bool>());
    EXPECT_FALSE(body(r).at("violations").empty());
}

TEST(Api, InvalidCurveIs422) {
    Service s;
    for (const char* path : {"/api/profile", "/api/fold", "/api/volume"}) {
        const HttpResponse r = s.handle("POST", path, kSteep);
        EXPECT_EQ(r.status, 422) << path;
        EXPECT_EQ(body(r).at("error").at("type"), "InvalidCurveError") << path;
    }
    EXPECT_EQ(s.handle("POST", "/api/volume", R"({"family":"rhombus","params":{"h":0.7}})").status, 422);
}

TEST(Api, MalformedBodiesAre400) {
    Service s;
    EXPECT_EQ(s.handle("POST", "/api/volume", "{not json").status, 400);
    EXPECT_EQ(s.handle("POST", "/api/volume", "[1,2]").status, 400);
    EXPECT_EQ(s.handle("POST", "/api/volume", R"({"family":"sine-arc","extra":1})").status, 400);
    const HttpResponse r = s.handle("POST", "/api/volume", with_options(kSine, R"({"colour":"red"})"));
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(body(r).at("error").at("field"), "options.colour");
    EXPECT_EQ(s.handle("POST", "/api/volume", with_options(kSine, R"({"n":"many"})")).status, 400);
}

TEST(Api, RoutingErrors) {
    Service s;
    EXPECT_EQ(s.handle("GET", "/api/nothing", "").status, 404);
    EXPECT_EQ(s.handle("GET", "/api/volume", "").status, 405);
    EXPECT_EQ(s.handle("POST", "/healthz", "").status, 405);
}

TEST(Api, ProfilePoints) {
    Service s;
    const HttpResponse r = s.handle("POST", "/api/profile", with_options(kSine, R"({"n":100})"));
    ASSERT_EQ(r.status, 200);
    const Json j = body(r);
    EXPECT_EQ(j.at("points").size(), 101u);
    EXPECT_NEAR(j.at("width").get<double>(), 0.63662, 1e-4);
}

TEST(Api, FoldPayloadAndObjExport) {
    Service s;
    const HttpResponse r = s.handle("POST", "/api/fold", with_options(kSine, R"({"resolution":50})"));
    ASSERT_EQ(r.status, 200);
    const Json j = body(r);
    const FoldedMesh m = build_mesh(CreaseCurve::sine_arc(), SheetSpec{}, 50);
    EXPECT_EQ(j.at("vertices").size(), 3 * m.vertices.size());
    EXPECT_EQ(j.at("triangles").size(), 3 * m.triangles.size());
    EXPECT_EQ(j.at("part_labels").size(), m.triangles.size());

    const HttpResponse obj =
        s.handle("POST", "/api/fold", with_options(kSine, R"({"resolution":50,"format":"obj"})"));
    ASSERT_EQ(obj.status, 200);
    EXPECT_EQ(obj.body, write_obj(m));

    const HttpResponse asym =
        s.handle("POST", "/api/fold", with_options(kSine, R"({"resolution":50,"theta1":120,"wall_depth":0.05})"));
    EXPECT_EQ(asym.status, 200);
    EXPECT_EQ(s.handle("POST", "/api/fold", with_options(kSine, R"({"resolution":50,"theta1":200})")).status, 422);
    EXPECT_EQ(s.handle("POST", "/api/fold", with_options(kSine, R"({"resolution":100000})")).status, 422);
}

TEST(Api, PatternMatchesWriter) {
    Service s;
    const HttpResponse r = s.handle("POST", "/api/pattern", with_options(kSine, R"({"scale_mm":80})"));
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.content_type, "image/svg+xml");
    EXPECT_EQ(r.body, write_svg_pattern(CreaseCurve::sine_arc(), SheetSpec{}, 80.0));
}

TEST(Api, OptimizeQuadBezier) {
    Service s;
    const HttpResponse r = s.handle("POST", "/api/optimize", R"({"family":"quad-bezier"})");
    ASSERT_EQ(r.status, 200) << r.body;
    const Json j = body(r);
    EXPECT_TRUE(j.at("converged").get<bool>());
    EXPECT_NEAR(j.at("volume").get<double>(), 0.2944, 1e-3);
    EXPECT_EQ(j.at("request"), Json::parse(R"({"family":"quad-bezier"})"));
}

TEST(Api, OptimizeFromInitialPoint) {
    Service s;
    const HttpResponse r =
        s.handle("POST", "/api/optimize", R"({"family":"quad-bezier","initial":[0.25,0.2,0.22]})");
    ASSERT_EQ(r.status, 200) << r.body;
    EXPECT_NEAR(body(r).at("volume").get<double>(), 0.2944, 1e-3);
    EXPECT_EQ(s.handle("POST", "/api/optimize", R"({"family":"quad-bezier","initial":[0.1,0.3,0.2]})").status,
              422);
}

TEST(Api, OptimizeBudgetExceededIs408) {
    Service s;
    const HttpResponse r =
        s.handle("POST", "/api/optimize", R"({"family":"polyline","segments":1000,"budget_seconds":0.0001})");
    ASSERT_EQ(r.status, 408) << r.body;
    const Json j = body(r);
    EXPECT_TRUE(j.at("timed_out").get<bool>());
    EXPECT_GT(j.at("volume").get<double>(), 0.2);
    EXPECT_EQ(j.at("params").size(), 1000u);
}

TEST(Api, OptimizeLimits) {
    Service s;
    EXPECT_EQ(s.handle("POST", "/api/optimize", R"({"family":"polyline","segments":2000})").status, 422);
    EXPECT_EQ(s.handle("POST", "/api/optimize", R"({})").status, 400);
    EXPECT_EQ(s.handle("POST", "/api/optimize", R"({"family":"circle"})").status, 400);
    EXPECT_EQ(s.handle("POST", "/api/optimize", R"({"family":"quad-bezier","budget_seconds":-1})").status, 400);

    Service full(ServiceConfig{"", 20.0, 0});
    EXPECT_EQ(full.handle("POST", "/api/optimize", R"({"family":"quad-bezier"})").status, 429);
}

TEST(Api, CorsHeaders) {
    Service s(ServiceConfig{"http://localhost:5173", 20.0, 2});
    const HttpResponse pre = s.handle("OPTIONS", "/api/volume", "");
    EXPECT_EQ(pre.status, 204);
    EXPECT_EQ(pre.headers.at("Access-Control-Allow-Origin"), "http://localhost:5173");
    EXPECT_EQ(s.handle("POST", "/api/volume", kSine).headers.at("Access-Control-Allow-Origin"),
              "http://localhost:5173");
    EXPECT_TRUE(Service().handle("GET", "/healthz", "").headers.empty());
}

TEST(Api, StatelessUnderReordering) {
    const std::vector<std::pair<std::string, std::string>> requests{
        {"/api/volume", kSine},
        {"/api/validate", kSteep},
        {"/api/profile", with_options(kSine, R"({"n":64})")},
        {"/api/volume", kSteep},
        {"/api/optimize", R"({"family":"cubic-bezier"})"}};
    Service a;
    std::vector<std::string> forward;
    for (const auto& [path, b] : requests) forward.push_back(a.handle("POST", path, b).body);
    Service b;
    for (int i = static_cast<int>(requests.size()) - 1; i >= 0; --i) {
        EXPECT_EQ(b.handle("POST", requests[i].first, requests[i].second).body, forward[i]) << requests[i].first;
    }
}

TEST(Api, MatchesCommandLine) {
    const auto dir = std::filesystem::temp_directory_path() / "pillowfold_api_parity";
    std::filesystem::create_directories(dir);
    const std::string spec =
        R"({"family":"cubic-bezier","params":{"a":0.1125,"b":0.1125,"c":0.2526,"d":0.2526,"h":0.2543},"sheet":{"width":1,"length":1.4142135623730951}})";
    const std::string path = (dir / "c.json").string();
    write_file_atomic(path, spec);
    Service s;
    for (const char* method : {"quadrature", "mesh"}) {
        std::ostringstream out, err;
        ASSERT_EQ(run_cli({"volume", "--spec", path, "--method", method, "--n", "800", "--json"}, out, err), 0);
        const double cli_value = Json::parse(out.str()).at("result").at("value").get<double>();
        const HttpResponse r = s.handle(
            "POST", "/api/volume", with_options(spec, std::string(R"({"n":800,"method":")") + method + "\"}"));
        ASSERT_EQ(r.status, 200);
        EXPECT_NEAR(body(r).at("value").get<double>(), cli_value, 1e-12) << method;
    }
    std::filesystem::remove_all(dir);
}

TEST(Api, ServesOverHttp) {
    Service s;
    HttpServer server(s);
    const int port = server.bind("127.0.0.1", 0);
    ASSERT_GT(port, 0);
    std::thread worker([&] { server.listen(); });
    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(5);
    httplib::Result health;
    for (int attempt = 0; attempt < 50 && !health; ++attempt) {
        health = client.Get("/healthz");
        if (!health) std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(health->body, "ok");
    const auto vol = client.Post("/api/volume", kSine, "application/json");
    ASSERT_TRUE(vol);
    EXPECT_EQ(vol->status, 200);
    EXPECT_NEAR(Json::parse(vol->body).at("value").get<double>(), 0.278150, 1e-5);
    const auto bad = client.Post("/api/volume", kSteep, "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 422);
    server.stop();
    worker.join();
}
