#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <string>
#include <string_view>

namespace pillowfold {

struct ServiceConfig {
    std::string cors_origin;  // empty: no CORS headers
    double max_optimize_seconds = 20.0;
    int max_concurrent_optimize = 2;
};

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
    std::map<std::string, std::string> headers;
};

// Stateless request handler. Routes:
//   POST /api/validate, /api/profile, /api/fold, /api/volume, /api/optimize, /api/pattern
//   GET  /api/families, /healthz
// Curve routes take a curve document with an optional "options" object.
class Service {
public:
    explicit Service(ServiceConfig config = {});

    HttpResponse handle(std::string_view method, std::string_view path, std::string_view body);

    const ServiceConfig& config() const { return config_; }

private:
    HttpResponse route(std::string_view method, std::string_view path, std::string_view body);
    HttpResponse optimize(std::string_view body);

    ServiceConfig config_;
    std::atomic<int> running_optimize_{0};
};

// Socket front end for a Service.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Port 0 binds any free port. Returns the bound port or -1.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    bool listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace pillowfold
