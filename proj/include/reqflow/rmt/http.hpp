#pragma once

#include "reqflow/rmt/service.hpp"

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace reqflow::rmt {

/// HTTP/1.1 façade over a StoreService. Bodies are XML in the persistence
/// schema; status codes: 201 create, 200 read/update, 400 validation,
/// 404 unknown id, 409 duplicate or illegal transition.
class HttpFacade {
public:
    explicit HttpFacade(StoreService& service);
    ~HttpFacade();

    HttpFacade(const HttpFacade&) = delete;
    HttpFacade& operator=(const HttpFacade&) = delete;

    /// Binds and serves until stop(); returns false on bind failure.
    bool listen(const std::string& host, int port);
    /// Binds to an ephemeral port, returns it (or -1); serve with listen_after_bind().
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void wait_until_ready() const;
    void stop();

private:
    void install_routes();

    StoreService& service_;
    std::unique_ptr<httplib::Server> server_;
};

/// Pushes results through POST /testcases/results (one atomic batch).
class HttpSink : public ResultSink {
public:
    HttpSink(std::string host, int port) : host_(std::move(host)), port_(port) {}
    void apply(std::span<const TestResultUpdate> updates) override;

private:
    std::string host_;
    int port_;
};

std::string results_document(std::span<const TestResultUpdate> updates);
std::vector<TestResultUpdate> read_results(const xml::Node& root);

}  // namespace reqflow::rmt
