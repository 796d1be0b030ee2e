#include "reqflow/rmt/http.hpp"

#include "reqflow/error.hpp"
#include "reqflow/text.hpp"

#include <httplib.h>

#include <charconv>

namespace reqflow::rmt {

namespace {

constexpr const char* kXml = "application/xml";

int status_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::validation: return 400;
        case ErrorKind::not_found: return 404;
        case ErrorKind::conflict: return 409;
        case ErrorKind::io: return 500;
    }
    return 500;
}

std::string error_document(const std::string& message) {
    xml::Writer w;
    w.text_element("error", message);
    return w.finish();
}

// Runs `handler`, translating store errors into status codes.
template <typename Handler>
void guarded(httplib::Response& res, Handler&& handler) {
    try {
        handler();
    } catch (const Error& e) {
        res.status = status_for(e.kind());
        res.set_content(error_document(e.what()), kXml);
    } catch (const std::exception& e) {
        res.status = 400;
        res.set_content(error_document(e.what()), kXml);
    }
}

double parse_number(const std::string& text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) fail(ErrorKind::validation, "invalid number '" + text + "'");
    return v;
}

TestResultUpdate read_result(const xml::Node& n, std::string id) {
    TestResultUpdate u;
    u.id = std::move(id);
    const std::string& status = n.required_attr("status");
    auto parsed = parse_test_status(status);
    if (!parsed) fail(ErrorKind::validation, "invalid test status '" + status + "'");
    u.status = *parsed;
    u.coverage = parse_number(n.required_attr("coverage"));
    u.report_link = n.attr("link").value_or("");
    return u;
}

}  // namespace

std::string results_document(std::span<const TestResultUpdate> updates) {
    xml::Writer w;
    w.open("results");
    for (const auto& u : updates)
        w.leaf("result", {{"id", u.id}, {"status", std::string(to_string(u.status))},
                          {"coverage", format_double(u.coverage)}, {"link", u.report_link}});
    return w.finish();
}

std::vector<TestResultUpdate> read_results(const xml::Node& root) {
    if (root.name != "results") fail(ErrorKind::validation, "expected <results>");
    std::vector<TestResultUpdate> out;
    for (const auto* n : root.children_named("result")) out.push_back(read_result(*n, n->required_attr("id")));
    return out;
}

HttpFacade::HttpFacade(StoreService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

HttpFacade::~HttpFacade() { stop(); }

bool HttpFacade::listen(const std::string& host, int port) { return server_->listen(host, port); }

int HttpFacade::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool HttpFacade::listen_after_bind() { return server_->listen_after_bind(); }

void HttpFacade::wait_until_ready() const { server_->wait_until_ready(); }

void HttpFacade::stop() {
    if (server_) server_->stop();
}

void HttpFacade::install_routes() {
    auto& srv = *server_;

    srv.Post("/items", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const RmtItem item = read_item(xml::parse(req.body));
            const RmtItem stored = service_.write([&](Store& s) { return s.get(s.post_item(item)); });
            res.status = 201;
            res.set_content(item_document(stored), kXml);
        });
    });

    srv.Get(R"(/items/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const std::string id = req.matches[1];
            res.set_content(service_.read([&](const Store& s) { return item_document(s.get(id)); }), kXml);
        });
    });

    srv.Get("/items", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            std::optional<ItemKind> kind;
            std::optional<std::string> tag;
            if (req.has_param("kind") && !req.get_param_value("kind").empty()) {
                kind = parse_item_kind(req.get_param_value("kind"));
                if (!kind) fail(ErrorKind::validation, "invalid kind '" + req.get_param_value("kind") + "'");
            }
            if (req.has_param("config_tag") && !req.get_param_value("config_tag").empty())
                tag = req.get_param_value("config_tag");
            res.set_content(service_.read([&](const Store& s) {
                xml::Writer w;
                w.open("items");
                for (const RmtItem* item : s.items(kind, tag)) write_item(w, *item);
                return w.finish();
            }),
                            kXml);
        });
    });

    srv.Post("/relationships", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const xml::Node n = xml::parse(req.body);
            auto kind = parse_rel_kind(n.required_attr("kind"));
            if (!kind) fail(ErrorKind::validation, "invalid relationship kind '" + n.required_attr("kind") + "'");
            const Relationship rel{n.required_attr("from"), n.required_attr("to"), *kind};
            service_.write([&](Store& s) { s.post_relationship(rel); });
            res.status = 201;
            res.set_content(req.body, kXml);
        });
    });

    srv.Post(R"(/items/([^/]+)/state)", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const std::string id = req.matches[1];
            const xml::Node n = xml::parse(req.body);
            const std::string text(trim(n.text));
            auto state = parse_review_state(text);
            if (!state) fail(ErrorKind::validation, "invalid review state '" + text + "'");
            const RmtItem stored = service_.write([&](Store& s) {
                s.set_review_state(id, *state);
                return s.get(id);
            });
            res.set_content(item_document(stored), kXml);
        });
    });

    srv.Post(R"(/testcases/([^/]+)/result)", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const TestResultUpdate u = read_result(xml::parse(req.body), req.matches[1]);
            const RmtItem stored = service_.write([&](Store& s) {
                s.update_test_status(u.id, u.status, u.coverage, u.report_link);
                return s.get(u.id);
            });
            res.set_content(item_document(stored), kXml);
        });
    });

    srv.Post("/testcases/results", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto updates = read_results(xml::parse(req.body));
            service_.write([&](Store& s) { s.update_test_statuses(updates); });
            xml::Writer w;
            w.leaf("pushed", {{"count", std::to_string(updates.size())}});
            res.set_content(w.finish(), kXml);
        });
    });

    srv.Post("/derive", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const IpConfiguration cfg = parse_config(req.body);
            const SubsetReport report = service_.write([&](Store& s) { return s.derive_subset(cfg); });
            res.set_content(subset_report_document(report), kXml);
        });
    });

    srv.Get("/export/ipvs", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const std::string tag = req.get_param_value("config_tag");
            res.set_content(service_.read([&](const Store& s) { return s.export_ipvs(tag); }), kXml);
        });
    });
}

void HttpSink::apply(std::span<const TestResultUpdate> updates) {
    httplib::Client client(host_, port_);
    auto res = client.Post("/testcases/results", results_document(updates), kXml);
    if (!res) fail(ErrorKind::io, "cannot reach store at " + host_ + ":" + std::to_string(port_));
    if (res->status == 404) fail(ErrorKind::not_found, "store rejected push: " + res->body);
    if (res->status != 200) fail(ErrorKind::validation, "store rejected push (HTTP " + std::to_string(res->status) + "): " + res->body);
}

}  // namespace reqflow::rmt
