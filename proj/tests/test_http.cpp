#include "reqflow/report/report.hpp"
#include "reqflow/rmt/http.hpp"
#include "reqflow/rmt/service.hpp"
#include "reqflow/rmt/store.hpp"
#include "reqflow/xml.hpp"
#include "support.hpp"

#include <doctest.h>
#include <httplib.h>

#include <thread>

using namespace reqflow;
using namespace reqflow::rmt;

namespace {

constexpr const char* kXml = "application/xml";

/// Facade on an ephemeral loopback port for the lifetime of the object.
class LiveServer {
public:
    explicit LiveServer(StoreService& svc) : facade_(svc) {
        port_ = facade_.bind_any_port("127.0.0.1");
        REQUIRE(port_ > 0);
        thread_ = std::thread([this] { facade_.listen_after_bind(); });
        facade_.wait_until_ready();
    }
    ~LiveServer() {
        facade_.stop();
        thread_.join();
    }
    int port() const { return port_; }
    httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

private:
    HttpFacade facade_;
    int port_ = -1;
    std::thread thread_;
};

std::string hwrq_body(const std::string& pred, const std::string& id = "") {
    std::string attrs = id.empty() ? "" : " id=\"" + id + "\"";
    return "<item" + attrs + " kind=\"hwrq\" applicability=\"" + xml::escape(pred) + "\"><title>T</title><text>B</text></item>";
}

void set_state(httplib::Client& c, const std::string& id, const char* state, int expect) {
    auto r = c.Post(("/items/" + id + "/state").c_str(), std::string("<state>") + state + "</state>", kXml);
    REQUIRE(r);
    CHECK(r->status == expect);
}

}  // namespace

TEST_SUITE("http") {

TEST_CASE("items round-trip and status codes") {
    StoreService svc;
    LiveServer server(svc);
    auto c = server.client();

    auto r = c.Post("/items", hwrq_body("ecc >= secded"), kXml);
    REQUIRE(r);
    CHECK(r->status == 201);
    const auto created = read_item(xml::parse(r->body));
    CHECK(created.id == "HWRQ-001");

    r = c.Get("/items/HWRQ-001");
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(read_item(xml::parse(r->body)) == created);

    r = c.Get("/items/HWRQ-404");
    REQUIRE(r);
    CHECK(r->status == 404);

    r = c.Post("/items", hwrq_body("true", "HWRQ-001"), kXml);
    REQUIRE(r);
    CHECK(r->status == 409);

    r = c.Post("/items", hwrq_body("ecc >="), kXml);
    REQUIRE(r);
    CHECK(r->status == 400);

    r = c.Post("/items", "<item", kXml);
    REQUIRE(r);
    CHECK(r->status == 400);

    set_state(c, "HWRQ-001", "approved", 409);
    set_state(c, "HWRQ-001", "in_review", 200);
    set_state(c, "HWRQ-001", "approved", 200);
    set_state(c, "HWRQ-001", "draft", 409);
    set_state(c, "HWRQ-001", "bogus", 400);
    set_state(c, "HWRQ-404", "in_review", 404);
}

TEST_CASE("relationships, listing, derive, export and results") {
    StoreService svc;
    LiveServer server(svc);
    auto c = server.client();

    REQUIRE(c.Post("/items", hwrq_body("true"), kXml)->status == 201);
    auto r = c.Post("/items",
                    "<item kind=\"testcase\" domain=\"simulation\" applicability=\"true\"><title>Random traffic</title><text/></item>",
                    kXml);
    REQUIRE(r);
    CHECK(r->status == 201);
    r = c.Post("/relationships", "<rel from=\"TC-001\" to=\"HWRQ-001\" kind=\"verifies\"/>", kXml);
    CHECK(r->status == 201);
    r = c.Post("/relationships", "<rel from=\"HWRQ-001\" to=\"TC-001\" kind=\"verifies\"/>", kXml);
    CHECK(r->status == 400);
    for (const char* id : {"HWRQ-001", "TC-001"}) {
        set_state(c, id, "in_review", 200);
        set_state(c, id, "approved", 200);
    }

    r = c.Get("/items?kind=testcase");
    REQUIRE(r);
    CHECK(xml::parse(r->body).children_named("item").size() == 1u);
    CHECK(c.Get("/items?kind=widget")->status == 400);

    const auto cfg = testing::make_config(EccLevel::secded, 16);
    const auto tag = config_tag(cfg);
    r = c.Post("/derive", canonical_text(cfg), "text/plain");
    REQUIRE(r);
    CHECK(r->status == 200);
    const auto report = read_subset_report(xml::parse(r->body));
    CHECK(report.hwrqs == 1u);
    CHECK(report.testcases == 1u);
    CHECK(c.Post("/derive", "ip_name = x\n", "text/plain")->status == 400);

    r = c.Get(("/items?config_tag=" + tag).c_str());
    CHECK(xml::parse(r->body).children_named("item").size() == 2u);

    r = c.Get(("/export/ipvs?config_tag=" + tag).c_str());
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(r->body == svc.read([&](const Store& s) { return s.export_ipvs(tag); }));
    CHECK(c.Get("/export/ipvs?config_tag=ffff")->status == 404);

    const std::string tc = tag + "-TC-001";
    r = c.Post(("/testcases/" + tc + "/result").c_str(), "<result status=\"fail\" coverage=\"37.5\" link=\"file:///a\"/>", kXml);
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(*read_item(xml::parse(r->body)).coverage == 37.5);
    CHECK(c.Post(("/testcases/" + tag + "-HWRQ-001/result").c_str(), "<result status=\"pass\" coverage=\"1\"/>", kXml)->status == 400);
    CHECK(c.Post("/testcases/TC-404/result", "<result status=\"pass\" coverage=\"1\"/>", kXml)->status == 404);

    // Batch push through the client sink, then an atomic rejection.
    HttpSink sink("127.0.0.1", server.port());
    const std::vector<TestResultUpdate> ok{{tc, TestStatus::pass, 100, "file:///b"}};
    sink.apply(ok);
    CHECK(svc.read([&](const Store& s) { return s.get(tc).status; }) == TestStatus::pass);
    const std::vector<TestResultUpdate> bad{{tc, TestStatus::fail, 0, "file:///c"}, {"nope", TestStatus::pass, 1, ""}};
    CHECK_THROWS(sink.apply(bad));
    CHECK(svc.read([&](const Store& s) { return s.get(tc).status; }) == TestStatus::pass);
}

TEST_CASE("report push over HTTP equals in-process push") {
    StoreService svc;
    svc.write([](Store& s) {
        RmtItem h;
        h.kind = ItemKind::hwrq;
        h.title = "h";
        h.applicability = "true";
        const auto hid = s.post_item(h);
        RmtItem t = h;
        t.kind = ItemKind::testcase;
        t.domain = Domain::formal;
        const auto tid = s.post_item(t);
        s.post_relationship({tid, hid, RelKind::verifies});
        for (const auto& id : {hid, tid}) {
            s.set_review_state(id, ReviewState::in_review);
            s.set_review_state(id, ReviewState::approved);
        }
    });
    const auto cfg = testing::make_config(EccLevel::none, 8);
    const auto tag = config_tag(cfg);
    svc.write([&](Store& s) { s.derive_subset(cfg); });
    LiveServer server(svc);
    HttpSink sink("127.0.0.1", server.port());
    const std::string xml_report = "<rmt-report session=\"s\" config_tag=\"" + tag + "\" archive=\"file:///z/vplan.html\">"
                                   "<testcase id=\"" + tag + "-TC-001\" status=\"pass\" coverage=\"87.5\"/></rmt-report>";
    CHECK(report::push_results(xml_report, sink) == 1u);
    const auto item = svc.read([&](const Store& s) { return s.get(tag + "-TC-001"); });
    CHECK(item.status == TestStatus::pass);
    CHECK(*item.coverage == 87.5);
    CHECK(item.report_link == "file:///z/vplan.html");
}

TEST_CASE("concurrent clients are serialized by the single writer") {
    testing::TempDir dir("http");
    auto svc = StoreService::open(dir.str("store.xml"));
    LiveServer server(*svc);
    std::vector<std::thread> clients;
    for (int t = 0; t < 4; ++t)
        clients.emplace_back([&] {
            auto c = server.client();
            for (int i = 0; i < 8; ++i) {
                auto r = c.Post("/items", hwrq_body("true"), kXml);
                CHECK((r && r->status == 201));
                auto g = c.Get("/items?kind=hwrq");
                CHECK((g && g->status == 200));
            }
        });
    for (auto& t : clients) t.join();
    CHECK(svc->read([](const Store& s) { return s.items().size(); }) == 32u);
    CHECK(Store::load_from(dir.str("store.xml")).items().size() == 32u);
}

}  // TEST_SUITE
