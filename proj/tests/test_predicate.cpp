#include "reqflow/error.hpp"
#include "reqflow/predicate.hpp"
#include "reqflow/rmt/store.hpp"
#include "reqflow/flow.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace reqflow;

TEST_SUITE("predicate") {

TEST_CASE("constants and basic shapes") {
    const auto t = parse_predicate("true");
    CHECK(t.kind == Predicate::Kind::constant);
    CHECK(t.value);
    CHECK_FALSE(parse_predicate(" false ").value);

    const auto p = parse_predicate("ecc >= secded && lp_modes has \"retention\"");
    REQUIRE(p.kind == Predicate::Kind::logical_and);
    REQUIRE(p.args.size() == 2u);
    CHECK(p.args[0].kind == Predicate::Kind::compare);
    CHECK(p.args[0].cmp == CmpOp::ge);
    CHECK(p.args[1].kind == Predicate::Kind::has);
}

TEST_CASE("ecc ordering") {
    const auto p = parse_predicate("ecc >= secded");
    auto cfg = testing::make_config(EccLevel::dected, 8);
    CHECK(eval_predicate(p, cfg));
    cfg.ecc = EccLevel::sed;
    CHECK_FALSE(eval_predicate(p, cfg));
    CHECK(eval_predicate(parse_predicate("ecc < \"secded\""), cfg));
}

TEST_CASE("type and syntax errors") {
    CHECK_THROWS_AS(parse_predicate("addr_words has \"x\""), Error);
    CHECK_THROWS_AS(parse_predicate("lp_modes >= 2"), Error);
    CHECK_THROWS_AS(parse_predicate("tech > sram_hd"), Error);
    CHECK_THROWS_AS(parse_predicate("colour == red"), Error);
    CHECK_THROWS_AS(parse_predicate("lp_modes has \"hibernate\""), Error);
    CHECK_THROWS_AS(parse_predicate("data_width == wide"), Error);
    CHECK_THROWS_AS(parse_predicate("ip_name < \"x\""), Error);
    CHECK_THROWS_AS(parse_predicate("ecc == turbo"), Error);

    try {
        parse_predicate("ecc >= secded &&");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 16u);
    }
    CHECK_THROWS_AS(parse_predicate("(true"), ParseError);
    CHECK_THROWS_AS(parse_predicate("true true"), ParseError);
    CHECK_THROWS_AS(parse_predicate(""), ParseError);
}

TEST_CASE("every fixture predicate round-trips through the printer") {
    const auto store = rmt::Store::load_from(flow::default_superset_path());
    std::size_t seen = 0;
    for (const auto* item : store.items()) {
        REQUIRE(item->applicability);
        const auto p = parse_predicate(*item->applicability);
        CHECK(parse_predicate(to_string(p)) == p);
        ++seen;
    }
    CHECK(seen >= 90u);
}

TEST_CASE("printer keeps precedence") {
    const auto p = parse_predicate("!(ecc == none || tech == rram) && (data_width < 16 || addr_words >= 1024)");
    CHECK(parse_predicate(to_string(p)) == p);
    const auto q = parse_predicate("!!true");
    CHECK(parse_predicate(to_string(q)) == q);
}

TEST_CASE("De Morgan over enumerated configurations") {
    const std::vector<std::string> atoms{
        "ecc >= secded", "ecc == none", "tech == rram", "data_width <= 16", "addr_words > 1024",
        "lp_modes has \"retention\"", "lp_modes has \"shutdown\"", "ahb_bursts has \"incr8\"", "true", "false",
    };
    const auto cfgs = testing::broad_configs();
    for (const auto& a : atoms)
        for (const auto& b : atoms) {
            const auto lhs = parse_predicate("!(" + a + " && " + b + ")");
            const auto rhs = parse_predicate("!(" + a + ") || !(" + b + ")");
            const auto lhs2 = parse_predicate("!(" + a + " || " + b + ")");
            const auto rhs2 = parse_predicate("!(" + a + ") && !(" + b + ")");
            for (std::size_t i = 0; i < cfgs.size(); i += 7) {
                CHECK(eval_predicate(lhs, cfgs[i]) == eval_predicate(rhs, cfgs[i]));
                CHECK(eval_predicate(lhs2, cfgs[i]) == eval_predicate(rhs2, cfgs[i]));
            }
        }
}

TEST_CASE("evaluation is pure") {
    const auto p = parse_predicate("ecc >= sed && (tech == sram_hs || lp_modes has \"shutdown\")");
    for (const auto& c : testing::broad_configs()) CHECK(eval_predicate(p, c) == eval_predicate(p, c));
}

}  // TEST_SUITE
