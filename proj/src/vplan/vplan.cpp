#include "reqflow/vplan/vplan.hpp"

#include "reqflow/error.hpp"
#include "reqflow/text.hpp"
#include "reqflow/xml.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <numeric>

namespace reqflow::vplan {

using rmt::ItemKind;
using rmt::ReviewState;
using rmt::TestStatus;

MappingPattern MappingPattern::parse(std::string_view text) {
    if (text.empty()) fail(ErrorKind::validation, "empty mapping pattern");
    MappingPattern p;
    p.text_ = std::string(text);
    p.segments_ = split(text, '.');
    for (const auto& seg : p.segments_) {
        if (seg.empty()) fail(ErrorKind::validation, "mapping pattern '" + p.text_ + "' has an empty segment");
        if (seg.find('*') != std::string::npos && seg != "*" && seg != "**")
            fail(ErrorKind::validation, "mapping pattern '" + p.text_ + "' uses a wildcard inside a segment");
        if (std::any_of(seg.begin(), seg.end(), [](unsigned char c) { return std::isspace(c); }))
            fail(ErrorKind::validation, "mapping pattern '" + p.text_ + "' contains whitespace");
    }
    return p;
}

namespace {

bool match_from(const std::vector<std::string>& pat, std::size_t pi, const std::vector<std::string>& name, std::size_t ni) {
    if (pi == pat.size()) return ni == name.size();
    if (ni == name.size()) return false;
    if (pat[pi] == "**") {
        for (std::size_t take = 1; ni + take <= name.size(); ++take)
            if (match_from(pat, pi + 1, name, ni + take)) return true;
        return false;
    }
    if (pat[pi] != "*" && pat[pi] != name[ni]) return false;
    return match_from(pat, pi + 1, name, ni + 1);
}

}  // namespace

bool match(const MappingPattern& pattern, std::string_view entity) {
    return match_from(pattern.segments(), 0, split(entity, '.'), 0);
}

bool is_entity_name(std::string_view name) {
    const auto segs = split(name, '.');
    if (segs.size() < 2 || (segs[0] != "chk" && segs[0] != "cov")) return false;
    return std::none_of(segs.begin(), segs.end(), [](const std::string& s) { return s.empty(); });
}

namespace {

std::int64_t narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) fail(ErrorKind::validation, "coverage fraction overflows 64 bits");
    return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den <= 0 || num < 0) fail(ErrorKind::validation, "coverage fraction must be non-negative with a positive denominator");
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

Rational Rational::operator+(const Rational& o) const {
    const __int128 g = std::gcd(den_, o.den_);
    const __int128 den = static_cast<__int128>(den_) / g * o.den_;
    const __int128 num = static_cast<__int128>(num_) * (den / den_) + static_cast<__int128>(o.num_) * (den / o.den_);
    const __int128 r = std::gcd(narrow(num), narrow(den));
    return {narrow(num / r), narrow(den / r)};
}

Rational Rational::operator/(std::int64_t d) const { return {num_, narrow(static_cast<__int128>(den_) * d)}; }

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    return static_cast<__int128>(num_) * o.den_ <=> static_cast<__int128>(o.num_) * den_;
}

std::string format_percent(const Rational& r) {
    // round(10 * num / den) with halves going up, all in integers
    const __int128 tenths = (static_cast<__int128>(r.num()) * 20 + r.den()) / (static_cast<__int128>(r.den()) * 2);
    return std::to_string(static_cast<std::int64_t>(tenths / 10)) + "." + std::to_string(static_cast<int>(tenths % 10));
}

bool PlanItem::has_approved_waiver() const {
    return std::any_of(waivers.begin(), waivers.end(), [](const WaiverRef& w) { return w.state == ReviewState::approved; });
}

bool PlanItem::blocking() const { return kind == ItemKind::hwrq && verified_by.empty() && !has_approved_waiver(); }

PlanItem* VPlan::find(std::string_view id) {
    return const_cast<PlanItem*>(std::as_const(*this).find(id));
}

const PlanItem* VPlan::find(std::string_view id) const {
    for (const auto* section : {&requirements, &testcases}) {
        auto it = std::lower_bound(section->begin(), section->end(), id,
                                   [](const PlanItem& p, std::string_view v) { return p.id < v; });
        if (it != section->end() && it->id == id) return &*it;
    }
    return nullptr;
}

VPlan build_vplan(std::string_view ipvs_document) {
    const xml::Node root = xml::parse(ipvs_document);
    if (root.name != "ipvs") fail(ErrorKind::validation, "expected <ipvs> root, got <" + root.name + ">");
    VPlan plan;
    plan.config_tag = root.required_attr("config_tag");

    std::set<std::string> ids;
    std::map<std::string, WaiverRef> waivers;
    std::map<std::string, std::string> waiver_target;
    for (const auto* n : root.children_named("item")) {
        const std::string& id = n->required_attr("id");
        if (!ids.insert(id).second) fail(ErrorKind::validation, "duplicate item id '" + id + "' in ipvs");
        const auto kind = rmt::parse_item_kind(n->required_attr("kind"));
        if (!kind) fail(ErrorKind::validation, "item '" + id + "' has unknown kind");
        const auto state = rmt::parse_review_state(n->required_attr("state"));
        if (!state) fail(ErrorKind::validation, "item '" + id + "' has unknown state");
        if (*kind == ItemKind::waiver) {
            waivers[id] = {id, *state};
            waiver_target[id] = n->required_attr("target");
            continue;
        }
        PlanItem item;
        item.id = id;
        item.kind = *kind;
        item.title = n->child_text("title");
        item.origin = n->attr("origin").value_or("");
        if (auto d = n->attr("domain")) {
            item.domain = rmt::parse_domain(*d);
            if (!item.domain) fail(ErrorKind::validation, "item '" + id + "' has unknown domain");
        }
        (*kind == ItemKind::hwrq ? plan.requirements : plan.testcases).push_back(std::move(item));
    }
    auto by_id = [](const PlanItem& a, const PlanItem& b) { return a.id < b.id; };
    std::sort(plan.requirements.begin(), plan.requirements.end(), by_id);
    std::sort(plan.testcases.begin(), plan.testcases.end(), by_id);

    for (const auto* n : root.children_named("rel")) {
        const auto kind = rmt::parse_rel_kind(n->required_attr("kind"));
        if (!kind) fail(ErrorKind::validation, "relationship with unknown kind");
        const std::string& from = n->required_attr("from");
        const std::string& to = n->required_attr("to");
        PlanItem* target = plan.find(to);
        if (!target || target->kind != ItemKind::hwrq)
            fail(ErrorKind::validation, "relationship " + from + " -> " + to + " does not target a requirement");
        if (*kind == rmt::RelKind::verifies) {
            const PlanItem* tc = plan.find(from);
            if (!tc || tc->kind != ItemKind::testcase)
                fail(ErrorKind::validation, "verifies relationship from unknown testcase '" + from + "'");
            target->verified_by.push_back(from);
        } else if (*kind == rmt::RelKind::waives) {
            auto w = waivers.find(from);
            if (w == waivers.end()) fail(ErrorKind::validation, "waives relationship from unknown waiver '" + from + "'");
            target->waivers.push_back(w->second);
        }
    }
    for (auto& item : plan.requirements) {
        std::sort(item.verified_by.begin(), item.verified_by.end());
        item.verified_by.erase(std::unique(item.verified_by.begin(), item.verified_by.end()), item.verified_by.end());
        std::sort(item.waivers.begin(), item.waivers.end(), [](const WaiverRef& a, const WaiverRef& b) { return a.id < b.id; });
        item.waivers.erase(std::unique(item.waivers.begin(), item.waivers.end()), item.waivers.end());
    }
    return plan;
}

void add_mapping_pattern(VPlan& plan, std::string_view item_id, std::string_view pattern) {
    PlanItem* item = plan.find(item_id);
    if (!item) fail(ErrorKind::not_found, "no plan item '" + std::string(item_id) + "'");
    item->patterns.insert(MappingPattern::parse(pattern).str());
}

void apply_default_mappings(VPlan& plan) {
    for (auto& tc : plan.testcases) {
        if (!tc.patterns.empty()) continue;
        tc.patterns.insert("chk." + tc.id + ".**");
        tc.patterns.insert("cov." + tc.id + ".**");
    }
}

namespace {

struct Entities {
    std::map<std::string, bool> checks;  // passed in every run
    std::set<std::string> declared;
    std::set<std::string> hits;
    std::set<std::string> all;
};

Entities collect(const regression::SessionResult& session) {
    Entities e;
    for (const auto& run : session.runs) {
        for (const auto& c : run.checks) {
            auto [it, inserted] = e.checks.emplace(c.name, c.passed);
            if (!inserted) it->second = it->second && c.passed;
        }
        e.hits.insert(run.bin_hits.begin(), run.bin_hits.end());
    }
    e.declared.insert(session.declared_bins.begin(), session.declared_bins.end());
    for (const auto& [name, _] : e.checks) e.all.insert(name);
    e.all.insert(e.declared.begin(), e.declared.end());
    e.all.insert(e.hits.begin(), e.hits.end());
    return e;
}

Rollup direct_rollup(const std::vector<MappingPattern>& patterns, const Entities& e, std::set<std::string>& mapped) {
    Rollup r;
    bool any_fail = false;
    for (const auto& name : e.all) {
        if (std::none_of(patterns.begin(), patterns.end(), [&](const MappingPattern& p) { return match(p, name); })) continue;
        mapped.insert(name);
        if (auto c = e.checks.find(name); c != e.checks.end()) {
            ++r.checks;
            any_fail = any_fail || !c->second;
        }
        if (e.declared.contains(name)) {
            ++r.bins;
            if (e.hits.contains(name)) ++r.bins_hit;
        }
    }
    r.status = any_fail ? TestStatus::fail : (r.checks > 0 ? TestStatus::pass : TestStatus::not_run);
    r.no_bins = r.bins == 0;
    r.coverage = r.no_bins ? Rational(100, 1) : Rational(static_cast<std::int64_t>(100 * r.bins_hit), static_cast<std::int64_t>(r.bins));
    return r;
}

int severity(TestStatus s) { return s == TestStatus::fail ? 0 : (s == TestStatus::not_run ? 1 : 2); }

std::vector<MappingPattern> compiled(const PlanItem& item) {
    std::vector<MappingPattern> out;
    for (const auto& p : item.patterns) out.push_back(MappingPattern::parse(p));
    return out;
}

}  // namespace

VPlan rollup(VPlan plan, const regression::SessionResult& session) {
    const Entities e = collect(session);
    std::set<std::string> mapped;
    std::map<std::string, Rollup> tc_rollups;
    for (auto& tc : plan.testcases) {
        tc.rollup = direct_rollup(compiled(tc), e, mapped);
        tc_rollups[tc.id] = *tc.rollup;
    }
    for (auto& req : plan.requirements) {
        std::vector<Rollup> parts;
        for (const auto& id : req.verified_by) parts.push_back(tc_rollups.at(id));
        if (!req.patterns.empty()) parts.push_back(direct_rollup(compiled(req), e, mapped));
        Rollup r;
        if (!parts.empty()) {
            r.status = TestStatus::pass;
            r.no_bins = true;
            Rational sum;
            for (const auto& p : parts) {
                if (severity(p.status) < severity(r.status)) r.status = p.status;
                sum = sum + p.coverage;
                r.checks += p.checks;
                r.bins += p.bins;
                r.bins_hit += p.bins_hit;
                r.no_bins = r.no_bins && p.no_bins;
            }
            r.coverage = sum / static_cast<std::int64_t>(parts.size());
        }
        req.rollup = r;
    }
    plan.unmapped = e.all.size() - mapped.size();
    return plan;
}

namespace {

void write_item(xml::Writer& w, const PlanItem& item) {
    xml::Attrs attrs{{"id", item.id}, {"kind", std::string(rmt::to_string(item.kind))}, {"origin", item.origin}};
    if (item.domain) attrs.emplace_back("domain", std::string(rmt::to_string(*item.domain)));
    w.open("item", attrs);
    w.text_element("title", item.title);
    for (const auto& p : item.patterns) w.leaf("map", {{"pattern", p}});
    for (const auto& v : item.verified_by) w.leaf("verified-by", {{"id", v}});
    for (const auto& wv : item.waivers) w.leaf("waiver", {{"id", wv.id}, {"state", std::string(rmt::to_string(wv.state))}});
    if (item.rollup) {
        const Rollup& r = *item.rollup;
        xml::Attrs ra{{"status", std::string(rmt::to_string(r.status))},
                      {"coverage", format_percent(r.coverage)},
                      {"num", std::to_string(r.coverage.num())},
                      {"den", std::to_string(r.coverage.den())},
                      {"checks", std::to_string(r.checks)},
                      {"bins", std::to_string(r.bins)},
                      {"hit", std::to_string(r.bins_hit)}};
        if (r.no_bins) ra.emplace_back("no_bins", "true");
        w.leaf("rollup", ra);
    }
    w.close();
}

std::uint64_t to_u64(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const auto v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::logic_error&) {
        fail(ErrorKind::validation, std::string("bad ") + what + " value '" + s + "'");
    }
}

PlanItem read_item(const xml::Node& n) {
    PlanItem item;
    item.id = n.required_attr("id");
    const auto kind = rmt::parse_item_kind(n.required_attr("kind"));
    if (!kind || *kind == ItemKind::waiver) fail(ErrorKind::validation, "plan item '" + item.id + "' has a bad kind");
    item.kind = *kind;
    item.origin = n.attr("origin").value_or("");
    if (auto d = n.attr("domain")) item.domain = rmt::parse_domain(*d);
    item.title = n.child_text("title");
    for (const auto* m : n.children_named("map")) item.patterns.insert(MappingPattern::parse(m->required_attr("pattern")).str());
    for (const auto* v : n.children_named("verified-by")) item.verified_by.push_back(v->required_attr("id"));
    for (const auto* wv : n.children_named("waiver")) {
        const auto st = rmt::parse_review_state(wv->required_attr("state"));
        if (!st) fail(ErrorKind::validation, "waiver with unknown state");
        item.waivers.push_back({wv->required_attr("id"), *st});
    }
    if (const auto* r = n.child("rollup")) {
        Rollup ro;
        const auto st = rmt::parse_test_status(r->required_attr("status"));
        if (!st) fail(ErrorKind::validation, "rollup with unknown status");
        ro.status = *st;
        ro.coverage = Rational(static_cast<std::int64_t>(to_u64(r->required_attr("num"), "num")),
                               static_cast<std::int64_t>(to_u64(r->required_attr("den"), "den")));
        ro.checks = to_u64(r->required_attr("checks"), "checks");
        ro.bins = to_u64(r->required_attr("bins"), "bins");
        ro.bins_hit = to_u64(r->required_attr("hit"), "hit");
        ro.no_bins = r->attr("no_bins") == "true";
        item.rollup = ro;
    }
    return item;
}

}  // namespace

std::string to_xml(const VPlan& plan) {
    xml::Writer w;
    xml::Attrs root{{"config_tag", plan.config_tag}};
    if (plan.unmapped) root.emplace_back("unmapped", std::to_string(*plan.unmapped));
    w.open("vplan", root);
    w.open("section", {{"name", "Requirements"}});
    for (const auto& item : plan.requirements) write_item(w, item);
    w.close();
    w.open("section", {{"name", "Testcases"}});
    for (const auto& item : plan.testcases) write_item(w, item);
    w.close();
    return w.finish();
}

VPlan read_vplan(std::string_view document) {
    const xml::Node root = xml::parse(document);
    if (root.name != "vplan") fail(ErrorKind::validation, "expected <vplan> root, got <" + root.name + ">");
    VPlan plan;
    plan.config_tag = root.required_attr("config_tag");
    if (auto u = root.attr("unmapped")) plan.unmapped = to_u64(*u, "unmapped");
    for (const auto* section : root.children_named("section")) {
        const std::string& name = section->required_attr("name");
        if (name != "Requirements" && name != "Testcases") fail(ErrorKind::validation, "unknown vplan section '" + name + "'");
        auto& items = name == "Requirements" ? plan.requirements : plan.testcases;
        for (const auto* n : section->children_named("item")) items.push_back(read_item(*n));
    }
    std::set<std::string> ids;
    for (const auto* s : {&plan.requirements, &plan.testcases})
        for (const auto& i : *s)
            if (!ids.insert(i.id).second) fail(ErrorKind::validation, "duplicate plan item '" + i.id + "'");
    auto by_id = [](const PlanItem& a, const PlanItem& b) { return a.id < b.id; };
    std::sort(plan.requirements.begin(), plan.requirements.end(), by_id);
    std::sort(plan.testcases.begin(), plan.testcases.end(), by_id);
    return plan;
}

}  // namespace reqflow::vplan
