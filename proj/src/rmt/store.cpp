#include "reqflow/rmt/store.hpp"

#include "reqflow/error.hpp"
#include "reqflow/predicate.hpp"
#include "reqflow/text.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

namespace reqflow::rmt {

namespace {

std::string_view id_prefix(ItemKind kind) {
    switch (kind) {
        case ItemKind::hwrq: return "HWRQ";
        case ItemKind::testcase: return "TC";
        case ItemKind::waiver: return "WVR";
    }
    return "ITEM";
}

std::string join_states(const std::vector<ReviewState>& states) {
    std::string out;
    for (auto s : states) {
        if (!out.empty()) out += ',';
        out += to_string(s);
    }
    return out;
}

template <typename T, typename Parse>
T parse_enum(const std::string& text, Parse parse, std::string_view what) {
    auto v = parse(text);
    if (!v) fail(ErrorKind::validation, "invalid " + std::string(what) + " '" + text + "'");
    return *v;
}

double parse_coverage(const std::string& text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) fail(ErrorKind::validation, "invalid coverage '" + text + "'");
    return v;
}

}  // namespace

void write_item(xml::Writer& w, const RmtItem& item) {
    xml::Attrs attrs{{"id", item.id}, {"kind", std::string(to_string(item.kind))}, {"state", std::string(to_string(item.state))}};
    if (item.domain) attrs.emplace_back("domain", std::string(to_string(*item.domain)));
    if (item.applicability) attrs.emplace_back("applicability", *item.applicability);
    if (item.origin) attrs.emplace_back("origin", *item.origin);
    if (item.config_tag) attrs.emplace_back("config_tag", *item.config_tag);
    if (item.target) attrs.emplace_back("target", *item.target);
    w.open("item", attrs);
    w.text_element("title", item.title);
    w.text_element("text", item.text);
    if (!item.history.empty()) w.text_element("history", join_states(item.history));
    if (item.kind == ItemKind::testcase && item.is_subset()) {
        w.text_element("status", to_string(item.status));
        if (item.coverage) w.text_element("coverage", format_double(*item.coverage));
        if (!item.report_link.empty()) w.text_element("link", item.report_link);
    }
    w.close();
}

RmtItem read_item(const xml::Node& node) {
    if (node.name != "item") fail(ErrorKind::validation, "expected <item>, got <" + node.name + ">");
    RmtItem item;
    item.id = node.attr("id").value_or("");
    item.kind = parse_enum<ItemKind>(node.required_attr("kind"), parse_item_kind, "item kind");
    if (auto s = node.attr("state")) item.state = parse_enum<ReviewState>(*s, parse_review_state, "review state");
    if (auto d = node.attr("domain")) item.domain = parse_enum<Domain>(*d, parse_domain, "domain");
    item.applicability = node.attr("applicability");
    item.origin = node.attr("origin");
    item.config_tag = node.attr("config_tag");
    item.target = node.attr("target");
    item.title = node.child_text("title");
    item.text = node.child_text("text");
    if (const auto* h = node.child("history"); h && !h->text.empty())
        for (const auto& s : split(h->text, ','))
            item.history.push_back(parse_enum<ReviewState>(std::string(trim(s)), parse_review_state, "review state"));
    if (const auto* s = node.child("status")) item.status = parse_enum<TestStatus>(s->text, parse_test_status, "test status");
    if (const auto* c = node.child("coverage")) item.coverage = parse_coverage(c->text);
    item.report_link = node.child_text("link");
    return item;
}

std::string item_document(const RmtItem& item) {
    xml::Writer w;
    write_item(w, item);
    return w.finish();
}

std::string subset_report_document(const SubsetReport& r) {
    xml::Writer w;
    w.open("subset-report", {{"config_tag", r.config_tag},
                             {"hwrqs", std::to_string(r.hwrqs)},
                             {"testcases", std::to_string(r.testcases)},
                             {"waivers", std::to_string(r.waivers)}});
    for (const auto& id : r.waiver_required) w.leaf("waiver-required", {{"id", id}});
    for (const auto& id : r.skipped) w.leaf("skipped", {{"id", id}});
    return w.finish();
}

SubsetReport read_subset_report(const xml::Node& node) {
    SubsetReport r;
    r.config_tag = node.required_attr("config_tag");
    r.hwrqs = std::stoul(node.required_attr("hwrqs"));
    r.testcases = std::stoul(node.required_attr("testcases"));
    r.waivers = std::stoul(node.required_attr("waivers"));
    for (const auto* n : node.children_named("waiver-required")) r.waiver_required.push_back(n->required_attr("id"));
    for (const auto* n : node.children_named("skipped")) r.skipped.push_back(n->required_attr("id"));
    return r;
}

const RmtItem* Store::find(const std::string& id) const {
    auto it = items_.find(id);
    return it == items_.end() ? nullptr : &it->second;
}

const RmtItem& Store::get(const std::string& id) const {
    const RmtItem* item = find(id);
    if (!item) fail(ErrorKind::not_found, "unknown item '" + id + "'");
    return *item;
}

std::vector<const RmtItem*> Store::items(std::optional<ItemKind> kind, std::optional<std::string> config_tag) const {
    std::vector<const RmtItem*> out;
    for (const auto& [id, item] : items_) {
        if (kind && item.kind != *kind) continue;
        if (config_tag && item.config_tag != config_tag) continue;
        out.push_back(&item);
    }
    return out;
}

std::vector<std::string> Store::subset_tags() const {
    std::vector<std::string> out;
    for (const auto& [tag, text] : subsets_) out.push_back(tag);
    return out;
}

std::string Store::next_id(ItemKind kind) {
    int& seq = next_seq_[kind];
    for (;;) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%s-%03d", std::string(id_prefix(kind)).c_str(), ++seq);
        if (!items_.contains(buf)) return buf;
    }
}

void Store::check_item(const RmtItem& item) const {
    auto mismatch = [&](const std::string& msg) { fail(ErrorKind::validation, "item '" + item.id + "': " + msg); };

    if (item.kind == ItemKind::testcase && !item.domain) mismatch("testcases require a domain");
    if (item.kind != ItemKind::testcase && item.domain) mismatch("only testcases carry a domain");
    if (item.kind == ItemKind::waiver && !item.target) mismatch("waivers require a target hwrq");
    if (item.kind != ItemKind::waiver && item.target) mismatch("only waivers carry a target");

    if (item.is_subset()) {
        if (item.applicability) mismatch("subset items carry no applicability");
        if (!item.config_tag) mismatch("subset items require a config_tag");
        const RmtItem* origin = find(*item.origin);
        if (!origin) fail(ErrorKind::validation, "item '" + item.id + "': origin '" + *item.origin + "' does not exist");
        if (origin->is_subset() || origin->kind != item.kind) mismatch("origin must be a superset item of the same kind");
    } else {
        if (!item.applicability) mismatch("superset items require an applicability predicate");
        if (item.config_tag) mismatch("superset items carry no config_tag");
        parse_predicate(*item.applicability);
    }

    if (item.target) {
        const RmtItem* target = find(*item.target);
        if (!target || target->kind != ItemKind::hwrq) mismatch("waiver target '" + *item.target + "' is not an hwrq");
        if (target->is_subset() != item.is_subset() || target->config_tag != item.config_tag)
            mismatch("waiver target must belong to the same superset or subset");
    }

    if (!item.history.empty()) {
        if (item.history.front() != ReviewState::draft) mismatch("review history must start at draft");
        for (std::size_t i = 1; i < item.history.size(); ++i)
            if (!is_legal_transition(item.history[i - 1], item.history[i])) mismatch("review history contains an illegal transition");
        if (item.history.back() != item.state) mismatch("review history does not end at the item state");
    } else if (item.state != ReviewState::draft) {
        mismatch("items enter the store as draft unless a review history is supplied");
    }
    if (item.coverage && (*item.coverage < 0.0 || *item.coverage > 100.0)) mismatch("coverage out of range 0..100");
}

std::string Store::post_item(RmtItem item) {
    if (item.id.empty())
        item.id = item.is_subset() ? item.config_tag.value_or("") + "-" + *item.origin : next_id(item.kind);
    if (items_.contains(item.id)) fail(ErrorKind::conflict, "duplicate item id '" + item.id + "'");
    check_item(item);
    if (item.history.empty()) item.history.push_back(item.state);

    const std::string id = item.id;
    std::optional<Relationship> waives;
    if (item.target) waives = Relationship{id, *item.target, RelKind::waives};
    items_.emplace(id, std::move(item));
    if (waives) add_relationship(*waives);
    return id;
}

void Store::check_relationship(const Relationship& rel) const {
    const RmtItem* from = find(rel.from);
    const RmtItem* to = find(rel.to);
    if (!from || !to)
        fail(ErrorKind::not_found, "relationship endpoint '" + (from ? rel.to : rel.from) + "' does not exist");
    auto violation = [&](const std::string& msg) {
        fail(ErrorKind::validation, std::string(to_string(rel.kind)) + " " + rel.from + "->" + rel.to + ": " + msg);
    };
    switch (rel.kind) {
        case RelKind::verifies:
            if (from->kind != ItemKind::testcase || to->kind != ItemKind::hwrq) violation("must go testcase -> hwrq");
            if (from->is_subset() != to->is_subset() || from->config_tag != to->config_tag)
                violation("endpoints must belong to the same superset or subset");
            break;
        case RelKind::derived_from:
            if (!from->is_subset() || to->is_subset() || from->origin != to->id) violation("must go subset item -> its origin");
            break;
        case RelKind::waives:
            if (from->kind != ItemKind::waiver || to->kind != ItemKind::hwrq || from->target != to->id)
                violation("must go waiver -> its target hwrq");
            break;
    }
}

void Store::post_relationship(const Relationship& rel) {
    check_relationship(rel);
    add_relationship(rel);
}

void Store::set_review_state(const std::string& id, ReviewState next) {
    auto it = items_.find(id);
    if (it == items_.end()) fail(ErrorKind::not_found, "unknown item '" + id + "'");
    RmtItem& item = it->second;
    if (!is_legal_transition(item.state, next))
        fail(ErrorKind::conflict, "illegal review transition " + std::string(to_string(item.state)) + " -> " +
                                      std::string(to_string(next)) + " for '" + id + "'");
    item.state = next;
    item.history.push_back(next);
}

SubsetReport Store::derive_subset(const IpConfiguration& cfg) {
    const std::string tag = config_tag(cfg);

    std::vector<const RmtItem*> approved;
    for (const auto& [id, item] : items_)
        if (!item.is_subset() && item.state == ReviewState::approved) approved.push_back(&item);
    if (approved.empty()) fail(ErrorKind::validation, "store holds no approved superset items");

    // Evaluate everything before mutating so a corrupt predicate leaves the store untouched.
    std::vector<std::pair<const RmtItem*, bool>> selection;
    for (const RmtItem* item : approved) {
        bool applicable = false;
        try {
            applicable = eval_predicate(parse_predicate(*item->applicability), cfg);
        } catch (const Error& e) {
            fail(ErrorKind::validation, "corrupt applicability on '" + item->id + "': " + e.what());
        }
        selection.emplace_back(item, applicable);
    }

    auto derived_id = [&](const std::string& origin) { return tag + "-" + origin; };
    std::set<std::string> selected;
    for (const auto& [item, applicable] : selection)
        if (applicable && item->kind != ItemKind::waiver) selected.insert(item->id);
    for (const auto& [item, applicable] : selection)
        if (applicable && item->kind == ItemKind::waiver && selected.contains(*item->target)) selected.insert(item->id);

    SubsetReport report;
    report.config_tag = tag;
    for (const auto& [item, applicable] : selection)
        if (!selected.contains(item->id)) report.skipped.push_back(item->id);

    subsets_.emplace(tag, canonical_text(cfg));
    std::vector<RmtItem> to_add;
    for (const auto& origin_id : selected) {
        const RmtItem& origin = items_.at(origin_id);
        const std::string id = derived_id(origin_id);
        if (items_.contains(id)) continue;
        RmtItem d;
        d.id = id;
        d.kind = origin.kind;
        d.title = origin.title;
        d.text = origin.text;
        d.domain = origin.domain;
        d.state = origin.state;
        d.history = origin.history;
        d.origin = origin_id;
        d.config_tag = tag;
        if (origin.target) d.target = derived_id(*origin.target);
        to_add.push_back(std::move(d));
    }
    for (auto& d : to_add) {
        const std::string id = d.id;
        const std::string origin = *d.origin;
        const auto target = d.target;
        items_.emplace(id, std::move(d));
        add_relationship({id, origin, RelKind::derived_from});
        if (target) add_relationship({id, *target, RelKind::waives});
    }
    for (const auto& rel : std::set<Relationship>(rels_)) {
        if (rel.kind != RelKind::verifies) continue;
        if (!selected.contains(rel.from) || !selected.contains(rel.to)) continue;
        add_relationship({derived_id(rel.from), derived_id(rel.to), RelKind::verifies});
    }

    std::set<std::string> verified;
    for (const auto& rel : rels_)
        if (rel.kind == RelKind::verifies && items_.at(rel.to).config_tag == tag) verified.insert(rel.to);
    for (const RmtItem* item : items(std::nullopt, tag)) {
        switch (item->kind) {
            case ItemKind::hwrq:
                ++report.hwrqs;
                if (!verified.contains(item->id)) report.waiver_required.push_back(item->id);
                break;
            case ItemKind::testcase: ++report.testcases; break;
            case ItemKind::waiver: ++report.waivers; break;
        }
    }
    return report;
}

void Store::update_test_statuses(std::span<const TestResultUpdate> updates) {
    for (const auto& u : updates) {
        const RmtItem& item = get(u.id);
        if (item.kind != ItemKind::testcase || !item.is_subset())
            fail(ErrorKind::validation, "'" + u.id + "' is not a subset testcase");
        if (!(u.coverage >= 0.0 && u.coverage <= 100.0))
            fail(ErrorKind::validation, "coverage for '" + u.id + "' out of range 0..100");
    }
    for (const auto& u : updates) {
        RmtItem& item = items_.at(u.id);
        item.status = u.status;
        item.coverage = u.coverage;
        item.report_link = u.report_link;
    }
}

void Store::update_test_status(const std::string& id, TestStatus status, double coverage_pct, const std::string& report_link) {
    const TestResultUpdate u{id, status, coverage_pct, report_link};
    update_test_statuses(std::span(&u, 1));
}

std::string Store::export_ipvs(const std::string& tag) const {
    if (!subsets_.contains(tag)) fail(ErrorKind::not_found, "unknown config_tag '" + tag + "'");
    xml::Writer w;
    w.open("ipvs", {{"config_tag", tag}});
    for (const RmtItem* item : items(std::nullopt, tag)) {
        xml::Attrs attrs{{"id", item->id}, {"kind", std::string(to_string(item->kind))}, {"state", std::string(to_string(item->state))}};
        if (item->domain) attrs.emplace_back("domain", std::string(to_string(*item->domain)));
        attrs.emplace_back("origin", *item->origin);
        if (item->target) attrs.emplace_back("target", *item->target);
        w.open("item", attrs);
        w.text_element("title", item->title);
        w.text_element("text", item->text);
        if (item->kind == ItemKind::testcase) {
            w.text_element("status", to_string(item->status));
            w.text_element("coverage", item->coverage ? format_double(*item->coverage) : "");
            if (!item->report_link.empty()) w.text_element("link", item->report_link);
        }
        w.close();
    }
    for (const auto& rel : rels_) {
        if (rel.kind == RelKind::derived_from) continue;
        if (items_.at(rel.from).config_tag != tag) continue;
        w.leaf("rel", {{"from", rel.from}, {"to", rel.to}, {"kind", std::string(to_string(rel.kind))}});
    }
    return w.finish();
}

std::string Store::save() const {
    xml::Writer w;
    w.open("rmt-store", {{"version", "1"}});
    w.leaf("sequence", {{"hwrq", std::to_string(next_seq_.contains(ItemKind::hwrq) ? next_seq_.at(ItemKind::hwrq) : 0)},
                        {"testcase", std::to_string(next_seq_.contains(ItemKind::testcase) ? next_seq_.at(ItemKind::testcase) : 0)},
                        {"waiver", std::to_string(next_seq_.contains(ItemKind::waiver) ? next_seq_.at(ItemKind::waiver) : 0)}});
    for (const auto& [tag, text] : subsets_) w.text_element("subset", text, {{"config_tag", tag}});
    for (const auto& [id, item] : items_) write_item(w, item);
    for (const auto& rel : rels_) w.leaf("rel", {{"from", rel.from}, {"to", rel.to}, {"kind", std::string(to_string(rel.kind))}});
    return w.finish();
}

Store Store::load(std::string_view document) {
    const xml::Node root = xml::parse(document);
    if (root.name != "rmt-store") fail(ErrorKind::validation, "expected <rmt-store> root, got <" + root.name + ">");
    Store s;
    if (const auto* seq = root.child("sequence")) {
        s.next_seq_[ItemKind::hwrq] = std::stoi(seq->attr("hwrq").value_or("0"));
        s.next_seq_[ItemKind::testcase] = std::stoi(seq->attr("testcase").value_or("0"));
        s.next_seq_[ItemKind::waiver] = std::stoi(seq->attr("waiver").value_or("0"));
    }
    for (const auto* n : root.children_named("subset")) s.subsets_.emplace(n->required_attr("config_tag"), n->text);

    // Superset items first so subset items can resolve their origins.
    std::vector<RmtItem> items;
    for (const auto* n : root.children_named("item")) items.push_back(read_item(*n));
    std::stable_sort(items.begin(), items.end(), [](const RmtItem& a, const RmtItem& b) {
        return std::pair(a.is_subset(), a.kind == ItemKind::waiver) < std::pair(b.is_subset(), b.kind == ItemKind::waiver);
    });
    for (auto& item : items) {
        if (item.id.empty()) fail(ErrorKind::validation, "stored item without id");
        if (s.items_.contains(item.id)) fail(ErrorKind::validation, "duplicate stored item '" + item.id + "'");
        s.check_item(item);
        s.items_.emplace(item.id, std::move(item));
    }
    for (const auto* n : root.children_named("rel")) {
        Relationship rel{n->required_attr("from"), n->required_attr("to"),
                         parse_enum<RelKind>(n->required_attr("kind"), parse_rel_kind, "relationship kind")};
        s.check_relationship(rel);
        s.rels_.insert(rel);
    }
    return s;
}

void Store::save_to(const std::string& path) const { write_file_atomic(path, save()); }

Store Store::load_from(const std::string& path) { return load(read_file(path)); }

void Store::import_superset(const Store& other) {
    for (const auto& [id, item] : other.items_) {
        if (item.is_subset()) continue;
        if (items_.contains(id)) fail(ErrorKind::conflict, "duplicate item id '" + id + "'");
    }
    std::vector<const RmtItem*> ordered;
    for (const auto& [id, item] : other.items_)
        if (!item.is_subset()) ordered.push_back(&item);
    std::stable_partition(ordered.begin(), ordered.end(), [](const RmtItem* i) { return i->kind != ItemKind::waiver; });
    for (const RmtItem* item : ordered) {
        check_item(*item);
        items_.emplace(item->id, *item);
    }
    for (const auto& rel : other.rels_) {
        if (rel.kind == RelKind::derived_from || other.items_.at(rel.from).is_subset()) continue;
        rels_.insert(rel);
    }
    for (const auto& [kind, seq] : other.next_seq_) next_seq_[kind] = std::max(next_seq_[kind], seq);
}

}  // namespace reqflow::rmt
