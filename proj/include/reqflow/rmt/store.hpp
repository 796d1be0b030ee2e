#pragma once

#include "reqflow/config.hpp"
#include "reqflow/rmt/types.hpp"
#include "reqflow/xml.hpp"

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace reqflow::rmt {

/// Requirements store holding superset and subset items, their
/// relationships and review states. Not thread-safe; see StoreService.
class Store {
public:
    /// Persists `item` and returns its final id. Superset ids are assigned
    /// as HWRQ-%03d / TC-%03d / WVR-%03d in post order when empty.
    std::string post_item(RmtItem item);
    void post_relationship(const Relationship& rel);
    void set_review_state(const std::string& id, ReviewState next);
    SubsetReport derive_subset(const IpConfiguration& cfg);
    void update_test_status(const std::string& id, TestStatus status, double coverage_pct, const std::string& report_link);
    /// All-or-nothing: every id is validated before any update is applied.
    void update_test_statuses(std::span<const TestResultUpdate> updates);

    std::string export_ipvs(const std::string& config_tag) const;

    const RmtItem* find(const std::string& id) const;
    const RmtItem& get(const std::string& id) const;
    std::vector<const RmtItem*> items(std::optional<ItemKind> kind = std::nullopt,
                                      std::optional<std::string> config_tag = std::nullopt) const;
    const std::set<Relationship>& relationships() const { return rels_; }
    bool has_subset(const std::string& config_tag) const { return subsets_.contains(config_tag); }
    std::vector<std::string> subset_tags() const;

    /// Whole-store XML document; load(save()) reproduces the store.
    std::string save() const;
    static Store load(std::string_view document);
    void save_to(const std::string& path) const;
    static Store load_from(const std::string& path);

    /// Copies superset items and relationships of `other` into this store.
    void import_superset(const Store& other);

private:
    void check_item(const RmtItem& item) const;
    void check_relationship(const Relationship& rel) const;
    std::string next_id(ItemKind kind);
    void add_relationship(const Relationship& rel) { rels_.insert(rel); }

    std::map<std::string, RmtItem> items_;
    std::set<Relationship> rels_;
    std::map<std::string, std::string> subsets_;  // tag -> canonical config text
    std::map<ItemKind, int> next_seq_;
};

void write_item(xml::Writer& w, const RmtItem& item);
RmtItem read_item(const xml::Node& node);
std::string item_document(const RmtItem& item);
std::string subset_report_document(const SubsetReport& r);
SubsetReport read_subset_report(const xml::Node& node);

}  // namespace reqflow::rmt
