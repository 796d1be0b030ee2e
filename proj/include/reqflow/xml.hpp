#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace reqflow::xml {

using Attrs = std::vector<std::pair<std::string, std::string>>;

std::string escape(std::string_view s);

/// Streaming writer with fixed two-space indentation. Output bytes depend
/// only on the call sequence.
class Writer {
public:
    Writer();

    void open(std::string_view name, const Attrs& attrs = {});
    void close();
    void leaf(std::string_view name, const Attrs& attrs = {});
    void text_element(std::string_view name, std::string_view text, const Attrs& attrs = {});

    std::string finish();

private:
    void start_tag(std::string_view name, const Attrs& attrs);

    std::string out_;
    std::vector<std::string> stack_;
};

struct Node {
    std::string name;
    Attrs attrs;
    std::string text;
    std::vector<Node> children;

    std::optional<std::string> attr(std::string_view key) const;
    /// Throws a validation error naming the element when absent.
    const std::string& required_attr(std::string_view key) const;
    const Node* child(std::string_view name) const;
    std::vector<const Node*> children_named(std::string_view name) const;
    std::string child_text(std::string_view name, std::string_view fallback = "") const;
};

/// Parses a document and returns its root element.
Node parse(std::string_view document);

}  // namespace reqflow::xml
