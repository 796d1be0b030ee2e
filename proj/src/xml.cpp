#include "reqflow/xml.hpp"

#include "reqflow/error.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <sstream>

namespace reqflow::xml {

std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

Writer::Writer() { out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"; }

void Writer::start_tag(std::string_view name, const Attrs& attrs) {
    out_.append(stack_.size() * 2, ' ');
    out_ += '<';
    out_ += name;
    for (const auto& [k, v] : attrs) {
        out_ += ' ';
        out_ += k;
        out_ += "=\"";
        out_ += escape(v);
        out_ += '"';
    }
}

void Writer::open(std::string_view name, const Attrs& attrs) {
    start_tag(name, attrs);
    out_ += ">\n";
    stack_.emplace_back(name);
}

void Writer::close() {
    std::string name = std::move(stack_.back());
    stack_.pop_back();
    out_.append(stack_.size() * 2, ' ');
    out_ += "</" + name + ">\n";
}

void Writer::leaf(std::string_view name, const Attrs& attrs) {
    start_tag(name, attrs);
    out_ += "/>\n";
}

void Writer::text_element(std::string_view name, std::string_view text, const Attrs& attrs) {
    start_tag(name, attrs);
    out_ += '>';
    out_ += escape(text);
    out_ += "</";
    out_ += name;
    out_ += ">\n";
}

std::string Writer::finish() {
    while (!stack_.empty()) close();
    return std::move(out_);
}

std::optional<std::string> Node::attr(std::string_view key) const {
    for (const auto& [k, v] : attrs)
        if (k == key) return v;
    return std::nullopt;
}

const std::string& Node::required_attr(std::string_view key) const {
    for (const auto& [k, v] : attrs)
        if (k == key) return v;
    fail(ErrorKind::validation, "<" + name + "> lacks attribute '" + std::string(key) + "'");
}

const Node* Node::child(std::string_view n) const {
    for (const auto& c : children)
        if (c.name == n) return &c;
    return nullptr;
}

std::vector<const Node*> Node::children_named(std::string_view n) const {
    std::vector<const Node*> out;
    for (const auto& c : children)
        if (c.name == n) out.push_back(&c);
    return out;
}

std::string Node::child_text(std::string_view n, std::string_view fallback) const {
    const Node* c = child(n);
    return c ? c->text : std::string(fallback);
}

namespace {

namespace pt = boost::property_tree;

Node convert(const std::string& name, const pt::ptree& tree) {
    Node node;
    node.name = name;
    node.text = tree.data();
    for (const auto& [key, sub] : tree) {
        if (key == "<xmlattr>") {
            for (const auto& [ak, av] : sub) node.attrs.emplace_back(ak, av.data());
        } else if (key == "<xmlcomment>") {
            continue;
        } else {
            node.children.push_back(convert(key, sub));
        }
    }
    return node;
}

}  // namespace

Node parse(std::string_view document) {
    pt::ptree tree;
    std::istringstream in{std::string(document)};
    try {
        pt::read_xml(in, tree, pt::xml_parser::no_comments);
    } catch (const pt::xml_parser_error& e) {
        fail(ErrorKind::validation, std::string("malformed XML: ") + e.message() + " (line " +
                                        std::to_string(e.line()) + ")");
    }
    for (const auto& [key, sub] : tree) {
        if (key == "<xmlcomment>") continue;
        return convert(key, sub);
    }
    fail(ErrorKind::validation, "XML document has no root element");
}

}  // namespace reqflow::xml
