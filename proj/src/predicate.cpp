#include "reqflow/predicate.hpp"

#include "reqflow/error.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace reqflow {

namespace {

enum class KeyType { integer, string, ecc, tech, lp_set, burst_set, mutation_set };

std::optional<KeyType> key_type(std::string_view key) {
    if (key == "data_width" || key == "addr_words") return KeyType::integer;
    if (key == "ip_name") return KeyType::string;
    if (key == "ecc") return KeyType::ecc;
    if (key == "tech") return KeyType::tech;
    if (key == "lp_modes") return KeyType::lp_set;
    if (key == "ahb_bursts") return KeyType::burst_set;
    if (key == "bug_mutations") return KeyType::mutation_set;
    return std::nullopt;
}

bool is_set(KeyType t) { return t == KeyType::lp_set || t == KeyType::burst_set || t == KeyType::mutation_set; }

std::string_view op_text(CmpOp op) {
    switch (op) {
        case CmpOp::eq: return "==";
        case CmpOp::ne: return "!=";
        case CmpOp::lt: return "<";
        case CmpOp::le: return "<=";
        case CmpOp::gt: return ">";
        case CmpOp::ge: return ">=";
    }
    return "==";
}

struct Token {
    enum class Kind { ident, integer, string, op, lparen, rparen, end };
    Kind kind = Kind::end;
    std::string text;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        Token t;
        t.pos = pos_;
        if (pos_ >= src_.size()) return t;

        const char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
            t.kind = Token::Kind::ident;
            t.text = std::string(src_.substr(start, pos_ - start));
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            std::size_t start = pos_++;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            t.kind = Token::Kind::integer;
            t.text = std::string(src_.substr(start, pos_ - start));
            return t;
        }
        if (c == '"') {
            ++pos_;
            while (pos_ < src_.size() && src_[pos_] != '"') {
                if (src_[pos_] == '\\') {
                    if (++pos_ >= src_.size()) break;
                }
                t.text += src_[pos_++];
            }
            if (pos_ >= src_.size()) throw ParseError(t.pos, "unterminated string");
            ++pos_;
            t.kind = Token::Kind::string;
            return t;
        }
        if (c == '(' || c == ')') {
            ++pos_;
            t.kind = c == '(' ? Token::Kind::lparen : Token::Kind::rparen;
            t.text = std::string(1, c);
            return t;
        }
        static constexpr std::string_view two[] = {"&&", "||", "==", "!=", "<=", ">="};
        for (auto op : two) {
            if (src_.substr(pos_, 2) == op) {
                pos_ += 2;
                t.kind = Token::Kind::op;
                t.text = std::string(op);
                return t;
            }
        }
        if (c == '!' || c == '<' || c == '>') {
            ++pos_;
            t.kind = Token::Kind::op;
            t.text = std::string(1, c);
            return t;
        }
        throw ParseError(pos_, std::string("unexpected character '") + c + "'");
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { advance(); }

    Predicate parse() {
        Predicate p = parse_or();
        if (cur_.kind != Token::Kind::end) throw ParseError(cur_.pos, "unexpected '" + cur_.text + "'");
        return p;
    }

private:
    void advance() { cur_ = lex_.next(); }

    bool accept_op(std::string_view op) {
        if (cur_.kind == Token::Kind::op && cur_.text == op) {
            advance();
            return true;
        }
        return false;
    }

    Predicate parse_or() {
        Predicate lhs = parse_and();
        while (accept_op("||")) {
            Predicate node;
            node.kind = Predicate::Kind::logical_or;
            node.args.push_back(std::move(lhs));
            node.args.push_back(parse_and());
            lhs = std::move(node);
        }
        return lhs;
    }

    Predicate parse_and() {
        Predicate lhs = parse_unary();
        while (accept_op("&&")) {
            Predicate node;
            node.kind = Predicate::Kind::logical_and;
            node.args.push_back(std::move(lhs));
            node.args.push_back(parse_unary());
            lhs = std::move(node);
        }
        return lhs;
    }

    Predicate parse_unary() {
        if (accept_op("!")) {
            Predicate node;
            node.kind = Predicate::Kind::logical_not;
            node.args.push_back(parse_unary());
            return node;
        }
        if (cur_.kind == Token::Kind::lparen) {
            advance();
            Predicate inner = parse_or();
            if (cur_.kind != Token::Kind::rparen) throw ParseError(cur_.pos, "expected ')'");
            advance();
            return inner;
        }
        return parse_atom();
    }

    Predicate parse_atom() {
        if (cur_.kind != Token::Kind::ident) throw ParseError(cur_.pos, "expected configuration key or constant");
        Predicate node;
        if (cur_.text == "true" || cur_.text == "false") {
            node.kind = Predicate::Kind::constant;
            node.value = cur_.text == "true";
            advance();
            return node;
        }

        const Token key_tok = cur_;
        auto type = key_type(key_tok.text);
        if (!type) throw Error(ErrorKind::validation, "unknown configuration key '" + key_tok.text + "' at offset " + std::to_string(key_tok.pos));
        node.key = key_tok.text;
        advance();

        if (cur_.kind == Token::Kind::ident && cur_.text == "has") {
            advance();
            if (!is_set(*type)) type_error(key_tok, "'has' requires a set-valued key");
            if (cur_.kind != Token::Kind::string) throw ParseError(cur_.pos, "expected quoted string after 'has'");
            check_member(*type, cur_);
            node.kind = Predicate::Kind::has;
            node.literal = cur_.text;
            advance();
            return node;
        }

        if (cur_.kind != Token::Kind::op || cur_.text == "!" || cur_.text == "&&" || cur_.text == "||")
            throw ParseError(cur_.pos, "expected comparison operator or 'has'");
        node.kind = Predicate::Kind::compare;
        node.cmp = to_cmp(cur_.text);
        advance();

        const Token lit = cur_;
        const bool ordering = node.cmp != CmpOp::eq && node.cmp != CmpOp::ne;
        switch (*type) {
            case KeyType::integer: {
                if (lit.kind != Token::Kind::integer) type_error(key_tok, "expects an integer literal");
                std::int64_t v = 0;
                auto [ptr, ec] = std::from_chars(lit.text.data(), lit.text.data() + lit.text.size(), v);
                if (ec != std::errc{}) throw ParseError(lit.pos, "integer literal out of range");
                node.literal = v;
                break;
            }
            case KeyType::string:
                if (ordering) type_error(key_tok, "supports only == and !=");
                if (lit.kind != Token::Kind::string && lit.kind != Token::Kind::ident) type_error(key_tok, "expects a string literal");
                node.literal = lit.text;
                break;
            case KeyType::ecc:
                if (lit.kind != Token::Kind::string && lit.kind != Token::Kind::ident) type_error(key_tok, "expects an ecc level");
                if (!parse_ecc_level(lit.text)) type_error(key_tok, "has no level '" + lit.text + "'");
                node.literal = lit.text;
                break;
            case KeyType::tech:
                if (ordering) type_error(key_tok, "supports only == and !=");
                if (lit.kind != Token::Kind::string && lit.kind != Token::Kind::ident) type_error(key_tok, "expects a technology name");
                if (!parse_tech(lit.text)) type_error(key_tok, "has no value '" + lit.text + "'");
                node.literal = lit.text;
                break;
            default:
                type_error(key_tok, "is a set; use 'has'");
        }
        advance();
        return node;
    }

    static CmpOp to_cmp(std::string_view t) {
        if (t == "==") return CmpOp::eq;
        if (t == "!=") return CmpOp::ne;
        if (t == "<") return CmpOp::lt;
        if (t == "<=") return CmpOp::le;
        if (t == ">") return CmpOp::gt;
        return CmpOp::ge;
    }

    [[noreturn]] static void type_error(const Token& key, const std::string& msg) {
        throw Error(ErrorKind::validation, "type mismatch: '" + key.text + "' " + msg + " (offset " + std::to_string(key.pos) + ")");
    }

    static void check_member(KeyType type, const Token& lit) {
        bool ok = false;
        if (type == KeyType::lp_set) ok = parse_lp_mode(lit.text).has_value();
        if (type == KeyType::burst_set) ok = parse_burst(lit.text).has_value();
        if (type == KeyType::mutation_set) ok = parse_mutation(lit.text).has_value();
        if (!ok) throw Error(ErrorKind::validation, "type mismatch: '" + lit.text + "' is not a member of the set domain (offset " + std::to_string(lit.pos) + ")");
    }

    Lexer lex_;
    Token cur_;
};

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + '"';
}

template <typename T>
bool compare(T lhs, CmpOp op, T rhs) {
    switch (op) {
        case CmpOp::eq: return lhs == rhs;
        case CmpOp::ne: return lhs != rhs;
        case CmpOp::lt: return lhs < rhs;
        case CmpOp::le: return lhs <= rhs;
        case CmpOp::gt: return lhs > rhs;
        case CmpOp::ge: return lhs >= rhs;
    }
    return false;
}

}  // namespace

Predicate parse_predicate(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Predicate& p) {
    using K = Predicate::Kind;
    switch (p.kind) {
        case K::constant: return p.value ? "true" : "false";
        case K::has: return p.key + " has " + quote(std::get<std::string>(p.literal));
        case K::compare: {
            std::string lit;
            if (const auto* i = std::get_if<std::int64_t>(&p.literal)) {
                lit = std::to_string(*i);
            } else if (p.key == "ip_name") {
                lit = quote(std::get<std::string>(p.literal));
            } else {
                lit = std::get<std::string>(p.literal);
            }
            return p.key + " " + std::string(op_text(p.cmp)) + " " + lit;
        }
        case K::logical_not: {
            const auto& a = p.args[0];
            const bool wrap = a.kind == K::logical_and || a.kind == K::logical_or;
            return wrap ? "!(" + to_string(a) + ")" : "!" + to_string(a);
        }
        case K::logical_and: {
            const auto& l = p.args[0];
            const auto& r = p.args[1];
            std::string ls = l.kind == K::logical_or ? "(" + to_string(l) + ")" : to_string(l);
            std::string rs = (r.kind == K::logical_or || r.kind == K::logical_and) ? "(" + to_string(r) + ")" : to_string(r);
            return ls + " && " + rs;
        }
        case K::logical_or: {
            const auto& r = p.args[1];
            std::string rs = r.kind == K::logical_or ? "(" + to_string(r) + ")" : to_string(r);
            return to_string(p.args[0]) + " || " + rs;
        }
    }
    return "false";
}

bool eval_predicate(const Predicate& p, const IpConfiguration& cfg) {
    using K = Predicate::Kind;
    switch (p.kind) {
        case K::constant: return p.value;
        case K::logical_not: return !eval_predicate(p.args[0], cfg);
        case K::logical_and: return eval_predicate(p.args[0], cfg) && eval_predicate(p.args[1], cfg);
        case K::logical_or: return eval_predicate(p.args[0], cfg) || eval_predicate(p.args[1], cfg);
        case K::has: {
            const auto& m = std::get<std::string>(p.literal);
            if (p.key == "lp_modes") return cfg.lp_modes.contains(*parse_lp_mode(m));
            if (p.key == "ahb_bursts") return cfg.ahb_bursts.contains(*parse_burst(m));
            return cfg.bug_mutations.contains(*parse_mutation(m));
        }
        case K::compare: {
            if (p.key == "data_width") return compare<std::int64_t>(cfg.data_width, p.cmp, std::get<std::int64_t>(p.literal));
            if (p.key == "addr_words") return compare<std::int64_t>(cfg.addr_words, p.cmp, std::get<std::int64_t>(p.literal));
            if (p.key == "ip_name") return compare<std::string_view>(cfg.ip_name, p.cmp, std::get<std::string>(p.literal));
            if (p.key == "ecc") return compare(static_cast<int>(cfg.ecc), p.cmp, static_cast<int>(*parse_ecc_level(std::get<std::string>(p.literal))));
            return compare(static_cast<int>(cfg.tech), p.cmp, static_cast<int>(*parse_tech(std::get<std::string>(p.literal))));
        }
    }
    return false;
}

}  // namespace reqflow
