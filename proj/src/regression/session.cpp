#include "reqflow/regression/session.hpp"

#include "reqflow/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace reqflow::regression {

namespace {

struct Token {
    enum class Kind { word, string, number, punct, end };
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
        if (c == '"') {
            ++pos_;
            while (pos_ < src_.size() && src_[pos_] != '"') t.text += src_[pos_++];
            if (pos_ >= src_.size()) throw ParseError(t.pos, "unterminated string");
            ++pos_;
            t.kind = Token::Kind::string;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t.text += src_[pos_++];
            t.kind = Token::Kind::number;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                t.text += src_[pos_++];
            t.kind = Token::Kind::word;
        } else if (c == '{' || c == '}' || c == '=' || c == ';') {
            t.text = std::string(1, c);
            ++pos_;
            t.kind = Token::Kind::punct;
        } else {
            throw ParseError(pos_, std::string("unexpected character '") + c + "'");
        }
        return t;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { advance(); }

    SessionSpec parse() {
        SessionSpec spec;
        expect_word("session");
        spec.name = expect(Token::Kind::string, "session name");
        expect_punct("{");
        bool have_seed = false;
        std::set<std::string> names;
        while (!is_punct("}")) {
            if (is_word("seed")) {
                if (have_seed) throw ParseError(cur_.pos, "duplicate seed");
                advance();
                expect_punct("=");
                spec.seed = number<std::uint64_t>("seed");
                expect_punct(";");
                have_seed = true;
            } else if (is_word("group")) {
                advance();
                const std::size_t gpos = cur_.pos;
                const std::string group = expect(Token::Kind::string, "group name");
                if (group != "formal" && group != "sim") throw ParseError(gpos, "group must be \"formal\" or \"sim\"");
                expect_punct("{");
                while (!is_punct("}")) {
                    auto t = parse_test(group);
                    if (!names.insert(t.name).second) throw ParseError(cur_.pos, "duplicate test '" + t.name + "'");
                    spec.tests.push_back(std::move(t));
                }
                advance();
            } else {
                throw ParseError(cur_.pos, "expected 'seed' or 'group'");
            }
        }
        advance();
        if (cur_.kind != Token::Kind::end) throw ParseError(cur_.pos, "trailing input after session");
        if (!have_seed) throw ParseError(cur_.pos, "session lacks a seed");
        return spec;
    }

private:
    SessionSpec::Test parse_test(const std::string& group) {
        SessionSpec::Test t;
        t.group = group;
        expect_word("test");
        t.name = expect(Token::Kind::string, "test name");
        expect_punct("{");
        bool have_runner = false, have_count = false;
        while (!is_punct("}")) {
            if (is_word("runner")) {
                advance();
                expect_punct("=");
                const std::size_t rpos = cur_.pos;
                auto r = parse_runner(expect(Token::Kind::word, "runner"));
                if (!r) throw ParseError(rpos, "runner must be sim or exhaustive");
                t.runner = *r;
                have_runner = true;
            } else if (is_word("count")) {
                advance();
                expect_punct("=");
                t.count = number<std::uint32_t>("count");
                have_count = true;
            } else {
                throw ParseError(cur_.pos, "expected 'runner' or 'count'");
            }
            expect_punct(";");
        }
        advance();
        if (!have_runner || !have_count) throw ParseError(cur_.pos, "test '" + t.name + "' needs runner and count");
        return t;
    }

    template <typename T>
    T number(std::string_view what) {
        if (cur_.kind != Token::Kind::number) throw ParseError(cur_.pos, "expected " + std::string(what));
        T v{};
        auto [ptr, ec] = std::from_chars(cur_.text.data(), cur_.text.data() + cur_.text.size(), v);
        if (ec != std::errc{}) throw ParseError(cur_.pos, std::string(what) + " out of range");
        advance();
        return v;
    }

    void advance() { cur_ = lex_.next(); }
    bool is_word(std::string_view w) const { return cur_.kind == Token::Kind::word && cur_.text == w; }
    bool is_punct(std::string_view p) const {
        if (cur_.kind == Token::Kind::end) throw ParseError(cur_.pos, "unexpected end of session file");
        return cur_.kind == Token::Kind::punct && cur_.text == p;
    }
    void expect_word(std::string_view w) {
        if (!is_word(w)) throw ParseError(cur_.pos, "expected '" + std::string(w) + "'");
        advance();
    }
    void expect_punct(std::string_view p) {
        if (!is_punct(p)) throw ParseError(cur_.pos, "expected '" + std::string(p) + "'");
        advance();
    }
    std::string expect(Token::Kind kind, std::string_view what) {
        if (cur_.kind != kind) throw ParseError(cur_.pos, "expected " + std::string(what));
        std::string text = cur_.text;
        advance();
        return text;
    }

    Lexer lex_;
    Token cur_;
};

}  // namespace

SessionSpec parse_session(std::string_view text) { return Parser(text).parse(); }

std::string write_session(const SessionSpec& spec) {
    std::string out = "session \"" + spec.name + "\" {\n  seed = " + std::to_string(spec.seed) + ";\n";
    for (std::string_view group : {"formal", "sim"}) {
        std::vector<const SessionSpec::Test*> tests;
        for (const auto& t : spec.tests)
            if (t.group == group) tests.push_back(&t);
        if (tests.empty()) continue;
        std::sort(tests.begin(), tests.end(), [](auto* a, auto* b) { return a->name < b->name; });
        out += "  group \"" + std::string(group) + "\" {\n";
        for (const auto* t : tests) {
            out += "    test \"" + t->name + "\" {\n";
            out += "      runner = " + std::string(to_string(t->runner)) + ";\n";
            out += "      count = " + std::to_string(t->count) + ";\n";
            out += "    }\n";
        }
        out += "  }\n";
    }
    out += "}\n";
    return out;
}

}  // namespace reqflow::regression
