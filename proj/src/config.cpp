#include "reqflow/config.hpp"

#include "reqflow/error.hpp"
#include "reqflow/text.hpp"

#include <array>
#include <charconv>
#include <map>

namespace reqflow {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == s) return static_cast<E>(i);
    return std::nullopt;
}

constexpr std::array<std::string_view, 4> kEccNames{"none", "sed", "secded", "dected"};
constexpr std::array<std::string_view, 3> kTechNames{"sram_hd", "sram_hs", "rram"};
constexpr std::array<std::string_view, 2> kLpNames{"retention", "shutdown"};
constexpr std::array<std::string_view, 3> kBurstNames{"single", "incr4", "incr8"};
constexpr std::array<std::string_view, 3> kMutationNames{"syndrome_swap", "retention_loss", "burst_wrap"};

[[noreturn]] void config_error(int line, const std::string& msg) {
    fail(ErrorKind::validation, "config line " + std::to_string(line) + ": " + msg);
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto head = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
    if (!head(s.front())) return false;
    for (char c : s.substr(1))
        if (!tail(c)) return false;
    return true;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

template <typename E, typename ParseFn>
std::set<E> parse_set(std::string_view value, ParseFn parse_member, int line, std::string_view key) {
    std::set<E> out;
    if (value.empty()) return out;
    for (const auto& raw : split(value, ',')) {
        auto tok = trim(raw);
        auto member = parse_member(tok);
        if (!member) config_error(line, "value out of domain for " + std::string(key) + ": '" + std::string(tok) + "'");
        out.insert(*member);
    }
    return out;
}

template <typename E>
std::string join_set(const std::set<E>& s) {
    std::string out;
    for (E e : s) {
        if (!out.empty()) out += ',';
        out += to_string(e);
    }
    return out;
}

}  // namespace

std::string_view to_string(EccLevel v) { return kEccNames[static_cast<std::size_t>(v)]; }
std::string_view to_string(Tech v) { return kTechNames[static_cast<std::size_t>(v)]; }
std::string_view to_string(LpMode v) { return kLpNames[static_cast<std::size_t>(v)]; }
std::string_view to_string(Burst v) { return kBurstNames[static_cast<std::size_t>(v)]; }
std::string_view to_string(Mutation v) { return kMutationNames[static_cast<std::size_t>(v)]; }

std::optional<EccLevel> parse_ecc_level(std::string_view s) { return lookup<EccLevel>(kEccNames, s); }
std::optional<Tech> parse_tech(std::string_view s) { return lookup<Tech>(kTechNames, s); }
std::optional<LpMode> parse_lp_mode(std::string_view s) { return lookup<LpMode>(kLpNames, s); }
std::optional<Burst> parse_burst(std::string_view s) { return lookup<Burst>(kBurstNames, s); }
std::optional<Mutation> parse_mutation(std::string_view s) { return lookup<Mutation>(kMutationNames, s); }

void validate(const IpConfiguration& cfg) {
    if (!is_identifier(cfg.ip_name)) fail(ErrorKind::validation, "ip_name must be an identifier");
    if (cfg.data_width != 8 && cfg.data_width != 16 && cfg.data_width != 32)
        fail(ErrorKind::validation, "data_width out of domain");
    if (cfg.addr_words < 16 || cfg.addr_words > 65536) fail(ErrorKind::validation, "addr_words out of range 16..65536");
    if ((cfg.addr_words & (cfg.addr_words - 1)) != 0)
        fail(ErrorKind::validation, "addr_words must be a power of two");
    if (!cfg.ahb_bursts.contains(Burst::single)) fail(ErrorKind::validation, "ahb_bursts must contain single");
    if (!ecc_supported(cfg.ecc, cfg.data_width))
        fail(ErrorKind::validation, "ecc=" + std::string(to_string(cfg.ecc)) + " is not supported at data_width=" +
                                        std::to_string(cfg.data_width));
}

IpConfiguration parse_config(std::string_view text) {
    IpConfiguration cfg;
    std::map<std::string, int, std::less<>> seen;
    bool debug_section = false;
    int line_no = 0;

    for (const auto& raw_line : split(text, '\n')) {
        ++line_no;
        std::string_view line = raw_line;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line != "[debug]") config_error(line_no, "unknown section '" + std::string(line) + "'");
            debug_section = true;
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string_view::npos) config_error(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));

        if (seen.contains(key)) config_error(line_no, "duplicate key '" + key + "'");
        seen.emplace(key, line_no);

        const bool debug_key = key == "bug_mutations";
        if (debug_key && !debug_section) config_error(line_no, "bug_mutations must follow the [debug] section header");
        if (debug_section && !debug_key) config_error(line_no, "only bug_mutations may appear in [debug], got '" + key + "'");

        if (key == "ip_name") {
            if (!is_identifier(value)) config_error(line_no, "ip_name must be an identifier");
            cfg.ip_name = std::string(value);
        } else if (key == "data_width") {
            auto v = parse_int(value);
            if (!v || (*v != 8 && *v != 16 && *v != 32))
                config_error(line_no, "value out of domain for data_width: '" + std::string(value) + "'");
            cfg.data_width = static_cast<int>(*v);
        } else if (key == "addr_words") {
            auto v = parse_int(value);
            if (!v || *v < 16 || *v > 65536)
                config_error(line_no, "value out of domain for addr_words: '" + std::string(value) + "'");
            if ((*v & (*v - 1)) != 0) config_error(line_no, "addr_words is not a power of two");
            cfg.addr_words = static_cast<std::uint32_t>(*v);
        } else if (key == "ecc") {
            auto v = parse_ecc_level(value);
            if (!v) config_error(line_no, "value out of domain for ecc: '" + std::string(value) + "'");
            cfg.ecc = *v;
        } else if (key == "tech") {
            auto v = parse_tech(value);
            if (!v) config_error(line_no, "value out of domain for tech: '" + std::string(value) + "'");
            cfg.tech = *v;
        } else if (key == "lp_modes") {
            cfg.lp_modes = parse_set<LpMode>(value, parse_lp_mode, line_no, key);
        } else if (key == "ahb_bursts") {
            cfg.ahb_bursts = parse_set<Burst>(value, parse_burst, line_no, key);
        } else if (key == "bug_mutations") {
            cfg.bug_mutations = parse_set<Mutation>(value, parse_mutation, line_no, key);
        } else {
            config_error(line_no, "unknown key '" + key + "'");
        }
    }

    for (std::string_view required : {"ip_name", "data_width", "addr_words", "ecc", "tech"})
        if (!seen.contains(required)) fail(ErrorKind::validation, "config is missing required key '" + std::string(required) + "'");

    validate(cfg);
    return cfg;
}

std::string canonical_text(const IpConfiguration& cfg) {
    std::string out;
    auto line = [&](std::string_view key, const std::string& value) {
        out += key;
        out += value.empty() ? " =" : " = ";
        out += value;
        out += '\n';
    };
    line("ip_name", cfg.ip_name);
    line("data_width", std::to_string(cfg.data_width));
    line("addr_words", std::to_string(cfg.addr_words));
    line("ecc", std::string(to_string(cfg.ecc)));
    line("tech", std::string(to_string(cfg.tech)));
    line("lp_modes", join_set(cfg.lp_modes));
    line("ahb_bursts", join_set(cfg.ahb_bursts));
    out += "[debug]\n";
    line("bug_mutations", join_set(cfg.bug_mutations));
    return out;
}

std::string config_tag(const IpConfiguration& cfg) { return hex16(fnv1a64(canonical_text(cfg))); }

ConfigMatrix parse_matrix(std::string_view text) {
    ConfigMatrix m;
    int line_no = 0;
    for (const auto& raw_line : split(text, '\n')) {
        ++line_no;
        std::string_view line = raw_line;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty() || line == "[debug]") continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(ErrorKind::validation, "matrix line " + std::to_string(line_no) + ": expected 'key = values'");
        ConfigMatrix::Axis axis;
        axis.key = std::string(trim(line.substr(0, eq)));
        for (const auto& v : split(trim(line.substr(eq + 1)), ',')) {
            auto tok = trim(v);
            if (tok.empty()) fail(ErrorKind::validation, "matrix line " + std::to_string(line_no) + ": empty value");
            axis.values.emplace_back(tok);
        }
        for (const auto& a : m.axes)
            if (a.key == axis.key) fail(ErrorKind::validation, "matrix line " + std::to_string(line_no) + ": duplicate key '" + axis.key + "'");
        m.axes.push_back(std::move(axis));
    }
    if (m.axes.empty()) fail(ErrorKind::validation, "config matrix is empty");
    return m;
}

std::vector<IpConfiguration> expand_matrix(const ConfigMatrix& matrix) {
    if (matrix.axes.empty()) fail(ErrorKind::validation, "config matrix is empty");

    auto to_value = [](const std::string& raw) {
        if (raw == "{}") return std::string();
        std::string v = raw;
        for (char& c : v)
            if (c == '+') c = ',';
        return v;
    };

    std::vector<IpConfiguration> out;
    std::vector<std::size_t> index(matrix.axes.size(), 0);
    for (;;) {
        std::string main_text, debug_text;
        std::optional<EccLevel> ecc;
        std::optional<std::int64_t> width;
        for (std::size_t a = 0; a < matrix.axes.size(); ++a) {
            const auto& axis = matrix.axes[a];
            const std::string value = to_value(axis.values[index[a]]);
            std::string& target = axis.key == "bug_mutations" ? debug_text : main_text;
            target += axis.key + " = " + value + "\n";
            if (axis.key == "ecc") ecc = parse_ecc_level(value);
            if (axis.key == "data_width") width = parse_int(value);
        }
        const bool unsupported = ecc && width && !ecc_supported(*ecc, static_cast<int>(*width)) &&
                                 (*width == 8 || *width == 16 || *width == 32);
        if (!unsupported) out.push_back(parse_config(main_text + "[debug]\n" + debug_text));

        std::size_t a = matrix.axes.size();
        while (a > 0) {
            --a;
            if (++index[a] < matrix.axes[a].values.size()) break;
            index[a] = 0;
            if (a == 0) return out;
        }
    }
}

}  // namespace reqflow
