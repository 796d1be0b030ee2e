#pragma once

#include "reqflow/config.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() / ("reqflow-" + tag + "-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str(const std::string& sub = "") const { return sub.empty() ? path_.string() : (path_ / sub).string(); }

private:
    std::filesystem::path path_;
};

inline reqflow::IpConfiguration make_config(reqflow::EccLevel ecc, int width, reqflow::Tech tech = reqflow::Tech::sram_hd,
                                            std::set<reqflow::LpMode> lp = {},
                                            std::set<reqflow::Burst> bursts = {reqflow::Burst::single},
                                            std::uint32_t words = 64) {
    reqflow::IpConfiguration c;
    c.ip_name = "t";
    c.data_width = width;
    c.addr_words = words;
    c.ecc = ecc;
    c.tech = tech;
    c.lp_modes = std::move(lp);
    c.ahb_bursts = std::move(bursts);
    return c;
}

inline reqflow::IpConfiguration full_config(reqflow::EccLevel ecc = reqflow::EccLevel::secded, int width = 16) {
    using namespace reqflow;
    return make_config(ecc, width, Tech::sram_hd, {LpMode::retention, LpMode::shutdown},
                       {Burst::single, Burst::incr4, Burst::incr8});
}

/// A broad configuration space: every ecc/width/tech/lp/burst combination at
/// two array sizes.
inline std::vector<reqflow::IpConfiguration> broad_configs() {
    using namespace reqflow;
    std::vector<IpConfiguration> out;
    const std::vector<std::set<LpMode>> lps{{}, {LpMode::retention}, {LpMode::shutdown}, {LpMode::retention, LpMode::shutdown}};
    const std::vector<std::set<Burst>> bursts{{Burst::single}, {Burst::single, Burst::incr4}, {Burst::single, Burst::incr8},
                                              {Burst::single, Burst::incr4, Burst::incr8}};
    for (auto ecc : {EccLevel::none, EccLevel::sed, EccLevel::secded, EccLevel::dected})
        for (int w : {8, 16, 32}) {
            if (ecc == EccLevel::dected && w == 32) continue;
            for (auto tech : {Tech::sram_hd, Tech::sram_hs, Tech::rram})
                for (const auto& lp : lps)
                    for (const auto& b : bursts)
                        for (std::uint32_t words : {64u, 4096u}) out.push_back(make_config(ecc, w, tech, lp, b, words));
        }
    return out;
}

}  // namespace testing
