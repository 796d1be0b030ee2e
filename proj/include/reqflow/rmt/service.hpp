#pragma once

#include "reqflow/rmt/store.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <type_traits>
#include <utility>

namespace reqflow::rmt {

/// Single-writer / multi-reader access to a Store. Every successful
/// mutation is flushed to the backing file (when one is set) before the
/// writer lock is released.
class StoreService {
public:
    explicit StoreService(Store store = {}, std::optional<std::string> path = std::nullopt)
        : store_(std::move(store)), path_(std::move(path)) {}

    /// Loads `path` when it exists, otherwise starts empty and creates it.
    static std::unique_ptr<StoreService> open(const std::string& path);

    template <typename F>
    auto read(F&& f) const {
        std::shared_lock lock(mu_);
        return std::forward<F>(f)(static_cast<const Store&>(store_));
    }

    template <typename F>
    auto write(F&& f) {
        std::unique_lock lock(mu_);
        if constexpr (std::is_void_v<std::invoke_result_t<F, Store&>>) {
            std::forward<F>(f)(store_);
            persist();
        } else {
            auto result = std::forward<F>(f)(store_);
            persist();
            return result;
        }
    }

    void flush() {
        std::unique_lock lock(mu_);
        persist();
    }

    const std::optional<std::string>& path() const { return path_; }

private:
    void persist() const {
        if (path_) store_.save_to(*path_);
    }

    mutable std::shared_mutex mu_;
    Store store_;
    std::optional<std::string> path_;
};

/// Destination for pushed verification results.
class ResultSink {
public:
    virtual ~ResultSink() = default;
    /// Applies all updates or none.
    virtual void apply(std::span<const TestResultUpdate> updates) = 0;
};

class ServiceSink : public ResultSink {
public:
    explicit ServiceSink(StoreService& service) : service_(service) {}
    void apply(std::span<const TestResultUpdate> updates) override {
        service_.write([&](Store& s) { s.update_test_statuses(updates); });
    }

private:
    StoreService& service_;
};

}  // namespace reqflow::rmt
