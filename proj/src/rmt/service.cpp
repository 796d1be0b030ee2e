#include "reqflow/rmt/service.hpp"

#include <filesystem>

namespace reqflow::rmt {

std::unique_ptr<StoreService> StoreService::open(const std::string& path) {
    if (std::filesystem::exists(path)) return std::make_unique<StoreService>(Store::load_from(path), path);
    auto svc = std::make_unique<StoreService>(Store{}, path);
    svc->flush();
    return svc;
}

}  // namespace reqflow::rmt
