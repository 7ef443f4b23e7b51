#pragma once

#include <stdexcept>
#include <string>

namespace idealtally {

/// Enumeration, sampling, or sieving work exceeded its configured budget.
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// A sieve cache file does not belong to the requesting field configuration.
struct CacheDigestMismatch : std::runtime_error {
    explicit CacheDigestMismatch(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace idealtally
