#pragma once

#include "idealtally/field.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

namespace idealtally {

/// Splitting type of a rational prime: (residue degree f, ramification e) per
/// prime ideal above p. Invariant: sum e*f = n.
struct PrimeSplit {
    std::uint64_t p = 0;
    std::vector<std::pair<int, int>> factors;  // (f, e), sorted
};

/// Factors min_poly mod p. Throws std::invalid_argument when p divides the
/// index [O_K : Z[theta]] and no override is configured: a silent miscount
/// is never an option.
PrimeSplit factor_prime(const NumberField& K, std::uint64_t p);

/// Exact ideal counts a_m = #{ideals of norm m} up to the cap, with partial
/// sums sigma_K(m). Immutable once built.
struct IdealCountTable {
    std::uint64_t cap = 0;
    std::vector<std::uint32_t> counts;   // counts[m-1] = a_m
    std::vector<std::uint64_t> prefix;   // prefix[m-1] = sigma_K(m)

    std::uint32_t a(std::uint64_t m) const { return counts[m - 1]; }
};

struct SieveOptions {
    std::uint64_t max_entries = (1ull << 31);  // memory cap; beyond: segmented mode
};

IdealCountTable build_count_table(const NumberField& K, std::uint64_t T,
                                  const SieveOptions& opts = {});

/// sigma_K(t) = prefix[floor(t)]; 0 for t < 1. Throws when t exceeds the cap.
std::uint64_t sigma(const IdealCountTable& table, double t);

/// sigma_K(T) in bounded memory: blocks of `block_size` entries, values
/// reconstructed by trial division against primes <= sqrt(T).
std::uint64_t sigma_segmented(const NumberField& K, std::uint64_t T,
                              std::uint64_t block_size = (1ull << 22));

/// Kronecker symbol (a | n), the quadratic character attached to a.
int kronecker_symbol(BigInt a, BigInt n);

/// Independent oracle for quadratic fields: a_m = sum_{d | m} chi_{D*}(d)
/// with D* the signed field discriminant.
std::vector<std::uint32_t> quadratic_character_counts(const NumberField& K, std::uint64_t T);

/// True iff the sieve table matches the character oracle entrywise.
bool quadratic_character_check(const NumberField& K, const IdealCountTable& table);
bool quadratic_character_check(const NumberField& K, std::uint64_t T);

// ---- sieve cache ----------------------------------------------------------
// Layout: magic "IDCT", u32 version, u64 T, 32-byte config digest, then T
// little-endian u32 counts. A digest mismatch raises CacheDigestMismatch.

void write_count_cache(const std::filesystem::path& path, const NumberField& K,
                       const IdealCountTable& table);

/// Loads a cache; returns nothing when the file is absent or has a smaller T.
std::optional<IdealCountTable> read_count_cache(const std::filesystem::path& path,
                                                const NumberField& K, std::uint64_t min_T);

}  // namespace idealtally
