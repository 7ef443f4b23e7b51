#include "idealtally/ideal_count.hpp"

#include "idealtally/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

namespace idealtally {

namespace {

// ---- arithmetic in F_p[x], p < 2^32, degrees at desk scale -----------------

using FpPoly = std::vector<std::uint64_t>;  // ascending coefficients, normalized

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t acc = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) acc = mulmod(acc, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return acc;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

void fp_trim(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int fp_deg(const FpPoly& f) { return static_cast<int>(f.size()) - 1; }

FpPoly fp_monic(FpPoly f, std::uint64_t p) {
    fp_trim(f);
    if (f.empty()) return f;
    std::uint64_t inv = invmod(f.back(), p);
    for (auto& c : f) c = mulmod(c, inv, p);
    return f;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = (out[i + j] + static_cast<__uint128_t>(a[i]) * b[j]) % p;
    }
    fp_trim(out);
    return out;
}

FpPoly fp_rem(FpPoly a, const FpPoly& b, std::uint64_t p) {
    const int db = fp_deg(b);
    std::uint64_t lead_inv = invmod(b.back(), p);
    while (fp_deg(a) >= db) {
        std::uint64_t q = mulmod(a.back(), lead_inv, p);
        const int shift = fp_deg(a) - db;
        for (int i = 0; i <= db; ++i) {
            std::uint64_t sub = mulmod(q, b[static_cast<std::size_t>(i)], p);
            std::uint64_t& tgt = a[static_cast<std::size_t>(i + shift)];
            tgt = (tgt + p - sub) % p;
        }
        fp_trim(a);
        if (a.empty()) break;
    }
    return a;
}

FpPoly fp_divexact(FpPoly a, const FpPoly& b, std::uint64_t p) {
    FpPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    const int db = fp_deg(b);
    std::uint64_t lead_inv = invmod(b.back(), p);
    while (fp_deg(a) >= db) {
        std::uint64_t qc = mulmod(a.back(), lead_inv, p);
        const int shift = fp_deg(a) - db;
        q[static_cast<std::size_t>(shift)] = qc;
        for (int i = 0; i <= db; ++i) {
            std::uint64_t sub = mulmod(qc, b[static_cast<std::size_t>(i)], p);
            std::uint64_t& tgt = a[static_cast<std::size_t>(i + shift)];
            tgt = (tgt + p - sub) % p;
        }
        fp_trim(a);
        if (a.empty()) break;
    }
    if (!a.empty()) throw std::logic_error("fp_divexact: nonzero remainder");
    fp_trim(q);
    return q;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, std::uint64_t p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        FpPoly r = fp_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return fp_monic(std::move(a), p);
}

FpPoly fp_derivative(const FpPoly& f, std::uint64_t p) {
    FpPoly d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(mulmod(f[i], i % p, p));
    fp_trim(d);
    return d;
}

// f(x) = h(x^p) -> h. In F_p the p-th root of a coefficient is itself.
FpPoly fp_pth_root(const FpPoly& f, std::uint64_t p) {
    FpPoly h;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i % p == 0) {
            h.push_back(f[i]);
        } else if (f[i] != 0) {
            throw std::logic_error("fp_pth_root: polynomial is not a p-th power pattern");
        }
    }
    return h;
}

// Squarefree decomposition in characteristic p: returns (g, multiplicity)
// with each g squarefree and f = prod g^mult.
void fp_squarefree(const FpPoly& f_in, std::uint64_t p, int outer_mult,
                   std::vector<std::pair<FpPoly, int>>& out) {
    FpPoly f = fp_monic(f_in, p);
    if (fp_deg(f) <= 0) return;
    FpPoly d = fp_derivative(f, p);
    if (d.empty()) {
        fp_squarefree(fp_pth_root(f, p), p, outer_mult * static_cast<int>(p), out);
        return;
    }
    FpPoly c = fp_gcd(f, d, p);
    FpPoly w = fp_divexact(f, c, p);
    int k = 1;
    while (fp_deg(w) > 0) {
        FpPoly y = fp_gcd(w, c, p);
        FpPoly z = fp_divexact(w, y, p);
        if (fp_deg(z) > 0) out.emplace_back(fp_monic(z, p), outer_mult * k);
        c = fp_divexact(c, y, p);
        w = std::move(y);
        ++k;
    }
    if (fp_deg(c) > 0) fp_squarefree(fp_pth_root(c, p), p, outer_mult * static_cast<int>(p), out);
}

// One Frobenius step: current^p mod g by repeated squaring.
FpPoly fp_frobenius(FpPoly current, const FpPoly& g, std::uint64_t p) {
    FpPoly acc{1};
    FpPoly sq = std::move(current);
    std::uint64_t e = p;
    while (e) {
        if (e & 1) acc = fp_rem(fp_mul(acc, sq, p), g, p);
        sq = fp_rem(fp_mul(sq, sq, p), g, p);
        e >>= 1;
    }
    return acc;
}

// Distinct-degree split of a squarefree g: appends (degree d, count) pairs.
void fp_distinct_degree(FpPoly g, std::uint64_t p,
                        std::vector<std::pair<int, int>>& degrees) {
    FpPoly x{0, 1};
    FpPoly h = fp_rem(x, g, p);  // x mod g
    int d = 0;
    while (fp_deg(g) > 0) {
        ++d;
        if (2 * d > fp_deg(g)) {
            // remainder is a single irreducible factor
            degrees.emplace_back(fp_deg(g), 1);
            break;
        }
        h = fp_frobenius(std::move(h), g, p);  // h = x^(p^d) mod g
        FpPoly diff = h;
        // diff = h - x
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] + p - 1) % p;
        fp_trim(diff);
        FpPoly f_d = fp_gcd(g, diff, p);
        if (fp_deg(f_d) > 0) {
            degrees.emplace_back(d, fp_deg(f_d) / d);
            g = fp_divexact(g, f_d, p);
            h = fp_rem(h, g, p);
        }
    }
}

}  // namespace

PrimeSplit factor_prime(const NumberField& K, std::uint64_t p) {
    if (p < 2) throw std::invalid_argument("factor_prime: p must be prime");
    if (auto it = K.prime_overrides.find(p); it != K.prime_overrides.end()) {
        PrimeSplit split;
        split.p = p;
        split.factors = it->second;
        int total = 0;
        for (auto [f, e] : split.factors) total += f * e;
        if (total != K.degree)
            throw std::invalid_argument("factor_prime: override violates sum e*f = n");
        std::sort(split.factors.begin(), split.factors.end());
        return split;
    }
    if (K.index % p == 0)
        throw std::invalid_argument(
            "factor_prime: p divides the index [O_K : Z[theta]] and no override is configured");

    FpPoly f;
    for (const auto& c : K.min_poly.coeffs()) {
        BigInt red = c % static_cast<long long>(p);
        if (red < 0) red += static_cast<long long>(p);
        f.push_back(red.convert_to<std::uint64_t>());
    }
    fp_trim(f);

    std::vector<std::pair<FpPoly, int>> squarefree;
    fp_squarefree(f, p, 1, squarefree);

    PrimeSplit split;
    split.p = p;
    for (const auto& [g, mult] : squarefree) {
        std::vector<std::pair<int, int>> degrees;
        fp_distinct_degree(g, p, degrees);
        for (auto [deg, count] : degrees)
            for (int i = 0; i < count; ++i) split.factors.emplace_back(deg, mult);
    }
    std::sort(split.factors.begin(), split.factors.end());

    int total = 0;
    for (auto [fdeg, e] : split.factors) total += fdeg * e;
    if (total != K.degree) throw std::logic_error("factor_prime: lost degree in factorization");
    return split;
}

namespace {

// a_{p^j} for j = 0..jmax from the splitting type: the number of ways to
// write j as a sum over prime ideals with residue degrees f_i.
std::vector<std::uint64_t> prime_power_counts(const PrimeSplit& split, int jmax) {
    std::vector<std::uint64_t> ways(static_cast<std::size_t>(jmax + 1), 0);
    ways[0] = 1;
    for (auto [f, e] : split.factors) {
        (void)e;  // ramification does not change ideal norms
        for (int j = f; j <= jmax; ++j)
            ways[static_cast<std::size_t>(j)] += ways[static_cast<std::size_t>(j - f)];
    }
    return ways;
}

std::vector<std::uint32_t> smallest_prime_factor(std::uint64_t T) {
    std::vector<std::uint32_t> spf(T + 1, 0);
    for (std::uint64_t i = 2; i <= T; ++i) {
        if (spf[i] == 0) {
            for (std::uint64_t j = i; j <= T; j += i)
                if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
        }
    }
    return spf;
}

}  // namespace

IdealCountTable build_count_table(const NumberField& K, std::uint64_t T, const SieveOptions& opts) {
    if (T < 1) throw std::invalid_argument("build_count_table: T must be >= 1");
    if (T + 1 > opts.max_entries)
        throw BudgetExceeded("build_count_table: memory cap exceeded, use segmented mode");

    IdealCountTable table;
    table.cap = T;
    table.counts.assign(T, 0);
    table.counts[0] = 1;  // the unit ideal
    if (T == 1) {
        table.prefix = {1};
        return table;
    }

    std::vector<std::uint32_t> spf = smallest_prime_factor(T);

    // a_{p^j} per prime, computed on first touch.
    std::map<std::uint64_t, std::vector<std::uint64_t>> power_counts;
    auto counts_for = [&](std::uint64_t p) -> const std::vector<std::uint64_t>& {
        auto it = power_counts.find(p);
        if (it != power_counts.end()) return it->second;
        int jmax = 0;
        std::uint64_t q = 1;
        while (q <= T / p) {
            q *= p;
            ++jmax;
        }
        return power_counts.emplace(p, prime_power_counts(factor_prime(K, p), jmax)).first->second;
    };

    for (std::uint64_t m = 2; m <= T; ++m) {
        std::uint64_t p = spf[m];
        std::uint64_t rest = m;
        int v = 0;
        while (rest % p == 0) {
            rest /= p;
            ++v;
        }
        std::uint64_t val =
            static_cast<std::uint64_t>(table.counts[rest - 1]) * counts_for(p)[static_cast<std::size_t>(v)];
        if (val > std::numeric_limits<std::uint32_t>::max())
            throw std::overflow_error("build_count_table: ideal count exceeds 32-bit storage");
        table.counts[m - 1] = static_cast<std::uint32_t>(val);
    }

    table.prefix.assign(T, 0);
    std::uint64_t run = 0;
    for (std::uint64_t m = 1; m <= T; ++m) {
        run += table.counts[m - 1];
        table.prefix[m - 1] = run;
    }
    return table;
}

std::uint64_t sigma(const IdealCountTable& table, double t) {
    if (t < 1.0) return 0;
    if (t > static_cast<double>(table.cap))
        throw std::invalid_argument("sigma: t exceeds the table cap");
    auto m = static_cast<std::uint64_t>(std::floor(t));
    return table.prefix[m - 1];
}

std::uint64_t sigma_segmented(const NumberField& K, std::uint64_t T, std::uint64_t block_size) {
    if (T < 1) throw std::invalid_argument("sigma_segmented: T must be >= 1");
    if (block_size < 2) throw std::invalid_argument("sigma_segmented: block too small");

    // primes up to sqrt(T)
    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(T)));
    while ((root + 1) * (root + 1) <= T) ++root;
    while (root * root > T) --root;
    std::vector<std::uint64_t> primes;
    {
        std::vector<char> is_comp(root + 1, 0);
        for (std::uint64_t i = 2; i <= root; ++i) {
            if (!is_comp[i]) {
                primes.push_back(i);
                for (std::uint64_t j = i * i; j <= root; j += i) is_comp[j] = 1;
            }
        }
    }

    std::map<std::uint64_t, std::vector<std::uint64_t>> power_counts;
    auto counts_for = [&](std::uint64_t p, int jneed) -> const std::vector<std::uint64_t>& {
        auto it = power_counts.find(p);
        if (it != power_counts.end() && static_cast<int>(it->second.size()) > jneed) return it->second;
        power_counts[p] = prime_power_counts(factor_prime(K, p), std::max(jneed, 1));
        return power_counts[p];
    };

    std::uint64_t total = 0;
    std::vector<std::uint64_t> rem(block_size), val(block_size);
    for (std::uint64_t lo = 1; lo <= T; lo += block_size) {
        std::uint64_t hi = std::min(T + 1, lo + block_size);  // [lo, hi)
        std::uint64_t len = hi - lo;
        for (std::uint64_t i = 0; i < len; ++i) {
            rem[i] = lo + i;
            val[i] = 1;
        }
        for (std::uint64_t p : primes) {
            std::uint64_t first = ((lo + p - 1) / p) * p;
            for (std::uint64_t m = first; m < hi; m += p) {
                std::uint64_t i = m - lo;
                int v = 0;
                while (rem[i] % p == 0) {
                    rem[i] /= p;
                    ++v;
                }
                val[i] *= counts_for(p, v)[static_cast<std::size_t>(v)];
            }
        }
        for (std::uint64_t i = 0; i < len; ++i) {
            if (lo + i == 1) {
                total += 1;
                continue;
            }
            std::uint64_t contribution = val[i];
            if (rem[i] > 1) {
                // leftover single prime > sqrt(T)
                contribution *= counts_for(rem[i], 1)[1];
            }
            total += contribution;
        }
    }
    return total;
}

int kronecker_symbol(BigInt a, BigInt n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int k = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    while (n % 2 == 0) {
        n /= 2;
        if (a % 2 == 0) return 0;
        BigInt am8 = a % 8;
        if (am8 < 0) am8 += 8;
        if (am8 == 3 || am8 == 5) k = -k;
    }
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            BigInt nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) k = -k;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) k = -k;
        a %= n;
    }
    return n == 1 ? k : 0;
}

std::vector<std::uint32_t> quadratic_character_counts(const NumberField& K, std::uint64_t T) {
    if (K.degree != 2)
        throw std::invalid_argument("quadratic_character_counts: field must be quadratic");
    BigInt signed_disc = K.disc_sign < 0 ? BigInt(-K.disc) : K.disc;
    std::vector<std::int64_t> acc(T, 0);
    for (std::uint64_t d = 1; d <= T; ++d) {
        int chi = kronecker_symbol(signed_disc, BigInt(d));
        if (chi == 0) continue;
        for (std::uint64_t m = d; m <= T; m += d) acc[m - 1] += chi;
    }
    std::vector<std::uint32_t> out(T, 0);
    for (std::uint64_t m = 1; m <= T; ++m) {
        if (acc[m - 1] < 0) throw std::logic_error("character sum went negative");
        out[m - 1] = static_cast<std::uint32_t>(acc[m - 1]);
    }
    return out;
}

bool quadratic_character_check(const NumberField& K, const IdealCountTable& table) {
    auto oracle = quadratic_character_counts(K, table.cap);
    return oracle == table.counts;
}

bool quadratic_character_check(const NumberField& K, std::uint64_t T) {
    return quadratic_character_check(K, build_count_table(K, T));
}

// ---- cache ------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'I', 'D', 'C', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}
std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

std::array<unsigned char, 32> digest_bytes(const NumberField& K) {
    std::array<unsigned char, 32> out{};
    const std::string& hex = K.config_digest_hex;
    if (hex.size() != 64) throw std::logic_error("field digest is not 32 bytes");
    auto nib = [](char c) -> unsigned {
        if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
        return static_cast<unsigned>(c - 'a' + 10);
    };
    for (std::size_t i = 0; i < 32; ++i)
        out[i] = static_cast<unsigned char>((nib(hex[2 * i]) << 4) | nib(hex[2 * i + 1]));
    return out;
}

}  // namespace

void write_count_cache(const std::filesystem::path& path, const NumberField& K,
                       const IdealCountTable& table) {
    std::string buf;
    buf.append(kMagic, 4);
    put_u32(buf, kVersion);
    put_u64(buf, table.cap);
    auto digest = digest_bytes(K);
    buf.append(reinterpret_cast<const char*>(digest.data()), digest.size());
    for (std::uint32_t c : table.counts) put_u32(buf, c);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_count_cache: cannot open " + path.string());
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::optional<IdealCountTable> read_count_cache(const std::filesystem::path& path,
                                                const NumberField& K, std::uint64_t min_T) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    std::vector<unsigned char> raw((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
    if (raw.size() < 48) throw std::runtime_error("read_count_cache: truncated header");
    if (std::memcmp(raw.data(), kMagic, 4) != 0)
        throw std::runtime_error("read_count_cache: bad magic");
    if (get_u32(raw.data() + 4) != kVersion)
        throw std::runtime_error("read_count_cache: unsupported version");
    std::uint64_t T = get_u64(raw.data() + 8);
    auto digest = digest_bytes(K);
    if (std::memcmp(raw.data() + 16, digest.data(), 32) != 0)
        throw CacheDigestMismatch("sieve cache belongs to a different field config");
    if (raw.size() != 48 + 4 * T) throw std::runtime_error("read_count_cache: truncated body");
    if (T < min_T) return std::nullopt;

    IdealCountTable table;
    table.cap = T;
    table.counts.resize(T);
    for (std::uint64_t m = 0; m < T; ++m) table.counts[m] = get_u32(raw.data() + 48 + 4 * m);
    table.prefix.resize(T);
    std::uint64_t run = 0;
    for (std::uint64_t m = 0; m < T; ++m) {
        run += table.counts[m];
        table.prefix[m] = run;
    }
    return table;
}

}  // namespace idealtally
