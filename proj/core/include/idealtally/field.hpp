#pragma once

#include "idealtally/polynomial.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace idealtally {

/// Element of O_K as coordinates over the power basis 1, theta, ..., theta^{n-1}.
struct FieldElement {
    std::vector<BigInt> coords;

    static FieldElement one(int degree) {
        FieldElement e;
        e.coords.assign(static_cast<std::size_t>(degree), BigInt(0));
        e.coords[0] = 1;
        return e;
    }
};

/// Point of Minkowski space M = R^{r1} x C^{r2}: r1 real slots, then r2
/// complex slots (one representative per conjugate pair).
struct MinkowskiPoint {
    int r1 = 0;
    int r2 = 0;
    std::vector<std::complex<double>> slots;

    int slot_count() const { return r1 + r2; }
    int ambient_dim() const { return r1 + 2 * r2; }
    /// n_i: 1 on real slots, 2 on complex slots.
    int weight(int i) const { return i < r1 ? 1 : 2; }
    /// Euclidean norm: (sum |x_i|^2)^{1/2}.
    double euclidean_norm() const;
};

/// Point of logarithmic space L = R^{r1+r2}.
struct LogPoint {
    std::vector<double> coords;
};

/// Structured field description; the JSON schema in config.hpp mirrors this.
struct FieldConfig {
    std::vector<BigInt> min_poly;  // ascending degree, monic
    std::optional<BigInt> disc;
    std::optional<double> regulator;
    std::optional<std::int64_t> class_number;
    std::optional<int> roots_of_unity;
    std::vector<std::vector<BigInt>> fundamental_units;
    std::map<std::uint64_t, std::vector<std::pair<int, int>>> prime_overrides;
    double embedding_precision = 1e-12;  // relative
    std::string name;
};

/// Immutable arithmetic context: all operations on a built field are pure.
struct NumberField {
    std::string name;
    IntPoly min_poly;
    int degree = 0;
    int r1 = 0;
    int r2 = 0;
    int unit_rank = 0;        // r = r1 + r2 - 1
    BigInt disc;              // |Delta_K|
    int disc_sign = 1;        // sign of disc(min_poly)
    BigInt index;             // [O_K : Z[theta]]
    bool monogenic = true;
    double regulator = 1.0;   // R_K; convention R_K = 1 when r = 0
    std::int64_t class_number = 1;
    int roots_of_unity = 2;
    std::vector<std::complex<double>> embeddings;  // r1 real, then r2 with Im > 0
    std::vector<FieldElement> fundamental_units;   // r entries
    std::map<std::uint64_t, std::vector<std::pair<int, int>>> prime_overrides;
    std::string config_digest_hex;  // SHA-256 over the canonical description

    int slot_count() const { return r1 + r2; }
    int weight(int i) const { return i < r1 ? 1 : 2; }
};

/// Builds the field: refines embeddings, derives the signature and invariants,
/// and validates every override. Throws std::invalid_argument on bad input.
NumberField build_field(const FieldConfig& cfg);

/// alpha -> (sigma_i(alpha)), one slot per real embedding / conjugate pair.
MinkowskiPoint minkowski_embed(const NumberField& K, const FieldElement& alpha);

/// (x_i) -> (n_i log|x_i|). Throws std::domain_error on a zero coordinate.
LogPoint log_embed(const MinkowskiPoint& x);

/// N(x) = prod |x_i|^{n_i}; 0 when any coordinate vanishes.
double point_norm(const MinkowskiPoint& x);

/// N_log(x) = sum x_i.
double log_norm(const LogPoint& x);

/// {N(x), log N(x)}; the log slot is -inf when N(x) = 0.
std::pair<double, double> norms(const MinkowskiPoint& x);

/// Psi_y: coordinatewise multiplication.
MinkowskiPoint mult_map(const MinkowskiPoint& y, const MinkowskiPoint& x);

/// Exact N_{K/Q}(alpha) via the resultant with the minimal polynomial (signed).
BigInt element_norm(const NumberField& K, const FieldElement& alpha);

/// Minkowski point as coordinates of R^n: real slots one entry, complex slots
/// (re, im).
std::vector<double> flatten(const MinkowskiPoint& x);
MinkowskiPoint unflatten(const NumberField& K, const std::vector<double>& coords);

/// The all-ones point phi(1).
MinkowskiPoint identity_point(const NumberField& K);

}  // namespace idealtally
