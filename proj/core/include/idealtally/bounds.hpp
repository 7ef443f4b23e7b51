#pragma once

#include "idealtally/field.hpp"
#include "idealtally/ideal_count.hpp"
#include "idealtally/unit_partition.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace idealtally {

/// log+(x) = max(1, log x).
long double log_plus(long double x);

/// The main-theorem constants: E1(n) = (45 e / 2) n^{7/2} 2^{4.1 n} and
/// E2(n) = 2025 e^2 n^{11/2} 2^{4 n} (n-1)^{(n-1)/2}.
struct TheoremConstants {
    long double e1 = 0;
    long double e2 = 0;
};
TheoremConstants theorem_constants(int n);

/// Threshold t0 = (10 n^2 sqrt(Delta))^n, with the exact integer value when
/// Delta^{n/2} is integral and the result fits the exact type.
struct Threshold {
    long double value = 0;
    std::optional<BigInt> exact;
};
Threshold threshold_t0(int n, const BigInt& abs_disc);

/// Everything the Theorem-1 right-hand sides need. kappa is always recomputed
/// from the invariants, never read from a config.
struct BoundInputs {
    int n = 0, r1 = 0, r2 = 0, r = 0;
    long double abs_disc = 0;
    long double regulator = 0;
    long double class_number = 1;
    long double omega = 2;
    long double t = 0;
    long double kappa = 0;
};
BoundInputs bound_inputs(const NumberField& K, long double t);

enum class BoundVariant { A1, A2, B1, B2 };

/// Right-hand side of the selected main-theorem inequality at inputs.t.
long double rhs(BoundVariant variant, const BoundInputs& in);

/// Debaene's bound t^{(n-1)/n} n^{10 n^2} R^{1/n} (1 + log R)^{(n-1)^2/n}
/// (variant 'A'; 'B' replaces R by R h). log10 form is always finite.
long double debaene_rhs(char variant, const BoundInputs& in);
long double debaene_rhs_log10(char variant, const BoundInputs& in);

/// Lee's bound t^{(n-1)/(n+1)} Lambda_K(n) Delta^{1/(n+1)} log(Delta)^{n-1}.
long double lee_comparison(const BoundInputs& in, long double lambda_k);

/// lambda_1(Psi_{beta_s} A_t) >= sqrt(n/2) N(b)^{1/n} / t.
long double min_bound(int n, const BigInt& ideal_norm, long double t);

/// exp((n-1) sqrt(r)/(2c)) (|S|/R) (n/(n-1))^r sum N(b_j)^{(1-n)/n} t^{n-1}.
long double min_sum_bound(const BoundInputs& in, const PartitionSpec& partition,
                          const std::vector<std::uint64_t>& ideal_norms, long double t);

/// Both sides of sum N(b_j)^{(1-n)/n} <= 6 n k^{1/n} log+(k)^{(n-1)^2/n}.
struct SumIdealsBound {
    long double lhs = 0;
    long double rhs = 0;
    bool holds = false;
};
SumIdealsBound sum_ideals_bound(const std::vector<std::uint64_t>& ideal_norms, int n);

/// Covering-radius hypothesis data for one twist.
struct HypothesisSample {
    std::vector<std::int64_t> cell;
    double covering_bound = 0;
    double threshold = 0;  // sqrt(n-1) L
    bool holds = false;
};

struct BoundReport {
    std::string field_id;
    long double t = 0;
    bool below_threshold = false;  // outside the theorem's guarantee
    long double t0 = 0;
    long double e1 = 0, e2 = 0;
    long double kappa = 0;
    std::uint64_t sigma_value = 0;
    std::optional<long double> observed_error;
    long double rhs_a1 = 0, rhs_a2 = 0, rhs_b1 = 0, rhs_b2 = 0;
    long double rhs_debaene_log10 = 0;
    std::optional<long double> rhs_debaene;  // absent when it overflows
    std::optional<long double> rhs_lee;
    std::map<std::string, bool> verdicts;
    std::vector<HypothesisSample> hypothesis;
    bool hypothesis_all_hold = true;
};

/// Evaluates every right-hand side at t (no oracle, no verdicts).
BoundReport evaluate_bounds(const NumberField& K, long double t,
                            std::optional<long double> lee_lambda = std::nullopt);

/// Full Theorem-1 verification: observed |sigma(t) - t kappa| against every
/// applicable bound, plus the covering-radius hypothesis across the twists.
/// max_hypothesis_cells = 0 checks every s in S.
BoundReport verify_main_theorem(const NumberField& K, const PartitionSpec& partition,
                                long double t, const IdealCountTable& table,
                                std::uint64_t max_hypothesis_cells = 0);

/// JSON form of a report (stable key order, deterministic formatting).
std::string report_to_json(const BoundReport& report);

}  // namespace idealtally
