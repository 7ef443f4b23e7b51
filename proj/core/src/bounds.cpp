#include "idealtally/bounds.hpp"

#include "idealtally/fund_domain.hpp"
#include "idealtally/lattice.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace idealtally {

namespace {

constexpr long double kE = 2.718281828459045235360287471352662498L;
constexpr long double kPi = 3.141592653589793238462643383279502884L;

long double pow2l(long double exponent) { return std::exp(exponent * std::log(2.0L)); }

}  // namespace

long double log_plus(long double x) {
    if (x <= 0) throw std::invalid_argument("log_plus: positive argument required");
    return std::max(1.0L, std::log(x));
}

TheoremConstants theorem_constants(int n) {
    if (n < 2) throw std::invalid_argument("theorem_constants: n >= 2 required");
    const auto nl = static_cast<long double>(n);
    TheoremConstants c;
    c.e1 = (45.0L * kE / 2.0L) * std::pow(nl, 3.5L) * pow2l(4.1L * nl);
    c.e2 = 2025.0L * kE * kE * std::pow(nl, 5.5L) * pow2l(4.0L * nl) *
           std::pow(nl - 1.0L, (nl - 1.0L) / 2.0L);
    return c;
}

Threshold threshold_t0(int n, const BigInt& abs_disc) {
    if (n < 2) throw std::invalid_argument("threshold_t0: n >= 2 required");
    if (abs_disc <= 0) throw std::invalid_argument("threshold_t0: disc must be positive");
    Threshold out;
    const auto nl = static_cast<long double>(n);
    const long double sqrt_disc = std::sqrt(abs_disc.convert_to<long double>());
    out.value = std::pow(10.0L * nl * nl * sqrt_disc, nl);

    // exact when sqrt(Delta)^n is integral: n even, or Delta a perfect square
    BigInt disc_half_power;
    bool exact_ok = false;
    if (n % 2 == 0) {
        disc_half_power = 1;
        for (int i = 0; i < n / 2; ++i) disc_half_power *= abs_disc;
        exact_ok = true;
    } else if (is_perfect_square(abs_disc)) {
        BigInt root = isqrt_floor(abs_disc);
        disc_half_power = 1;
        for (int i = 0; i < n; ++i) disc_half_power *= root;
        exact_ok = true;
    }
    if (exact_ok) {
        BigInt base = 10 * BigInt(n) * BigInt(n);
        BigInt power = 1;
        for (int i = 0; i < n; ++i) power *= base;
        out.exact = power * disc_half_power;
    }
    return out;
}

BoundInputs bound_inputs(const NumberField& K, long double t) {
    if (t <= 0) throw std::invalid_argument("bound_inputs: t must be positive");
    BoundInputs in;
    in.n = K.degree;
    in.r1 = K.r1;
    in.r2 = K.r2;
    in.r = K.unit_rank;
    in.abs_disc = K.disc.convert_to<long double>();
    in.regulator = static_cast<long double>(K.regulator);
    in.class_number = static_cast<long double>(K.class_number);
    in.omega = static_cast<long double>(K.roots_of_unity);
    in.t = t;
    in.kappa = std::pow(2.0L, static_cast<long double>(K.r1 + K.r2)) *
               std::pow(kPi, static_cast<long double>(K.r2)) * in.class_number * in.regulator /
               (in.omega * std::sqrt(in.abs_disc));
    return in;
}

long double rhs(BoundVariant variant, const BoundInputs& in) {
    const auto n = static_cast<long double>(in.n);
    if (in.t <= 0 || in.regulator <= 0 || in.omega <= 0 || in.class_number <= 0)
        throw std::invalid_argument("rhs: nonpositive input");
    const TheoremConstants c = theorem_constants(in.n);
    const long double t_pow = std::pow(in.t, (n - 1.0L) / n);
    const long double log_exp = (n - 1.0L) * (n - 1.0L) / n;
    const long double fifteen = std::pow(15.0L * n * pow2l(static_cast<long double>(in.r) / 2.0L), n);
    switch (variant) {
        case BoundVariant::A1:
            return t_pow * c.e1 * in.regulator / in.omega;
        case BoundVariant::A2:
            return t_pow * c.e2 / in.omega * std::pow(in.regulator, 1.0L / n) *
                   std::pow(log_plus(fifteen * in.regulator), log_exp);
        case BoundVariant::B1:
            return t_pow * 6.0L * n * c.e1 * in.regulator / in.omega *
                   std::pow(in.class_number, 1.0L / n) *
                   std::pow(log_plus(in.class_number), log_exp);
        case BoundVariant::B2:
            return t_pow * c.e2 / in.omega *
                   std::pow(in.regulator * in.class_number, 1.0L / n) *
                   std::pow(log_plus(fifteen * in.regulator * in.class_number), log_exp);
    }
    throw std::logic_error("rhs: unknown variant");
}

long double debaene_rhs_log10(char variant, const BoundInputs& in) {
    if (variant != 'A' && variant != 'B')
        throw std::invalid_argument("debaene_rhs: variant must be A or B");
    const auto n = static_cast<long double>(in.n);
    const long double rh = (variant == 'A') ? in.regulator : in.regulator * in.class_number;
    const long double log_ln =
        ((n - 1.0L) / n) * std::log(in.t) + 10.0L * n * n * std::log(n) +
        std::log(rh) / n +
        ((n - 1.0L) * (n - 1.0L) / n) * std::log(1.0L + std::log(rh));
    return log_ln / std::log(10.0L);
}

long double debaene_rhs(char variant, const BoundInputs& in) {
    long double l10 = debaene_rhs_log10(variant, in);
    if (l10 > static_cast<long double>(std::numeric_limits<long double>::max_exponent10 - 1))
        return std::numeric_limits<long double>::infinity();
    return std::pow(10.0L, l10);
}

long double lee_comparison(const BoundInputs& in, long double lambda_k) {
    if (lambda_k <= 0) throw std::invalid_argument("lee_comparison: Lambda_K must be positive");
    const auto n = static_cast<long double>(in.n);
    return std::pow(in.t, (n - 1.0L) / (n + 1.0L)) * lambda_k *
           std::pow(in.abs_disc, 1.0L / (n + 1.0L)) *
           std::pow(std::log(in.abs_disc), n - 1.0L);
}

long double min_bound(int n, const BigInt& ideal_norm, long double t) {
    if (n < 2 || ideal_norm < 1 || t <= 0)
        throw std::invalid_argument("min_bound: positive inputs required");
    const auto nl = static_cast<long double>(n);
    return std::sqrt(nl / 2.0L) * std::pow(ideal_norm.convert_to<long double>(), 1.0L / nl) / t;
}

long double min_sum_bound(const BoundInputs& in, const PartitionSpec& partition,
                          const std::vector<std::uint64_t>& ideal_norms, long double t) {
    if (BigInt(ideal_norms.size()) > partition.cell_count())
        throw std::invalid_argument("min_sum_bound: more ideals than |S|");
    const auto n = static_cast<long double>(in.n);
    const auto r = static_cast<long double>(in.r);
    long double norm_sum = 0;
    for (std::uint64_t nb : ideal_norms)
        norm_sum += std::pow(static_cast<long double>(nb), (1.0L - n) / n);
    const long double cells = std::exp(static_cast<long double>(partition.log_cell_count()));
    long double ratio_pow = in.r > 0 ? std::pow(n / (n - 1.0L), r) : 1.0L;
    return std::exp((n - 1.0L) * std::sqrt(r) / (2.0L * static_cast<long double>(partition.c()))) *
           (cells / in.regulator) * ratio_pow * norm_sum * std::pow(t, n - 1.0L);
}

SumIdealsBound sum_ideals_bound(const std::vector<std::uint64_t>& ideal_norms, int n) {
    if (ideal_norms.empty()) throw std::invalid_argument("sum_ideals_bound: empty ideal list");
    std::size_t norm_one = 0;
    for (std::uint64_t nb : ideal_norms) {
        if (nb < 1) throw std::invalid_argument("sum_ideals_bound: norms must be positive");
        if (nb == 1) ++norm_one;
    }
    if (norm_one > 1)
        throw std::invalid_argument("sum_ideals_bound: only one ideal has norm 1");
    const auto nl = static_cast<long double>(n);
    const auto k = static_cast<long double>(ideal_norms.size());
    SumIdealsBound out;
    for (std::uint64_t nb : ideal_norms)
        out.lhs += std::pow(static_cast<long double>(nb), (1.0L - nl) / nl);
    out.rhs = 6.0L * nl * std::pow(k, 1.0L / nl) *
              std::pow(log_plus(k), (nl - 1.0L) * (nl - 1.0L) / nl);
    out.holds = out.lhs <= out.rhs;
    return out;
}

namespace {

void fill_rhs(BoundReport& report, const BoundInputs& in,
              std::optional<long double> lee_lambda) {
    report.rhs_a1 = rhs(BoundVariant::A1, in);
    report.rhs_a2 = rhs(BoundVariant::A2, in);
    report.rhs_b1 = rhs(BoundVariant::B1, in);
    report.rhs_b2 = rhs(BoundVariant::B2, in);
    report.rhs_debaene_log10 = debaene_rhs_log10('B', in);
    long double deb = debaene_rhs('B', in);
    if (std::isfinite(static_cast<double>(deb))) report.rhs_debaene = deb;
    if (lee_lambda) report.rhs_lee = lee_comparison(in, *lee_lambda);
}

}  // namespace

BoundReport evaluate_bounds(const NumberField& K, long double t,
                            std::optional<long double> lee_lambda) {
    BoundReport report;
    report.field_id = K.name.empty() ? K.min_poly.to_string() : K.name;
    report.t = t;
    BoundInputs in = bound_inputs(K, t);
    report.kappa = in.kappa;
    Threshold t0 = threshold_t0(K.degree, K.disc);
    report.t0 = t0.value;
    report.below_threshold = t < t0.value * (1.0L - 1e-12L);
    TheoremConstants constants = theorem_constants(K.degree);
    report.e1 = constants.e1;
    report.e2 = constants.e2;
    fill_rhs(report, in, lee_lambda);
    return report;
}

BoundReport verify_main_theorem(const NumberField& K, const PartitionSpec& partition,
                                long double t, const IdealCountTable& table,
                                std::uint64_t max_hypothesis_cells) {
    BoundReport report = evaluate_bounds(K, t);
    BoundInputs in = bound_inputs(K, t);

    report.sigma_value = sigma(table, static_cast<double>(t));
    long double observed =
        std::fabs(static_cast<long double>(report.sigma_value) - t * in.kappa);
    report.observed_error = observed;

    if (K.class_number == 1) {
        report.verdicts["A1"] = observed <= report.rhs_a1;
        report.verdicts["A2"] = observed <= report.rhs_a2;
    }
    report.verdicts["B1"] = observed <= report.rhs_b1;
    report.verdicts["B2"] = observed <= report.rhs_b2;

    // Covering-radius hypothesis: r(Psi_{beta_s} A_{t^{1/n}}) <= sqrt(n-1) L
    // via the lemma bound, for every (or sampled) s.
    const int n = K.degree;
    const double t_root = std::pow(static_cast<double>(t), 1.0 / static_cast<double>(n));
    Lattice base = ideal_lattice(K, 1.0 / t_root);
    const double lipschitz =
        std::exp(std::sqrt(static_cast<double>(K.unit_rank)) / (2.0 * partition.c())) /
        partition.c();
    const double threshold = std::sqrt(static_cast<double>(n - 1)) * lipschitz;

    std::vector<std::vector<std::int64_t>> cells;
    if (max_hypothesis_cells == 0 || partition.cell_count() <= BigInt(max_hypothesis_cells)) {
        for_each_cell(partition, 1'000'000,
                      [&](const std::vector<std::int64_t>& s) { cells.push_back(s); });
    } else {
        CounterRng rng(20240915);
        for (std::uint64_t i = 0; i < max_hypothesis_cells; ++i) {
            std::vector<std::int64_t> s;
            for (std::int64_t delta : partition.deltas())
                s.push_back(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(delta))));
            cells.push_back(std::move(s));
        }
    }
    for (const auto& s : cells) {
        MinkowskiPoint beta = partition.multiplier(s);
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < K.r1; ++i) M(i, i) = beta.slots[static_cast<std::size_t>(i)].real();
        for (int j = 0; j < K.r2; ++j) {
            double re = beta.slots[static_cast<std::size_t>(K.r1 + j)].real();
            double im = beta.slots[static_cast<std::size_t>(K.r1 + j)].imag();
            int o = K.r1 + 2 * j;
            M(o, o) = re;
            M(o, o + 1) = -im;
            M(o + 1, o) = im;
            M(o + 1, o + 1) = re;
        }
        Lattice twisted = make_lattice(M * base.basis);
        MinimaData minima = successive_minima(twisted, 1);
        CoveringRadiusBound bound = covering_radius_bound(twisted, minima);
        HypothesisSample sample;
        sample.cell = s;
        sample.covering_bound = bound.lemma_value;
        sample.threshold = threshold;
        sample.holds = bound.lemma_value <= threshold * (1 + 1e-12);
        report.hypothesis_all_hold = report.hypothesis_all_hold && sample.holds;
        report.hypothesis.push_back(std::move(sample));
    }
    return report;
}

std::string report_to_json(const BoundReport& report) {
    nlohmann::json j;
    j["field_id"] = report.field_id;
    j["t"] = static_cast<double>(report.t);
    j["t0"] = static_cast<double>(report.t0);
    j["below_threshold"] = report.below_threshold;
    j["e1"] = static_cast<double>(report.e1);
    j["e2"] = static_cast<double>(report.e2);
    j["kappa"] = static_cast<double>(report.kappa);
    if (report.observed_error) {
        j["sigma"] = report.sigma_value;
        j["observed_error"] = static_cast<double>(*report.observed_error);
    }
    j["rhs_a1"] = static_cast<double>(report.rhs_a1);
    j["rhs_a2"] = static_cast<double>(report.rhs_a2);
    j["rhs_b1"] = static_cast<double>(report.rhs_b1);
    j["rhs_b2"] = static_cast<double>(report.rhs_b2);
    j["rhs_debaene_log10"] = static_cast<double>(report.rhs_debaene_log10);
    if (report.rhs_debaene)
        j["rhs_debaene"] = static_cast<double>(*report.rhs_debaene);
    else
        j["rhs_debaene"] = nullptr;
    if (report.rhs_lee) j["rhs_lee"] = static_cast<double>(*report.rhs_lee);
    nlohmann::json verdicts = nlohmann::json::object();
    for (const auto& [name, pass] : report.verdicts) verdicts[name] = pass;
    j["verdicts"] = verdicts;
    nlohmann::json hyp = nlohmann::json::object();
    hyp["checked_cells"] = report.hypothesis.size();
    if (!report.hypothesis.empty()) {
        hyp["all_hold"] = report.hypothesis_all_hold;
        double worst = 0;
        for (const auto& sample : report.hypothesis)
            worst = std::max(worst, sample.covering_bound);
        hyp["worst_covering_bound"] = worst;
        hyp["threshold"] = report.hypothesis.front().threshold;
    }
    j["hypothesis_check"] = hyp;
    return j.dump(2);
}

}  // namespace idealtally
