#include "idealtally/bounds.hpp"
#include "idealtally/catalog.hpp"

#include <doctest.h>

#include <cmath>

using namespace idealtally;

namespace {

NumberField field(const FieldConfig& cfg) { return build_field(cfg); }

}  // namespace

TEST_CASE("theorem constants") {
    TheoremConstants c2 = theorem_constants(2);
    CHECK(static_cast<double>(c2.e1) == doctest::Approx(203482.914429309).epsilon(1e-9));
    CHECK(static_cast<double>(c2.e2) == doctest::Approx(173348038.903339).epsilon(1e-9));
    TheoremConstants c10 = theorem_constants(10);
    CHECK(static_cast<double>(c10.e1) == doctest::Approx(4.253112027524184e17).epsilon(1e-9));
    CHECK_THROWS_AS(theorem_constants(1), std::invalid_argument);
}

TEST_CASE("threshold t0 with exact values") {
    Threshold t5 = threshold_t0(2, BigInt(5));
    CHECK(static_cast<double>(t5.value) == doctest::Approx(8000.0));
    REQUIRE(t5.exact.has_value());
    CHECK(*t5.exact == 8000);

    Threshold tqi = threshold_t0(2, BigInt(4));
    REQUIRE(tqi.exact.has_value());
    CHECK(*tqi.exact == 6400);

    Threshold t8 = threshold_t0(2, BigInt(8));
    REQUIRE(t8.exact.has_value());
    CHECK(*t8.exact == 12800);

    Threshold tz = threshold_t0(10, BigInt("2357947691"));
    CHECK(static_cast<double>(tz.value) ==
          doctest::Approx(7.289048368510305e76).epsilon(1e-9));
    REQUIRE(tz.exact.has_value());  // n even: Delta^5 integral
    CHECK(std::fabs(tz.exact->convert_to<double>() - 7.289048368510305e76) /
              7.289048368510305e76 <
          1e-12);

    // odd n, non-square disc: no exact integer form
    Threshold todd = threshold_t0(3, BigInt(23));
    CHECK_FALSE(todd.exact.has_value());
    // odd n, square disc: exact
    Threshold tsq = threshold_t0(3, BigInt(49));
    REQUIRE(tsq.exact.has_value());
    CHECK(*tsq.exact == BigInt(90 * 90 * 90) * BigInt(7 * 7 * 7));
}

TEST_CASE("kappa is recomputed from the invariants") {
    BoundInputs qi = bound_inputs(field(catalog::gaussian()), 100);
    CHECK(static_cast<double>(qi.kappa) == doctest::Approx(M_PI / 4).epsilon(1e-12));
    BoundInputs s5 = bound_inputs(field(catalog::sqrt5()), 100);
    CHECK(static_cast<double>(s5.kappa) == doctest::Approx(0.43040894096400404).epsilon(1e-9));
    BoundInputs s2 = bound_inputs(field(catalog::sqrt2()), 100);
    CHECK(static_cast<double>(s2.kappa) == doctest::Approx(0.6232252401402305).epsilon(1e-9));
}

TEST_CASE("example 7.4 values sit inside the paper's rounding") {
    NumberField K = field(catalog::zeta11());
    Threshold t0 = threshold_t0(K.degree, K.disc);
    BoundInputs in = bound_inputs(K, t0.value);

    long double a1 = rhs(BoundVariant::A1, in);
    CHECK(static_cast<double>(a1) == doctest::Approx(7.594688520755899e86).epsilon(1e-9));
    CHECK(a1 <= 7.6e86L);
    CHECK(a1 >= 7.0e86L);

    long double lee = lee_comparison(in, catalog::kZeta11LeeLambda);
    CHECK(static_cast<double>(lee) == doctest::Approx(5.384183318057145e102).epsilon(1e-9));
    CHECK(std::fabs(static_cast<double>(lee) - 5.39e102) / 5.39e102 < 0.02);

    long double a2 = rhs(BoundVariant::A2, in);
    CHECK(static_cast<double>(a2) == doctest::Approx(6.159371454046749e108).epsilon(1e-6));
}

TEST_CASE("rhs on Q(sqrt5) at the threshold") {
    NumberField K = field(catalog::sqrt5());
    BoundInputs in = bound_inputs(K, 8000);
    long double a1 = rhs(BoundVariant::A1, in);
    // t^{1/2} E1(2) R / omega
    long double expected = std::sqrt(8000.0L) * 203482.914429309L * 0.4812118250596035L / 2.0L;
    CHECK(static_cast<double>(a1) == doctest::Approx(static_cast<double>(expected)).epsilon(1e-9));
    CHECK(static_cast<double>(a1) == doctest::Approx(4.3787e6).epsilon(1e-3));

    // h = 1: B1 = 6 n A1, and log+(1) = 1 inside B2
    long double b1 = rhs(BoundVariant::B1, in);
    CHECK(static_cast<double>(b1) == doctest::Approx(static_cast<double>(12.0L * a1)).epsilon(1e-12));

    // monotone in t
    BoundInputs in2 = bound_inputs(K, 16000);
    CHECK(rhs(BoundVariant::A1, in2) > a1);
    CHECK(rhs(BoundVariant::A2, in2) > rhs(BoundVariant::A2, in));
}

TEST_CASE("debaene comparison") {
    NumberField K = field(catalog::sqrt5());
    BoundInputs in = bound_inputs(K, 8000);
    long double expected = std::pow(8000.0L, 0.5L) * std::pow(2.0L, 40.0L) *
                           std::pow(0.4812118250596035L, 0.5L) *
                           std::pow(1.0L + std::log(0.4812118250596035L), 0.5L);
    CHECK(static_cast<double>(debaene_rhs('A', in)) ==
          doctest::Approx(static_cast<double>(expected)).epsilon(1e-9));
    // h = 1: B reduces to A
    CHECK(static_cast<double>(debaene_rhs('B', in)) ==
          doctest::Approx(static_cast<double>(debaene_rhs('A', in))).epsilon(1e-12));

    // n = 10: magnitude only reported on the log scale
    NumberField Kz = field(catalog::zeta11());
    BoundInputs inz = bound_inputs(Kz, threshold_t0(10, Kz.disc).value);
    double log10_value = static_cast<double>(debaene_rhs_log10('A', inz));
    CHECK(log10_value > 1000.0);  // the n^{10 n^2} factor alone is 10^1000
    CHECK(log10_value < 1200.0);
}

TEST_CASE("lee comparison properties") {
    NumberField K = field(catalog::sqrt5());
    BoundInputs in = bound_inputs(K, 1);
    // n=2, Delta=5, Lambda=1, t=1 -> 5^{1/3} log(5)
    CHECK(static_cast<double>(lee_comparison(in, 1.0)) ==
          doctest::Approx(std::pow(5.0, 1.0 / 3.0) * std::log(5.0)).epsilon(1e-12));
    // doubling t scales by 2^{(n-1)/(n+1)}
    BoundInputs in2 = bound_inputs(K, 2);
    CHECK(static_cast<double>(lee_comparison(in2, 1.0) / lee_comparison(in, 1.0)) ==
          doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("minimum bounds") {
    CHECK(static_cast<double>(min_bound(2, BigInt(1), 10)) == doctest::Approx(0.1));
    CHECK(static_cast<double>(min_bound(2, BigInt(4), 10)) == doctest::Approx(0.2));
    CHECK(static_cast<double>(min_bound(2, BigInt(1), 20)) == doctest::Approx(0.05));
}

TEST_CASE("minima sum bound") {
    NumberField K = field(catalog::sqrt5());
    PartitionSpec part = build_partition(K, build_unit_lattice(K), choose_c(K));
    BoundInputs in = bound_inputs(K, 8000);
    long double v = min_sum_bound(in, part, {1}, 1.0L);
    CHECK(static_cast<double>(v) == doctest::Approx(117.8).epsilon(2e-3));
    // decreasing in each norm entry
    CHECK(min_sum_bound(in, part, {2}, 1.0L) < v);
    // r = 0 collapses the exponential and ratio factors
    NumberField Kq = field(catalog::gaussian());
    PartitionSpec pq = build_partition(Kq, build_unit_lattice(Kq), choose_c(Kq));
    BoundInputs iq = bound_inputs(Kq, 100);
    CHECK(static_cast<double>(min_sum_bound(iq, pq, {1}, 3.0L)) ==
          doctest::Approx(1.0 / 1.0 * 3.0).epsilon(1e-12));  // |S|=1, R=1, t^{n-1}=3
    CHECK_THROWS_AS(min_sum_bound(iq, pq, {1, 2}, 1.0L), std::invalid_argument);
}

TEST_CASE("sum of ideal norms bound") {
    SumIdealsBound one = sum_ideals_bound({1}, 2);
    CHECK(static_cast<double>(one.lhs) == doctest::Approx(1.0));
    CHECK(static_cast<double>(one.rhs) == doctest::Approx(12.0));
    CHECK(one.holds);

    // first 9 ideals of Q(i) by norm: 1, 2, 4, 5, 5, 8, 9, 9, 10
    SumIdealsBound nine = sum_ideals_bound({1, 2, 4, 5, 5, 8, 9, 9, 10}, 2);
    CHECK(nine.holds);

    CHECK_THROWS_AS(sum_ideals_bound({1, 1}, 2), std::invalid_argument);
}

TEST_CASE("verify_main_theorem at the sqrt5 threshold") {
    NumberField K = field(catalog::sqrt5());
    PartitionSpec part = build_partition(K, build_unit_lattice(K), choose_c(K));
    IdealCountTable table = build_count_table(K, 8000);
    BoundReport report = verify_main_theorem(K, part, 8000, table);
    CHECK_FALSE(report.below_threshold);
    CHECK(report.sigma_value == 3449);
    REQUIRE(report.observed_error.has_value());
    CHECK(static_cast<double>(*report.observed_error) < 10.0);
    CHECK(report.verdicts.at("A1"));
    CHECK(report.verdicts.at("A2"));
    CHECK(report.verdicts.at("B1"));
    CHECK(report.verdicts.at("B2"));
    CHECK(report.hypothesis.size() == 28);
    CHECK(report.hypothesis_all_hold);
    // report serialization is deterministic
    CHECK(report_to_json(report) == report_to_json(report));
}

TEST_CASE("class number above one: only the B verdicts apply") {
    // Q(sqrt -47): x^2 + x + 12, disc -47, h = 5
    FieldConfig cfg;
    cfg.name = "h5";
    cfg.min_poly = {BigInt(12), BigInt(1), BigInt(1)};
    cfg.class_number = 5;
    NumberField K = build_field(cfg);
    CHECK(K.disc == 47);
    CHECK(K.r1 == 0);
    CHECK(K.class_number == 5);

    PartitionSpec part = build_partition(K, build_unit_lattice(K), choose_c(K));
    IdealCountTable table = build_count_table(K, 1000);
    BoundReport report = verify_main_theorem(K, part, 1000, table);
    CHECK(report.below_threshold);  // t0 = 1600 * 47
    CHECK(report.verdicts.count("A1") == 0);
    CHECK(report.verdicts.count("A2") == 0);
    CHECK(report.verdicts.at("B1"));
    CHECK(report.verdicts.at("B2"));
    // kappa carries the class number
    CHECK(static_cast<double>(report.kappa) ==
          doctest::Approx(2 * M_PI * 5 / (2 * std::sqrt(47.0))).epsilon(1e-12));
}

TEST_CASE("below-threshold reports are flagged but evaluated") {
    NumberField K = field(catalog::gaussian());
    PartitionSpec part = build_partition(K, build_unit_lattice(K), choose_c(K));
    IdealCountTable table = build_count_table(K, 100);
    BoundReport report = verify_main_theorem(K, part, 100, table);
    CHECK(report.below_threshold);
    CHECK(report.rhs_a1 > 0);
    CHECK(report.verdicts.at("A1"));
}
