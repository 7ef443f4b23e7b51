#include "idealtally/catalog.hpp"
#include "idealtally/errors.hpp"
#include "idealtally/fund_domain.hpp"
#include "idealtally/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace idealtally;

namespace {

struct Setup {
    NumberField K;
    PartitionSpec partition;
};

Setup setup(const FieldConfig& cfg) {
    Setup s{build_field(cfg), {}};
    s.partition = build_partition(s.K, build_unit_lattice(s.K), choose_c(s.K));
    return s;
}

MinkowskiPoint complex_point(double re, double im) {
    MinkowskiPoint p;
    p.r1 = 0;
    p.r2 = 1;
    p.slots = {{re, im}};
    return p;
}

}  // namespace

TEST_CASE("membership examples") {
    Setup qi = setup(catalog::gaussian());
    DomainSpec cell = make_cell_domain(qi.K, qi.partition);
    CHECK(membership(cell, complex_point(0.5, 0.0)));        // N = 0.25
    CHECK_FALSE(membership(cell, complex_point(1.2, 0.0)));  // N > 1
    CHECK_FALSE(membership(cell, complex_point(0.0, 0.0)));  // zero coordinate

    Setup s5 = setup(catalog::sqrt5());
    DomainSpec cell5 = make_cell_domain(s5.K, s5.partition);
    CHECK(membership(cell5, identity_point(s5.K)));  // N = 1 included, h = 0
}

TEST_CASE("membership honors the exact norm verdict") {
    Setup qi = setup(catalog::gaussian());
    DomainSpec cell = make_cell_domain(qi.K, qi.partition);
    MinkowskiPoint boundary = complex_point(1.0, 0.0);
    CHECK(membership(cell, boundary));
    CHECK_FALSE(membership(cell, boundary, false));
    CHECK(membership(cell, boundary, true));
}

TEST_CASE("box bound contains the domain") {
    for (auto cfg : {catalog::gaussian(), catalog::sqrt5(), catalog::sqrt2()}) {
        Setup s = setup(cfg);
        DomainSpec cell = make_cell_domain(s.K, s.partition);
        double analytic = std::exp(std::sqrt(static_cast<double>(s.K.unit_rank)) /
                                   (2 * s.partition.c()));
        CHECK(cell.box_bound <= analytic * (1 + 1e-12));
        // random members stay inside the coordinate box
        CounterRng rng(55);
        int members = 0;
        for (int trial = 0; trial < 20000 && members < 300; ++trial) {
            MinkowskiPoint x;
            x.r1 = s.K.r1;
            x.r2 = s.K.r2;
            for (int i = 0; i < s.K.slot_count(); ++i)
                x.slots.emplace_back(rng.uniform(-1.6, 1.6),
                                     i < s.K.r1 ? 0.0 : rng.uniform(-1.6, 1.6));
            if (!membership(cell, x)) continue;
            ++members;
            for (const auto& slot : x.slots) CHECK(std::abs(slot) <= cell.box_bound * (1 + 1e-9));
        }
        CHECK(members > 0);
    }
}

TEST_CASE("g at the origin and its Jacobian for Q(i)") {
    NumberField K = build_field(catalog::gaussian());
    Eigen::VectorXd x(1);
    x << 0.0;
    MinkowskiPoint p = g_map(K, x, {0.0});
    CHECK(std::abs(p.slots[0] - std::complex<double>(1, 0)) < 1e-15);
    CHECK(g_jacobian_det(K, x) == doctest::Approx(0.5));
}

TEST_CASE("f and g are mutually inverse on random points of M+") {
    NumberField K = build_field(catalog::zeta11());
    CounterRng rng(66);
    for (int trial = 0; trial < 1000; ++trial) {
        Eigen::VectorXd x(K.slot_count());
        std::vector<double> angles;
        for (int i = 0; i < K.slot_count(); ++i) x(i) = rng.uniform(-3, 3);
        for (int j = 0; j < K.r2; ++j) angles.push_back(rng.uniform(0, 2 * std::numbers::pi));
        MinkowskiPoint p = g_map(K, x, angles);
        auto [x2, angles2] = f_map(K, p);
        CHECK((x - x2).norm() < 1e-9);
        for (int j = 0; j < K.r2; ++j)
            CHECK(angles[static_cast<std::size_t>(j)] ==
                  doctest::Approx(angles2[static_cast<std::size_t>(j)]).epsilon(1e-9));
        // round trip the other way
        MinkowskiPoint p2 = g_map(K, x2, angles2);
        for (int i = 0; i < K.slot_count(); ++i)
            CHECK(std::abs(p2.slots[static_cast<std::size_t>(i)] -
                           p.slots[static_cast<std::size_t>(i)]) < 1e-9);
    }
}

TEST_CASE("analytic Jacobian matches central finite differences") {
    for (auto cfg : {catalog::gaussian(), catalog::sqrt5(), catalog::zeta11()}) {
        NumberField K = build_field(cfg);
        const int n = K.degree;
        const int slots = K.slot_count();
        CounterRng rng(77);
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXd x(slots);
            std::vector<double> angles(static_cast<std::size_t>(K.r2));
            for (int i = 0; i < slots; ++i) x(i) = rng.uniform(-1, 1);
            for (auto& a : angles) a = rng.uniform(0.1, 6.0);
            auto eval = [&](const Eigen::VectorXd& xx, const std::vector<double>& th) {
                return flatten(g_map(K, xx, th));
            };
            const double h = 1e-5;
            Eigen::MatrixXd jac(n, n);
            for (int c = 0; c < n; ++c) {
                Eigen::VectorXd xp = x, xm = x;
                std::vector<double> ap = angles, am = angles;
                if (c < slots) {
                    xp(c) += h;
                    xm(c) -= h;
                } else {
                    ap[static_cast<std::size_t>(c - slots)] += h;
                    am[static_cast<std::size_t>(c - slots)] -= h;
                }
                auto fp = eval(xp, ap);
                auto fm = eval(xm, am);
                for (int r = 0; r < n; ++r)
                    jac(r, c) = (fp[static_cast<std::size_t>(r)] - fm[static_cast<std::size_t>(r)]) /
                                (2 * h);
            }
            double det_fd = std::fabs(jac.determinant());
            double det_exact = g_jacobian_det(K, x);
            CHECK(std::fabs(det_fd - det_exact) / det_exact < 1e-5);
            // spectral norm dominates sampled directional stretches
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
            CHECK(svd.singularValues()(0) <= g_spectral_norm(K, x) * (1 + 1e-4));
        }
    }
}

TEST_CASE("g is Lipschitz on G(0,1) with constant exp(sqrt(r)/(2c))") {
    Setup s5 = setup(catalog::sqrt5());
    const double c = s5.partition.c();
    const double bound = std::exp(std::sqrt(1.0) / (2 * c));
    const Eigen::VectorXd e1 = s5.partition.units().ortho_basis[0];
    const double delta = static_cast<double>(s5.partition.deltas()[0]);
    CounterRng rng(88);
    for (int trial = 0; trial < 10000; ++trial) {
        auto sample = [&](int k) {
            double lam = (rng.uniform_at(4 * static_cast<std::uint64_t>(trial) + k) - 0.5) / delta;
            double mu = -3.0 * rng.uniform_at(4 * static_cast<std::uint64_t>(trial) + k + 2);
            Eigen::VectorXd x = lam * e1 + mu * Eigen::VectorXd::Constant(2, 0.5);
            return x;
        };
        Eigen::VectorXd x = sample(0), y = sample(1);
        MinkowskiPoint gx = g_map(s5.K, x, {}), gy = g_map(s5.K, y, {});
        double lhs = 0;
        for (int i = 0; i < 2; ++i) lhs += std::norm(gx.slots[static_cast<std::size_t>(i)] -
                                                     gy.slots[static_cast<std::size_t>(i)]);
        lhs = std::sqrt(lhs);
        CHECK(lhs <= bound * (x - y).norm() * (1 + 1e-9));
    }
}

TEST_CASE("domain volumes") {
    Setup qi = setup(catalog::gaussian());
    DomainVolume vqi = domain_volume(make_cell_domain(qi.K, qi.partition));
    CHECK(vqi.per_cell == doctest::Approx(std::numbers::pi));
    CHECK(vqi.full_domain == doctest::Approx(std::numbers::pi));

    Setup s5 = setup(catalog::sqrt5());
    DomainVolume v5 = domain_volume(make_cell_domain(s5.K, s5.partition));
    CHECK(v5.full_domain == doctest::Approx(4 * 0.4812118250596035).epsilon(1e-9));
    CHECK(v5.per_cell == doctest::Approx(0.4812118250596035 / 28).epsilon(1e-9));

    Setup z = setup(catalog::zeta11());
    DomainVolume vz = domain_volume(make_cell_domain(z.K, z.partition));
    CHECK(vz.full_domain ==
          doctest::Approx(std::pow(std::numbers::pi, 5) * 26.1711060094).epsilon(1e-6));
}

TEST_CASE("monte carlo volume agrees with the formula") {
    Setup qi = setup(catalog::gaussian());
    DomainSpec cell = make_cell_domain(qi.K, qi.partition);
    McEstimate est = monte_carlo_volume(cell, 1'000'000, 2024);
    CHECK(std::fabs(est.estimate - std::numbers::pi) <= 3 * est.std_error);

    Setup s5 = setup(catalog::sqrt5());
    DomainSpec full = make_full_domain(s5.K, s5.partition);
    McEstimate est5 = monte_carlo_volume(full, 1'000'000, 2024);
    CHECK(std::fabs(est5.estimate - domain_volume_of(full)) <= 3 * est5.std_error);

    DomainSpec cell5 = make_cell_domain(s5.K, s5.partition);
    McEstimate estc = monte_carlo_volume(cell5, 1'000'000, 99);
    CHECK(std::fabs(estc.estimate - domain_volume_of(cell5)) <= 3 * estc.std_error);

    // determinism under a fixed seed
    McEstimate again = monte_carlo_volume(cell, 100'000, 7);
    McEstimate thrice = monte_carlo_volume(cell, 100'000, 7);
    CHECK(again.estimate == thrice.estimate);
    CHECK_THROWS_AS(monte_carlo_volume(cell, 100, 1), std::invalid_argument);
}

TEST_CASE("boundary atlas constants") {
    Setup s5 = setup(catalog::sqrt5());
    BoundaryAtlas atlas = boundary_atlas(make_cell_domain(s5.K, s5.partition));
    CHECK(atlas.segment_count == 115);
    CHECK(atlas.chart_count == 1840);  // 2n * m_seg * (2 pi c)^0 * 2^2
    CHECK(atlas.log_chart_count <= atlas.log_chart_bound);
    double c = s5.partition.c();
    CHECK(atlas.lipschitz == doctest::Approx(std::exp(std::sqrt(1.0) / (2 * c)) / c));

    Setup qi = setup(catalog::gaussian());
    BoundaryAtlas aqi = boundary_atlas(make_cell_domain(qi.K, qi.partition));
    CHECK(aqi.lipschitz == doctest::Approx(1.0 / qi.partition.c()));
    CHECK(aqi.chart_count == BigInt(2 * 2) * BigInt(aqi.segment_count) * BigInt(176));
}

TEST_CASE("chart maps satisfy the Lipschitz bound on sampled pairs") {
    for (auto cfg : {catalog::gaussian(), catalog::sqrt5(), catalog::zeta11()}) {
        Setup s = setup(cfg);
        BoundaryAtlas atlas = boundary_atlas(make_cell_domain(s.K, s.partition));
        const int n = s.K.degree;
        CounterRng rng(4242);
        const int charts = 25;
        const int pairs = (n > 2) ? 400 : 2000;
        for (int chart_i = 0; chart_i < charts; ++chart_i) {
            ChartIndex chart = sample_chart(atlas, rng);
            for (int pair_i = 0; pair_i < pairs; ++pair_i) {
                std::vector<double> u(static_cast<std::size_t>(n - 1)), v(u);
                for (auto& coord : u) coord = rng.uniform();
                for (auto& coord : v) coord = rng.uniform();
                MinkowskiPoint pu = atlas_chart_point(atlas, chart, u);
                MinkowskiPoint pv = atlas_chart_point(atlas, chart, v);
                double dist = 0, udist = 0;
                for (int i = 0; i < s.K.slot_count(); ++i)
                    dist += std::norm(pu.slots[static_cast<std::size_t>(i)] -
                                      pv.slots[static_cast<std::size_t>(i)]);
                dist = std::sqrt(dist);
                for (std::size_t i = 0; i < u.size(); ++i)
                    udist += (u[i] - v[i]) * (u[i] - v[i]);
                udist = std::sqrt(udist);
                CHECK(dist <= atlas.lipschitz * udist * (1 + 1e-9));
            }
        }
    }
}

TEST_CASE("chart endpoint extension reaches zero") {
    Setup s5 = setup(catalog::sqrt5());
    BoundaryAtlas atlas = boundary_atlas(make_cell_domain(s5.K, s5.partition));
    ChartIndex last;
    last.face = 1;  // glue coordinate pinned to 1
    last.segment = atlas.segment_count - 1;
    last.sign_bits = 0;
    MinkowskiPoint p = atlas_chart_point(atlas, last, {0.5});
    // deep in the glued tail the map has decayed far below the cell scale
    CHECK(p.euclidean_norm() < 1e-6);
}

TEST_CASE("lattice enumeration: Gaussian integers of norm at most 10") {
    Setup qi = setup(catalog::gaussian());
    DomainSpec cell = make_cell_domain(qi.K, qi.partition);
    const double t = std::sqrt(10.0);
    Lattice A = ideal_lattice(qi.K, 1.0 / t);
    DomainEnumerationOptions opts;
    opts.exact_norm_in_01 = [&](const Eigen::Matrix<long long, Eigen::Dynamic, 1>& z) {
        long long norm = z(0) * z(0) + z(1) * z(1);
        return norm > 0 && norm <= 10;
    };
    opts.collect_points = true;
    DomainEnumeration res = enumerate_lattice_in_domain(cell, qi.K, A, opts);
    CHECK(res.count == 36);
    CHECK(res.points.size() == 36);
    CHECK(!format_point_line(0, res.points.front()).empty());

    // a lattice so coarse that only the origin fits the box: count 0
    Lattice huge = ideal_lattice(qi.K, 100.0);
    CHECK(enumerate_lattice_in_domain(cell, qi.K, huge).count == 0);
}

TEST_CASE("partition identity for Q(i)") {
    Setup qi = setup(catalog::gaussian());
    IdealCountTable table = build_count_table(qi.K, 100);
    for (long long tn : {2, 5, 10, 25, 100}) {
        auto res = verify_partition_identity(qi.K, qi.partition, BigInt(tn), table);
        CHECK(res.exact_match);
        CHECK(res.point_total == 4 * res.sigma_value);
        auto full = verify_full_domain_identity(qi.K, qi.partition, BigInt(tn), table);
        CHECK(full.exact_match);
    }
}

TEST_CASE("partition identity for Q(sqrt5) and Q(sqrt2)") {
    for (auto cfg : {catalog::sqrt5(), catalog::sqrt2()}) {
        Setup s = setup(cfg);
        IdealCountTable table = build_count_table(s.K, 100);
        for (long long tn : {5, 20, 100}) {
            auto res = verify_partition_identity(s.K, s.partition, BigInt(tn), table);
            CHECK(res.exact_match);
            CHECK(res.point_total == 2 * res.sigma_value);
            CHECK(res.per_cell.size() ==
                  static_cast<std::size_t>(s.partition.cell_count().convert_to<long long>()));
            auto full = verify_full_domain_identity(s.K, s.partition, BigInt(tn), table);
            CHECK(full.exact_match);
        }
    }
}

TEST_CASE("sqrt5 identity at t^2 = 20 gives sigma = 10") {
    Setup s5 = setup(catalog::sqrt5());
    IdealCountTable table = build_count_table(s5.K, 20);
    auto res = verify_partition_identity(s5.K, s5.partition, BigInt(20), table);
    CHECK(res.sigma_value == 10);
    CHECK(res.point_total == 20);
    CHECK(res.exact_match);
}
