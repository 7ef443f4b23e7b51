#include "idealtally/errors.hpp"
#include "idealtally/lattice.hpp"
#include "idealtally/polynomial.hpp"
#include "idealtally/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace idealtally;

namespace {

// exact integer determinant by cofactor expansion (test dimensions only)
BigInt int_det(const std::vector<std::vector<BigInt>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    BigInt acc = 0;
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::vector<BigInt>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<BigInt> row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(m[i][j]);
            minor.push_back(std::move(row));
        }
        acc += sign * m[0][c] * int_det(minor);
        sign = -sign;
    }
    return acc;
}

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
    Eigen::MatrixXd m(2, 2);
    m << a, b, c, d;  // columns (a,c), (b,d)
    return m;
}

Lattice random_integer_lattice(CounterRng& rng, int dim) {
    for (;;) {
        Eigen::MatrixXd m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                m(i, j) = static_cast<double>(static_cast<long long>(rng.below(19)) - 9);
        try {
            return make_lattice(m);
        } catch (const std::invalid_argument&) {
        }
    }
}

}  // namespace

TEST_CASE("gram schmidt examples") {
    Lattice L = make_lattice(mat2(1, 1, 0, 1));  // columns (1,0), (1,1)
    GramSchmidtData gs = gram_schmidt(L);
    CHECK(gs.ortho(0, 0) == doctest::Approx(1));
    CHECK(gs.ortho(1, 0) == doctest::Approx(0));
    CHECK(gs.ortho(0, 1) == doctest::Approx(0));
    CHECK(gs.ortho(1, 1) == doctest::Approx(1));

    // orthogonal input unchanged
    Lattice D = make_lattice(mat2(2, 0, 0, 3));
    GramSchmidtData gd = gram_schmidt(D);
    CHECK((gd.ortho - D.basis).norm() == doctest::Approx(0.0));
}

TEST_CASE("gram schmidt volume identity on random bases") {
    CounterRng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        Lattice L = random_integer_lattice(rng, 4);
        GramSchmidtData gs = gram_schmidt(L);
        double prod = 1;
        for (int i = 0; i < 4; ++i) prod *= gs.ortho.col(i).norm();
        CHECK(prod == doctest::Approx(L.volume).epsilon(1e-9));
        // reconstruction: basis = ortho * mu^T (mu unit lower-triangular)
        Eigen::MatrixXd rebuilt = gs.ortho * gs.mu.transpose();
        CHECK((rebuilt - L.basis).norm() < 1e-9 * L.basis.norm());
    }
}

TEST_CASE("gram schmidt rejects near-dependence") {
    Eigen::MatrixXd m = mat2(1, 1, 1, 1 + 1e-14);
    CHECK_THROWS(make_lattice(m));
}

TEST_CASE("lll reduces a skewed Z^2 basis") {
    Lattice L = make_lattice(mat2(1, 2, 1, 1));  // columns (1,1), (2,1)
    LllResult red = lll_reduce(L);
    CHECK(red.exact_arithmetic);
    CHECK(red.lattice.volume == doctest::Approx(1.0));
    CHECK(red.lattice.basis.col(0).norm() == doctest::Approx(1.0));
    // unimodular transform, exact
    auto det = red.transform(0, 0) * red.transform(1, 1) - red.transform(0, 1) * red.transform(1, 0);
    CHECK((det == 1 || det == -1));
    // transform really maps old basis to new
    Eigen::MatrixXd mapped = L.basis * red.transform.cast<double>();
    CHECK((mapped - red.lattice.basis).norm() < 1e-12);
}

TEST_CASE("already reduced basis survives unchanged up to sign") {
    Lattice D = make_lattice(mat2(1, 0, 0, 1));
    LllResult red = lll_reduce(D);
    for (int j = 0; j < 2; ++j) CHECK(red.lattice.basis.col(j).norm() == doctest::Approx(1.0));
}

TEST_CASE("lll inequality holds on random bases, both arithmetic paths") {
    CounterRng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        int dim = 2 + static_cast<int>(rng.below(4));  // 2..5
        Lattice L = random_integer_lattice(rng, dim);
        LllResult red = lll_reduce(L);
        CHECK(red.lattice.volume == doctest::Approx(L.volume).epsilon(1e-9));
        GramSchmidtData gs = gram_schmidt(red.lattice);
        for (int i = 0; i < dim; ++i) {
            double bound = std::pow(2.0, 0.5 * i) * gs.ortho.col(i).norm();
            CHECK(red.lattice.basis.col(i).norm() <= bound * (1 + 1e-9));
        }
        // exact integer verification of the unimodular transform
        REQUIRE(red.exact_arithmetic);
        std::vector<std::vector<BigInt>> U(static_cast<std::size_t>(dim),
                                           std::vector<BigInt>(static_cast<std::size_t>(dim)));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) U[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                BigInt(red.transform(i, j));
        BigInt detU = int_det(U);
        CHECK((detU == 1 || detU == -1));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                BigInt mapped = 0;
                for (int k2 = 0; k2 < dim; ++k2)
                    mapped += BigInt(std::llround(L.basis(i, k2))) * BigInt(red.transform(k2, j));
                CHECK(mapped == BigInt(std::llround(red.lattice.basis(i, j))));
            }
        // floating path on the same lattice, scaled irrationally
        Lattice scaled = make_lattice(L.basis * std::sqrt(2.0));
        LllResult red2 = lll_reduce(scaled);
        CHECK_FALSE(red2.exact_arithmetic);
        GramSchmidtData gs2 = gram_schmidt(red2.lattice);
        for (int i = 0; i < dim; ++i) {
            double bound = std::pow(2.0, 0.5 * i) * gs2.ortho.col(i).norm();
            CHECK(red2.lattice.basis.col(i).norm() <= bound * (1 + 1e-9));
        }
    }
}

TEST_CASE("successive minima on simple lattices") {
    MinimaData z2 = successive_minima(make_lattice(mat2(1, 0, 0, 1)), 2);
    CHECK(z2.lambdas[0] == doctest::Approx(1.0));
    CHECK(z2.lambdas[1] == doctest::Approx(1.0));

    MinimaData d13 = successive_minima(make_lattice(mat2(1, 0, 0, 3)), 2);
    CHECK(d13.lambdas[0] == doctest::Approx(1.0));
    CHECK(d13.lambdas[1] == doctest::Approx(3.0));
}

TEST_CASE("minima witnesses lie in the lattice") {
    CounterRng rng(23);
    Lattice L = random_integer_lattice(rng, 3);
    MinimaData m = successive_minima(L, 3);
    for (int i = 0; i < 3; ++i) {
        Eigen::VectorXd rebuilt = Eigen::VectorXd::Zero(3);
        for (int j = 0; j < 3; ++j)
            rebuilt += static_cast<double>(m.coefficients(j, i)) * L.basis.col(j);
        CHECK((rebuilt - m.witnesses.col(i)).norm() < 1e-9);
        CHECK(m.witnesses.col(i).norm() == doctest::Approx(m.lambdas[static_cast<std::size_t>(i)]));
    }
    CHECK(m.lambdas[0] <= m.lambdas[1]);
    CHECK(m.lambdas[1] <= m.lambdas[2]);
}

TEST_CASE("dimension limit and budget errors") {
    CHECK_THROWS_AS(successive_minima(make_lattice(Eigen::MatrixXd::Identity(9, 9)), 1),
                    std::invalid_argument);
    CounterRng rng(29);
    Lattice L = random_integer_lattice(rng, 4);
    CHECK_THROWS_AS(successive_minima(L, 4, /*budget=*/3), BudgetExceeded);
}

TEST_CASE("minkowski second theorem on 200 random lattices") {
    CounterRng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        int dim = 2 + static_cast<int>(rng.below(3));  // 2..4
        Lattice L = random_integer_lattice(rng, dim);
        MinimaData m = successive_minima(L, dim);
        double prod = ball_volume(dim);
        for (double lambda : m.lambdas) prod *= lambda;
        double lower = std::pow(2.0, dim) / std::tgamma(dim + 1.0) * L.volume;
        double upper = std::pow(2.0, dim) * L.volume;
        CHECK(prod >= lower * (1 - 1e-9));
        CHECK(prod <= upper * (1 + 1e-9));
    }
}

TEST_CASE("covering radius bounds on closed-form lattices") {
    Lattice z2 = make_lattice(mat2(1, 0, 0, 1));
    MinimaData m = successive_minima(z2, 2);
    CoveringRadiusBound b = covering_radius_bound(z2, m);
    CHECK(b.lemma_value == doctest::Approx(2.0 * std::sqrt(2.0) / M_PI));
    REQUIRE(b.diagonal_value.has_value());
    CHECK(*b.diagonal_value == doctest::Approx(std::sqrt(2.0) / 2.0));
    const double true_radius = std::sqrt(2.0) / 2.0;
    CHECK(b.best() >= true_radius * (1 - 1e-12));

    Lattice rect = make_lattice(mat2(1, 0, 0, 3));
    MinimaData mr = successive_minima(rect, 2);
    CoveringRadiusBound br = covering_radius_bound(rect, mr);
    REQUIRE(br.diagonal_value.has_value());
    CHECK(*br.diagonal_value == doctest::Approx(std::sqrt(2.0) * 3.0 / 2.0));
    CHECK(br.best() >= std::sqrt(10.0) / 2.0);  // exact Voronoi radius

    // m = 1 refused
    Lattice line = make_lattice(Eigen::MatrixXd::Identity(1, 1));
    MinimaData m1 = successive_minima(line, 1);
    CHECK_THROWS_AS(covering_radius_bound(line, m1), std::invalid_argument);
}

TEST_CASE("covering bound never undercuts lambda_1 / 2") {
    CounterRng rng(37);
    for (int trial = 0; trial < 60; ++trial) {
        int dim = 2 + static_cast<int>(rng.below(3));
        Lattice L = random_integer_lattice(rng, dim);
        MinimaData m = successive_minima(L, dim);
        CoveringRadiusBound b = covering_radius_bound(L, m);
        CHECK(b.best() >= m.lambdas[0] / 2.0 * (1 - 1e-12));
    }
}

TEST_CASE("ball volumes") {
    CHECK(ball_volume(2) == doctest::Approx(M_PI));
    CHECK(ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
    CHECK(ball_volume(10) == doctest::Approx(std::pow(M_PI, 5) / 120.0));
}

TEST_CASE("lipschitz counting error") {
    CHECK(static_cast<double>(lip_count_error(2, 1, 1, 0.5, 1)) == doctest::Approx(2 * M_PI));
    // boundary case accepted
    CHECK_NOTHROW(lip_count_error(3, 2, 1.5, std::sqrt(2.0) * 1.5, 1));
    // hypothesis violated
    CHECK_THROWS_AS(lip_count_error(2, 1, 1, 1.1, 1), std::invalid_argument);
}

TEST_CASE("sandwich bounds on a disk, a square, and the empty set") {
    Lattice z2 = make_lattice(mat2(1, 0, 0, 1));
    const double r_cov = std::sqrt(2.0) / 2.0;

    SandwichTestSet disk;
    disk.contains = [](const Eigen::VectorXd& x) { return x.squaredNorm() <= 9.0; };
    disk.box_lo = Eigen::Vector2d(-3, -3);
    disk.box_hi = Eigen::Vector2d(3, 3);
    disk.signed_distance = [](const Eigen::VectorXd& x) { return 3.0 - x.norm(); };
    SandwichResult res = sandwich_bounds_check(z2, disk, r_cov, 200000, 42);
    CHECK(res.exact_count == 29);
    CHECK(res.holds);

    SandwichTestSet square;
    square.contains = [](const Eigen::VectorXd& x) {
        return x(0) >= 0 && x(0) < 1 && x(1) >= 0 && x(1) < 1;
    };
    square.box_lo = Eigen::Vector2d(0, 0);
    square.box_hi = Eigen::Vector2d(1, 1);
    SandwichResult sq = sandwich_bounds_check(z2, square, r_cov, 100000, 43);
    CHECK(sq.exact_count == 1);
    CHECK(sq.holds);

    SandwichTestSet empty;
    empty.contains = [](const Eigen::VectorXd&) { return false; };
    empty.box_lo = Eigen::Vector2d(0, 0);
    empty.box_hi = Eigen::Vector2d(0, 0);
    SandwichResult em = sandwich_bounds_check(z2, empty, r_cov, 10000, 44);
    CHECK(em.exact_count == 0);
    CHECK(em.inner_volume == doctest::Approx(0.0));
    CHECK(em.holds);
}
