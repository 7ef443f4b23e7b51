#include "idealtally/lattice.hpp"

#include "idealtally/errors.hpp"
#include "idealtally/polynomial.hpp"  // BigInt, BigRat
#include "idealtally/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace idealtally {

Lattice make_lattice(Eigen::MatrixXd basis) {
    if (basis.rows() != basis.cols() || basis.rows() < 1)
        throw std::invalid_argument("make_lattice: basis must be square and nonempty");
    const int m = static_cast<int>(basis.rows());
    double det = basis.determinant();
    double hadamard = 1.0;
    for (int i = 0; i < m; ++i) hadamard *= basis.col(i).norm();
    if (!(std::fabs(det) > 1e-12 * hadamard))
        throw std::invalid_argument("make_lattice: basis is singular or too ill-conditioned");
    Lattice L;
    L.dim = m;
    L.basis = std::move(basis);
    L.volume = std::fabs(det);
    return L;
}

GramSchmidtData gram_schmidt(const Lattice& lattice) {
    const int m = lattice.dim;
    GramSchmidtData gs;
    gs.ortho = Eigen::MatrixXd::Zero(m, m);
    gs.mu = Eigen::MatrixXd::Identity(m, m);
    for (int i = 0; i < m; ++i) {
        Eigen::VectorXd v = lattice.basis.col(i);
        for (int j = 0; j < i; ++j) {
            double denom = gs.ortho.col(j).squaredNorm();
            double mu = lattice.basis.col(i).dot(gs.ortho.col(j)) / denom;
            gs.mu(i, j) = mu;
            v -= mu * gs.ortho.col(j);
        }
        if (v.norm() <= 1e-12 * lattice.basis.col(i).norm())
            throw std::runtime_error("gram_schmidt: numerical breakdown (near-dependent basis)");
        gs.ortho.col(i) = v;
    }
    return gs;
}

namespace {

// ---- exact LLL over the rationals for integral bases ----------------------

struct RationalGs {
    std::vector<std::vector<BigRat>> mu;   // mu[i][j], j < i
    std::vector<BigRat> norm2;             // ||v_i^*||^2
};

RationalGs rational_gram_schmidt(const std::vector<std::vector<BigInt>>& basis) {
    const std::size_t m = basis.size();
    // ortho vectors kept as rationals
    std::vector<std::vector<BigRat>> ortho(m, std::vector<BigRat>(m));
    RationalGs gs;
    gs.mu.assign(m, {});
    gs.norm2.assign(m, BigRat(0));
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<BigRat> v(m);
        for (std::size_t c = 0; c < m; ++c) v[c] = BigRat(basis[i][c]);
        gs.mu[i].assign(i, BigRat(0));
        for (std::size_t j = 0; j < i; ++j) {
            BigRat dot(0);
            for (std::size_t c = 0; c < m; ++c) dot += BigRat(basis[i][c]) * ortho[j][c];
            BigRat mu = dot / gs.norm2[j];
            gs.mu[i][j] = mu;
            for (std::size_t c = 0; c < m; ++c) v[c] -= mu * ortho[j][c];
        }
        BigRat n2(0);
        for (std::size_t c = 0; c < m; ++c) n2 += v[c] * v[c];
        if (n2 == 0) throw std::runtime_error("lll_reduce: dependent integral basis");
        ortho[i] = std::move(v);
        gs.norm2[i] = n2;
    }
    return gs;
}

BigInt round_nearest(const BigRat& q) {
    BigInt num = boost::multiprecision::numerator(q);
    BigInt den = boost::multiprecision::denominator(q);  // > 0
    BigInt twice = 2 * num + den;                        // floor((num + den/2)/den)
    BigInt fl = twice / (2 * den);
    if (twice < 0 && twice % (2 * den) != 0) fl -= 1;
    return fl;
}

void lll_exact(std::vector<std::vector<BigInt>>& basis,
               std::vector<std::vector<BigInt>>& transform) {
    const std::size_t m = basis.size();
    const BigRat delta(3, 4);
    RationalGs gs = rational_gram_schmidt(basis);
    std::size_t k = 1;
    std::uint64_t guard = 0;
    while (k < m) {
        if (++guard > 10'000'000) throw std::runtime_error("lll_reduce: iteration guard tripped");
        for (std::size_t j = k; j-- > 0;) {
            BigInt q = round_nearest(gs.mu[k][j]);
            if (q != 0) {
                for (std::size_t c = 0; c < m; ++c) basis[k][c] -= q * basis[j][c];
                for (std::size_t c = 0; c < m; ++c) transform[k][c] -= q * transform[j][c];
                gs = rational_gram_schmidt(basis);
            }
        }
        BigRat lhs = gs.norm2[k];
        BigRat rhs = (delta - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.norm2[k - 1];
        if (lhs >= rhs) {
            ++k;
        } else {
            std::swap(basis[k], basis[k - 1]);
            std::swap(transform[k], transform[k - 1]);
            gs = rational_gram_schmidt(basis);
            k = std::max<std::size_t>(1, k - 1);
        }
    }
}

void lll_floating(Eigen::MatrixXd& basis, Eigen::MatrixXd& transform) {
    const int m = static_cast<int>(basis.cols());
    const double delta = 0.75;
    auto gs_of = [&](const Eigen::MatrixXd& b) {
        Lattice tmp;
        tmp.dim = m;
        tmp.basis = b;
        tmp.volume = 1.0;  // not used by gram_schmidt
        return gram_schmidt(tmp);
    };
    GramSchmidtData gs = gs_of(basis);
    int k = 1;
    std::uint64_t guard = 0;
    while (k < m) {
        if (++guard > 10'000'000) throw std::runtime_error("lll_reduce: iteration guard tripped");
        for (int j = k - 1; j >= 0; --j) {
            double q = std::round(gs.mu(k, j));
            if (q != 0.0) {
                basis.col(k) -= q * basis.col(j);
                transform.col(k) -= q * transform.col(j);
                gs = gs_of(basis);  // re-orthogonalize
            }
        }
        double lhs = gs.ortho.col(k).squaredNorm();
        double rhs = (delta - gs.mu(k, k - 1) * gs.mu(k, k - 1)) * gs.ortho.col(k - 1).squaredNorm();
        if (lhs >= rhs) {
            ++k;
        } else {
            basis.col(k).swap(basis.col(k - 1));
            transform.col(k).swap(transform.col(k - 1));
            gs = gs_of(basis);
            k = std::max(1, k - 1);
        }
    }
}

bool basis_is_integral(const Eigen::MatrixXd& basis) {
    for (int i = 0; i < basis.rows(); ++i)
        for (int j = 0; j < basis.cols(); ++j)
            if (std::fabs(basis(i, j) - std::round(basis(i, j))) > 1e-9) return false;
    return true;
}

}  // namespace

LllResult lll_reduce(const Lattice& lattice) {
    const int m = lattice.dim;
    LllResult result;
    if (basis_is_integral(lattice.basis)) {
        // column vectors -> row-major vector-of-vectors
        std::vector<std::vector<BigInt>> basis(static_cast<std::size_t>(m),
                                               std::vector<BigInt>(static_cast<std::size_t>(m)));
        std::vector<std::vector<BigInt>> transform(
            static_cast<std::size_t>(m), std::vector<BigInt>(static_cast<std::size_t>(m), BigInt(0)));
        for (int i = 0; i < m; ++i) {
            transform[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
            for (int c = 0; c < m; ++c)
                basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] =
                    BigInt(std::llround(lattice.basis(c, i)));
        }
        lll_exact(basis, transform);
        Eigen::MatrixXd out(m, m);
        Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> U(m, m);
        for (int i = 0; i < m; ++i) {
            for (int c = 0; c < m; ++c) {
                out(c, i) = basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]
                                .convert_to<double>();
                U(c, i) = transform[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]
                              .convert_to<long long>();
            }
        }
        result.lattice = make_lattice(std::move(out));
        result.transform = std::move(U);
        result.exact_arithmetic = true;
    } else {
        Eigen::MatrixXd basis = lattice.basis;
        Eigen::MatrixXd U = Eigen::MatrixXd::Identity(m, m);
        lll_floating(basis, U);
        result.lattice = make_lattice(std::move(basis));
        result.transform.resize(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) result.transform(i, j) = std::llround(U(i, j));
        result.exact_arithmetic = false;
    }
    return result;
}

std::vector<Eigen::Matrix<long long, Eigen::Dynamic, 1>> enumerate_in_ball(
    const Lattice& lattice, const Eigen::VectorXd& center, double radius,
    std::uint64_t budget, bool skip_origin) {
    const int m = lattice.dim;
    GramSchmidtData gs = gram_schmidt(lattice);

    // In the star frame, B z - c = sum_j (z_j + sum_{i>j} z_i mu_ij - c_j) v_j^*
    // with c_j = <c, v_j^*> / ||v_j^*||^2, so coordinates separate per level.
    std::vector<double> norm2(static_cast<std::size_t>(m));
    Eigen::VectorXd center_star(m);
    for (int i = 0; i < m; ++i) {
        norm2[static_cast<std::size_t>(i)] = gs.ortho.col(i).squaredNorm();
        center_star(i) = center.dot(gs.ortho.col(i)) / norm2[static_cast<std::size_t>(i)];
    }

    const double radius2 = radius * radius * (1.0 + 1e-12);
    std::vector<Eigen::Matrix<long long, Eigen::Dynamic, 1>> found;
    Eigen::Matrix<long long, Eigen::Dynamic, 1> z =
        Eigen::Matrix<long long, Eigen::Dynamic, 1>::Zero(m);
    std::uint64_t visited = 0;

    // Fincke-Pohst depth-first walk, last coordinate outermost.
    std::function<void(int, double)> walk = [&](int level, double partial) {
        if (++visited > budget)
            throw BudgetExceeded("enumerate_in_ball: enumeration budget exceeded");
        if (level < 0) {
            if (skip_origin) {
                bool all_zero = true;
                for (int i = 0; i < m; ++i)
                    if (z(i) != 0) all_zero = false;
                if (all_zero) return;
            }
            found.push_back(z);
            return;
        }
        double proj = center_star(level);
        for (int j = level + 1; j < m; ++j) proj -= static_cast<double>(z(j)) * gs.mu(j, level);
        double budget2 = radius2 - partial;
        if (budget2 < 0) return;
        double half_width = std::sqrt(budget2 / norm2[static_cast<std::size_t>(level)]);
        long long lo = static_cast<long long>(std::ceil(proj - half_width - 1e-12));
        long long hi = static_cast<long long>(std::floor(proj + half_width + 1e-12));
        for (long long v = lo; v <= hi; ++v) {
            z(level) = v;
            double diff = static_cast<double>(v) - proj;
            walk(level - 1, partial + diff * diff * norm2[static_cast<std::size_t>(level)]);
        }
        z(level) = 0;
    };
    walk(m - 1, 0.0);
    return found;
}

MinimaData successive_minima(const Lattice& lattice, int k, std::uint64_t budget) {
    const int m = lattice.dim;
    if (m > 8) throw std::invalid_argument("successive_minima: dimension above 8 refused");
    if (k < 1 || k > m) throw std::invalid_argument("successive_minima: k out of range");

    LllResult red = lll_reduce(lattice);
    double radius = 0.0;
    for (int i = 0; i < m; ++i) radius = std::max(radius, red.lattice.basis.col(i).norm());
    radius *= 1.0 + 1e-9;

    Eigen::VectorXd origin = Eigen::VectorXd::Zero(m);
    auto coeffs = enumerate_in_ball(red.lattice, origin, radius, budget, /*skip_origin=*/true);

    struct Candidate {
        double norm;
        Eigen::VectorXd vec;
        Eigen::Matrix<long long, Eigen::Dynamic, 1> z;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(coeffs.size());
    for (const auto& z : coeffs) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
        for (int i = 0; i < m; ++i) v += static_cast<double>(z(i)) * red.lattice.basis.col(i);
        candidates.push_back({v.norm(), std::move(v), z});
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.norm < b.norm; });

    MinimaData data;
    data.witnesses.resize(m, k);
    data.coefficients.resize(m, k);
    Eigen::MatrixXd chosen(m, 0);
    for (const auto& cand : candidates) {
        if (static_cast<int>(data.lambdas.size()) == k) break;
        // greedy independence by increasing norm
        Eigen::MatrixXd trial(m, chosen.cols() + 1);
        if (chosen.cols() > 0) trial.leftCols(chosen.cols()) = chosen;
        trial.col(chosen.cols()) = cand.vec;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(trial);
        qr.setThreshold(1e-9);
        if (qr.rank() == trial.cols()) {
            int idx = static_cast<int>(data.lambdas.size());
            data.witnesses.col(idx) = cand.vec;
            data.coefficients.col(idx) = cand.z;
            data.lambdas.push_back(cand.norm);
            chosen = std::move(trial);
        }
    }
    if (static_cast<int>(data.lambdas.size()) != k)
        throw std::runtime_error("successive_minima: enumeration radius missed an independent vector");

    // Map witness coefficients back to the original basis.
    for (int i = 0; i < k; ++i) {
        Eigen::Matrix<long long, Eigen::Dynamic, 1> orig =
            red.transform * data.coefficients.col(i);
        data.coefficients.col(i) = orig;
    }
    return data;
}

CoveringRadiusBound covering_radius_bound(const Lattice& lattice, const MinimaData& minima) {
    const int m = lattice.dim;
    if (m < 2) throw std::invalid_argument("covering_radius_bound: m >= 2 required");
    if (minima.lambdas.empty())
        throw std::invalid_argument("covering_radius_bound: lambda_1 required");
    CoveringRadiusBound bound;
    const double lambda1 = minima.lambdas.front();
    bound.lemma_value = std::pow(2.0, m - 1) * std::sqrt(static_cast<double>(m)) /
                        ball_volume(m) * lattice.volume / std::pow(lambda1, m - 1);
    if (static_cast<int>(minima.lambdas.size()) == m)
        bound.diagonal_value = std::sqrt(static_cast<double>(m)) * minima.lambdas.back() / 2.0;
    return bound;
}

double ball_volume(int m) {
    if (m < 1) throw std::invalid_argument("ball_volume: m >= 1 required");
    return std::exp(0.5 * m * std::log(M_PI) - std::lgamma(0.5 * m + 1.0));
}

long double lip_count_error(int m, long double M, long double L, long double r_lambda,
                            long double vol_lambda) {
    if (m < 2) throw std::invalid_argument("lip_count_error: m >= 2 required");
    if (M < 0 || L <= 0 || r_lambda < 0 || vol_lambda <= 0)
        throw std::invalid_argument("lip_count_error: nonpositive input");
    const long double cap = std::sqrt(static_cast<long double>(m - 1)) * L;
    if (r_lambda > cap * (1.0L + 1e-12L)) {
        std::ostringstream os;
        os << "lip_count_error: hypothesis r(Lambda) <= sqrt(m-1) L violated: r = "
           << static_cast<double>(r_lambda) << ", sqrt(m-1) L = " << static_cast<double>(cap);
        throw std::invalid_argument(os.str());
    }
    return M * std::pow(cap, static_cast<long double>(m - 1)) *
           std::pow(2.0L, static_cast<long double>(m)) *
           static_cast<long double>(ball_volume(m)) * r_lambda / vol_lambda;
}

SandwichResult sandwich_bounds_check(const Lattice& lattice, const SandwichTestSet& set,
                                     double covering_radius, std::uint64_t samples,
                                     std::uint64_t seed, std::uint64_t budget) {
    const int m = lattice.dim;
    if (m > 4) throw std::invalid_argument("sandwich_bounds_check: dim above 4 refused");

    // Exact count: enumerate the bounding-box ball and filter.
    Eigen::VectorXd center = 0.5 * (set.box_lo + set.box_hi);
    double radius = 0.5 * (set.box_hi - set.box_lo).norm();
    std::uint64_t count = 0;
    if (radius > 0) {
        auto pts = enumerate_in_ball(lattice, center, radius, budget, /*skip_origin=*/false);
        for (const auto& z : pts) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
            for (int i = 0; i < m; ++i) v += static_cast<double>(z(i)) * lattice.basis.col(i);
            bool in_box = true;
            for (int i = 0; i < m; ++i)
                if (v(i) < set.box_lo(i) - 1e-12 || v(i) > set.box_hi(i) + 1e-12) in_box = false;
            if (in_box && set.contains(v)) ++count;
        }
    }

    // Monte-Carlo volumes of I_X and O_X over the inflated box.
    CounterRng rng(seed);
    Eigen::VectorXd lo = set.box_lo.array() - covering_radius;
    Eigen::VectorXd hi = set.box_hi.array() + covering_radius;
    double box_vol = 1.0;
    for (int i = 0; i < m; ++i) box_vol *= hi(i) - lo(i);

    const int probes = 32;
    std::uint64_t inner_hits = 0, outer_hits = 0;
    Eigen::VectorXd x(m);
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (int i = 0; i < m; ++i)
            x(i) = lo(i) + (hi(i) - lo(i)) * rng.uniform_at(s * static_cast<std::uint64_t>(m) + i);
        bool inside = set.contains(x);
        bool in_inner, in_outer;
        if (set.signed_distance) {
            double d = set.signed_distance(x);
            in_inner = inside && d > covering_radius;
            in_outer = d >= -covering_radius;
        } else {
            // probe the r-sphere around x
            bool any_in = inside, all_in = inside;
            for (int pdx = 0; pdx < probes && (all_in || !any_in); ++pdx) {
                Eigen::VectorXd dir(m);
                for (int i = 0; i < m; ++i)
                    dir(i) = rng.uniform_at((samples + s) * 64 + pdx * m + i) - 0.5;
                if (dir.norm() == 0) continue;
                Eigen::VectorXd probe = x + covering_radius * dir / dir.norm();
                bool hit = set.contains(probe);
                any_in = any_in || hit;
                all_in = all_in && hit;
            }
            in_inner = inside && all_in;
            in_outer = any_in;
        }
        if (in_inner) ++inner_hits;
        if (in_outer) ++outer_hits;
    }

    SandwichResult result;
    result.exact_count = count;
    const double n = static_cast<double>(samples);
    double pi_in = static_cast<double>(inner_hits) / n;
    double pi_out = static_cast<double>(outer_hits) / n;
    result.inner_volume = box_vol * pi_in;
    result.outer_volume = box_vol * pi_out;
    result.inner_sigma = box_vol * std::sqrt(std::max(pi_in * (1 - pi_in), 1e-12) / n);
    result.outer_sigma = box_vol * std::sqrt(std::max(pi_out * (1 - pi_out), 1e-12) / n);
    const double vol = lattice.volume;
    result.holds =
        (result.inner_volume - 3 * result.inner_sigma) / vol <= static_cast<double>(count) &&
        static_cast<double>(count) <= (result.outer_volume + 3 * result.outer_sigma) / vol;
    return result;
}

}  // namespace idealtally
