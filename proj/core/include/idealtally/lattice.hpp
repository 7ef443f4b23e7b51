#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace idealtally {

/// Full-rank real lattice; columns of `basis` are the basis vectors.
struct Lattice {
    int dim = 0;
    Eigen::MatrixXd basis;
    double volume = 0.0;  // |det basis|
};

/// Validates and derives the volume. Throws on a (near-)singular basis.
Lattice make_lattice(Eigen::MatrixXd basis);

struct GramSchmidtData {
    Eigen::MatrixXd ortho;  // columns v_i^*
    Eigen::MatrixXd mu;     // unit lower-triangular coefficients
};

/// Classical Gram-Schmidt recursion v_i^* = v_i - sum mu_ij v_j^*.
/// Throws std::runtime_error on numerical breakdown (near-dependence).
GramSchmidtData gram_schmidt(const Lattice& lattice);

struct LllResult {
    Lattice lattice;                                   // reduced basis, same lattice
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> transform;  // basis_out = basis_in * U
    bool exact_arithmetic = false;                     // rational path taken
};

/// LLL reduction with Lovasz parameter 3/4. Integral bases are reduced in
/// exact rational arithmetic; floating input re-orthogonalizes after each
/// swap. Output satisfies ||v_i|| <= 2^{(i-1)/2} ||v_i^*||.
LllResult lll_reduce(const Lattice& lattice);

struct MinimaData {
    std::vector<double> lambdas;    // successive minima, nondecreasing
    Eigen::MatrixXd witnesses;      // columns: independent vectors attaining them
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> coefficients;
};

/// Exact successive minima by bounded coefficient enumeration; dim <= 8.
MinimaData successive_minima(const Lattice& lattice, int k,
                             std::uint64_t budget = 10'000'000);

struct CoveringRadiusBound {
    double lemma_value = 0.0;                 // 2^{m-1} sqrt(m) Vol / (VolB(1) lambda_1^{m-1})
    std::optional<double> diagonal_value;     // sqrt(m) lambda_m / 2, when lambda_m known
    double best() const {
        return diagonal_value ? std::min(lemma_value, *diagonal_value) : lemma_value;
    }
};

/// Upper bounds for the covering radius from the successive minima; m >= 2.
CoveringRadiusBound covering_radius_bound(const Lattice& lattice, const MinimaData& minima);

/// Volume of the unit ball in R^m: pi^{m/2} / Gamma(m/2 + 1).
double ball_volume(int m);

/// Error budget for |X cap Lambda| vs Vol(X)/Vol(Lambda) when dX is of
/// Lipschitz class Lip(m-1, M, L):
///   M (sqrt(m-1) L)^{m-1} 2^m VolB(1) r(Lambda) / Vol(Lambda).
/// Requires r <= sqrt(m-1) L; a violation throws with both sides reported.
long double lip_count_error(int m, long double M, long double L, long double r_lambda,
                            long double vol_lambda);

/// Bounded test set for the inner/outer volume sandwich.
struct SandwichTestSet {
    std::function<bool(const Eigen::VectorXd&)> contains;
    Eigen::VectorXd box_lo;
    Eigen::VectorXd box_hi;
    /// Optional signed distance to the boundary, > 0 inside. When absent,
    /// distance classification falls back to direction probes.
    std::function<double(const Eigen::VectorXd&)> signed_distance;
};

struct SandwichResult {
    double inner_volume = 0.0;   // Monte-Carlo Vol(I_X)
    double outer_volume = 0.0;   // Monte-Carlo Vol(O_X)
    double inner_sigma = 0.0;
    double outer_sigma = 0.0;
    std::uint64_t exact_count = 0;
    bool holds = false;          // sandwich within 3 Monte-Carlo sigmas
};

/// Empirical check of Vol(I_X)/Vol(L) <= |X cap L| <= Vol(O_X)/Vol(L); dim <= 4.
SandwichResult sandwich_bounds_check(const Lattice& lattice, const SandwichTestSet& set,
                                     double covering_radius, std::uint64_t samples,
                                     std::uint64_t seed, std::uint64_t budget = 10'000'000);

/// All lattice points with ||B z - center|| <= radius; returns coefficient
/// vectors. Shared by minima search and domain enumeration.
std::vector<Eigen::Matrix<long long, Eigen::Dynamic, 1>> enumerate_in_ball(
    const Lattice& lattice, const Eigen::VectorXd& center, double radius,
    std::uint64_t budget, bool skip_origin);

}  // namespace idealtally
