#pragma once

#include "idealtally/field.hpp"
#include "idealtally/ideal_count.hpp"
#include "idealtally/lattice.hpp"
#include "idealtally/rng.hpp"
#include "idealtally/unit_partition.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace idealtally {

/// The domain F(D, (0,1], nu) for D either the partition cell D_delta or the
/// union of all translated cells (the "full" parallelepiped of Gamma).
struct DomainSpec {
    int r1 = 0, r2 = 0, degree = 0;
    PartitionSpec partition;
    bool full_cell = false;            // false: D_delta; true: union of cells
    std::vector<double> lambda_lo;     // e_i-frame wall, lower (inclusive)
    std::vector<double> lambda_hi;     // e_i-frame wall, upper (exclusive)
    double box_bound = 1.0;            // membership implies |x_i| <= box_bound
    double regulator = 1.0;

    int slot_count() const { return r1 + r2; }
};

DomainSpec make_cell_domain(const NumberField& K, const PartitionSpec& partition);
DomainSpec make_full_domain(const NumberField& K, const PartitionSpec& partition);

/// True iff all coordinates are nonzero, N(x) lies in (0,1], and the H-part
/// of ell(x) sits inside the domain's half-open box. An optional exact
/// verdict replaces the floating-point norm-interval test.
bool membership(const DomainSpec& spec, const MinkowskiPoint& x,
                std::optional<bool> exact_norm_in_01 = std::nullopt);

// ---- the coordinate maps g and f -------------------------------------------

/// g(x, theta): L x T -> M+, exponential per slot with angles on complex slots.
MinkowskiPoint g_map(const NumberField& K, const Eigen::VectorXd& x,
                     const std::vector<double>& angles);

/// f = (ell, arg ...), inverse of g on M+ (angles normalized to [0, 2 pi)).
std::pair<Eigen::VectorXd, std::vector<double>> f_map(const NumberField& K,
                                                      const MinkowskiPoint& x);

/// |det Dg(x, theta)| = 2^{-r2} exp(sum x_i).
double g_jacobian_det(const NumberField& K, const Eigen::VectorXd& x);

/// Spectral norm of Dg: max_i exp(x_i / n_i).
double g_spectral_norm(const NumberField& K, const Eigen::VectorXd& x);

// ---- volumes ---------------------------------------------------------------

struct DomainVolume {
    double per_cell = 0.0;     // Vol F(0,1) = pi^{r2} R_K / |S|
    double full_domain = 0.0;  // Vol F(D,(0,1],nu) = 2^{r1} pi^{r2} R_K
};
DomainVolume domain_volume(const DomainSpec& spec);

/// Lebesgue volume of exactly this spec's domain (cell or full).
double domain_volume_of(const DomainSpec& spec);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

/// Uniform sampling over the per-coordinate box (real slots symmetric
/// intervals, complex slots disks); reproducible for a fixed seed.
McEstimate monte_carlo_volume(const DomainSpec& spec, std::uint64_t samples,
                              std::uint64_t seed);

// ---- boundary atlas ---------------------------------------------------------

/// Chart address within the glued boundary atlas.
struct ChartIndex {
    int face = 0;                       // 0..2n-1: cube face
    std::int64_t segment = 0;           // 0..m_seg-1: glue-direction segment
    std::vector<std::int64_t> gamma;    // r2 angular cell indices in [0, 2 pi c)
    std::uint32_t sign_bits = 0;        // r1 real-slot reflections
};

struct BoundaryAtlas {
    DomainSpec spec;
    double lipschitz = 0.0;             // L = exp(sqrt(r)/(2c)) / c
    std::int64_t segment_count = 0;     // m_seg = ceil(2 sqrt(r1+r2) c + 1)
    BigInt chart_count;                 // 2n m_seg (2 pi c)^{r2} 2^{r1}
    double log_chart_count = 0.0;
    double log_chart_bound = 0.0;       // log of 6n sqrt(r1+r2) c (2 pi c)^{r2} 2^{r1}
    double glue_total_length = 0.0;     // 1 / (1 - rho)
    double glue_ratio = 0.0;            // rho = w^{1/(2(r1+r2))}
};

BoundaryAtlas boundary_atlas(const DomainSpec& spec);

/// Evaluates a boundary chart at u in [0,1]^{n-1}; each chart map is
/// lipschitz-continuous with the atlas constant L.
MinkowskiPoint atlas_chart_point(const BoundaryAtlas& atlas, const ChartIndex& chart,
                                 const std::vector<double>& u);

/// Uniformly random chart address (used when the chart count is too large to
/// enumerate).
ChartIndex sample_chart(const BoundaryAtlas& atlas, CounterRng& rng);

// ---- lattice points inside the domain ---------------------------------------

struct DomainEnumerationOptions {
    std::uint64_t budget = 10'000'000;
    /// Exact decision of 0 < |N(alpha)| <= cap for the element with the given
    /// coefficient vector; replaces the floating norm-interval test.
    std::function<bool(const Eigen::Matrix<long long, Eigen::Dynamic, 1>&)> exact_norm_in_01;
    bool collect_points = false;
};

struct DomainPoint {
    Eigen::Matrix<long long, Eigen::Dynamic, 1> coefficients;
    MinkowskiPoint point;
    double norm_value = 0.0;
};

struct DomainEnumeration {
    std::uint64_t count = 0;
    std::vector<DomainPoint> points;  // filled when collect_points is set
};

/// Exact count of lattice points of Lambda inside the domain, via the
/// analytic per-coordinate box |x_i| <= box_bound.
DomainEnumeration enumerate_lattice_in_domain(const DomainSpec& spec, const NumberField& K,
                                              const Lattice& lattice,
                                              const DomainEnumerationOptions& opts = {});

/// Debug dump format: "s_index coeffs... coords... norm" per line.
std::string format_point_line(std::int64_t s_index, const DomainPoint& p);

// ---- the counting identities -------------------------------------------------

/// Minkowski-embedding lattice of O_K scaled by 1/t (the lattice A_t with
/// a = O_K), as a full-rank lattice of R^n.
Lattice ideal_lattice(const NumberField& K, double scale);

struct PartitionIdentityResult {
    BigInt t_pow_n;                       // the norm bound t^n
    std::uint64_t sigma_value = 0;        // sigma_K(t^n) from the oracle
    std::uint64_t point_total = 0;        // sum over s of |Psi_{beta_s} A_t cap F|
    std::vector<std::uint64_t> per_cell;  // one count per s (identity workflow.)
    bool exact_match = false;             // sigma == point_total / omega
};

/// Sink for the optional per-point debug dump (s index, then the point).
using PointSink = std::function<void(std::int64_t, const DomainPoint&)>;

/// Cell-by-cell identity: sigma_K(t^n) = (1/omega) sum_s |Psi_{beta_s} A_t cap F(D_delta)|.
PartitionIdentityResult verify_partition_identity(const NumberField& K,
                                                  const PartitionSpec& partition,
                                                  const BigInt& t_pow_n,
                                                  const IdealCountTable& table,
                                                  std::uint64_t budget = 10'000'000,
                                                  const PointSink& sink = {});

/// The same count taken against the full parallelepiped D, no twists.
PartitionIdentityResult verify_full_domain_identity(const NumberField& K,
                                                    const PartitionSpec& partition,
                                                    const BigInt& t_pow_n,
                                                    const IdealCountTable& table,
                                                    std::uint64_t budget = 10'000'000);

}  // namespace idealtally
