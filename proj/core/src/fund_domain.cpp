#include "idealtally/fund_domain.hpp"

#include "idealtally/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace idealtally {

namespace {

constexpr double kWallTol = 1e-12;

DomainSpec make_domain(const NumberField& K, const PartitionSpec& partition, bool full) {
    DomainSpec spec;
    spec.r1 = K.r1;
    spec.r2 = K.r2;
    spec.degree = K.degree;
    spec.partition = partition;
    spec.full_cell = full;
    spec.regulator = K.regulator;
    const int r = partition.rank();
    double diag2 = 0.0;
    for (int i = 0; i < r; ++i) {
        double delta = static_cast<double>(partition.deltas()[static_cast<std::size_t>(i)]);
        double lo = -0.5 / delta;
        double hi = full ? 1.0 - 0.5 / delta : 0.5 / delta;
        spec.lambda_lo.push_back(lo);
        spec.lambda_hi.push_back(hi);
        double extent = std::max(std::fabs(lo), std::fabs(hi)) *
                        partition.units().ortho_norms[static_cast<std::size_t>(i)];
        diag2 += extent * extent;
    }
    spec.box_bound = std::exp(std::sqrt(diag2));
    return spec;
}

}  // namespace

DomainSpec make_cell_domain(const NumberField& K, const PartitionSpec& partition) {
    DomainSpec spec = make_domain(K, partition, false);
    // h ranges over a cuboid with sides <= 1/c, so the analytic bound applies.
    double analytic = std::exp(std::sqrt(static_cast<double>(partition.rank())) /
                               (2.0 * partition.c()));
    if (spec.box_bound > analytic * (1 + 1e-12))
        throw std::logic_error("make_cell_domain: cell box exceeded its analytic bound");
    spec.box_bound = std::min(spec.box_bound, analytic);
    return spec;
}

DomainSpec make_full_domain(const NumberField& K, const PartitionSpec& partition) {
    return make_domain(K, partition, true);
}

bool membership(const DomainSpec& spec, const MinkowskiPoint& x,
                std::optional<bool> exact_norm_in_01) {
    for (const auto& slot : x.slots)
        if (std::abs(slot) == 0.0) return false;

    LogPoint lp = log_embed(x);
    double mu = log_norm(lp);

    if (exact_norm_in_01) {
        if (!*exact_norm_in_01) return false;
    } else {
        if (!(std::exp(mu) <= 1.0 + kWallTol)) return false;
    }

    const int slots = spec.slot_count();
    const double nu_coord = 1.0 / static_cast<double>(slots);
    Eigen::VectorXd h(slots);
    for (int i = 0; i < slots; ++i)
        h(i) = lp.coords[static_cast<std::size_t>(i)] - mu * nu_coord;

    const auto lambdas = spec.partition.e_frame_coords(h);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] >= spec.lambda_lo[i] - kWallTol)) return false;
        if (!(lambdas[i] < spec.lambda_hi[i] - kWallTol)) return false;
    }
    return true;
}

MinkowskiPoint g_map(const NumberField& K, const Eigen::VectorXd& x,
                     const std::vector<double>& angles) {
    if (x.size() != K.slot_count())
        throw std::invalid_argument("g_map: log coordinate count mismatch");
    if (static_cast<int>(angles.size()) != K.r2)
        throw std::invalid_argument("g_map: expected r2 angles");
    MinkowskiPoint p;
    p.r1 = K.r1;
    p.r2 = K.r2;
    for (int i = 0; i < K.r1; ++i) p.slots.emplace_back(std::exp(x(i)), 0.0);
    for (int j = 0; j < K.r2; ++j) {
        double mag = std::exp(x(K.r1 + j) / 2.0);
        double th = angles[static_cast<std::size_t>(j)];
        p.slots.emplace_back(mag * std::cos(th), mag * std::sin(th));
    }
    return p;
}

std::pair<Eigen::VectorXd, std::vector<double>> f_map(const NumberField& K,
                                                      const MinkowskiPoint& x) {
    for (int i = 0; i < K.r1; ++i)
        if (!(x.slots[static_cast<std::size_t>(i)].real() > 0))
            throw std::domain_error("f_map: point outside M+ (nonpositive real slot)");
    LogPoint lp = log_embed(x);
    Eigen::VectorXd log_part(K.slot_count());
    for (int i = 0; i < K.slot_count(); ++i) log_part(i) = lp.coords[static_cast<std::size_t>(i)];
    std::vector<double> angles;
    for (int j = 0; j < K.r2; ++j) {
        double th = std::arg(x.slots[static_cast<std::size_t>(K.r1 + j)]);
        if (th < 0) th += 2.0 * std::numbers::pi;
        angles.push_back(th);
    }
    return {log_part, angles};
}

double g_jacobian_det(const NumberField& K, const Eigen::VectorXd& x) {
    return std::pow(2.0, -K.r2) * std::exp(x.sum());
}

double g_spectral_norm(const NumberField& K, const Eigen::VectorXd& x) {
    double best = 0.0;
    for (int i = 0; i < K.slot_count(); ++i)
        best = std::max(best, std::exp(x(i) / K.weight(i)));
    return best;
}

DomainVolume domain_volume(const DomainSpec& spec) {
    DomainVolume v;
    double pi_pow = std::pow(std::numbers::pi, spec.r2);
    double cells = std::exp(spec.partition.log_cell_count());
    v.per_cell = pi_pow * spec.regulator / cells;
    v.full_domain = std::pow(2.0, spec.r1) * pi_pow * spec.regulator;
    return v;
}

double domain_volume_of(const DomainSpec& spec) {
    DomainVolume v = domain_volume(spec);
    return spec.full_cell ? v.full_domain : std::pow(2.0, spec.r1) * v.per_cell;
}

McEstimate monte_carlo_volume(const DomainSpec& spec, std::uint64_t samples,
                              std::uint64_t seed) {
    if (samples < 10'000)
        throw std::invalid_argument("monte_carlo_volume: at least 10^4 samples required");
    const double b = spec.box_bound;
    const int r1 = spec.r1, r2 = spec.r2;
    const int coords_per_sample = r1 + 2 * r2;
    double box_vol = std::pow(2.0 * b, r1) * std::pow(std::numbers::pi * b * b, r2);

    CounterRng rng(seed);
    std::uint64_t hits = 0;
    MinkowskiPoint x;
    x.r1 = r1;
    x.r2 = r2;
    x.slots.resize(static_cast<std::size_t>(r1 + r2));
    for (std::uint64_t s = 0; s < samples; ++s) {
        std::uint64_t base = s * static_cast<std::uint64_t>(coords_per_sample);
        for (int i = 0; i < r1; ++i) {
            double u = rng.uniform_at(base + static_cast<std::uint64_t>(i));
            x.slots[static_cast<std::size_t>(i)] = {b * (2.0 * u - 1.0), 0.0};
        }
        for (int j = 0; j < r2; ++j) {
            double u = rng.uniform_at(base + static_cast<std::uint64_t>(r1 + 2 * j));
            double v = rng.uniform_at(base + static_cast<std::uint64_t>(r1 + 2 * j + 1));
            double radius = b * std::sqrt(u);
            double angle = 2.0 * std::numbers::pi * v;
            x.slots[static_cast<std::size_t>(r1 + j)] = {radius * std::cos(angle),
                                                         radius * std::sin(angle)};
        }
        if (membership(spec, x)) ++hits;
    }
    McEstimate est;
    est.samples = samples;
    double p = static_cast<double>(hits) / static_cast<double>(samples);
    est.estimate = box_vol * p;
    est.std_error = box_vol * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(samples));
    return est;
}

// ---- boundary atlas ----------------------------------------------------------

BoundaryAtlas boundary_atlas(const DomainSpec& spec) {
    if (spec.full_cell)
        throw std::invalid_argument("boundary_atlas: defined for the partition cell domain");
    BoundaryAtlas atlas;
    atlas.spec = spec;
    const double c = spec.partition.c();
    const int slots = spec.slot_count();
    const int r = spec.partition.rank();
    const int n = spec.degree;
    const double sqrt_slots = std::sqrt(static_cast<double>(slots));

    atlas.lipschitz = std::exp(std::sqrt(static_cast<double>(r)) / (2.0 * c)) / c;
    atlas.glue_ratio = std::exp(-1.0 / (2.0 * sqrt_slots * c));  // w^{1/(2(r1+r2))}
    atlas.glue_total_length = 1.0 / (1.0 - atlas.glue_ratio);
    atlas.segment_count = static_cast<std::int64_t>(std::ceil(2.0 * sqrt_slots * c + 1.0));
    if (static_cast<double>(atlas.segment_count) < atlas.glue_total_length)
        throw std::logic_error("boundary_atlas: glue length exceeds the segment budget");

    const std::int64_t two_pi_c = spec.partition.two_pi_c();
    atlas.chart_count = BigInt(2 * n) * BigInt(atlas.segment_count);
    for (int j = 0; j < spec.r2; ++j) atlas.chart_count *= two_pi_c;
    atlas.chart_count <<= spec.r1;

    atlas.log_chart_count = std::log(2.0 * n) + std::log(static_cast<double>(atlas.segment_count)) +
                            spec.r2 * std::log(static_cast<double>(two_pi_c)) +
                            spec.r1 * std::log(2.0);
    atlas.log_chart_bound = std::log(6.0 * n * sqrt_slots * c) +
                            spec.r2 * std::log(static_cast<double>(two_pi_c)) +
                            spec.r1 * std::log(2.0);
    if (atlas.log_chart_count > atlas.log_chart_bound + 1e-12)
        throw std::logic_error("boundary_atlas: chart count exceeds its stated bound");
    return atlas;
}

namespace {

// psi_0-style interior map: cube coords (glue v, e-coords, angles) -> M+,
// then k twists by Psi_{g(log(w) nu, 0)} for the glue segment.
MinkowskiPoint glued_map_point(const BoundaryAtlas& atlas, const std::vector<std::int64_t>& gamma,
                               double tau, const std::vector<double>& cube_rest) {
    const DomainSpec& spec = atlas.spec;
    const PartitionSpec& part = spec.partition;
    const int slots = spec.slot_count();
    const int r = part.rank();
    const double c = part.c();
    const double rho = atlas.glue_ratio;
    const double log_rho = std::log(rho);

    MinkowskiPoint zero;
    zero.r1 = spec.r1;
    zero.r2 = spec.r2;
    zero.slots.assign(static_cast<std::size_t>(slots), {0.0, 0.0});

    // glue coordinate tau in [0, T]; A = 1 - tau/T = rho^k (1 - v (1 - rho)).
    const long double A = 1.0L - static_cast<long double>(tau) / atlas.glue_total_length;
    if (A <= 1e-300L) return zero;  // continuous extension: phi(T, .) = 0
    auto k = static_cast<long long>(std::floor(static_cast<double>(std::log(A)) / log_rho));
    if (k < 0) k = 0;
    long double ratio = std::exp(static_cast<long double>(std::log(A)) -
                                 static_cast<long double>(k) * log_rho);  // A / rho^k
    double v = static_cast<double>((1.0L - ratio) / (1.0L - static_cast<long double>(rho)));
    v = std::clamp(v, 0.0, 1.0);

    // interior map on the slab G_gamma(w, 1)
    Eigen::VectorXd log_part = Eigen::VectorXd::Zero(slots);
    for (int i = 0; i < r; ++i) {
        double delta = static_cast<double>(part.deltas()[static_cast<std::size_t>(i)]);
        log_part += ((cube_rest[static_cast<std::size_t>(i)] - 0.5) / delta) *
                    part.units().ortho_basis[static_cast<std::size_t>(i)];
    }
    const double sqrt_slots = std::sqrt(static_cast<double>(slots));
    const double nu_coord = 1.0 / static_cast<double>(slots);
    for (int i = 0; i < slots; ++i) log_part(i) -= v * sqrt_slots / c * nu_coord;

    std::vector<double> angles;
    for (int j = 0; j < spec.r2; ++j) {
        double a = cube_rest[static_cast<std::size_t>(r + j)];
        angles.push_back((a + static_cast<double>(gamma[static_cast<std::size_t>(j)])) / c);
    }

    MinkowskiPoint p;
    p.r1 = spec.r1;
    p.r2 = spec.r2;
    const double log_w = -sqrt_slots / c;
    for (int i = 0; i < spec.r1; ++i)
        p.slots.emplace_back(std::exp(log_part(i) + static_cast<double>(k) * log_w * nu_coord), 0.0);
    for (int j = 0; j < spec.r2; ++j) {
        double mag = std::exp((log_part(spec.r1 + j) + static_cast<double>(k) * log_w * nu_coord) / 2.0);
        double th = angles[static_cast<std::size_t>(j)];
        p.slots.emplace_back(mag * std::cos(th), mag * std::sin(th));
    }
    return p;
}

}  // namespace

MinkowskiPoint atlas_chart_point(const BoundaryAtlas& atlas, const ChartIndex& chart,
                                 const std::vector<double>& u) {
    const DomainSpec& spec = atlas.spec;
    const int n = spec.degree;
    if (static_cast<int>(u.size()) != n - 1)
        throw std::invalid_argument("atlas_chart_point: expected n-1 parameters");
    if (chart.face < 0 || chart.face >= 2 * n)
        throw std::invalid_argument("atlas_chart_point: face out of range");

    // cube coordinates: [0] glue, [1..r] cell, [r+1..] angles
    std::vector<double> cube(static_cast<std::size_t>(n), 0.0);
    const int axis = chart.face / 2;
    const double side = (chart.face % 2 == 0) ? 0.0 : 1.0;
    {
        std::size_t src = 0;
        for (int i = 0; i < n; ++i) {
            if (i == axis)
                cube[static_cast<std::size_t>(i)] = side;
            else
                cube[static_cast<std::size_t>(i)] = u[src++];
        }
    }

    const double seg_len = atlas.glue_total_length / static_cast<double>(atlas.segment_count);
    double tau = (static_cast<double>(chart.segment) + cube[0]) * seg_len;
    std::vector<double> rest(cube.begin() + 1, cube.end());

    MinkowskiPoint p = glued_map_point(atlas, chart.gamma, tau, rest);
    for (int i = 0; i < spec.r1; ++i)
        if (chart.sign_bits & (1u << i))
            p.slots[static_cast<std::size_t>(i)] = -p.slots[static_cast<std::size_t>(i)];
    return p;
}

ChartIndex sample_chart(const BoundaryAtlas& atlas, CounterRng& rng) {
    ChartIndex chart;
    const DomainSpec& spec = atlas.spec;
    chart.face = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * spec.degree)));
    chart.segment =
        static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(atlas.segment_count)));
    for (int j = 0; j < spec.r2; ++j)
        chart.gamma.push_back(
            static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(spec.partition.two_pi_c()))));
    chart.sign_bits = spec.r1 > 0
                          ? static_cast<std::uint32_t>(rng.below(1ull << spec.r1))
                          : 0u;
    return chart;
}

// ---- enumeration --------------------------------------------------------------

Lattice ideal_lattice(const NumberField& K, double scale) {
    const int n = K.degree;
    Eigen::MatrixXd basis(n, n);
    FieldElement power;
    power.coords.assign(static_cast<std::size_t>(n), BigInt(0));
    for (int j = 0; j < n; ++j) {
        power.coords.assign(static_cast<std::size_t>(n), BigInt(0));
        power.coords[static_cast<std::size_t>(j)] = 1;
        std::vector<double> col = flatten(minkowski_embed(K, power));
        for (int i = 0; i < n; ++i) basis(i, j) = scale * col[static_cast<std::size_t>(i)];
    }
    return make_lattice(std::move(basis));
}

namespace {

Lattice twist_lattice(const NumberField& K, const Lattice& base, const MinkowskiPoint& beta) {
    const int n = K.degree;
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
    return make_lattice(M * base.basis);
}

}  // namespace

DomainEnumeration enumerate_lattice_in_domain(const DomainSpec& spec, const NumberField& K,
                                              const Lattice& lattice,
                                              const DomainEnumerationOptions& opts) {
    const int n = K.degree;
    if (lattice.dim != n)
        throw std::invalid_argument("enumerate_lattice_in_domain: lattice dimension != n");
    const double b = spec.box_bound;
    const double radius = b * std::sqrt(static_cast<double>(n));
    Eigen::VectorXd origin = Eigen::VectorXd::Zero(n);
    auto candidates = enumerate_in_ball(lattice, origin, radius, opts.budget, /*skip_origin=*/true);

    DomainEnumeration out;
    for (const auto& z : candidates) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) v += static_cast<double>(z(i)) * lattice.basis.col(i);
        std::vector<double> coords(v.data(), v.data() + n);
        MinkowskiPoint x = unflatten(K, coords);
        bool in_box = true;
        for (const auto& slot : x.slots)
            if (std::abs(slot) > b * (1.0 + 1e-9)) in_box = false;
        if (!in_box) continue;
        std::optional<bool> exact;
        if (opts.exact_norm_in_01) exact = opts.exact_norm_in_01(z);
        if (!membership(spec, x, exact)) continue;
        ++out.count;
        if (opts.collect_points) out.points.push_back({z, x, point_norm(x)});
    }
    return out;
}

std::string format_point_line(std::int64_t s_index, const DomainPoint& p) {
    std::ostringstream os;
    os << s_index;
    for (int i = 0; i < p.coefficients.size(); ++i) os << " " << p.coefficients(i);
    for (double coord : flatten(p.point)) os << " " << coord;
    os << " " << p.norm_value;
    return os.str();
}

// ---- identities ---------------------------------------------------------------

namespace {

PartitionIdentityResult run_identity(const NumberField& K, const PartitionSpec& partition,
                                     const BigInt& t_pow_n, const IdealCountTable& table,
                                     std::uint64_t budget, bool full_domain,
                                     const PointSink& sink = {}) {
    if (t_pow_n < 1)
        throw std::invalid_argument("partition identity: t^n must be a positive integer");
    PartitionIdentityResult result;
    result.t_pow_n = t_pow_n;
    const double tn = t_pow_n.convert_to<double>();
    result.sigma_value = sigma(table, tn);

    const double t = std::pow(tn, 1.0 / static_cast<double>(K.degree));
    Lattice base = ideal_lattice(K, 1.0 / t);

    DomainEnumerationOptions opts;
    opts.budget = budget;
    opts.collect_points = static_cast<bool>(sink);
    opts.exact_norm_in_01 = [&](const Eigen::Matrix<long long, Eigen::Dynamic, 1>& z) {
        FieldElement alpha;
        alpha.coords.reserve(static_cast<std::size_t>(K.degree));
        for (int i = 0; i < K.degree; ++i) alpha.coords.emplace_back(z(i));
        BigInt nrm = element_norm(K, alpha);
        if (nrm < 0) nrm = -nrm;
        return nrm > 0 && nrm <= t_pow_n;
    };

    if (full_domain) {
        DomainSpec spec = make_full_domain(K, partition);
        auto res = enumerate_lattice_in_domain(spec, K, base, opts);
        result.point_total = res.count;
        result.per_cell.push_back(res.count);
        if (sink)
            for (const auto& p : res.points) sink(0, p);
    } else {
        DomainSpec spec = make_cell_domain(K, partition);
        std::int64_t s_index = 0;
        for_each_cell(partition, /*cap=*/1'000'000, [&](const std::vector<std::int64_t>& s) {
            MinkowskiPoint beta = partition.multiplier(s);
            Lattice twisted = twist_lattice(K, base, beta);
            auto res = enumerate_lattice_in_domain(spec, K, twisted, opts);
            result.per_cell.push_back(res.count);
            result.point_total += res.count;
            if (sink)
                for (const auto& p : res.points) sink(s_index, p);
            ++s_index;
        });
    }
    const auto omega = static_cast<std::uint64_t>(K.roots_of_unity);
    result.exact_match = (result.point_total % omega == 0) &&
                         (result.point_total / omega == result.sigma_value);
    return result;
}

}  // namespace

PartitionIdentityResult verify_partition_identity(const NumberField& K,
                                                  const PartitionSpec& partition,
                                                  const BigInt& t_pow_n,
                                                  const IdealCountTable& table,
                                                  std::uint64_t budget, const PointSink& sink) {
    return run_identity(K, partition, t_pow_n, table, budget, /*full_domain=*/false, sink);
}

PartitionIdentityResult verify_full_domain_identity(const NumberField& K,
                                                    const PartitionSpec& partition,
                                                    const BigInt& t_pow_n,
                                                    const IdealCountTable& table,
                                                    std::uint64_t budget) {
    return run_identity(K, partition, t_pow_n, table, budget, /*full_domain=*/true);
}

}  // namespace idealtally
