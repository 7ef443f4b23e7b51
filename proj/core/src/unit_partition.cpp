#include "idealtally/unit_partition.hpp"

#include "idealtally/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace idealtally {

namespace {

// Orthonormal basis of H = {x : sum x_i = 0} (Helmert rows): row k is
// (1,...,1,-k,0,...,0)/sqrt(k(k+1)) with k ones.
Eigen::MatrixXd helmert_basis(int slots) {
    const int r = slots - 1;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(r, slots);
    for (int k = 1; k <= r; ++k) {
        double scale = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
        for (int j = 0; j < k; ++j) H(k - 1, j) = scale;
        H(k - 1, k) = -static_cast<double>(k) * scale;
    }
    return H;
}

}  // namespace

UnitLatticeData build_unit_lattice(const NumberField& K) {
    UnitLatticeData data;
    data.rank = K.unit_rank;
    data.slots = K.slot_count();
    data.regulator = K.regulator;
    data.gamma_volume = std::sqrt(static_cast<double>(data.slots)) * K.regulator;
    if (data.rank == 0) {
        data.gamma_volume = 1.0;  // empty product; R_K = 1 convention
        return data;
    }
    if (static_cast<int>(K.fundamental_units.size()) != data.rank)
        throw std::invalid_argument("build_unit_lattice: fundamental units missing");

    const int r = data.rank;
    for (const auto& u : K.fundamental_units) {
        LogPoint lp = log_embed(minkowski_embed(K, u));
        Eigen::VectorXd v(data.slots);
        for (int i = 0; i < data.slots; ++i) v(i) = lp.coords[static_cast<std::size_t>(i)];
        if (std::fabs(v.sum()) > 1e-9)
            throw std::invalid_argument("build_unit_lattice: log image off the trace-zero plane");
        data.gamma_basis.push_back(std::move(v));
    }

    // LLL in an orthonormal frame of H, transform pulled back to L.
    Eigen::MatrixXd frame = helmert_basis(data.slots);
    Eigen::MatrixXd G(r, r);
    for (int j = 0; j < r; ++j) G.col(j) = frame * data.gamma_basis[static_cast<std::size_t>(j)];
    Lattice gamma;
    try {
        gamma = make_lattice(G);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("build_unit_lattice: units dependent in log space");
    }
    LllResult red = lll_reduce(gamma);
    for (int j = 0; j < r; ++j) {
        Eigen::VectorXd l = Eigen::VectorXd::Zero(data.slots);
        for (int i = 0; i < r; ++i)
            l += static_cast<double>(red.transform(i, j)) * data.gamma_basis[static_cast<std::size_t>(i)];
        data.lll_basis.push_back(std::move(l));
    }

    // Gram-Schmidt of the l_i inside L.
    for (int i = 0; i < r; ++i) {
        Eigen::VectorXd e = data.lll_basis[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) {
            const Eigen::VectorXd& ej = data.ortho_basis[static_cast<std::size_t>(j)];
            e -= (data.lll_basis[static_cast<std::size_t>(i)].dot(ej) / ej.squaredNorm()) * ej;
        }
        data.ortho_norms.push_back(e.norm());
        data.ortho_basis.push_back(std::move(e));
    }

    double vol = 1.0;
    for (double nrm : data.ortho_norms) vol *= nrm;
    double expected = std::sqrt(static_cast<double>(data.slots)) * K.regulator;
    if (std::fabs(vol - expected) > 1e-9 * std::max(1.0, expected))
        throw std::runtime_error("build_unit_lattice: lattice volume disagrees with the regulator");
    data.gamma_volume = vol;
    return data;
}

double choose_c(const NumberField& K) {
    if (K.degree < 2) throw std::invalid_argument("choose_c: degree >= 2 required");
    const int n = K.degree;
    const int r = K.unit_rank;
    const double lower =
        std::max(1.0, (std::sqrt(static_cast<double>(r)) * (n - 1) +
                       28.0 * n * std::pow(2.0, 0.5 * r)) /
                          2.0);
    const double two_pi = 2.0 * std::numbers::pi;
    auto k = static_cast<std::int64_t>(std::ceil(two_pi * lower));
    double c = static_cast<double>(k) / two_pi;
    const double upper = 15.0 * n * std::pow(2.0, 0.5 * r);
    if (c > upper)
        throw std::logic_error("choose_c: minimal admissible c exceeds 15 n 2^{r/2}");
    return c;
}

PartitionSpec::PartitionSpec(const NumberField& K, UnitLatticeData units, double c)
    : units_(std::move(units)), c_(c), r1_(K.r1), r2_(K.r2) {
    if (c_ < 1.0) throw std::invalid_argument("PartitionSpec: c >= 1 required");
    const double two_pi = 2.0 * std::numbers::pi;
    two_pi_c_ = std::llround(two_pi * c_);
    if (std::fabs(two_pi * c_ - static_cast<double>(two_pi_c_)) > 1e-6)
        throw std::invalid_argument("PartitionSpec: 2 pi c must be an integer");

    const int n = K.degree;
    const int r = units_.rank;
    const double lower =
        std::max(1.0, (std::sqrt(static_cast<double>(r)) * (n - 1) +
                       28.0 * n * std::pow(2.0, 0.5 * r)) /
                          2.0);
    const double upper = 15.0 * n * std::pow(2.0, 0.5 * r);
    if (c_ < lower * (1 - 1e-12) || c_ > upper * (1 + 1e-12))
        throw std::invalid_argument("PartitionSpec: c outside the admissible window");

    log_s_count_ = 0.0;
    for (int i = 0; i < r; ++i) {
        double raw = c_ * units_.ortho_norms[static_cast<std::size_t>(i)];
        auto delta = static_cast<std::int64_t>(std::ceil(raw));
        deltas_.push_back(delta);
        s_count_ *= delta;
        log_s_count_ += std::log(static_cast<double>(delta));
    }

    // Lemma on |S|: c^r sqrt(r1+r2) R <= |S| <= exp(14 n 2^{r/2}/c) c^r sqrt(r1+r2) R.
    if (r > 0) {
        double log_lo = r * std::log(c_) + std::log(units_.gamma_volume);
        double log_hi = log_lo + 14.0 * n * std::pow(2.0, 0.5 * r) / c_;
        if (log_s_count_ < log_lo - 1e-9 || log_s_count_ > log_hi + 1e-9)
            throw std::logic_error("PartitionSpec: |S| violates its sandwich bounds");
    }
}

Eigen::VectorXd PartitionSpec::translate(const std::vector<std::int64_t>& s) const {
    if (static_cast<int>(s.size()) != units_.rank)
        throw std::invalid_argument("translate: index length != r");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(units_.slots);
    for (int i = 0; i < units_.rank; ++i) {
        double frac = static_cast<double>(s[static_cast<std::size_t>(i)]) /
                      static_cast<double>(deltas_[static_cast<std::size_t>(i)]);
        y += frac * units_.ortho_basis[static_cast<std::size_t>(i)];
    }
    return y;
}

MinkowskiPoint PartitionSpec::multiplier_of_log(const Eigen::VectorXd& y) const {
    MinkowskiPoint beta;
    beta.r1 = r1_;
    beta.r2 = r2_;
    for (int i = 0; i < units_.slots; ++i) {
        double w = i < r1_ ? 1.0 : 2.0;
        beta.slots.emplace_back(std::exp(-y(i) / w), 0.0);
    }
    return beta;
}

MinkowskiPoint PartitionSpec::multiplier(const std::vector<std::int64_t>& s) const {
    return multiplier_of_log(translate(s));
}

std::vector<double> PartitionSpec::e_frame_coords(const Eigen::VectorXd& h) const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(units_.rank));
    for (int i = 0; i < units_.rank; ++i) {
        const Eigen::VectorXd& e = units_.ortho_basis[static_cast<std::size_t>(i)];
        out.push_back(h.dot(e) / e.squaredNorm());
    }
    return out;
}

std::vector<std::int64_t> PartitionSpec::locate_cell(const Eigen::VectorXd& h) const {
    std::vector<double> lam = e_frame_coords(h);
    std::vector<std::int64_t> s(static_cast<std::size_t>(units_.rank));
    for (int i = 0; i < units_.rank; ++i) {
        const auto delta = deltas_[static_cast<std::size_t>(i)];
        // lambda in [s/delta - 1/(2 delta), s/delta + 1/(2 delta))
        double scaled = lam[static_cast<std::size_t>(i)] * static_cast<double>(delta) + 0.5;
        auto idx = static_cast<std::int64_t>(std::floor(scaled + 1e-12));
        if (idx < 0 || idx >= delta)
            throw std::invalid_argument("locate_cell: point outside the partitioned domain");
        s[static_cast<std::size_t>(i)] = idx;
    }
    return s;
}

PartitionSpec build_partition(const NumberField& K, const UnitLatticeData& units, double c) {
    return PartitionSpec(K, units, c);
}

void for_each_cell(const PartitionSpec& partition, std::uint64_t cap,
                   const std::function<void(const std::vector<std::int64_t>&)>& visit) {
    if (partition.cell_count() > BigInt(cap))
        throw BudgetExceeded("for_each_cell: |S| exceeds the enumeration cap");
    const auto& deltas = partition.deltas();
    std::vector<std::int64_t> s(deltas.size(), 0);
    while (true) {
        visit(s);
        std::size_t i = 0;
        for (; i < deltas.size(); ++i) {
            if (++s[i] < deltas[i]) break;
            s[i] = 0;
        }
        if (i == deltas.size()) break;
    }
}

Eigen::VectorXd nu_vector(const NumberField& K) {
    const int slots = K.slot_count();
    return Eigen::VectorXd::Constant(slots, 1.0 / static_cast<double>(slots));
}

}  // namespace idealtally
