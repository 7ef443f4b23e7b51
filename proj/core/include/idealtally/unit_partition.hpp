#pragma once

#include "idealtally/field.hpp"
#include "idealtally/lattice.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace idealtally {

/// Log-unit lattice Gamma in the trace-zero hyperplane H of L = R^{r1+r2},
/// with an LLL-reduced basis l_i and its orthogonalization e_i.
struct UnitLatticeData {
    int rank = 0;                             // r
    int slots = 0;                            // r1 + r2
    std::vector<Eigen::VectorXd> gamma_basis; // raw log images of the units
    std::vector<Eigen::VectorXd> lll_basis;   // l_i
    std::vector<Eigen::VectorXd> ortho_basis; // e_i
    std::vector<double> ortho_norms;          // ||e_i||
    double gamma_volume = 1.0;                // prod ||e_i|| = sqrt(r1+r2) R_K
    double regulator = 1.0;
};

/// Builds Gamma from the field's fundamental units (empty for r = 0).
/// Throws when the supplied units are dependent in log space.
UnitLatticeData build_unit_lattice(const NumberField& K);

/// The smallest c = k/(2 pi), k a positive integer, with
/// c >= max(1, (sqrt(r)(n-1) + 28 n 2^{r/2}) / 2). Asserts c <= 15 n 2^{r/2}.
double choose_c(const NumberField& K);

/// The partition data: cell exponents delta_i, index set S = prod [0, delta_i),
/// translates y_s and Minkowski multipliers beta_s generated on demand.
class PartitionSpec {
public:
    PartitionSpec() = default;
    PartitionSpec(const NumberField& K, UnitLatticeData units, double c);

    int rank() const { return units_.rank; }
    double c() const { return c_; }
    std::int64_t two_pi_c() const { return two_pi_c_; }
    const std::vector<std::int64_t>& deltas() const { return deltas_; }
    const UnitLatticeData& units() const { return units_; }
    int r1() const { return r1_; }
    int r2() const { return r2_; }

    const BigInt& cell_count() const { return s_count_; }       // |S|
    double log_cell_count() const { return log_s_count_; }      // log |S|

    /// y_s = sum (s_i / delta_i) e_i, a point of H.
    Eigen::VectorXd translate(const std::vector<std::int64_t>& s) const;

    /// beta_s in M with ell(beta_s) = -y_s and N(beta_s) = 1.
    MinkowskiPoint multiplier(const std::vector<std::int64_t>& s) const;
    MinkowskiPoint multiplier_of_log(const Eigen::VectorXd& y) const;

    /// The unique s whose cell tau_{y_s} D_delta contains h (coordinates taken
    /// in the e_i frame, half-open walls). h must lie in the union of cells.
    std::vector<std::int64_t> locate_cell(const Eigen::VectorXd& h) const;

    /// e_i-frame coordinates of a point of H.
    std::vector<double> e_frame_coords(const Eigen::VectorXd& h) const;

private:
    UnitLatticeData units_;
    double c_ = 0.0;
    std::int64_t two_pi_c_ = 0;
    std::vector<std::int64_t> deltas_;
    BigInt s_count_ = 1;
    double log_s_count_ = 0.0;
    int r1_ = 0, r2_ = 0;
};

PartitionSpec build_partition(const NumberField& K, const UnitLatticeData& units, double c);

/// Visits every s in S in odometer order. Throws BudgetExceeded when |S|
/// exceeds the cap (bound arithmetic stays available regardless).
void for_each_cell(const PartitionSpec& partition, std::uint64_t cap,
                   const std::function<void(const std::vector<std::int64_t>&)>& visit);

/// nu = (1/(r1+r2), ..., 1/(r1+r2)), the direction with N_log(nu) = 1.
Eigen::VectorXd nu_vector(const NumberField& K);

}  // namespace idealtally
