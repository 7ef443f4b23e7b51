#include "idealtally/catalog.hpp"

namespace idealtally {
namespace catalog {

FieldConfig gaussian() {
    FieldConfig cfg;
    cfg.name = "qi";
    cfg.min_poly = {BigInt(1), BigInt(0), BigInt(1)};  // x^2 + 1
    return cfg;
}

FieldConfig sqrt2() {
    FieldConfig cfg;
    cfg.name = "sqrt2";
    cfg.min_poly = {BigInt(-2), BigInt(0), BigInt(1)};  // x^2 - 2
    return cfg;
}

FieldConfig sqrt5() {
    FieldConfig cfg;
    cfg.name = "sqrt5";
    cfg.min_poly = {BigInt(-1), BigInt(-1), BigInt(1)};  // x^2 - x - 1
    return cfg;
}

FieldConfig zeta11() {
    FieldConfig cfg;
    cfg.name = "zeta11";
    // 11th cyclotomic polynomial 1 + x + ... + x^10
    cfg.min_poly.assign(11, BigInt(1));
    cfg.disc = BigInt("2357947691");  // 11^9
    cfg.regulator = 26.1711060094;
    cfg.class_number = 1;
    cfg.roots_of_unity = 22;
    // Fundamental units: the cyclotomic units (1 - zeta^j)/(1 - zeta) for
    // j = 2..5, i.e. 1 + x + ... + x^{j-1}. Their log-lattice volume matches
    // the tabulated regulator, which build_field re-verifies.
    for (int j = 2; j <= 5; ++j) {
        std::vector<BigInt> coords(10, BigInt(0));
        for (int i = 0; i < j; ++i) coords[static_cast<std::size_t>(i)] = 1;
        cfg.fundamental_units.push_back(std::move(coords));
    }
    return cfg;
}

std::optional<FieldConfig> by_name(const std::string& name) {
    if (name == "qi" || name == "gaussian") return gaussian();
    if (name == "sqrt2") return sqrt2();
    if (name == "sqrt5") return sqrt5();
    if (name == "zeta11") return zeta11();
    return std::nullopt;
}

std::vector<std::string> names() { return {"qi", "sqrt2", "sqrt5", "zeta11"}; }

}  // namespace catalog
}  // namespace idealtally
