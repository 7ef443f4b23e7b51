#include "idealtally/field.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace idealtally {

double MinkowskiPoint::euclidean_norm() const {
    double acc = 0;
    for (const auto& s : slots) acc += std::norm(s);
    return std::sqrt(acc);
}

namespace {

using CLD = std::complex<long double>;

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

// Canonical text form of the mathematical content of a config; the digest of
// this string keys sieve caches, so it must not depend on JSON formatting.
std::string canonical_description(const FieldConfig& cfg) {
    std::ostringstream os;
    os << "min_poly=[";
    for (std::size_t i = 0; i < cfg.min_poly.size(); ++i)
        os << (i ? "," : "") << cfg.min_poly[i].str();
    os << "]";
    if (cfg.disc) os << ";disc=" << cfg.disc->str();
    if (cfg.class_number) os << ";h=" << *cfg.class_number;
    if (cfg.roots_of_unity) os << ";w=" << *cfg.roots_of_unity;
    if (!cfg.prime_overrides.empty()) {
        os << ";overrides={";
        for (const auto& [p, factors] : cfg.prime_overrides) {
            os << p << ":[";
            for (std::size_t i = 0; i < factors.size(); ++i)
                os << (i ? "," : "") << "(" << factors[i].first << "," << factors[i].second << ")";
            os << "]";
        }
        os << "}";
    }
    return os.str();
}

CLD eval_poly(const IntPoly& f, CLD x) { return f.eval<long double>(x); }

// Newton refinement from an eigenvalue estimate. Simple roots of an
// irreducible polynomial at desk degrees converge in a handful of steps.
CLD newton_polish(const IntPoly& f, const IntPoly& df, CLD z, int iters = 80) {
    for (int i = 0; i < iters; ++i) {
        CLD fz = eval_poly(f, z);
        CLD dz = eval_poly(df, z);
        if (std::abs(dz) == 0.0L) break;
        CLD step = fz / dz;
        z -= step;
        if (std::abs(step) <= 1e-18L * (1.0L + std::abs(z))) break;
    }
    return z;
}

// Bisection/Newton hybrid for a real root: Newton from the estimate, with a
// sign-change bracket as fallback when Newton wanders.
long double refine_real_root(const IntPoly& f, const IntPoly& df, long double x0) {
    long double x = x0;
    for (int i = 0; i < 80; ++i) {
        long double fx = f.eval_real(x);
        long double dx = df.eval_real(x);
        if (dx == 0.0L) break;
        long double step = fx / dx;
        x -= step;
        if (std::fabs(step) <= 1e-18L * (1.0L + std::fabs(x))) return x;
    }
    // Newton did not settle; bracket around the estimate and bisect.
    long double lo = x0, hi = x0, w = std::max(1e-12L, 1e-6L * (1.0L + std::fabs(x0)));
    for (int i = 0; i < 200; ++i, w *= 2) {
        lo = x0 - w;
        hi = x0 + w;
        if (f.eval_real(lo) * f.eval_real(hi) < 0) break;
    }
    if (f.eval_real(lo) * f.eval_real(hi) > 0)
        throw std::runtime_error("refine_real_root: failed to bracket root near estimate");
    for (int i = 0; i < 200; ++i) {
        long double mid = (lo + hi) / 2;
        long double fm = f.eval_real(mid);
        if (fm == 0.0L) return mid;
        if (f.eval_real(lo) * fm < 0)
            hi = mid;
        else
            lo = mid;
    }
    return (lo + hi) / 2;
}

std::vector<CLD> companion_roots(const IntPoly& f) {
    const int n = f.degree();
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        C(i, n - 1) = -static_cast<double>(f.coeff(i).convert_to<double>());
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(C);
    std::vector<CLD> roots;
    roots.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        roots.emplace_back(static_cast<long double>(es.eigenvalues()[i].real()),
                           static_cast<long double>(es.eigenvalues()[i].imag()));
    return roots;
}

// Fundamental unit of a real quadratic Z[theta], theta a root of x^2 + bx + c.
// Sweeps y = 1, 2, ... for solutions of |x^2 - b x y + c y^2| = 1; the first
// hit at minimal y (preferring the smaller trace) is the fundamental unit.
FieldElement real_quadratic_fundamental_unit(const IntPoly& f) {
    const BigInt b = f.coeff(1);
    const BigInt c = f.coeff(0);
    const BigInt D = b * b - 4 * c;  // > 0 for a real quadratic field
    const BigInt y_cap = 1000000;
    for (BigInt y = 1; y <= y_cap; ++y) {
        // x = (b y +/- s)/2 where s^2 = D y^2 -/+ 4; the norm -1 branch,
        // when it exists, is the smaller unit at this y.
        for (int norm_sign : {-1, +1}) {
            BigInt s2 = D * y * y + 4 * norm_sign;
            if (s2 < 0 || !is_perfect_square(s2)) continue;
            BigInt s = isqrt_floor(s2);
            for (const BigInt& num : {BigInt(b * y + s), BigInt(b * y - s)}) {
                if (num % 2 != 0) continue;
                BigInt x = num / 2;
                FieldElement u;
                u.coords = {x, y};
                return u;
            }
        }
    }
    throw std::runtime_error("fundamental unit search exceeded its sweep cap");
}

IntPoly element_as_poly(const FieldElement& alpha) {
    return IntPoly(alpha.coords);
}

}  // namespace

NumberField build_field(const FieldConfig& cfg) {
    if (cfg.min_poly.size() < 3)
        throw std::invalid_argument("build_field: degree must be at least 2");
    IntPoly f{std::vector<BigInt>(cfg.min_poly)};
    if (f.degree() + 1 != static_cast<int>(cfg.min_poly.size()))
        throw std::invalid_argument("build_field: leading coefficient must be nonzero");
    if (!f.is_monic()) throw std::invalid_argument("build_field: polynomial must be monic");
    const int n = f.degree();
    if (n < 2) throw std::invalid_argument("build_field: degree must be at least 2");

    // Irreducibility screen (full irreducibility is the caller's contract).
    if (has_rational_root(f))
        throw std::invalid_argument("build_field: polynomial has a rational root");
    const BigInt disc_poly = poly_discriminant(f);
    if (disc_poly == 0)
        throw std::invalid_argument("build_field: polynomial is not squarefree");
    if (n == 2 && is_perfect_square(disc_poly))
        throw std::invalid_argument("build_field: quadratic polynomial is reducible");

    NumberField K;
    K.name = cfg.name;
    K.min_poly = f;
    K.degree = n;

    // --- embeddings: companion-matrix estimates, then Newton to full depth.
    const IntPoly df = f.derivative();
    std::vector<CLD> roots = companion_roots(f);
    for (auto& z : roots) z = newton_polish(f, df, z);

    const int real_count = count_real_roots(f);  // exact, Sturm
    if ((n - real_count) % 2 != 0)
        throw std::runtime_error("build_field: inconsistent real-root count");

    std::sort(roots.begin(), roots.end(),
              [](const CLD& a, const CLD& b) { return std::fabs(a.imag()) < std::fabs(b.imag()); });

    std::vector<long double> real_roots;
    for (int i = 0; i < real_count; ++i)
        real_roots.push_back(refine_real_root(f, df, roots[static_cast<std::size_t>(i)].real()));
    std::sort(real_roots.begin(), real_roots.end());

    std::vector<CLD> complex_reps;
    for (std::size_t i = static_cast<std::size_t>(real_count); i < roots.size(); ++i) {
        if (roots[i].imag() > 0) complex_reps.push_back(roots[i]);
    }
    if (static_cast<int>(complex_reps.size()) * 2 != n - real_count)
        throw std::runtime_error("build_field: complex roots failed to pair into conjugates");
    // Convention: ascending imaginary part, then real part.
    std::sort(complex_reps.begin(), complex_reps.end(), [](const CLD& a, const CLD& b) {
        if (a.imag() != b.imag()) return a.imag() < b.imag();
        return a.real() < b.real();
    });

    K.r1 = real_count;
    K.r2 = (n - real_count) / 2;
    K.unit_rank = K.r1 + K.r2 - 1;

    for (long double x : real_roots) K.embeddings.emplace_back(static_cast<double>(x), 0.0);
    for (const CLD& z : complex_reps)
        K.embeddings.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));

    // Residual check at the configured precision.
    for (const auto& z : K.embeddings) {
        CLD zl(z.real(), z.imag());
        long double scale = std::max<long double>(1.0L, std::pow(std::abs(zl), n));
        if (std::abs(eval_poly(f, zl)) > 1e6L * static_cast<long double>(cfg.embedding_precision) * scale)
            throw std::runtime_error("build_field: embedding refinement did not reach target precision");
    }

    // --- discriminant / index.
    BigInt abs_disc_poly = disc_poly < 0 ? BigInt(-disc_poly) : disc_poly;
    K.disc_sign = disc_poly < 0 ? -1 : 1;
    if (cfg.disc) {
        if (*cfg.disc <= 0) throw std::invalid_argument("build_field: disc override must be positive");
        K.disc = *cfg.disc;
        if (abs_disc_poly % K.disc != 0)
            throw std::invalid_argument("build_field: disc override does not divide disc(min_poly)");
        BigInt index_sq = abs_disc_poly / K.disc;
        if (!is_perfect_square(index_sq))
            throw std::invalid_argument("build_field: disc(min_poly)/disc is not a square");
        K.index = isqrt_floor(index_sq);
    } else {
        K.disc = abs_disc_poly;
        K.index = 1;
    }
    K.monogenic = (K.index == 1);
    K.prime_overrides = cfg.prime_overrides;

    // --- roots of unity.
    if (cfg.roots_of_unity) {
        K.roots_of_unity = *cfg.roots_of_unity;
        if (K.roots_of_unity < 2)
            throw std::invalid_argument("build_field: roots_of_unity must be >= 2");
        if (K.r1 > 0 && K.roots_of_unity != 2)
            throw std::invalid_argument("build_field: a field with a real embedding has w = 2");
    } else if (K.r1 > 0) {
        K.roots_of_unity = 2;
    } else if (n == 2) {
        // Imaginary quadratic: w = 4 for disc 4, 6 for disc 3, else 2.
        K.roots_of_unity = (K.disc == 4) ? 4 : (K.disc == 3) ? 6 : 2;
    } else {
        K.roots_of_unity = 2;
    }

    K.class_number = cfg.class_number.value_or(1);
    if (K.class_number < 1) throw std::invalid_argument("build_field: class_number must be positive");

    // --- fundamental units.
    const int r = K.unit_rank;
    if (!cfg.fundamental_units.empty()) {
        if (static_cast<int>(cfg.fundamental_units.size()) != r)
            throw std::invalid_argument("build_field: expected exactly r fundamental units");
        for (const auto& coords : cfg.fundamental_units) {
            if (static_cast<int>(coords.size()) != n)
                throw std::invalid_argument("build_field: unit coordinates must have length n");
            FieldElement u;
            u.coords = coords;
            K.fundamental_units.push_back(std::move(u));
        }
    } else if (r == 1 && K.r1 == 2) {
        K.fundamental_units.push_back(real_quadratic_fundamental_unit(f));
    } else if (r > 0) {
        throw std::invalid_argument(
            "build_field: fundamental_units required (auto-computation covers only real quadratic fields)");
    }

    for (const auto& u : K.fundamental_units) {
        BigInt nu = element_norm(K, u);
        if (nu != 1 && nu != -1)
            throw std::invalid_argument("build_field: supplied fundamental unit is not a unit");
    }

    // --- regulator: volume of the log-unit lattice over sqrt(r1+r2).
    if (r == 0) {
        K.regulator = 1.0;  // convention: empty unit lattice
        if (cfg.regulator && std::fabs(*cfg.regulator - 1.0) > 1e-9)
            throw std::invalid_argument("build_field: regulator of a rank-0 unit group is 1 by convention");
    } else {
        // Gram determinant of the log images, exact rank check included.
        const int slots = K.r1 + K.r2;
        Eigen::MatrixXd logs(slots, r);
        for (int j = 0; j < r; ++j) {
            MinkowskiPoint pt = minkowski_embed(K, K.fundamental_units[static_cast<std::size_t>(j)]);
            LogPoint lp = log_embed(pt);
            for (int i = 0; i < slots; ++i) logs(i, j) = lp.coords[static_cast<std::size_t>(i)];
        }
        Eigen::MatrixXd gram = logs.transpose() * logs;
        double det = gram.determinant();
        if (det <= 1e-18)
            throw std::invalid_argument("build_field: supplied units are dependent in log space");
        double volume = std::sqrt(det);
        double reg = volume / std::sqrt(static_cast<double>(slots));
        if (cfg.regulator) {
            if (std::fabs(reg - *cfg.regulator) > 1e-9 * std::max(1.0, std::fabs(*cfg.regulator)))
                throw std::invalid_argument(
                    "build_field: unit-lattice volume disagrees with the supplied regulator");
        }
        K.regulator = reg;
    }

    K.config_digest_hex = sha256_hex(canonical_description(cfg));
    return K;
}

MinkowskiPoint minkowski_embed(const NumberField& K, const FieldElement& alpha) {
    if (static_cast<int>(alpha.coords.size()) > K.degree)
        throw std::invalid_argument("minkowski_embed: element has too many coordinates");
    MinkowskiPoint p;
    p.r1 = K.r1;
    p.r2 = K.r2;
    p.slots.reserve(static_cast<std::size_t>(K.slot_count()));
    IntPoly a = IntPoly(std::vector<BigInt>(alpha.coords));
    for (int i = 0; i < K.slot_count(); ++i) {
        CLD z(static_cast<long double>(K.embeddings[static_cast<std::size_t>(i)].real()),
              static_cast<long double>(K.embeddings[static_cast<std::size_t>(i)].imag()));
        CLD v = a.eval<long double>(z);
        if (i < K.r1)
            p.slots.emplace_back(static_cast<double>(v.real()), 0.0);
        else
            p.slots.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    }
    return p;
}

LogPoint log_embed(const MinkowskiPoint& x) {
    LogPoint out;
    out.coords.reserve(x.slots.size());
    for (std::size_t i = 0; i < x.slots.size(); ++i) {
        double mag = std::abs(x.slots[i]);
        if (mag == 0.0) throw std::domain_error("log_embed: zero coordinate");
        out.coords.push_back(static_cast<double>(x.weight(static_cast<int>(i))) * std::log(mag));
    }
    return out;
}

double point_norm(const MinkowskiPoint& x) {
    double acc = 1.0;
    for (std::size_t i = 0; i < x.slots.size(); ++i) {
        double mag = std::abs(x.slots[i]);
        acc *= (x.weight(static_cast<int>(i)) == 1) ? mag : mag * mag;
    }
    return acc;
}

double log_norm(const LogPoint& x) {
    double acc = 0.0;
    for (double v : x.coords) acc += v;
    return acc;
}

std::pair<double, double> norms(const MinkowskiPoint& x) {
    double n = point_norm(x);
    double l = n > 0 ? std::log(n) : -std::numeric_limits<double>::infinity();
    return {n, l};
}

MinkowskiPoint mult_map(const MinkowskiPoint& y, const MinkowskiPoint& x) {
    if (y.slots.size() != x.slots.size() || y.r1 != x.r1)
        throw std::invalid_argument("mult_map: mismatched signatures");
    MinkowskiPoint out = x;
    for (std::size_t i = 0; i < x.slots.size(); ++i) out.slots[i] = x.slots[i] * y.slots[i];
    return out;
}

BigInt element_norm(const NumberField& K, const FieldElement& alpha) {
    IntPoly a = element_as_poly(alpha);
    if (a.is_zero()) return 0;
    return resultant(K.min_poly, a);
}

std::vector<double> flatten(const MinkowskiPoint& x) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(x.ambient_dim()));
    for (int i = 0; i < x.r1; ++i) out.push_back(x.slots[static_cast<std::size_t>(i)].real());
    for (int i = x.r1; i < x.slot_count(); ++i) {
        out.push_back(x.slots[static_cast<std::size_t>(i)].real());
        out.push_back(x.slots[static_cast<std::size_t>(i)].imag());
    }
    return out;
}

MinkowskiPoint unflatten(const NumberField& K, const std::vector<double>& coords) {
    if (static_cast<int>(coords.size()) != K.degree)
        throw std::invalid_argument("unflatten: expected n coordinates");
    MinkowskiPoint p;
    p.r1 = K.r1;
    p.r2 = K.r2;
    for (int i = 0; i < K.r1; ++i) p.slots.emplace_back(coords[static_cast<std::size_t>(i)], 0.0);
    for (int j = 0; j < K.r2; ++j)
        p.slots.emplace_back(coords[static_cast<std::size_t>(K.r1 + 2 * j)],
                             coords[static_cast<std::size_t>(K.r1 + 2 * j + 1)]);
    return p;
}

MinkowskiPoint identity_point(const NumberField& K) {
    return minkowski_embed(K, FieldElement::one(K.degree));
}

}  // namespace idealtally
