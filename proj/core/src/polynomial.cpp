#include "idealtally/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace idealtally {

IntPoly IntPoly::derivative() const {
    if (c_.size() <= 1) return IntPoly();
    std::vector<BigInt> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<int>(i);
    return IntPoly(std::move(d));
}

BigInt IntPoly::eval_int(const BigInt& x) const {
    BigInt acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

BigRat IntPoly::eval_rat(const BigRat& x) const {
    BigRat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + BigRat(*it);
    return acc;
}

std::string IntPoly::to_string(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const BigInt& a = c_[static_cast<std::size_t>(i)];
        if (a == 0) continue;
        BigInt mag = a < 0 ? BigInt(-a) : a;
        if (first) {
            if (a < 0) os << "-";
            first = false;
        } else {
            os << (a < 0 ? " - " : " + ");
        }
        if (mag != 1 || i == 0) os << mag.str();
        if (i >= 1) {
            os << var;
            if (i >= 2) os << "^" << i;
        }
    }
    return os.str();
}

// Fraction-free Gaussian elimination; exact determinant of an integer matrix.
static BigInt bareiss_det(std::vector<std::vector<BigInt>> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t piv = k + 1;
            while (piv < n && m[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : BigInt(-m[n - 1][n - 1]);
}

BigInt resultant(const IntPoly& f, const IntPoly& g) {
    const int m = f.degree();
    const int n = g.degree();
    if (m < 0 || n < 0) return 0;
    if (m == 0) {
        BigInt acc = 1;
        for (int i = 0; i < n; ++i) acc *= f.coeff(0);
        return acc;
    }
    if (n == 0) {
        BigInt acc = 1;
        for (int i = 0; i < m; ++i) acc *= g.coeff(0);
        return acc;
    }
    const std::size_t size = static_cast<std::size_t>(m + n);
    std::vector<std::vector<BigInt>> syl(size, std::vector<BigInt>(size, BigInt(0)));
    for (int row = 0; row < n; ++row)
        for (int j = 0; j <= m; ++j)
            syl[static_cast<std::size_t>(row)][static_cast<std::size_t>(row + j)] = f.coeff(m - j);
    for (int row = 0; row < m; ++row)
        for (int j = 0; j <= n; ++j)
            syl[static_cast<std::size_t>(n + row)][static_cast<std::size_t>(row + j)] = g.coeff(n - j);
    return bareiss_det(std::move(syl));
}

BigInt poly_discriminant(const IntPoly& f) {
    if (!f.is_monic()) throw std::invalid_argument("poly_discriminant: polynomial must be monic");
    const int n = f.degree();
    if (n < 1) throw std::invalid_argument("poly_discriminant: degree must be >= 1");
    BigInt res = resultant(f, f.derivative());
    const int exp = (n * (n - 1)) / 2;
    return (exp % 2 == 0) ? res : BigInt(-res);
}

namespace {

// Sturm chain over rationals. Only the signs of the chain matter.
using RatPoly = std::vector<BigRat>;

int rp_degree(const RatPoly& p) { return static_cast<int>(p.size()) - 1; }

void rp_trim(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

RatPoly rp_neg_rem(const RatPoly& a, const RatPoly& b) {
    RatPoly rem = a;
    const int db = rp_degree(b);
    while (rp_degree(rem) >= db) {
        BigRat q = rem.back() / b.back();
        const int shift = rp_degree(rem) - db;
        for (int i = 0; i <= db; ++i)
            rem[static_cast<std::size_t>(i + shift)] -= q * b[static_cast<std::size_t>(i)];
        rem.pop_back();
        rp_trim(rem);
        if (rem.empty()) break;
    }
    for (auto& v : rem) v = -v;
    return rem;
}

int sign_at_infinity(const RatPoly& p, bool positive) {
    if (p.empty()) return 0;
    int s = p.back() > 0 ? 1 : -1;
    if (!positive && rp_degree(p) % 2 == 1) s = -s;
    return s;
}

int sign_changes(const std::vector<int>& signs) {
    int changes = 0;
    int last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

}  // namespace

int count_real_roots(const IntPoly& f) {
    if (f.degree() < 1) return 0;
    RatPoly p0;
    for (const auto& c : f.coeffs()) p0.emplace_back(c);
    RatPoly p1;
    {
        IntPoly d = f.derivative();
        for (const auto& c : d.coeffs()) p1.emplace_back(c);
    }
    std::vector<RatPoly> chain{p0, p1};
    while (rp_degree(chain.back()) > 0) {
        RatPoly next = rp_neg_rem(chain[chain.size() - 2], chain.back());
        if (next.empty()) break;
        chain.push_back(std::move(next));
    }
    std::vector<int> at_minus, at_plus;
    for (const auto& p : chain) {
        at_minus.push_back(sign_at_infinity(p, false));
        at_plus.push_back(sign_at_infinity(p, true));
    }
    return sign_changes(at_minus) - sign_changes(at_plus);
}

bool has_rational_root(const IntPoly& f) {
    if (f.degree() < 1) return false;
    if (f.coeff(0) == 0) return true;  // x = 0
    // Monic case: rational roots are integer divisors of the constant term.
    BigInt a0 = f.coeff(0) < 0 ? BigInt(-f.coeff(0)) : f.coeff(0);
    for (BigInt d = 1; d * d <= a0; ++d) {
        if (a0 % d != 0) continue;
        for (const BigInt& cand : {d, BigInt(a0 / d)}) {
            if (f.eval_int(cand) == 0 || f.eval_int(BigInt(-cand)) == 0) return true;
        }
    }
    return false;
}

BigInt isqrt_floor(const BigInt& v) {
    if (v < 0) throw std::invalid_argument("isqrt_floor: negative input");
    return boost::multiprecision::sqrt(v);
}

bool is_perfect_square(const BigInt& v) {
    if (v < 0) return false;
    BigInt r = isqrt_floor(v);
    return r * r == v;
}

}  // namespace idealtally
