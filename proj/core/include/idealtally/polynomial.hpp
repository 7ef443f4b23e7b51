#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>
#include <vector>

namespace idealtally {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Dense univariate polynomial over the integers, coefficients ascending.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }

    static IntPoly constant(BigInt v) { return IntPoly(std::vector<BigInt>{std::move(v)}); }

    /// Degree; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    const BigInt& coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }
    const std::vector<BigInt>& coeffs() const { return c_; }
    const BigInt& leading() const { return c_.back(); }

    IntPoly derivative() const;

    template <typename Real>
    std::complex<Real> eval(std::complex<Real> x) const {
        std::complex<Real> acc(0, 0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * x + std::complex<Real>(static_cast<Real>(*it), 0);
        return acc;
    }

    template <typename Real>
    Real eval_real(Real x) const {
        Real acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * x + static_cast<Real>(*it);
        return acc;
    }

    BigInt eval_int(const BigInt& x) const;
    BigRat eval_rat(const BigRat& x) const;

    std::string to_string(const std::string& var = "x") const;

    bool operator==(const IntPoly& other) const { return c_ == other.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<BigInt> c_;
};

/// Resultant Res(f, g), exact, via Bareiss elimination of the Sylvester matrix.
BigInt resultant(const IntPoly& f, const IntPoly& g);

/// Discriminant of a monic polynomial: (-1)^{n(n-1)/2} Res(f, f').
BigInt poly_discriminant(const IntPoly& f);

/// Number of distinct real roots, exact (Sturm chain over rationals).
int count_real_roots(const IntPoly& f);

/// True when f has a rational (hence integer, for monic f) root.
bool has_rational_root(const IntPoly& f);

/// Floor of the exact integer square root; throws if v < 0.
BigInt isqrt_floor(const BigInt& v);

/// True when v is a perfect square (v >= 0).
bool is_perfect_square(const BigInt& v);

}  // namespace idealtally
