#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qbb/errors.hpp"
#include "qbb/polynomial.hpp"

namespace qbb {

/// Element of the field Q(q), stored as a reduced fraction of integer
/// polynomials. Canonical form: numerator and denominator share no factor
/// (neither polynomial nor integer content) and the denominator has positive
/// leading coefficient. Equal values therefore have equal representations.
class RationalFunction {
  public:
    RationalFunction() : num_(), den_(IntPoly::one()) {}
    RationalFunction(IntPoly num, IntPoly den) : num_(std::move(num)), den_(std::move(den)) {
        normalize();
    }
    explicit RationalFunction(long v) : num_(IntPoly(Int(v))), den_(IntPoly::one()) {}
    explicit RationalFunction(const Int& v) : num_(IntPoly(v)), den_(IntPoly::one()) {}

    static RationalFunction zero() { return RationalFunction(); }
    static RationalFunction one() { return RationalFunction(1); }
    /// q^k for any integer k (negative exponents put the power in the denominator).
    static RationalFunction q_power(long k) {
        if (k >= 0) return RationalFunction(IntPoly::monomial(static_cast<int>(k)), IntPoly::one());
        return RationalFunction(IntPoly::one(), IntPoly::monomial(static_cast<int>(-k)));
    }
    static RationalFunction from_rat(const Rat& r) {
        return RationalFunction(IntPoly(r.get_num()), IntPoly(r.get_den()));
    }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    const IntPoly& num() const { return num_; }
    const IntPoly& den() const { return den_; }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    RationalFunction operator-() const {
        RationalFunction r(*this);
        r.num_ = -r.num_;
        return r;
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw input_error("division by zero in Q(q)");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }
    RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
    RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
    RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }

    RationalFunction inverse() const {
        if (is_zero()) throw input_error("inverse of zero in Q(q)");
        return RationalFunction(den_, num_);
    }

    RationalFunction pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        RationalFunction r = one(), base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) {
        return !(a == b);
    }

    /// Equality by cross-multiplication, independent of canonical storage.
    bool equals_cross(const RationalFunction& b) const {
        return num_ * b.den_ == b.num_ * den_;
    }

    std::string to_string() const {
        if (den_.is_one()) return num_.to_string();
        std::string n = num_.to_string();
        if (num_.degree() > 0) n = "(" + n + ")";
        std::string d = den_.to_string();
        if (den_.degree() > 0) d = "(" + d + ")";
        return n + "/" + d;
    }

  private:
    void normalize() {
        if (den_.is_zero()) throw input_error("zero denominator in Q(q)");
        if (num_.is_zero()) {
            den_ = IntPoly::one();
            return;
        }
        IntPoly g = IntPoly::gcd(num_, den_);
        if (!g.is_one()) {
            num_ = IntPoly::div_exact(num_, g);
            den_ = IntPoly::div_exact(den_, g);
        }
        if (den_.lc() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
    }

    IntPoly num_, den_;
};

/// Power-series expansion of a rational function at q = 0, with exact
/// rational coefficients, up to and including order N.
class TruncatedSeries {
  public:
    TruncatedSeries(std::vector<Rat> coeffs, int order)
        : coeffs_(std::move(coeffs)), order_(order) {}

    static TruncatedSeries expand(const RationalFunction& f, int order) {
        if (f.den().coeff(0) == 0)
            throw input_error("series expansion: denominator vanishes at q = 0");
        std::vector<Rat> c(static_cast<size_t>(order) + 1, Rat(0));
        Rat d0(f.den().coeff(0));
        for (int n = 0; n <= order; ++n) {
            Rat acc(f.num().coeff(n));
            for (int j = 1; j <= n; ++j) acc -= Rat(f.den().coeff(j)) * c[static_cast<size_t>(n - j)];
            c[static_cast<size_t>(n)] = acc / d0;
            c[static_cast<size_t>(n)].canonicalize();
        }
        return TruncatedSeries(std::move(c), order);
    }

    int order() const { return order_; }
    const Rat& coeff(int n) const { return coeffs_.at(static_cast<size_t>(n)); }

    /// Re-multiplying the series by the denominator must reproduce the
    /// numerator through the truncation order.
    bool resums_to(const RationalFunction& f) const {
        for (int n = 0; n <= order_; ++n) {
            Rat acc(0);
            for (int j = 0; j <= n; ++j) acc += Rat(f.den().coeff(j)) * coeffs_[static_cast<size_t>(n - j)];
            if (acc != Rat(f.num().coeff(n))) return false;
        }
        return true;
    }

  private:
    std::vector<Rat> coeffs_;
    int order_;
};

/// Balanced q-integer [n]_i = (q_i^n - q_i^{-n}) / (q_i - q_i^{-1}) with q_i = q^s.
inline RationalFunction q_integer(long n, long s) {
    if (n < 1) throw input_error("q_integer: n must be positive");
    if (s < 1) throw input_error("q_integer: symmetrizer entry must be positive");
    RationalFunction qi = RationalFunction::q_power(s);
    RationalFunction qiinv = RationalFunction::q_power(-s);
    return (qi.pow(n) - qiinv.pow(n)) / (qi - qiinv);
}

inline RationalFunction q_factorial(long n, long s) {
    RationalFunction r = RationalFunction::one();
    for (long k = 2; k <= n; ++k) r *= q_integer(k, s);
    return r;
}

/// [n choose k]_i, a Laurent polynomial symmetric under q -> q^{-1}.
inline RationalFunction q_binomial(long n, long k, long s) {
    if (n < 0 || k < 0 || k > n) throw input_error("q_binomial: need 0 <= k <= n");
    return q_factorial(n, s) / (q_factorial(k, s) * q_factorial(n - k, s));
}

/// Checks the admissibility condition tau in 1 + q*Z_{>=0}[[q]], through order N.
inline bool check_tau_assumption(const RationalFunction& tau, int order) {
    TruncatedSeries ser = TruncatedSeries::expand(tau, order);
    if (ser.coeff(0) != Rat(1)) return false;
    for (int n = 1; n <= order; ++n) {
        const Rat& c = ser.coeff(n);
        if (c.get_den() != 1) return false;
        if (c < 0) return false;
    }
    return true;
}

} // namespace qbb
