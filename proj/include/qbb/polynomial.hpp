#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <string>
#include <vector>

#include "qbb/errors.hpp"

namespace qbb {

using Int = mpz_class;
using Rat = mpq_class;

inline Int int_gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

/// Dense univariate polynomial over Z in the indeterminate q.
/// coeffs[k] is the coefficient of q^k; no trailing zeros are stored,
/// so the zero polynomial has an empty coefficient vector.
class IntPoly {
  public:
    IntPoly() = default;
    explicit IntPoly(Int c) {
        if (c != 0) coeffs_.push_back(std::move(c));
    }
    explicit IntPoly(std::vector<Int> cs) : coeffs_(std::move(cs)) { trim(); }

    static IntPoly zero() { return IntPoly(); }
    static IntPoly one() { return IntPoly(Int(1)); }
    static IntPoly monomial(int k, Int c = Int(1)) {
        IntPoly p;
        if (c != 0) {
            p.coeffs_.assign(static_cast<size_t>(k) + 1, Int(0));
            p.coeffs_[static_cast<size_t>(k)] = std::move(c);
        }
        return p;
    }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; } // -1 for zero
    const Int& lc() const { return coeffs_.back(); }
    Int coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Int(0);
        return coeffs_[static_cast<size_t>(k)];
    }
    const std::vector<Int>& coeffs() const { return coeffs_; }

    /// Largest k with q^k dividing the polynomial (0 for the zero polynomial).
    int low_order() const {
        for (size_t k = 0; k < coeffs_.size(); ++k)
            if (coeffs_[k] != 0) return static_cast<int>(k);
        return 0;
    }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        IntPoly r;
        r.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()), Int(0));
        for (size_t k = 0; k < r.coeffs_.size(); ++k) {
            if (k < a.coeffs_.size()) r.coeffs_[k] += a.coeffs_[k];
            if (k < b.coeffs_.size()) r.coeffs_[k] += b.coeffs_[k];
        }
        r.trim();
        return r;
    }
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }
    IntPoly operator-() const {
        IntPoly r(*this);
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return IntPoly();
        IntPoly r;
        r.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, Int(0));
        for (size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (size_t j = 0; j < b.coeffs_.size(); ++j)
                r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        r.trim();
        return r;
    }
    friend IntPoly operator*(const IntPoly& a, const Int& c) {
        if (c == 0) return IntPoly();
        IntPoly r(a);
        for (auto& x : r.coeffs_) x *= c;
        return r;
    }
    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.coeffs_ == b.coeffs_; }

    /// Content: gcd of the coefficients, nonnegative (0 for the zero polynomial).
    Int content() const {
        Int g(0);
        for (const auto& c : coeffs_) g = int_gcd(g, c);
        return g;
    }

    IntPoly divided_by_int(const Int& c) const {
        IntPoly r(*this);
        for (auto& x : r.coeffs_) {
            Int qo, re;
            mpz_tdiv_qr(qo.get_mpz_t(), re.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
            if (re != 0) throw consistency_error("IntPoly: inexact integer division");
            x = qo;
        }
        return r;
    }

    IntPoly primitive_part() const {
        if (is_zero()) return IntPoly();
        Int c = content();
        if (lc() < 0) c = -c;
        return divided_by_int(c);
    }

    /// Exact quotient a / b within Z[q]; throws if the division is inexact.
    static IntPoly div_exact(const IntPoly& a, const IntPoly& b) {
        if (b.is_zero()) throw consistency_error("IntPoly: division by zero");
        if (a.is_zero()) return IntPoly();
        IntPoly rem = a;
        std::vector<Int> qc(static_cast<size_t>(a.degree() - b.degree()) + 1, Int(0));
        if (a.degree() < b.degree()) throw consistency_error("IntPoly: inexact division");
        while (!rem.is_zero() && rem.degree() >= b.degree()) {
            Int qo, re;
            mpz_tdiv_qr(qo.get_mpz_t(), re.get_mpz_t(), rem.lc().get_mpz_t(), b.lc().get_mpz_t());
            if (re != 0) throw consistency_error("IntPoly: inexact division");
            int shift = rem.degree() - b.degree();
            qc[static_cast<size_t>(shift)] = qo;
            rem = rem - IntPoly::monomial(shift, qo) * b;
        }
        if (!rem.is_zero()) throw consistency_error("IntPoly: inexact division");
        return IntPoly(std::move(qc));
    }

    /// Pseudo-remainder: lc(b)^k * a mod b for some k >= 0. Only used inside
    /// the primitive PRS, which strips contents right away, so the exact
    /// pseudo factor is irrelevant.
    static IntPoly prem(IntPoly a, const IntPoly& b) {
        const Int& lb = b.lc();
        while (!a.is_zero() && a.degree() >= b.degree()) {
            int shift = a.degree() - b.degree();
            Int la = a.lc();
            a = a * lb - IntPoly::monomial(shift, la) * b;
        }
        return a;
    }

    /// Gcd in Z[q] via the primitive PRS, with positive leading coefficient.
    static IntPoly gcd(IntPoly a, IntPoly b) {
        if (a.is_zero()) return b.is_zero() ? IntPoly() : b.primitive_part() * b.content();
        if (b.is_zero()) return a.primitive_part() * a.content();
        Int cg = int_gcd(a.content(), b.content());
        a = a.primitive_part();
        b = b.primitive_part();
        if (a.degree() < b.degree()) std::swap(a, b);
        while (!b.is_zero()) {
            IntPoly r = prem(a, b).primitive_part();
            a = b;
            b = r;
        }
        return a.primitive_part() * cg;
    }

    std::string to_string(const std::string& var = "q") const {
        if (is_zero()) return "0";
        std::string out;
        for (int k = degree(); k >= 0; --k) {
            const Int& c = coeffs_[static_cast<size_t>(k)];
            if (c == 0) continue;
            Int abs_c = c >= 0 ? c : Int(-c);
            if (out.empty())
                out += (c < 0 ? "-" : "");
            else
                out += (c < 0 ? " - " : " + ");
            bool show_coeff = (abs_c != 1 || k == 0);
            if (show_coeff) out += abs_c.get_str();
            if (k > 0) {
                if (show_coeff) out += "*";
                out += var;
                if (k > 1) out += "^" + std::to_string(k);
            }
        }
        return out;
    }

  private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }
    std::vector<Int> coeffs_;
};

} // namespace qbb
