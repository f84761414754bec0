#pragma once

#include <map>
#include <vector>

#include "qbb/cartan.hpp"
#include "qbb/errors.hpp"

namespace qbb {

/// Truncated formal sums with integer coefficients over the cone
/// { e^{-beta} : beta in Q+ }, keyed by alpha-coordinates.
using ConeSeries = std::map<RootVec, long long>;

inline void add_term(ConeSeries& s, const RootVec& beta, long long c) {
    if (c == 0) return;
    auto it = s.find(beta);
    if (it == s.end()) {
        s.emplace(beta, c);
    } else {
        it->second += c;
        if (it->second == 0) s.erase(it);
    }
}

inline long long coeff(const ConeSeries& s, const RootVec& beta) {
    auto it = s.find(beta);
    return it == s.end() ? 0 : it->second;
}

inline ConeSeries cone_mul(const ConeSeries& x, const ConeSeries& y, long long height_cap) {
    ConeSeries r;
    for (const auto& [bx, cx] : x) {
        long long hx = height(bx);
        for (const auto& [by, cy] : y) {
            if (hx + height(by) > height_cap) continue;
            RootVec b = bx;
            for (size_t j = 0; j < b.size(); ++j) b[j] += by[j];
            add_term(r, b, cx * cy);
        }
    }
    return r;
}

/// Coefficient of q^n in prod_{k=1}^{n} (1 - q^k); the Euler-function
/// coefficients entering the sign epsilon(s).
inline long long pentagonal_phi(int n) {
    if (n < 0) throw input_error("pentagonal_phi: n must be nonnegative");
    std::vector<long long> c(static_cast<size_t>(n) + 1, 0);
    c[0] = 1;
    for (int k = 1; k <= n; ++k)
        for (int m = n; m >= k; --m) c[(size_t)m] -= c[(size_t)(m - k)];
    return c[(size_t)n];
}

/// One element of F_lambda: a Q+ vector supported on imaginary nodes that
/// pairwise-orthogonally avoid lambda, together with its sign.
struct ImaginaryCorrection {
    RootVec coeffs;
    long long sign;
};

/// All corrections of height <= cap: support nodes are imaginary with
/// (alpha_i, lambda) = 0, pairwise orthogonal; non-isotropic support nodes
/// appear as a single term (any coefficient), isotropic nodes absorb all
/// their terms into the coefficient.
inline std::vector<ImaginaryCorrection> enumerate_corrections(const CartanDatum& D,
                                                              const Weight& lambda,
                                                              long long cap) {
    if (!is_dominant(lambda)) throw input_error("enumerate_corrections: lambda must be dominant");
    std::vector<int> eligible;
    for (int i = 0; i < D.size(); ++i)
        if (D.is_imaginary(i) && lambda.h[static_cast<size_t>(i)] == 0) eligible.push_back(i);

    std::vector<ImaginaryCorrection> out;
    RootVec cur(static_cast<size_t>(D.size()), 0);
    std::vector<int> support;
    auto rec = [&](auto&& self, size_t idx, long long used) -> void {
        if (idx == eligible.size()) {
            long long sign = 1;
            for (int i : support) {
                if (D.is_isotropic(i))
                    sign *= pentagonal_phi(static_cast<int>(cur[static_cast<size_t>(i)]));
                else
                    sign = -sign;
            }
            out.push_back(ImaginaryCorrection{cur, sign});
            return;
        }
        int i = eligible[idx];
        self(self, idx + 1, used); // node absent
        bool orth = true;
        for (int j : support)
            if (D.a[i][j] != 0) orth = false;
        if (orth) {
            support.push_back(i);
            for (long long c = 1; used + c <= cap; ++c) {
                cur[static_cast<size_t>(i)] = c;
                self(self, idx + 1, used + c);
            }
            cur[static_cast<size_t>(i)] = 0;
            support.pop_back();
        }
    };
    rec(rec, 0, 0);
    return out;
}

/// S_lambda as a cone series: sum of epsilon(s) e^{-s}.
inline ConeSeries s_series(const CartanDatum& D, const Weight& lambda, long long cap) {
    ConeSeries s;
    for (const auto& corr : enumerate_corrections(D, lambda, cap))
        add_term(s, corr.coeffs, corr.sign);
    return s;
}

/// Character machinery for one datum at a fixed height cutoff: solves the
/// root multiplicities from the lambda = 0 specialization of the character
/// formula, and evaluates truncated characters of the V(lambda).
class CharacterCalculator {
  public:
    CharacterCalculator(CartanDatum D, int cutoff) : D_(std::move(D)), N_(cutoff) {
        if (auto diag = D_.validate()) throw input_error("invalid datum: " + *diag);
        solve_multiplicities();
    }

    const CartanDatum& datum() const { return D_; }
    int cutoff() const { return N_; }
    /// dim g_beta for |beta| <= cutoff (absent key = multiplicity zero).
    const ConeSeries& multiplicities() const { return mult_; }
    /// The expanded denominator prod (1 - e^{-beta})^{mult beta}.
    const ConeSeries& denominator_series() const { return den_; }

    /// Signed numerator sum over (w, s) pairs, collected at lambda - beta.
    ConeSeries numerator(const Weight& lambda, long long depth) const {
        if (!is_dominant(lambda)) throw input_error("character: lambda must be dominant");
        ConeSeries num;
        auto weyl = enumerate_weyl(D_, lambda, 2 * depth);
        auto corrections = enumerate_corrections(D_, lambda, depth);
        Weight lr = lambda + rho_weight(D_);
        Weight rho = rho_weight(D_);
        for (const auto& w : weyl)
            for (const auto& s : corrections) {
                Weight arg = lr - weight_from_root_vec(D_, s.coeffs);
                Weight nu = apply_weyl_word(D_, w.word, arg) - rho;
                Weight diff = lambda - nu;
                auto beta = root_coords(D_, diff);
                if (!beta) throw consistency_error("numerator term outside the root lattice");
                if (!in_positive_cone(*beta)) continue;
                if (height(*beta) > depth) continue;
                add_term(num, *beta, w.sign * s.sign);
            }
        return num;
    }

    /// Truncated ch V(lambda): coefficients of e^{lambda - beta}, |beta| <= depth.
    ConeSeries character(const Weight& lambda, long long depth) const {
        if (depth > N_) throw input_error("character: depth exceeds the built cutoff");
        ConeSeries num = numerator(lambda, depth);
        // divide by the denominator series order by order
        ConeSeries ch;
        for (const auto& beta : cone_points(depth)) {
            long long acc = coeff(num, beta);
            for (const auto& [g, dg] : den_) {
                if (height(g) == 0 || height(g) > height(beta)) continue;
                RootVec rest = beta;
                bool ok = true;
                for (size_t j = 0; j < rest.size(); ++j) {
                    rest[j] -= g[j];
                    if (rest[j] < 0) ok = false;
                }
                if (!ok) continue;
                acc -= dg * coeff(ch, rest);
            }
            if (acc != 0) ch.emplace(beta, acc);
        }
        if (coeff(ch, RootVec(static_cast<size_t>(D_.size()), 0)) != 1)
            throw consistency_error("character: leading coefficient is not 1");
        for (const auto& [b, c] : ch)
            if (c < 0) throw consistency_error("character: negative coefficient at height " +
                                               std::to_string(height(b)));
        return ch;
    }

    /// All beta in Q+ with |beta| <= cap, in increasing height.
    std::vector<RootVec> cone_points(long long cap) const {
        std::vector<RootVec> out;
        RootVec cur(static_cast<size_t>(D_.size()), 0);
        auto rec = [&](auto&& self, int node, long long used) -> void {
            if (node == D_.size()) {
                out.push_back(cur);
                return;
            }
            for (long long k = 0; used + k <= cap; ++k) {
                cur[static_cast<size_t>(node)] = k;
                self(self, node + 1, used + k);
            }
            cur[static_cast<size_t>(node)] = 0;
        };
        rec(rec, 0, 0);
        std::sort(out.begin(), out.end(), [](const RootVec& x, const RootVec& y) {
            auto hx = height(x), hy = height(y);
            if (hx != hy) return hx < hy;
            return x < y;
        });
        return out;
    }

  private:
    /// The lambda = 0 numerator must factor as prod (1-e^{-beta})^{m_beta};
    /// the exponents are solved by increasing height and verified exactly.
    void solve_multiplicities() {
        ConeSeries num = numerator(Weight::zero(D_.size()), N_);
        ConeSeries prod;
        add_term(prod, RootVec(static_cast<size_t>(D_.size()), 0), 1);
        for (const auto& beta : cone_points(N_)) {
            if (height(beta) == 0) continue;
            long long m = coeff(prod, beta) - coeff(num, beta);
            if (m < 0)
                throw consistency_error("root multiplicity solved negative at height " +
                                        std::to_string(height(beta)));
            if (m == 0) continue;
            mult_.emplace(beta, m);
            // multiply prod by (1 - e^{-beta})^m, truncated
            ConeSeries factor;
            long long h = height(beta);
            long long binom = 1;
            for (long long j = 0; j * h <= N_; ++j) {
                if (j > 0) binom = binom * (m - j + 1) / j;
                if (j > m) break;
                RootVec b(static_cast<size_t>(D_.size()), 0);
                for (size_t t = 0; t < b.size(); ++t) b[t] = beta[t] * j;
                add_term(factor, b, (j % 2 == 0 ? binom : -binom));
            }
            prod = cone_mul(prod, factor, N_);
        }
        if (!(prod == num))
            throw consistency_error("denominator identity failed to close at the cutoff");
        den_ = prod;
    }

    CartanDatum D_;
    int N_;
    ConeSeries mult_;
    ConeSeries den_;
};

} // namespace qbb
