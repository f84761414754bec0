#pragma once

#include <compare>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qbb/errors.hpp"

namespace qbb {

enum class NodeKind { Real, Isotropic, NonIsotropicImaginary };

/// An even symmetrizable Borcherds-Cartan matrix together with its
/// symmetrizer and node names. Node kinds are derived from the diagonal:
/// a_ii = 2 real, a_ii = 0 isotropic, a_ii < 0 non-isotropic imaginary.
struct CartanDatum {
    std::vector<std::string> names;
    std::vector<std::vector<long long>> a;
    std::vector<long long> s;

    int size() const { return static_cast<int>(a.size()); }

    NodeKind kind(int i) const {
        long long d = a[i][i];
        if (d == 2) return NodeKind::Real;
        if (d == 0) return NodeKind::Isotropic;
        return NodeKind::NonIsotropicImaginary;
    }
    bool is_real(int i) const { return a[i][i] == 2; }
    bool is_imaginary(int i) const { return a[i][i] <= 0; }
    bool is_isotropic(int i) const { return a[i][i] == 0; }

    /// Exponent of q in q_i = q^{s_i}.
    long long qi_exponent(int i) const { return s[i]; }
    /// Exponent of q in q_(i) = q^{(alpha_i, alpha_i)/2} = q_i^{a_ii/2}.
    long long qpar_exponent(int i) const { return s[i] * a[i][i] / 2; }

    /// Returns a diagnostic naming the first violated matrix condition, or
    /// nullopt if the datum is a valid even symmetrizable Borcherds-Cartan
    /// matrix with positive symmetrizer.
    std::optional<std::string> validate() const {
        int n = size();
        if (n == 0) return "empty matrix";
        for (int i = 0; i < n; ++i)
            if (static_cast<int>(a[i].size()) != n)
                throw input_error("malformed datum: matrix is not square");
        if (static_cast<int>(s.size()) != n)
            throw input_error("malformed datum: symmetrizer length does not match matrix");
        for (int i = 0; i < n; ++i)
            if (s[i] <= 0) return "symmetrizer: s_" + names_at(i) + " is not positive";
        for (int i = 0; i < n; ++i)
            if (a[i][i] > 2 || a[i][i] % 2 != 0)
                return "condition (i): diagonal entry a_{" + names_at(i) + "," + names_at(i) +
                       "} is not in {2, 0, -2, -4, ...}";
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && a[i][j] > 0)
                    return "condition (ii): off-diagonal entry a_{" + names_at(i) + "," +
                           names_at(j) + "} is positive";
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (s[i] * a[i][j] != s[j] * a[j][i])
                    return "condition (iii): symmetrizer fails at (" + names_at(i) + "," +
                           names_at(j) + ")";
        return std::nullopt;
    }

  private:
    std::string names_at(int i) const {
        return i < static_cast<int>(names.size()) ? names[i] : std::to_string(i + 1);
    }
};

/// Weight in the realization with coroot basis {h_i} + {d_i}: stores the
/// pairings <h_i, w> and <d_i, w>. Simple roots and fundamental weights are
/// then linearly independent for any datum.
struct Weight {
    std::vector<long long> h, d;

    static Weight zero(int n) { return Weight{std::vector<long long>(n, 0), std::vector<long long>(n, 0)}; }

    friend Weight operator+(const Weight& x, const Weight& y) {
        Weight r = x;
        for (size_t i = 0; i < r.h.size(); ++i) r.h[i] += y.h[i];
        for (size_t i = 0; i < r.d.size(); ++i) r.d[i] += y.d[i];
        return r;
    }
    friend Weight operator-(const Weight& x, const Weight& y) {
        Weight r = x;
        for (size_t i = 0; i < r.h.size(); ++i) r.h[i] -= y.h[i];
        for (size_t i = 0; i < r.d.size(); ++i) r.d[i] -= y.d[i];
        return r;
    }
    friend Weight operator*(long long c, const Weight& x) {
        Weight r = x;
        for (auto& v : r.h) v *= c;
        for (auto& v : r.d) v *= c;
        return r;
    }
    auto operator<=>(const Weight&) const = default;
};

using RootVec = std::vector<long long>; // coefficients k_i of beta = sum k_i alpha_i

inline long long height(const RootVec& beta) {
    long long h = 0;
    for (auto k : beta) h += k;
    return h;
}
inline bool in_positive_cone(const RootVec& beta) {
    for (auto k : beta)
        if (k < 0) return false;
    return true;
}

inline Weight simple_root(const CartanDatum& D, int j) {
    int n = D.size();
    Weight w = Weight::zero(n);
    for (int i = 0; i < n; ++i) w.h[i] = D.a[i][j];
    w.d[j] = 1;
    return w;
}

inline Weight fundamental_weight(const CartanDatum& D, int i) {
    Weight w = Weight::zero(D.size());
    w.h[i] = 1;
    return w;
}

/// rho with <h_i, rho> = 1 for all i and vanishing d-components.
inline Weight rho_weight(const CartanDatum& D) {
    Weight w = Weight::zero(D.size());
    for (auto& v : w.h) v = 1;
    return w;
}

inline Weight weight_from_root_vec(const CartanDatum& D, const RootVec& beta) {
    int n = D.size();
    Weight w = Weight::zero(n);
    for (int j = 0; j < n; ++j)
        if (beta[j] != 0) w = w + beta[j] * simple_root(D, j);
    return w;
}

inline Weight weight_from_lambda_coeffs(const CartanDatum& D, const std::vector<long long>& c) {
    if (static_cast<int>(c.size()) != D.size())
        throw input_error("lambda coefficient list length does not match datum rank");
    Weight w = Weight::zero(D.size());
    for (int i = 0; i < D.size(); ++i) w.h[i] = c[i];
    return w;
}

inline bool is_dominant(const Weight& w) {
    for (auto v : w.h)
        if (v < 0) return false;
    return true;
}

/// If w lies in the root lattice, returns its alpha-coordinates (which are
/// exactly the d-pairings); otherwise nullopt.
inline std::optional<RootVec> root_coords(const CartanDatum& D, const Weight& w) {
    int n = D.size();
    for (int i = 0; i < n; ++i) {
        long long acc = 0;
        for (int j = 0; j < n; ++j) acc += D.a[i][j] * w.d[j];
        if (acc != w.h[i]) return std::nullopt;
    }
    return w.d;
}

/// Bilinear form; needs at least one argument in the root lattice.
/// (alpha_i, y) = s_i <h_i, y>, extended linearly. Always integral.
inline long long bilinear(const CartanDatum& D, const Weight& x, const Weight& y) {
    auto kx = root_coords(D, x);
    if (kx) {
        long long acc = 0;
        for (int i = 0; i < D.size(); ++i) acc += (*kx)[i] * D.s[i] * y.h[i];
        return acc;
    }
    auto ky = root_coords(D, y);
    if (ky) {
        long long acc = 0;
        for (int i = 0; i < D.size(); ++i) acc += (*ky)[i] * D.s[i] * x.h[i];
        return acc;
    }
    throw input_error("bilinear form: neither argument lies in the root lattice");
}

/// (beta, gamma) for root-lattice vectors in alpha-coordinates.
inline long long bilinear_roots(const CartanDatum& D, const RootVec& beta, const RootVec& gamma) {
    long long acc = 0;
    for (int i = 0; i < D.size(); ++i) {
        if (beta[i] == 0) continue;
        for (int j = 0; j < D.size(); ++j) acc += beta[i] * D.s[i] * D.a[i][j] * gamma[j];
    }
    return acc;
}

inline Weight reflect(const CartanDatum& D, int i, const Weight& w) {
    if (!D.is_real(i)) throw input_error("reflection at a non-real node");
    return w - w.h[i] * simple_root(D, i);
}

struct WeylElement {
    std::vector<int> word; // reduced word, leftmost letter applied last
    long long sign;        // (-1)^length
    Weight image;          // w(lambda + rho)
    int length() const { return static_cast<int>(word.size()); }
};

/// Breadth-first enumeration of the Weyl group elements w with
/// ht(lambda+rho - w(lambda+rho)) <= defect_bound, for dominant lambda.
/// The defect is strictly increasing along reduced words from a dominant
/// start, so pruning at the bound is exhaustive. Elements are deduplicated
/// by their image of lambda+rho (a regular dominant weight, so the orbit
/// map is injective).
inline std::vector<WeylElement> enumerate_weyl(const CartanDatum& D, const Weight& lambda,
                                               long long defect_bound) {
    if (!is_dominant(lambda)) throw input_error("enumerate_weyl: lambda must be dominant");
    Weight start = lambda + rho_weight(D);
    std::vector<WeylElement> out;
    std::set<Weight> seen;
    std::deque<WeylElement> queue;
    queue.push_back(WeylElement{{}, 1, start});
    seen.insert(start);
    while (!queue.empty()) {
        WeylElement cur = queue.front();
        queue.pop_front();
        out.push_back(cur);
        for (int i = 0; i < D.size(); ++i) {
            if (!D.is_real(i)) continue;
            if (cur.image.h[i] <= 0) continue; // shorter element, already enumerated
            Weight next = reflect(D, i, cur.image);
            Weight defect = start - next;
            if (height(defect.d) > defect_bound) continue;
            if (!seen.insert(next).second) continue;
            WeylElement w;
            w.word.reserve(cur.word.size() + 1);
            w.word.push_back(i);
            w.word.insert(w.word.end(), cur.word.begin(), cur.word.end());
            w.sign = -cur.sign;
            w.image = next;
            queue.push_back(w);
        }
    }
    return out;
}

/// Applies the reduced word of w to an arbitrary weight.
inline Weight apply_weyl_word(const CartanDatum& D, const std::vector<int>& word, Weight v) {
    for (auto it = word.rbegin(); it != word.rend(); ++it) v = reflect(D, *it, v);
    return v;
}

} // namespace qbb
