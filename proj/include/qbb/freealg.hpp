#pragma once

#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qbb/cartan.hpp"
#include "qbb/qfield.hpp"

namespace qbb {

/// One alphabet letter f_{il}: node index and level (level 1 forced on real nodes).
struct FreeLetter {
    int node;
    int level;
    auto operator<=>(const FreeLetter&) const = default;
};

/// Word in the letters f_{il}; the monomial basis of the free algebra.
/// Ordered by height first, then lexicographically on the letter sequence.
struct FreeMonomial {
    std::vector<FreeLetter> w;

    bool empty() const { return w.empty(); }
    size_t length() const { return w.size(); }

    long long height() const {
        long long h = 0;
        for (const auto& l : w) h += l.level;
        return h;
    }
    RootVec degree(int rank) const {
        RootVec beta(static_cast<size_t>(rank), 0);
        for (const auto& l : w) beta[static_cast<size_t>(l.node)] += l.level;
        return beta;
    }
    FreeMonomial concat(const FreeMonomial& o) const {
        FreeMonomial r = *this;
        r.w.insert(r.w.end(), o.w.begin(), o.w.end());
        return r;
    }
    friend bool operator==(const FreeMonomial& a, const FreeMonomial& b) { return a.w == b.w; }
    friend bool operator<(const FreeMonomial& a, const FreeMonomial& b) {
        long long ha = a.height(), hb = b.height();
        if (ha != hb) return ha < hb;
        return a.w < b.w;
    }

    std::string to_string(const CartanDatum& D) const {
        if (w.empty()) return "1";
        std::string out;
        for (const auto& l : w) {
            if (!out.empty()) out += " ";
            out += "f[" + D.names[static_cast<size_t>(l.node)] + "," + std::to_string(l.level) + "]";
        }
        return out;
    }
};

inline FreeMonomial letter(const CartanDatum& D, int i, int l) {
    if (l < 1) throw input_error("generator level must be positive");
    if (D.is_real(i) && l != 1) throw input_error("real nodes carry level-1 generators only");
    return FreeMonomial{{FreeLetter{i, l}}};
}

using FreeElement = std::map<FreeMonomial, RationalFunction>;

inline void add_term(FreeElement& x, const FreeMonomial& m, const RationalFunction& c) {
    if (c.is_zero()) return;
    auto it = x.find(m);
    if (it == x.end()) {
        x.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) x.erase(it);
    }
}

inline FreeElement free_mul(const FreeElement& x, const FreeElement& y) {
    FreeElement r;
    for (const auto& [mx, cx] : x)
        for (const auto& [my, cy] : y) add_term(r, mx.concat(my), cx * cy);
    return r;
}

/// All words of the given degree, in monomial order.
inline void enumerate_monomials_rec(const CartanDatum& D, RootVec& remaining, FreeMonomial& cur,
                                    std::vector<FreeMonomial>& out) {
    bool done = true;
    for (auto k : remaining)
        if (k != 0) done = false;
    if (done) {
        out.push_back(cur);
        return;
    }
    for (int i = 0; i < D.size(); ++i) {
        if (remaining[static_cast<size_t>(i)] <= 0) continue;
        int max_level = D.is_real(i) ? 1 : static_cast<int>(remaining[static_cast<size_t>(i)]);
        for (int l = 1; l <= max_level; ++l) {
            remaining[static_cast<size_t>(i)] -= l;
            cur.w.push_back(FreeLetter{i, l});
            enumerate_monomials_rec(D, remaining, cur, out);
            cur.w.pop_back();
            remaining[static_cast<size_t>(i)] += l;
        }
    }
}

inline std::vector<FreeMonomial> monomials_of_degree(const CartanDatum& D, const RootVec& beta) {
    std::vector<FreeMonomial> out;
    RootVec rem = beta;
    FreeMonomial cur;
    enumerate_monomials_rec(D, rem, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

/// Table of the form normalizations tau_{il}. Level 0 is always 1; real
/// nodes default to tau_{i1} = 1/(1 - q_i^2); every other entry must be
/// supplied explicitly (datum file or override table).
class TauTable {
  public:
    TauTable() = default;

    void set(int node, int level, RationalFunction v) { entries_[{node, level}] = std::move(v); }
    bool has(int node, int level) const { return entries_.count({node, level}) > 0; }

    RationalFunction get(const CartanDatum& D, int i, int l) const {
        if (l == 0) return RationalFunction::one();
        auto it = entries_.find({i, l});
        if (it != entries_.end()) return it->second;
        if (D.is_real(i) && l == 1) {
            RationalFunction qi2 = RationalFunction::q_power(2 * D.s[static_cast<size_t>(i)]);
            return RationalFunction::one() / (RationalFunction::one() - qi2);
        }
        throw input_error("missing tau entry for node " + D.names[static_cast<size_t>(i)] +
                          ", level " + std::to_string(l));
    }

    /// Every entry needed up to height N must satisfy the series condition.
    void validate(const CartanDatum& D, int order) const {
        for (int i = 0; i < D.size(); ++i) {
            int top = D.is_real(i) ? 1 : order;
            for (int l = 1; l <= top; ++l) {
                RationalFunction t = get(D, i, l);
                if (!check_tau_assumption(t, std::max(order, 4)))
                    throw input_error("tau for node " + D.names[static_cast<size_t>(i)] +
                                      ", level " + std::to_string(l) +
                                      " violates the admissibility condition");
            }
        }
    }

  private:
    std::map<std::pair<int, int>, RationalFunction> entries_;
};

/// Element of the twisted tensor square of the free algebra.
using TwistedTensor = std::map<std::pair<FreeMonomial, FreeMonomial>, RationalFunction>;

inline void add_term(TwistedTensor& x, const FreeMonomial& a, const FreeMonomial& b,
                     const RationalFunction& c) {
    if (c.is_zero()) return;
    auto key = std::make_pair(a, b);
    auto it = x.find(key);
    if (it == x.end()) {
        x.emplace(std::move(key), c);
    } else {
        it->second += c;
        if (it->second.is_zero()) x.erase(it);
    }
}

/// (a1 (x) a2)(b1 (x) b2) = q^{-(deg a2, deg b1)} a1 b1 (x) a2 b2.
/// Degrees are negative roots, so the pairing equals the pairing of the
/// positive parts.
inline TwistedTensor twisted_mul(const CartanDatum& D, const TwistedTensor& x,
                                 const TwistedTensor& y) {
    TwistedTensor r;
    for (const auto& [mx, cx] : x) {
        RootVec a2 = mx.second.degree(D.size());
        for (const auto& [my, cy] : y) {
            RootVec b1 = my.first.degree(D.size());
            long long twist = -bilinear_roots(D, a2, b1);
            add_term(r, mx.first.concat(my.first), mx.second.concat(my.second),
                     cx * cy * RationalFunction::q_power(twist));
        }
    }
    return r;
}

/// Co-multiplication of one letter: delta(f_{il}) = sum_{m+n=l} q_(i)^{-mn} f_{im} (x) f_{in}.
inline TwistedTensor delta_letter(const CartanDatum& D, int i, int l) {
    TwistedTensor r;
    long long qpar = D.qpar_exponent(i);
    for (int m = 0; m <= l; ++m) {
        int n = l - m;
        FreeMonomial left = m > 0 ? FreeMonomial{{FreeLetter{i, m}}} : FreeMonomial{};
        FreeMonomial right = n > 0 ? FreeMonomial{{FreeLetter{i, n}}} : FreeMonomial{};
        add_term(r, left, right, RationalFunction::q_power(-qpar * m * n));
    }
    return r;
}

inline TwistedTensor delta(const CartanDatum& D, const FreeMonomial& x) {
    TwistedTensor acc;
    add_term(acc, FreeMonomial{}, FreeMonomial{}, RationalFunction::one());
    for (const auto& l : x.w) acc = twisted_mul(D, acc, delta_letter(D, l.node, l.level));
    return acc;
}

inline TwistedTensor delta(const CartanDatum& D, const FreeElement& x) {
    TwistedTensor acc;
    for (const auto& [m, c] : x) {
        TwistedTensor dm = delta(D, m);
        for (const auto& [key, v] : dm) add_term(acc, key.first, key.second, v * c);
    }
    return acc;
}

/// The symmetric bilinear form on the free algebra determined by
/// (f_{il}, f_{il}) = tau_{il} and (x, yz) = (delta(x), y (x) z).
/// Values on monomial pairs are cached.
class LusztigForm {
  public:
    LusztigForm(const CartanDatum& D, const TauTable& tau) : D_(D), tau_(tau) {}

    RationalFunction form(const FreeMonomial& x, const FreeMonomial& y) {
        if (x.degree(D_.size()) != y.degree(D_.size())) return RationalFunction::zero();
        if (x.empty()) return RationalFunction::one();
        auto key = x < y ? std::make_pair(x, y) : std::make_pair(y, x);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        RationalFunction val = compute(key.first, key.second);
        cache_.emplace(std::move(key), val);
        return val;
    }

    RationalFunction form(const FreeElement& x, const FreeElement& y) {
        RationalFunction acc;
        for (const auto& [mx, cx] : x)
            for (const auto& [my, cy] : y) acc += cx * cy * form(mx, my);
        return acc;
    }

    /// (t, y (x) z) for an already expanded tensor t: the independent
    /// full-expansion route used to cross-check the peeling recursion.
    RationalFunction pair_tensor(const TwistedTensor& t, const FreeMonomial& y,
                                 const FreeMonomial& z) {
        RationalFunction acc;
        for (const auto& [key, c] : t) acc += c * form(key.first, y) * form(key.second, z);
        return acc;
    }

    /// Symmetric Gram matrix of the form over the monomials of degree -beta.
    std::vector<std::vector<RationalFunction>> gram_matrix(const RootVec& beta) {
        auto monos = monomials_of_degree(D_, beta);
        size_t n = monos.size();
        std::vector<std::vector<RationalFunction>> g(n, std::vector<RationalFunction>(n));
        for (size_t a = 0; a < n; ++a)
            for (size_t b = a; b < n; ++b) {
                g[a][b] = form(monos[a], monos[b]);
                g[b][a] = g[a][b];
            }
        return g;
    }

  private:
    RationalFunction compute(const FreeMonomial& x, const FreeMonomial& y) {
        // both arguments have equal nonzero degree here
        if (x.length() <= 1 && y.length() <= 1) {
            // single letters of equal degree: diagonal iff the letters match
            if (x.w == y.w) {
                const FreeLetter& l = x.w[0];
                return tau_.get(D_, l.node, l.level);
            }
            return RationalFunction::zero();
        }
        const FreeMonomial* peel = &y;
        const FreeMonomial* other = &x;
        if (y.length() < 2) std::swap(peel, other);
        FreeMonomial head{{peel->w[0]}};
        FreeMonomial rest{std::vector<FreeLetter>(peel->w.begin() + 1, peel->w.end())};
        TwistedTensor dx = delta(D_, *other);
        RationalFunction acc;
        RootVec head_deg = head.degree(D_.size());
        for (const auto& [key, c] : dx) {
            if (key.first.degree(D_.size()) != head_deg) continue;
            acc += c * form(key.first, head) * form(key.second, rest);
        }
        return acc;
    }

    const CartanDatum& D_;
    const TauTable& tau_;
    std::map<std::pair<FreeMonomial, FreeMonomial>, RationalFunction> cache_;
};

} // namespace qbb
