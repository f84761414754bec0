#pragma once

#include <compare>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qbb/cartan.hpp"
#include "qbb/echelon.hpp"
#include "qbb/freealg.hpp"
#include "qbb/qfield.hpp"

namespace qbb {

/// Torus element q^h with h = sum h_i-coefficients + d_i-coefficients over
/// the coroot basis of the realization. K_i = q^{s_i h_i}.
struct TorusElement {
    std::vector<long long> h, d;

    static TorusElement zero(int n) {
        return TorusElement{std::vector<long long>(n, 0), std::vector<long long>(n, 0)};
    }
    bool is_zero() const {
        for (auto v : h)
            if (v != 0) return false;
        for (auto v : d)
            if (v != 0) return false;
        return true;
    }
    friend TorusElement operator+(const TorusElement& x, const TorusElement& y) {
        TorusElement r = x;
        for (size_t i = 0; i < r.h.size(); ++i) r.h[i] += y.h[i];
        for (size_t i = 0; i < r.d.size(); ++i) r.d[i] += y.d[i];
        return r;
    }
    TorusElement operator-() const {
        TorusElement r = *this;
        for (auto& v : r.h) v = -v;
        for (auto& v : r.d) v = -v;
        return r;
    }
    auto operator<=>(const TorusElement&) const = default;

    /// <h, w> for a weight w in the realization.
    long long pair_weight(const Weight& w) const {
        long long acc = 0;
        for (size_t i = 0; i < h.size(); ++i) acc += h[i] * w.h[i];
        for (size_t i = 0; i < d.size(); ++i) acc += d[i] * w.d[i];
        return acc;
    }
    /// <h, alpha_j>.
    long long pair_simple_root(const CartanDatum& D, int j) const {
        long long acc = d[static_cast<size_t>(j)];
        for (int i = 0; i < D.size(); ++i) acc += h[static_cast<size_t>(i)] * D.a[i][j];
        return acc;
    }
    /// <h, beta> for beta in alpha-coordinates.
    long long pair_root(const CartanDatum& D, const RootVec& beta) const {
        long long acc = 0;
        for (int j = 0; j < D.size(); ++j)
            if (beta[static_cast<size_t>(j)] != 0)
                acc += beta[static_cast<size_t>(j)] * pair_simple_root(D, j);
        return acc;
    }
};

inline TorusElement k_power(const CartanDatum& D, int i, long long n) {
    TorusElement t = TorusElement::zero(D.size());
    t.h[static_cast<size_t>(i)] = n * D.s[static_cast<size_t>(i)];
    return t;
}

/// Normal-form term shape: (negative basis monomial) q^h (positive basis monomial).
struct Triple {
    FreeMonomial f; // word in the f_{il}
    TorusElement t;
    FreeMonomial e; // word in the e_{il}

    friend bool operator==(const Triple& a, const Triple& b) {
        return a.f == b.f && a.t == b.t && a.e == b.e;
    }
    friend bool operator<(const Triple& a, const Triple& b) {
        if (a.f < b.f) return true;
        if (b.f < a.f) return false;
        if (a.t != b.t) return a.t < b.t;
        return a.e < b.e;
    }
};

/// Element of U in triangular normal form: map from normal-form triples to
/// scalars. Zero coefficients are never stored, so equality of elements is
/// equality of maps.
class AlgebraElement {
  public:
    std::map<Triple, RationalFunction> terms;

    bool is_zero() const { return terms.empty(); }

    void add(const Triple& key, const RationalFunction& c) {
        if (c.is_zero()) return;
        auto it = terms.find(key);
        if (it == terms.end()) {
            terms.emplace(key, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }
    void add_scaled(const AlgebraElement& x, const RationalFunction& c) {
        if (c.is_zero()) return;
        for (const auto& [k, v] : x.terms) add(k, v * c);
    }
    friend AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
        AlgebraElement r = x;
        r.add_scaled(y, RationalFunction::one());
        return r;
    }
    friend AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) {
        AlgebraElement r = x;
        r.add_scaled(y, RationalFunction(-1));
        return r;
    }
    friend AlgebraElement operator*(const RationalFunction& c, const AlgebraElement& x) {
        AlgebraElement r;
        r.add_scaled(x, c);
        return r;
    }
    friend bool operator==(const AlgebraElement& x, const AlgebraElement& y) {
        return x.terms == y.terms;
    }
};

using TensorElement = std::map<std::pair<Triple, Triple>, RationalFunction>;

inline void add_term(TensorElement& x, const Triple& a, const Triple& b,
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

/// One generator inside an unreduced word.
struct Gen {
    enum Kind { F, E, T } kind;
    int node = 0;
    int level = 0;
    TorusElement torus;

    static Gen f(int i, int l) { return Gen{F, i, l, {}}; }
    static Gen e(int i, int l) { return Gen{E, i, l, {}}; }
    static Gen t(TorusElement te) { return Gen{T, 0, 0, std::move(te)}; }
};
using GenWord = std::vector<Gen>;

enum class Schedule { LeftFirst, RightFirst };

/// Linear basis data of one graded piece of U^- (equivalently U^+: both
/// halves satisfy the same abstract word relations). Raw monomials are
/// eliminated against the two-sided relation span; non-pivot monomials form
/// the basis and every raw monomial carries its reduction to basis
/// coordinates.
struct DegreeBasis {
    std::vector<FreeMonomial> cols;
    std::vector<FreeMonomial> basis;
    std::map<FreeMonomial, std::map<FreeMonomial, RationalFunction>> reduce_tab;

    size_t dim() const { return basis.size(); }
};

/// The quantum Borcherds-Bozec algebra attached to a datum, a tau table and
/// a height cutoff N. All graded bases for |beta| <= N and all e-f
/// reordering data are computed up front; the instance is immutable
/// afterwards and all operations are const.
class Algebra {
  public:
    Algebra(CartanDatum datum, TauTable tau, int cutoff)
        : D_(std::move(datum)), tau_(std::move(tau)), N_(cutoff) {
        if (auto diag = D_.validate()) throw input_error("invalid datum: " + *diag);
        if (N_ < 0) throw input_error("height cutoff must be nonnegative");
        tau_.validate(D_, N_ == 0 ? 1 : N_);
        build_bases();
        build_ef_table();
    }

    const CartanDatum& datum() const { return D_; }
    const TauTable& tau() const { return tau_; }
    int cutoff() const { return N_; }

    const DegreeBasis& degree_basis(const RootVec& beta) const {
        auto it = degrees_.find(beta);
        if (it == degrees_.end()) throw input_error("height cutoff exceeded");
        return it->second;
    }
    long long dim_minus(const RootVec& beta) const {
        return static_cast<long long>(degree_basis(beta).dim());
    }

    /// Each beta with |beta| <= N, in increasing height.
    std::vector<RootVec> graded_degrees() const {
        std::vector<RootVec> out;
        for (const auto& [beta, _] : degrees_) out.push_back(beta);
        std::sort(out.begin(), out.end(), [](const RootVec& x, const RootVec& y) {
            auto hx = height(x), hy = height(y);
            if (hx != hy) return hx < hy;
            return x < y;
        });
        return out;
    }

    AlgebraElement zero() const { return {}; }
    AlgebraElement one() const {
        AlgebraElement r;
        r.add(Triple{{}, TorusElement::zero(D_.size()), {}}, RationalFunction::one());
        return r;
    }
    AlgebraElement scalar(const RationalFunction& c) const {
        AlgebraElement r;
        r.add(Triple{{}, TorusElement::zero(D_.size()), {}}, c);
        return r;
    }
    AlgebraElement f_gen(int i, int l) const {
        if (l > N_) throw input_error("height cutoff exceeded");
        AlgebraElement r;
        r.add(Triple{letter(D_, i, l), TorusElement::zero(D_.size()), {}}, RationalFunction::one());
        return r;
    }
    AlgebraElement e_gen(int i, int l) const {
        if (l > N_) throw input_error("height cutoff exceeded");
        AlgebraElement r;
        r.add(Triple{{}, TorusElement::zero(D_.size()), letter(D_, i, l)}, RationalFunction::one());
        return r;
    }
    AlgebraElement torus_gen(const TorusElement& t) const {
        AlgebraElement r;
        r.add(Triple{{}, t, {}}, RationalFunction::one());
        return r;
    }
    AlgebraElement k_gen(int i, long long n) const { return torus_gen(k_power(D_, i, n)); }

    /// Reduction of a raw word in one half to basis coordinates.
    const std::map<FreeMonomial, RationalFunction>& reduce_word(const FreeMonomial& m) const {
        const DegreeBasis& db = degree_basis(m.degree(D_.size()));
        auto it = db.reduce_tab.find(m);
        if (it == db.reduce_tab.end()) throw consistency_error("monomial missing from degree table");
        return it->second;
    }

    /// Normal form of a coefficient times an arbitrary generator word.
    AlgebraElement normalize(const GenWord& word, const RationalFunction& coeff,
                             Schedule sched = Schedule::LeftFirst) const {
        long long fh = 0, eh = 0;
        for (const auto& g : word) {
            if (g.kind == Gen::F) fh += g.level;
            if (g.kind == Gen::E) eh += g.level;
        }
        if (fh > N_ || eh > N_) throw input_error("height cutoff exceeded");
        AlgebraElement out;
        std::vector<std::pair<GenWord, RationalFunction>> work;
        work.emplace_back(word, coeff);
        while (!work.empty()) {
            auto [w, c] = std::move(work.back());
            work.pop_back();
            if (c.is_zero()) continue;
            straighten(w, c, work, out, sched);
        }
        return out;
    }

    AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y,
                            Schedule sched = Schedule::LeftFirst) const {
        AlgebraElement out;
        for (const auto& [tx, cx] : x.terms)
            for (const auto& [ty, cy] : y.terms) {
                GenWord w = triple_to_word(tx);
                GenWord wy = triple_to_word(ty);
                w.insert(w.end(), wy.begin(), wy.end());
                out.add_scaled(normalize(w, cx * cy, sched), RationalFunction::one());
            }
        return out;
    }

    /// Normal form of e_{il} f_{ik} (same node), from the precomputed table.
    const AlgebraElement& reorder_ef(int i, int l, int k) const {
        auto it = ef_table_.find(std::make_tuple(i, l, k));
        if (it == ef_table_.end()) throw input_error("height cutoff exceeded");
        return it->second;
    }

    // ---- co-multiplication -------------------------------------------------

    TensorElement tensor_one() const {
        TensorElement r;
        Triple id{{}, TorusElement::zero(D_.size()), {}};
        add_term(r, id, id, RationalFunction::one());
        return r;
    }

    TensorElement tensor_mul(const TensorElement& x, const TensorElement& y) const {
        TensorElement r;
        for (const auto& [kx, cx] : x)
            for (const auto& [ky, cy] : y) {
                AlgebraElement left = mult_triples(kx.first, ky.first);
                AlgebraElement right = mult_triples(kx.second, ky.second);
                RationalFunction c = cx * cy;
                for (const auto& [ta, ca] : left.terms)
                    for (const auto& [tb, cb] : right.terms) add_term(r, ta, tb, c * ca * cb);
            }
        return r;
    }

    /// Delta of a single generator, straight from the defining formulas.
    TensorElement delta_gen(const Gen& g) const {
        TensorElement r;
        int n = D_.size();
        if (g.kind == Gen::T) {
            Triple t{{}, g.torus, {}};
            add_term(r, t, t, RationalFunction::one());
            return r;
        }
        long long qpar = D_.qpar_exponent(g.node);
        for (int m = 0; m <= g.level; ++m) {
            int rest = g.level - m;
            if (g.kind == Gen::F) {
                Triple left{m > 0 ? letter(D_, g.node, m) : FreeMonomial{},
                            k_power(D_, g.node, rest), {}};
                Triple right{rest > 0 ? letter(D_, g.node, rest) : FreeMonomial{},
                             TorusElement::zero(n), {}};
                add_term(r, left, right, RationalFunction::q_power(-qpar * m * rest));
            } else {
                Triple left{{}, TorusElement::zero(n),
                            m > 0 ? letter(D_, g.node, m) : FreeMonomial{}};
                Triple right{{}, k_power(D_, g.node, -m),
                             rest > 0 ? letter(D_, g.node, rest) : FreeMonomial{}};
                add_term(r, left, right, RationalFunction::q_power(qpar * m * rest));
            }
        }
        return r;
    }

    TensorElement comultiply_word(const GenWord& word, const RationalFunction& coeff) const {
        TensorElement acc = tensor_one();
        for (const auto& g : word) acc = tensor_mul(acc, delta_gen(g));
        TensorElement r;
        for (const auto& [k, c] : acc) add_term(r, k.first, k.second, c * coeff);
        return r;
    }

    TensorElement comultiply(const AlgebraElement& x) const {
        TensorElement r;
        for (const auto& [t, c] : x.terms) {
            TensorElement dt = comultiply_word(triple_to_word(t), c);
            for (const auto& [k, v] : dt) add_term(r, k.first, k.second, v);
        }
        return r;
    }

    // ---- involutions -------------------------------------------------------

    /// omega: e_{il} -> f_{il}, f_{il} -> e_{il}, q^h -> q^{-h}; algebra map.
    AlgebraElement omega(const AlgebraElement& x) const {
        AlgebraElement out;
        for (const auto& [t, c] : x.terms) {
            GenWord w;
            for (const auto& l : t.f.w) w.push_back(Gen::e(l.node, l.level));
            if (!t.t.is_zero()) w.push_back(Gen::t(-t.t));
            for (const auto& l : t.e.w) w.push_back(Gen::f(l.node, l.level));
            out.add_scaled(normalize(w, c), RationalFunction::one());
        }
        return out;
    }

    /// phi: e_{il} -> f_{il}, f_{il} -> e_{il}, torus fixed; anti-automorphism.
    AlgebraElement phi(const AlgebraElement& x) const {
        AlgebraElement out;
        for (const auto& [t, c] : x.terms) {
            GenWord w;
            for (auto it = t.e.w.rbegin(); it != t.e.w.rend(); ++it)
                w.push_back(Gen::f(it->node, it->level));
            if (!t.t.is_zero()) w.push_back(Gen::t(t.t));
            for (auto it = t.f.w.rbegin(); it != t.f.w.rend(); ++it)
                w.push_back(Gen::e(it->node, it->level));
            out.add_scaled(normalize(w, c), RationalFunction::one());
        }
        return out;
    }

    // ---- relation residuals ------------------------------------------------

    /// Serre element residual for real i against (j,l); zero by contract.
    AlgebraElement serre_residual(int i, int j, int l, bool positive_side) const {
        if (!D_.is_real(i) || i == j) throw input_error("serre residual needs real i and j != i");
        long long b = 1 - static_cast<long long>(l) * D_.a[i][j];
        AlgebraElement acc;
        for (long long k = 0; k <= b; ++k) {
            GenWord w;
            for (long long r = 0; r < b - k; ++r)
                w.push_back(positive_side ? Gen::e(i, 1) : Gen::f(i, 1));
            w.push_back(positive_side ? Gen::e(j, l) : Gen::f(j, l));
            for (long long r = 0; r < k; ++r)
                w.push_back(positive_side ? Gen::e(i, 1) : Gen::f(i, 1));
            RationalFunction c = q_binomial(b, k, D_.s[static_cast<size_t>(i)]);
            if (k % 2 == 1) c = -c;
            acc.add_scaled(normalize(w, c), RationalFunction::one());
        }
        return acc;
    }

    /// Commutation residual for a_{ij} = 0 (includes isotropic i = j).
    AlgebraElement commute_residual(int i, int k, int j, int l, bool positive_side) const {
        if (D_.a[i][j] != 0) throw input_error("commutation residual needs a_{ij} = 0");
        auto g = [&](int node, int level) {
            return positive_side ? Gen::e(node, level) : Gen::f(node, level);
        };
        AlgebraElement acc = normalize({g(i, k), g(j, l)}, RationalFunction::one());
        acc.add_scaled(normalize({g(j, l), g(i, k)}, RationalFunction::one()), RationalFunction(-1));
        return acc;
    }

    /// The two sides of the level-(k,l) string relation at node i, as raw words.
    std::vector<std::pair<GenWord, RationalFunction>> string_combination(int i, int k,
                                                                         int l) const {
        std::vector<std::pair<GenWord, RationalFunction>> out;
        long long qpar = D_.qpar_exponent(i);
        for (int n = 0; n <= std::min(k, l); ++n) {
            int m = k - n, s = l - n;
            RationalFunction taun = tau_.get(D_, i, n);
            {
                GenWord w;
                if (s > 0) w.push_back(Gen::e(i, s));
                if (m > 0) w.push_back(Gen::f(i, m));
                if (n > 0) w.push_back(Gen::t(k_power(D_, i, -n)));
                out.emplace_back(std::move(w),
                                 taun * RationalFunction::q_power(qpar * n * (m - s)));
            }
            {
                GenWord w;
                if (m > 0) w.push_back(Gen::f(i, m));
                if (s > 0) w.push_back(Gen::e(i, s));
                if (n > 0) w.push_back(Gen::t(k_power(D_, i, n)));
                out.emplace_back(std::move(w),
                                 -taun * RationalFunction::q_power(-qpar * n * (m - s)));
            }
        }
        return out;
    }

    /// Normal form of (string relation left - right); zero by contract.
    AlgebraElement string_residual(int i, int k, int l) const {
        AlgebraElement acc;
        for (const auto& [w, c] : string_combination(i, k, l))
            acc.add_scaled(normalize(w, c), RationalFunction::one());
        return acc;
    }

    /// Delta applied termwise to the string combination, in U (x) U;
    /// zero by contract (the co-multiplication respects the relation).
    TensorElement string_delta_residual(int i, int k, int l) const {
        TensorElement acc;
        for (const auto& [w, c] : string_combination(i, k, l)) {
            TensorElement dt = comultiply_word(w, c);
            for (const auto& [key, v] : dt) add_term(acc, key.first, key.second, v);
        }
        return acc;
    }

    // ---- evaluation helpers ------------------------------------------------

    /// Sum of the pure-torus terms evaluated at lambda: the building block of
    /// the contravariant form.
    RationalFunction pi0_eval(const AlgebraElement& x, const Weight& lambda) const {
        RationalFunction acc;
        for (const auto& [t, c] : x.terms) {
            if (!t.f.empty() || !t.e.empty()) continue;
            acc += c * RationalFunction::q_power(t.t.pair_weight(lambda));
        }
        return acc;
    }

    std::string to_string(const AlgebraElement& x) const {
        if (x.is_zero()) return "0";
        std::string out;
        for (const auto& [t, c] : x.terms) {
            if (!out.empty()) out += "\n+ ";
            out += "(" + c.to_string() + ")";
            for (const auto& l : t.f.w)
                out += " f[" + D_.names[static_cast<size_t>(l.node)] + "," +
                       std::to_string(l.level) + "]";
            out += torus_string(t.t);
            for (const auto& l : t.e.w)
                out += " e[" + D_.names[static_cast<size_t>(l.node)] + "," +
                       std::to_string(l.level) + "]";
        }
        return out;
    }

  private:
    GenWord triple_to_word(const Triple& t) const {
        GenWord w;
        for (const auto& l : t.f.w) w.push_back(Gen::f(l.node, l.level));
        if (!t.t.is_zero()) w.push_back(Gen::t(t.t));
        for (const auto& l : t.e.w) w.push_back(Gen::e(l.node, l.level));
        return w;
    }

    AlgebraElement mult_triples(const Triple& a, const Triple& b) const {
        GenWord w = triple_to_word(a);
        GenWord wb = triple_to_word(b);
        w.insert(w.end(), wb.begin(), wb.end());
        return normalize(w, RationalFunction::one());
    }

    std::string torus_string(const TorusElement& t) const {
        if (t.is_zero()) return "";
        // print as a product of K[i]^n when possible
        bool k_shape = true;
        for (int i = 0; i < D_.size(); ++i) {
            if (t.d[static_cast<size_t>(i)] != 0 ||
                t.h[static_cast<size_t>(i)] % D_.s[static_cast<size_t>(i)] != 0)
                k_shape = false;
        }
        std::string out;
        if (k_shape) {
            for (int i = 0; i < D_.size(); ++i) {
                long long n = t.h[static_cast<size_t>(i)] / D_.s[static_cast<size_t>(i)];
                if (n == 0) continue;
                out += " K[" + D_.names[static_cast<size_t>(i)] + "]";
                if (n != 1) out += "^" + std::to_string(n);
            }
            return out;
        }
        out = " q[h=";
        for (size_t i = 0; i < t.h.size(); ++i) out += (i ? "," : "") + std::to_string(t.h[i]);
        out += ";d=";
        for (size_t i = 0; i < t.d.size(); ++i) out += (i ? "," : "") + std::to_string(t.d[i]);
        out += "]";
        return out;
    }

    // ---- construction ------------------------------------------------------

    void build_bases() {
        std::vector<RootVec> betas;
        RootVec cur(static_cast<size_t>(D_.size()), 0);
        collect_degrees(cur, 0, 0, betas);
        for (const auto& beta : betas) degrees_.emplace(beta, build_degree(beta));
    }

    void collect_degrees(RootVec& cur, int node, long long used, std::vector<RootVec>& out) const {
        if (node == D_.size()) {
            out.push_back(cur);
            return;
        }
        for (long long k = 0; used + k <= N_; ++k) {
            cur[static_cast<size_t>(node)] = k;
            collect_degrees(cur, node + 1, used + k, out);
        }
        cur[static_cast<size_t>(node)] = 0;
    }

    DegreeBasis build_degree(const RootVec& beta) const {
        DegreeBasis db;
        db.cols = monomials_of_degree(D_, beta);
        std::map<FreeMonomial, size_t> col_index;
        for (size_t j = 0; j < db.cols.size(); ++j) col_index.emplace(db.cols[j], j);

        RowEchelon ech(db.cols.size());
        for (const auto& rel : relation_instances(beta)) {
            RootVec gamma = rel.begin()->first.degree(D_.size());
            RootVec rem(static_cast<size_t>(D_.size()), 0);
            for (int j = 0; j < D_.size(); ++j)
                rem[static_cast<size_t>(j)] = beta[static_cast<size_t>(j)] - gamma[static_cast<size_t>(j)];
            // all splits rem = beta1 + beta2 and all bracketing monomials
            std::vector<RootVec> splits;
            RootVec c1(static_cast<size_t>(D_.size()), 0);
            collect_splits(rem, c1, 0, splits);
            for (const auto& beta1 : splits) {
                RootVec beta2(static_cast<size_t>(D_.size()), 0);
                for (int j = 0; j < D_.size(); ++j)
                    beta2[static_cast<size_t>(j)] = rem[static_cast<size_t>(j)] - beta1[static_cast<size_t>(j)];
                for (const auto& m1 : monomials_of_degree(D_, beta1))
                    for (const auto& m2 : monomials_of_degree(D_, beta2)) {
                        std::vector<RationalFunction> row(db.cols.size());
                        for (const auto& [mono, c] : rel)
                            row[col_index.at(m1.concat(mono).concat(m2))] += c;
                        ech.add_row(std::move(row));
                    }
            }
        }

        for (size_t j = 0; j < db.cols.size(); ++j)
            if (!ech.is_pivot_col(j)) db.basis.push_back(db.cols[j]);
        // pivot columns reduce through their RREF row; basis columns are themselves
        for (size_t j = 0; j < db.cols.size(); ++j) {
            std::map<FreeMonomial, RationalFunction> red;
            bool pivot = false;
            for (size_t r = 0; r < ech.rank(); ++r)
                if (ech.pivots()[r] == j) {
                    pivot = true;
                    const auto& row = ech.rows()[r];
                    for (size_t j2 = 0; j2 < db.cols.size(); ++j2) {
                        if (j2 == j || row[j2].is_zero()) continue;
                        red.emplace(db.cols[j2], -row[j2]);
                    }
                    break;
                }
            if (!pivot) red.emplace(db.cols[j], RationalFunction::one());
            db.reduce_tab.emplace(db.cols[j], std::move(red));
        }
        return db;
    }

    void collect_splits(const RootVec& rem, RootVec& cur, int node,
                        std::vector<RootVec>& out) const {
        if (node == D_.size()) {
            out.push_back(cur);
            return;
        }
        for (long long k = 0; k <= rem[static_cast<size_t>(node)]; ++k) {
            cur[static_cast<size_t>(node)] = k;
            collect_splits(rem, cur, node + 1, out);
        }
        cur[static_cast<size_t>(node)] = 0;
    }

    /// All defining relation elements (as FreeElements in the abstract word
    /// algebra) whose degree fits inside beta componentwise.
    std::vector<FreeElement> relation_instances(const RootVec& beta) const {
        std::vector<FreeElement> out;
        int n = D_.size();
        auto fits = [&](const RootVec& gamma) {
            for (int j = 0; j < n; ++j)
                if (gamma[static_cast<size_t>(j)] > beta[static_cast<size_t>(j)]) return false;
            return true;
        };
        // commutation relations for a_{ij} = 0
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                if (D_.a[i][j] != 0) continue;
                if (i == j && !D_.is_isotropic(i)) continue;
                int kmax = D_.is_real(i) ? 1 : static_cast<int>(beta[static_cast<size_t>(i)]);
                int lmax = D_.is_real(j) ? 1 : static_cast<int>(beta[static_cast<size_t>(j)]);
                for (int k = 1; k <= kmax; ++k)
                    for (int l = (i == j ? k + 1 : 1); l <= lmax; ++l) {
                        RootVec gamma(static_cast<size_t>(n), 0);
                        gamma[static_cast<size_t>(i)] += k;
                        gamma[static_cast<size_t>(j)] += l;
                        if (!fits(gamma)) continue;
                        FreeElement rel;
                        add_term(rel, letter(D_, i, k).concat(letter(D_, j, l)),
                                 RationalFunction::one());
                        add_term(rel, letter(D_, j, l).concat(letter(D_, i, k)),
                                 RationalFunction(-1));
                        if (!rel.empty()) out.push_back(std::move(rel));
                    }
            }
        // Serre relations for real i against (j,l) != (i,1)
        for (int i = 0; i < n; ++i) {
            if (!D_.is_real(i)) continue;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                int lmax = D_.is_real(j) ? 1 : static_cast<int>(beta[static_cast<size_t>(j)]);
                for (int l = 1; l <= lmax; ++l) {
                    long long b = 1 - static_cast<long long>(l) * D_.a[i][j];
                    RootVec gamma(static_cast<size_t>(n), 0);
                    gamma[static_cast<size_t>(i)] += b;
                    gamma[static_cast<size_t>(j)] += l;
                    if (!fits(gamma)) continue;
                    FreeElement rel;
                    FreeMonomial fi = letter(D_, i, 1), fjl = letter(D_, j, l);
                    for (long long k = 0; k <= b; ++k) {
                        FreeMonomial m;
                        for (long long r = 0; r < b - k; ++r) m = m.concat(fi);
                        m = m.concat(fjl);
                        for (long long r = 0; r < k; ++r) m = m.concat(fi);
                        RationalFunction c = q_binomial(b, k, D_.s[static_cast<size_t>(i)]);
                        if (k % 2 == 1) c = -c;
                        add_term(rel, m, c);
                    }
                    out.push_back(std::move(rel));
                }
            }
        }
        return out;
    }

    void build_ef_table() {
        for (int total = 2; total <= 2 * N_; ++total)
            for (int i = 0; i < D_.size(); ++i) {
                int lim = D_.is_real(i) ? 1 : N_;
                for (int l = 1; l <= lim && l < total; ++l) {
                    int k = total - l;
                    if (k < 1 || k > lim) continue;
                    ef_table_.emplace(std::make_tuple(i, l, k), compute_reorder(i, l, k));
                }
            }
    }

    /// e_{il} f_{ik} = (1/tau_{i0}) (R - S) with R the fully ordered side of
    /// the string relation and S its n >= 1 partner terms, already known by
    /// induction on l + k.
    AlgebraElement compute_reorder(int i, int l, int k) {
        long long qpar = D_.qpar_exponent(i);
        AlgebraElement acc;
        for (int n = 0; n <= std::min(k, l); ++n) {
            int m = k - n, s = l - n;
            RationalFunction taun = tau_.get(D_, i, n);
            // R-term: q_(i)^{-n(m+s)} tau_{in} f_{im} K_i^n e_{is}
            Triple t{m > 0 ? letter(D_, i, m) : FreeMonomial{}, k_power(D_, i, n),
                     s > 0 ? letter(D_, i, s) : FreeMonomial{}};
            acc.add(t, taun * RationalFunction::q_power(-qpar * n * (m + s)));
        }
        for (int n = 1; n <= std::min(k, l); ++n) {
            int m = k - n, s = l - n;
            RationalFunction taun = tau_.get(D_, i, n);
            RationalFunction c = -taun * RationalFunction::q_power(-qpar * n * (m - s));
            AlgebraElement inner;
            if (s == 0 && m == 0)
                inner = one();
            else if (s == 0)
                inner = f_gen(i, m);
            else if (m == 0)
                inner = e_gen(i, s);
            else
                inner = ef_table_.at(std::make_tuple(i, s, m));
            acc.add_scaled(left_mul_torus(k_power(D_, i, -n), inner), c);
        }
        RationalFunction tau0 = tau_.get(D_, i, 0);
        if (!tau0.is_one()) acc = tau0.inverse() * acc;
        return acc;
    }

    /// q^t x for x in normal form: commuting q^t through the f-part costs
    /// q^{-<t, deg F>} per term.
    AlgebraElement left_mul_torus(const TorusElement& t, const AlgebraElement& x) const {
        AlgebraElement out;
        for (const auto& [tr, c] : x.terms) {
            long long pairing = t.pair_root(D_, tr.f.degree(D_.size()));
            Triple nt{tr.f, t + tr.t, tr.e};
            out.add(nt, c * RationalFunction::q_power(-pairing));
        }
        return out;
    }

    // ---- straightening -----------------------------------------------------

    void straighten(GenWord& w, RationalFunction& c,
                    std::vector<std::pair<GenWord, RationalFunction>>& work, AlgebraElement& out,
                    Schedule sched) const {
        for (;;) {
            size_t n = w.size();
            size_t found = n;
            if (n >= 2) {
                if (sched == Schedule::LeftFirst) {
                    for (size_t j = 0; j + 1 < n; ++j)
                        if (is_violation(w[j], w[j + 1])) {
                            found = j;
                            break;
                        }
                } else {
                    for (size_t j = n - 1; j-- > 0;)
                        if (is_violation(w[j], w[j + 1])) {
                            found = j;
                            break;
                        }
                }
            }
            if (found == n) break;
            Gen& u = w[found];
            Gen& v = w[found + 1];
            if (u.kind == Gen::T && v.kind == Gen::T) {
                u.torus = u.torus + v.torus;
                w.erase(w.begin() + static_cast<long>(found) + 1);
                continue;
            }
            if (u.kind == Gen::T && v.kind == Gen::F) {
                c *= RationalFunction::q_power(-static_cast<long long>(v.level) *
                                               u.torus.pair_simple_root(D_, v.node));
                std::swap(u, v);
                continue;
            }
            if (u.kind == Gen::E && v.kind == Gen::T) {
                c *= RationalFunction::q_power(-static_cast<long long>(u.level) *
                                               v.torus.pair_simple_root(D_, u.node));
                std::swap(u, v);
                continue;
            }
            // u = e_{i,l}, v = f_{j,k}
            if (u.node != v.node) {
                std::swap(u, v);
                continue;
            }
            const AlgebraElement& rep = reorder_ef(u.node, u.level, v.level);
            for (const auto& [tr, rc] : rep.terms) {
                GenWord nw(w.begin(), w.begin() + static_cast<long>(found));
                for (const auto& le : tr.f.w) nw.push_back(Gen::f(le.node, le.level));
                if (!tr.t.is_zero()) nw.push_back(Gen::t(tr.t));
                for (const auto& le : tr.e.w) nw.push_back(Gen::e(le.node, le.level));
                nw.insert(nw.end(), w.begin() + static_cast<long>(found) + 2, w.end());
                work.emplace_back(std::move(nw), c * rc);
            }
            return;
        }
        // sorted: split into f-word, torus, e-word and reduce both halves
        FreeMonomial fw, ew;
        TorusElement t = TorusElement::zero(D_.size());
        for (const auto& g : w) {
            if (g.kind == Gen::F) fw.w.push_back(FreeLetter{g.node, g.level});
            if (g.kind == Gen::T) t = t + g.torus;
            if (g.kind == Gen::E) ew.w.push_back(FreeLetter{g.node, g.level});
        }
        for (const auto& [bf, cf] : reduce_word(fw))
            for (const auto& [be, ce] : reduce_word(ew)) out.add(Triple{bf, t, be}, c * cf * ce);
    }

    static bool is_violation(const Gen& u, const Gen& v) {
        if (u.kind == Gen::T && (v.kind == Gen::T || v.kind == Gen::F)) return true;
        if (u.kind == Gen::E && (v.kind == Gen::T || v.kind == Gen::F)) return true;
        return false;
    }

    CartanDatum D_;
    TauTable tau_;
    int N_;
    std::map<RootVec, DegreeBasis> degrees_;
    std::map<std::tuple<int, int, int>, AlgebraElement> ef_table_;
};

} // namespace qbb
