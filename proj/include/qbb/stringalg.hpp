#pragma once

#include <string>
#include <vector>

#include "qbb/ubase.hpp"

namespace qbb {

/// Weakly decreasing part lists summing to l.
inline std::vector<std::vector<int>> partitions_of(int l) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rem, int maxpart) -> void {
        if (rem == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(rem, maxpart); p >= 1; --p) {
            cur.push_back(p);
            self(self, rem - p, p);
            cur.pop_back();
        }
    };
    rec(rec, l, l);
    return out;
}

/// Ordered part lists summing to l.
inline std::vector<std::vector<int>> compositions_of(int l) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rem) -> void {
        if (rem == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = 1; p <= rem; ++p) {
            cur.push_back(p);
            self(self, rem - p);
            cur.pop_back();
        }
    };
    rec(rec, l);
    return out;
}

/// Closed-form basis of U_(i)^- in degree -l alpha_i: a single power word
/// for real nodes, partition words for isotropic nodes, composition words
/// for non-isotropic imaginary nodes.
inline std::vector<FreeMonomial> enumerate_string_basis(const CartanDatum& D, int i, int l) {
    std::vector<FreeMonomial> out;
    if (l == 0) {
        out.push_back(FreeMonomial{});
        return out;
    }
    switch (D.kind(i)) {
        case NodeKind::Real: {
            FreeMonomial m;
            for (int r = 0; r < l; ++r) m.w.push_back(FreeLetter{i, 1});
            out.push_back(std::move(m));
            break;
        }
        case NodeKind::Isotropic:
            for (const auto& parts : partitions_of(l)) {
                FreeMonomial m;
                for (int p : parts) m.w.push_back(FreeLetter{i, p});
                out.push_back(std::move(m));
            }
            break;
        case NodeKind::NonIsotropicImaginary:
            for (const auto& parts : compositions_of(l)) {
                FreeMonomial m;
                for (int p : parts) m.w.push_back(FreeLetter{i, p});
                out.push_back(std::move(m));
            }
            break;
    }
    return out;
}

enum class StringAlgebraKind { Sl2, TwistedHeisenberg, Free };

struct StringClassification {
    StringAlgebraKind kind;
    std::string witness; // the relation(s) checked on the engine
};

/// Structure tag of the rank-one string algebra U_(i), together with the
/// residual checks that witness it.
inline StringClassification classify_string_algebra(const Algebra& A, int i) {
    const CartanDatum& D = A.datum();
    switch (D.kind(i)) {
        case NodeKind::Real: {
            // e_i f_i - f_i e_i = tau_{i1} (K_i - K_i^{-1})
            AlgebraElement lhs = A.multiply(A.e_gen(i, 1), A.f_gen(i, 1)) -
                                 A.multiply(A.f_gen(i, 1), A.e_gen(i, 1));
            AlgebraElement rhs =
                A.tau().get(D, i, 1) * (A.k_gen(i, 1) - A.k_gen(i, -1));
            if (!(lhs == rhs)) throw consistency_error("sl2 witness relation failed");
            return {StringAlgebraKind::Sl2, "e f - f e = tau_{i1}(K - K^{-1})"};
        }
        case NodeKind::Isotropic: {
            int top = std::min(3, A.cutoff());
            for (int k = 1; k <= top; ++k)
                for (int l = k + 1; k + l <= A.cutoff(); ++l) {
                    if (!A.commute_residual(i, k, i, l, false).is_zero() ||
                        !A.commute_residual(i, k, i, l, true).is_zero())
                        throw consistency_error("heisenberg witness relation failed");
                }
            // K_i is central on the node
            AlgebraElement k1 = A.k_gen(i, 1);
            for (int l = 1; l <= top; ++l) {
                if (!(A.multiply(k1, A.f_gen(i, l)) == A.multiply(A.f_gen(i, l), k1)) ||
                    !(A.multiply(k1, A.e_gen(i, l)) == A.multiply(A.e_gen(i, l), k1)))
                    throw consistency_error("heisenberg witness relation failed");
            }
            return {StringAlgebraKind::TwistedHeisenberg,
                    "[f_{ik}, f_{il}] = [e_{ik}, e_{il}] = [K_i, *] = 0"};
        }
        case NodeKind::NonIsotropicImaginary: {
            // no relations inside either half: raw words are the basis
            int top = std::min(4, A.cutoff());
            for (int l = 1; l <= top; ++l) {
                auto expect = static_cast<long long>(enumerate_string_basis(D, i, l).size());
                RootVec beta(static_cast<size_t>(D.size()), 0);
                beta[static_cast<size_t>(i)] = l;
                if (A.dim_minus(beta) != expect)
                    throw consistency_error("free witness count failed");
            }
            return {StringAlgebraKind::Free, "dim U^-_{-l alpha} = 2^{l-1} (no relations)"};
        }
    }
    throw consistency_error("unreachable");
}

} // namespace qbb
