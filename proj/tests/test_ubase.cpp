#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qbb/echelon.hpp"
#include "qbb/ubase.hpp"

using namespace qbb;

namespace {

TauTable geometric_tau(const CartanDatum& D, int max_level) {
    TauTable t;
    for (int i = 0; i < D.size(); ++i) {
        if (D.is_real(i)) continue;
        RationalFunction base =
            RationalFunction::one() /
            (RationalFunction::one() - RationalFunction::q_power(2 * D.s[(size_t)i]));
        for (int l = 1; l <= max_level; ++l) t.set(i, l, base.pow(l));
    }
    return t;
}

Algebra make_real(int N = 4) {
    CartanDatum D{{"1"}, {{2}}, {1}};
    return Algebra(D, geometric_tau(D, N), N);
}
Algebra make_iso(int N = 4) {
    CartanDatum D{{"1"}, {{0}}, {1}};
    return Algebra(D, geometric_tau(D, N), N);
}
Algebra make_noniso(int N = 4) {
    CartanDatum D{{"1"}, {{-2}}, {1}};
    return Algebra(D, geometric_tau(D, N), N);
}
Algebra make_mixed(int N = 3) {
    CartanDatum D{{"1", "2"}, {{2, -1}, {-1, 0}}, {1, 1}};
    return Algebra(D, geometric_tau(D, N), N);
}

long long partitions(int n) {
    std::vector<long long> p(static_cast<size_t>(n) + 1, 0);
    p[0] = 1;
    for (int k = 1; k <= n; ++k)
        for (int m = k; m <= n; ++m) p[(size_t)m] += p[(size_t)(m - k)];
    return p[(size_t)n];
}

} // namespace

TEST_CASE("graded basis dimensions (rank one)") {
    auto real = make_real(5);
    auto iso = make_iso(5);
    auto noniso = make_noniso(5);
    for (long long l = 0; l <= 5; ++l) {
        CHECK(real.dim_minus({l}) == 1);
        CHECK(iso.dim_minus({l}) == partitions((int)l));
        CHECK(noniso.dim_minus({l}) == (l == 0 ? 1 : (1LL << (l - 1))));
    }
    // isotropic basis representatives are the weakly decreasing level words
    const auto& db = iso.degree_basis({4});
    for (const auto& m : db.basis)
        for (size_t j = 0; j + 1 < m.w.size(); ++j) CHECK(m.w[j].level >= m.w[j + 1].level);
}

TEST_CASE("torus commutation") {
    auto A = make_mixed();
    const auto& D = A.datum();
    // q^h f_{jl} = q^{-l<h,alpha_j>} f_{jl} q^h
    TorusElement h = TorusElement::zero(2);
    h.h = {2, -1};
    h.d = {1, 0};
    for (int j = 0; j < 2; ++j) {
        int lmax = D.is_real(j) ? 1 : 2;
        for (int l = 1; l <= lmax; ++l) {
            AlgebraElement lhs = A.multiply(A.torus_gen(h), A.f_gen(j, l));
            AlgebraElement expect;
            expect.add(Triple{letter(D, j, l), h, {}},
                       RationalFunction::q_power(-(long long)l * h.pair_simple_root(D, j)));
            CHECK(lhs == expect);
        }
    }
    // q^0 = 1 and q^h q^{h'} = q^{h+h'}
    CHECK(A.torus_gen(TorusElement::zero(2)) == A.one());
    TorusElement h2 = TorusElement::zero(2);
    h2.h = {0, 3};
    h2.d = {0, -2};
    CHECK(A.multiply(A.torus_gen(h), A.torus_gen(h2)) == A.torus_gen(h + h2));
}

TEST_CASE("unit element") {
    auto A = make_mixed();
    AlgebraElement x = A.multiply(A.e_gen(1, 2), A.f_gen(0, 1));
    CHECK(A.multiply(A.one(), x) == x);
    CHECK(A.multiply(x, A.one()) == x);
}

TEST_CASE("sl2 recovery") {
    auto A = make_real();
    const auto& D = A.datum();
    RationalFunction q = RationalFunction::q_power(1);
    // e f - f e = tau_{i1} (K - K^{-1})
    AlgebraElement comm =
        A.multiply(A.e_gen(0, 1), A.f_gen(0, 1)) - A.multiply(A.f_gen(0, 1), A.e_gen(0, 1));
    RationalFunction tau1 = A.tau().get(D, 0, 1);
    AlgebraElement expect = tau1 * (A.k_gen(0, 1) - A.k_gen(0, -1));
    CHECK(comm == expect);

    // with F = -q_i f: e F - F e = (K - K^{-1}) / (q_i - q_i^{-1})
    AlgebraElement Fi = (RationalFunction::zero() - q) * A.f_gen(0, 1);
    AlgebraElement lhs = A.multiply(A.e_gen(0, 1), Fi) - A.multiply(Fi, A.e_gen(0, 1));
    RationalFunction denom = q - RationalFunction::q_power(-1);
    AlgebraElement rhs = denom.inverse() * (A.k_gen(0, 1) - A.k_gen(0, -1));
    CHECK(lhs == rhs);
}

TEST_CASE("cross-node generators commute") {
    auto A = make_mixed();
    const auto& D = A.datum();
    for (int l = 1; l <= 2; ++l) {
        AlgebraElement lhs = A.multiply(A.e_gen(1, l), A.f_gen(0, 1));
        AlgebraElement expect;
        expect.add(Triple{letter(D, 0, 1), TorusElement::zero(2), letter(D, 1, l)},
                   RationalFunction::one());
        CHECK(lhs == expect);
        CHECK(lhs == A.multiply(A.f_gen(0, 1), A.e_gen(1, l)));
    }
}

TEST_CASE("isotropic level-one reorder") {
    auto A = make_iso();
    RationalFunction tau1 = A.tau().get(A.datum(), 0, 1);
    AlgebraElement lhs = A.multiply(A.e_gen(0, 1), A.f_gen(0, 1));
    AlgebraElement rhs = A.multiply(A.f_gen(0, 1), A.e_gen(0, 1)) +
                         tau1 * (A.k_gen(0, 1) - A.k_gen(0, -1));
    CHECK(lhs == rhs);
}

TEST_CASE("associativity of multiply") {
    auto A = make_mixed();
    const auto& D = A.datum();
    std::vector<AlgebraElement> gens;
    for (int i = 0; i < 2; ++i) {
        int lmax = D.is_real(i) ? 1 : 3;
        for (int l = 1; l <= lmax; ++l) {
            gens.push_back(A.f_gen(i, l));
            gens.push_back(A.e_gen(i, l));
        }
    }
    auto h = [&](const AlgebraElement& g) {
        long long best = 0;
        for (const auto& [t, c] : g.terms) best = std::max(best, t.f.height() + t.e.height());
        return best;
    };
    for (const auto& x : gens)
        for (const auto& y : gens)
            for (const auto& z : gens) {
                if (h(x) + h(y) + h(z) > 3) continue;
                CHECK(A.multiply(A.multiply(x, y), z) == A.multiply(x, A.multiply(y, z)));
            }
    // torus factors associate with everything
    AlgebraElement k = A.k_gen(1, 2);
    AlgebraElement e = A.e_gen(0, 1), f = A.f_gen(1, 2);
    CHECK(A.multiply(A.multiply(e, k), f) == A.multiply(e, A.multiply(k, f)));
}

TEST_CASE("isotropic associativity example") {
    auto A = make_iso();
    AlgebraElement e1 = A.e_gen(0, 1), f1 = A.f_gen(0, 1);
    CHECK(A.multiply(A.multiply(e1, f1), f1) == A.multiply(e1, A.multiply(f1, f1)));
}

TEST_CASE("normal form independent of reduction schedule") {
    auto A = make_mixed();
    const auto& D = A.datum();
    std::vector<Gen> letters;
    for (int i = 0; i < 2; ++i) {
        int lmax = D.is_real(i) ? 1 : 3;
        for (int l = 1; l <= lmax; ++l) {
            letters.push_back(Gen::f(i, l));
            letters.push_back(Gen::e(i, l));
        }
    }
    auto lh = [](const Gen& g) { return (long long)g.level; };
    for (const auto& a : letters)
        for (const auto& b : letters)
            for (const auto& c : letters) {
                if (lh(a) + lh(b) + lh(c) > 3) continue;
                GenWord w{a, b, c};
                CHECK(A.normalize(w, RationalFunction::one(), Schedule::LeftFirst) ==
                      A.normalize(w, RationalFunction::one(), Schedule::RightFirst));
            }
}

TEST_CASE("comultiplication on generators") {
    auto A = make_mixed();
    const auto& D = A.datum();
    int n = 2;
    Triple id{{}, TorusElement::zero(n), {}};
    for (int i = 0; i < 2; ++i) {
        // Delta(f_{i1}) = f_{i1} (x) 1 + K_i (x) f_{i1}
        TensorElement df = A.comultiply(A.f_gen(i, 1));
        REQUIRE(df.size() == 2);
        CHECK(df.at({Triple{letter(D, i, 1), TorusElement::zero(n), {}}, id}) ==
              RationalFunction::one());
        CHECK(df.at({Triple{{}, k_power(D, i, 1), {}},
                     Triple{letter(D, i, 1), TorusElement::zero(n), {}}}) ==
              RationalFunction::one());
        // Delta(e_{i1}) = e_{i1} (x) K_i^{-1} + 1 (x) e_{i1}
        TensorElement de = A.comultiply(A.e_gen(i, 1));
        REQUIRE(de.size() == 2);
        CHECK(de.at({Triple{{}, TorusElement::zero(n), letter(D, i, 1)},
                     Triple{{}, k_power(D, i, -1), {}}}) == RationalFunction::one());
        CHECK(de.at({id, Triple{{}, TorusElement::zero(n), letter(D, i, 1)}}) ==
              RationalFunction::one());
    }
    // Delta(q^h) = q^h (x) q^h
    TorusElement h = TorusElement::zero(n);
    h.h = {1, -2};
    h.d = {0, 1};
    TensorElement dt = A.comultiply(A.torus_gen(h));
    REQUIRE(dt.size() == 1);
    CHECK(dt.at({Triple{{}, h, {}}, Triple{{}, h, {}}}) == RationalFunction::one());
}

TEST_CASE("comultiplication is an algebra map") {
    auto A = make_mixed(4);
    std::vector<AlgebraElement> pool = {A.f_gen(0, 1), A.f_gen(1, 1), A.f_gen(1, 2),
                                        A.e_gen(0, 1), A.e_gen(1, 1), A.k_gen(0, 1)};
    for (const auto& x : pool)
        for (const auto& y : pool) {
            TensorElement lhs = A.comultiply(A.multiply(x, y));
            TensorElement rhs = A.tensor_mul(A.comultiply(x), A.comultiply(y));
            CHECK(lhs == rhs);
        }
}

TEST_CASE("omega involution") {
    auto A = make_mixed(4);
    // omega(e_{i2}) = f_{i2}
    CHECK(A.omega(A.e_gen(1, 2)) == A.f_gen(1, 2));
    CHECK(A.omega(A.f_gen(1, 2)) == A.e_gen(1, 2));
    CHECK(A.omega(A.k_gen(0, 1)) == A.k_gen(0, -1));
    // algebra homomorphism and involution on products
    std::vector<AlgebraElement> pool = {A.f_gen(0, 1), A.e_gen(1, 2), A.k_gen(1, 1),
                                        A.multiply(A.e_gen(0, 1), A.f_gen(0, 1))};
    for (const auto& x : pool) {
        CHECK(A.omega(A.omega(x)) == x);
        for (const auto& y : pool)
            CHECK(A.omega(A.multiply(x, y)) == A.multiply(A.omega(x), A.omega(y)));
    }
    // omega carries the degree -beta basis bijectively onto the +beta basis
    for (const RootVec& beta : {RootVec{1, 1}, RootVec{0, 2}, RootVec{2, 1}}) {
        const auto& db = A.degree_basis(beta);
        std::vector<std::vector<RationalFunction>> mat;
        for (const auto& m : db.basis) {
            AlgebraElement fm;
            fm.add(Triple{m, TorusElement::zero(2), {}}, RationalFunction::one());
            AlgebraElement im = A.omega(fm);
            std::vector<RationalFunction> row(db.basis.size());
            for (const auto& [t, c] : im.terms) {
                REQUIRE(t.f.empty());
                REQUIRE(t.t.is_zero());
                auto pos = std::find(db.basis.begin(), db.basis.end(), t.e);
                REQUIRE(pos != db.basis.end());
                row[(size_t)(pos - db.basis.begin())] = c;
            }
            mat.push_back(std::move(row));
        }
        CHECK(matrix_rank(mat) == db.basis.size());
    }
}

TEST_CASE("phi anti-involution") {
    auto A = make_mixed(4);
    CHECK(A.phi(A.e_gen(1, 2)) == A.f_gen(1, 2));
    CHECK(A.phi(A.k_gen(0, 1)) == A.k_gen(0, 1)); // torus fixed
    std::vector<AlgebraElement> pool = {A.f_gen(0, 1), A.f_gen(1, 2), A.e_gen(0, 1),
                                        A.k_gen(1, -1),
                                        A.multiply(A.e_gen(1, 1), A.f_gen(1, 1))};
    for (const auto& x : pool) {
        CHECK(A.phi(A.phi(x)) == x);
        for (const auto& y : pool)
            CHECK(A.phi(A.multiply(x, y)) == A.multiply(A.phi(y), A.phi(x)));
    }
}

TEST_CASE("relation residuals vanish") {
    auto A = make_mixed();
    // Serre residual for the real node against (2, l)
    for (int l = 1; l <= 1; ++l) {
        CHECK(A.serre_residual(0, 1, l, false).is_zero());
        CHECK(A.serre_residual(0, 1, l, true).is_zero());
    }
    // commutation residuals on the isotropic node
    auto iso = make_iso();
    CHECK(iso.commute_residual(0, 1, 0, 2, false).is_zero());
    CHECK(iso.commute_residual(0, 1, 0, 3, true).is_zero());
    // string residuals
    for (auto* A2 : {&iso}) {
        for (int k = 1; k <= 3; ++k)
            for (int l = 1; l <= 3; ++l) CHECK(A2->string_residual(0, k, l).is_zero());
    }
    auto noniso = make_noniso();
    for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 3; ++l) CHECK(noniso.string_residual(0, k, l).is_zero());
    auto real = make_real();
    CHECK(real.string_residual(0, 1, 1).is_zero());
}

TEST_CASE("delta kills the string combinations") {
    auto iso = make_iso(3);
    auto noniso = make_noniso(3);
    for (auto* A : {&iso, &noniso})
        for (int k = 1; k <= 2; ++k)
            for (int l = 1; l <= 2; ++l) CHECK(A->string_delta_residual(0, k, l).empty());
}

TEST_CASE("dimension factorization at the top torus character") {
    auto A = make_mixed();
    const auto& D = A.datum();
    for (const auto& [beta, gamma] :
         std::vector<std::pair<RootVec, RootVec>>{{{1, 0}, {1, 0}}, {{0, 2}, {1, 0}},
                                                  {{1, 1}, {0, 1}}}) {
        auto fwords = monomials_of_degree(D, beta);
        auto ewords = monomials_of_degree(D, gamma);
        const auto& dbf = A.degree_basis(beta);
        const auto& dbe = A.degree_basis(gamma);
        std::map<std::pair<FreeMonomial, FreeMonomial>, size_t> col;
        for (const auto& bf : dbf.basis)
            for (const auto& be : dbe.basis) col.emplace(std::make_pair(bf, be), col.size());
        std::vector<std::vector<RationalFunction>> rows;
        for (const auto& fw : fwords)
            for (const auto& ew : ewords) {
                // all interleavings of the two words
                size_t nf = fw.w.size(), ne = ew.w.size();
                std::vector<bool> pick(nf + ne, false);
                for (size_t mask = 0; mask < (1u << (nf + ne)); ++mask) {
                    size_t cnt = 0;
                    for (size_t b = 0; b < nf + ne; ++b)
                        if (mask & (1u << b)) ++cnt;
                    if (cnt != nf) continue;
                    GenWord w;
                    size_t pf = 0, pe = 0;
                    for (size_t b = 0; b < nf + ne; ++b) {
                        if (mask & (1u << b))
                            w.push_back(Gen::f(fw.w[pf].node, fw.w[pf].level)), ++pf;
                        else
                            w.push_back(Gen::e(ew.w[pe].node, ew.w[pe].level)), ++pe;
                    }
                    AlgebraElement nfm = A.normalize(w, RationalFunction::one());
                    std::vector<RationalFunction> row(col.size());
                    for (const auto& [t, c] : nfm.terms) {
                        if (!t.t.is_zero()) continue;
                        if (t.f.degree(2) != beta || t.e.degree(2) != gamma) continue;
                        row[col.at({t.f, t.e})] = c;
                    }
                    rows.push_back(std::move(row));
                }
            }
        CHECK(matrix_rank(rows) == dbf.dim() * dbe.dim());
    }
}

TEST_CASE("height cutoff is enforced") {
    auto A = make_iso(3);
    CHECK_THROWS_AS(A.multiply(A.f_gen(0, 3), A.f_gen(0, 1)), input_error);
    CHECK_THROWS_AS(A.f_gen(0, 9), input_error);
}
