#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qbb/exprparse.hpp"

using namespace qbb;

namespace {

Algebra make_mixed(int N = 3) {
    CartanDatum D{{"1", "2"}, {{2, -1}, {-1, 0}}, {1, 1}};
    TauTable t;
    RationalFunction base =
        RationalFunction::one() / (RationalFunction::one() - RationalFunction::q_power(2));
    for (int l = 1; l <= N; ++l) t.set(1, l, base.pow(l));
    return Algebra(D, t, N);
}

} // namespace

TEST_CASE("scalar expressions") {
    RationalFunction q = RationalFunction::q_power(1);
    CHECK(parse_rational_function("1") == RationalFunction::one());
    CHECK(parse_rational_function("q") == q);
    CHECK(parse_rational_function("q^2") == q * q);
    CHECK(parse_rational_function("q^-2") == RationalFunction::q_power(-2));
    CHECK(parse_rational_function("1/(1-q^2)") ==
          RationalFunction::one() / (RationalFunction::one() - q * q));
    CHECK(parse_rational_function("1/(1-q^2)^3") ==
          (RationalFunction::one() / (RationalFunction::one() - q * q)).pow(3));
    CHECK(parse_rational_function("(q - q^-1) * (q + q^-1)") ==
          (q - RationalFunction::q_power(-1)) * (q + RationalFunction::q_power(-1)));
    CHECK(parse_rational_function("-3 + 2") == RationalFunction(-1));
    CHECK(parse_rational_function("2 q") == RationalFunction(2) * q);
    CHECK_THROWS_AS(parse_rational_function("e[1,1]"), input_error);
    CHECK_THROWS_AS(parse_rational_function("1 +"), input_error);
    CHECK_THROWS_AS(parse_rational_function("1/0"), input_error);
    CHECK_THROWS_AS(parse_rational_function("(1"), input_error);
}

TEST_CASE("generator expressions") {
    Algebra A = make_mixed();
    ExprParser p1("f[1,1]", A);
    CHECK(p1.parse_element() == A.f_gen(0, 1));
    ExprParser p2("e[2,2]", A);
    CHECK(p2.parse_element() == A.e_gen(1, 2));
    ExprParser p3("K[2]", A);
    CHECK(p3.parse_element() == A.k_gen(1, 1));
    ExprParser p4("K[1]^-2", A);
    CHECK(p4.parse_element() == A.k_gen(0, -2));

    // juxtaposition is multiplication in U
    ExprParser p5("e[1,1] f[1,1]", A);
    CHECK(p5.parse_element() == A.multiply(A.e_gen(0, 1), A.f_gen(0, 1)));

    // scalars mix in
    ExprParser p6("(q - q^-1) f[2,1] e[1,1]", A);
    RationalFunction c = RationalFunction::q_power(1) - RationalFunction::q_power(-1);
    CHECK(p6.parse_element() == c * A.multiply(A.f_gen(1, 1), A.e_gen(0, 1)));

    // torus exponent vectors: q[h-part;d-part]
    TorusElement t = TorusElement::zero(2);
    t.h = {1, -2};
    ExprParser p7("q[1,-2]", A);
    CHECK(p7.parse_element() == A.torus_gen(t));
    t.d = {0, 3};
    ExprParser p8("q[1,-2;0,3]", A);
    CHECK(p8.parse_element() == A.torus_gen(t));

    // sums and powers
    ExprParser p9("f[1,1]^2 - 2 f[1,1] + 1", A);
    AlgebraElement expect = A.multiply(A.f_gen(0, 1), A.f_gen(0, 1)) -
                            RationalFunction(2) * A.f_gen(0, 1) + A.one();
    CHECK(p9.parse_element() == expect);
}

TEST_CASE("node resolution") {
    Algebra A = make_mixed();
    // names and 1-based indices both resolve
    ExprParser p1("f[2,1]", A);
    ExprParser p2("f[ 2 ,1]", A);
    CHECK(p1.parse_element() == A.f_gen(1, 1));
    CHECK(p2.parse_element() == A.f_gen(1, 1));
    ExprParser bad("f[3,1]", A);
    CHECK_THROWS_AS(bad.parse_element(), input_error);
}

TEST_CASE("division rules") {
    Algebra A = make_mixed();
    ExprParser p1("f[1,1] / 2", A);
    CHECK(p1.parse_element() ==
          (RationalFunction(1) / RationalFunction(2)) * A.f_gen(0, 1));
    ExprParser p2("f[1,1] / K[1]", A);
    CHECK(p2.parse_element() == A.multiply(A.f_gen(0, 1), A.k_gen(0, -1)));
    ExprParser p3("1 / f[1,1]", A);
    CHECK_THROWS_AS(p3.parse_element(), input_error);
    ExprParser p4("f[1,1]^-1", A);
    CHECK_THROWS_AS(p4.parse_element(), input_error);
}

TEST_CASE("real node level restriction surfaces as input error") {
    Algebra A = make_mixed();
    ExprParser p("f[1,2]", A);
    CHECK_THROWS_AS(p.parse_element(), input_error);
}
