#include <doctest.h>

#include "eichler/quaternion.hpp"
#include "eichler/verify.hpp"

using namespace eichler;

namespace {

struct Ctx {
    RealQuadField F;
    std::vector<CMFieldDescriptor> fields;
    std::vector<OrderInvariant> inv;
};

Ctx ctx(long p) {
    Ctx c;
    c.F = build_field(p);
    c.fields = enumerate_cm_fields(c.F);
    c.inv = enumerate_suborders_OF(c.F, c.fields);
    return c;
}

const CMFieldDescriptor& field(const Ctx& c, CMTag t) {
    for (const auto& K : c.fields)
        if (K.tag == t) return K;
    throw std::runtime_error("no field");
}

const OrderInvariant& order(const Ctx& c, OrderLabel l, CMTag t) {
    for (const auto& B : c.inv)
        if (B.label == l && B.field.tag == t) return B;
    throw std::runtime_error("no order");
}

} // namespace

TEST_CASE("artin_symbol at dyadic primes") {
    auto c13 = ctx(13);
    PrimeIdealF P2 = factor_rational_prime(c13.F, 2)[0]; // inert
    CHECK(artin_symbol(c13.F, field(c13, CMTag::K3), P2) == 1);  // F_4 x F_4
    CHECK(artin_symbol(c13.F, field(c13, CMTag::K1), P2) == 0);  // nilpotents over the inert prime

    auto c17 = ctx(17); // 2 splits
    for (const auto& P : factor_rational_prime(c17.F, 2)) {
        CHECK(artin_symbol(c17.F, field(c17, CMTag::K3), P) == -1);
        CHECK(artin_symbol(c17.F, field(c17, CMTag::K1), P) == 0);
    }

    auto c7 = ctx(7); // 2 ramified in F
    PrimeIdealF Q2 = factor_rational_prime(c7.F, 2)[0];
    // -7 = 1 mod 8, so F_{p2} = Q_2(i) and the dyadic prime splits in K_1
    CHECK(artin_symbol(c7.F, field(c7, CMTag::K1), Q2) == 1);
    CHECK(artin_symbol(c7.F, field(c7, CMTag::K2), Q2) == 0);  // Q_2(zeta_8), ramified
    CHECK(artin_symbol(c7.F, field(c7, CMTag::K3), Q2) == -1); // unramified inert

    auto c11 = ctx(11); // p = 3 mod 8: -p = 5 mod 8 gives the unramified quadratic
    PrimeIdealF S2 = factor_rational_prime(c11.F, 2)[0];
    CHECK(artin_symbol(c11.F, field(c11, CMTag::K1), S2) == -1);

    auto c5 = ctx(5);
    PrimeIdealF R2 = factor_rational_prime(c5.F, 2)[0];
    CHECK(artin_symbol(c5.F, field(c5, CMTag::Zeta10), R2) == -1); // 2 inert in Q(zeta_10)
}

TEST_CASE("artin_symbol at odd primes") {
    auto c13 = ctx(13);
    auto P3 = factor_rational_prime(c13.F, 3); // split
    // v_P(delta) odd (delta = -3) forces 0
    CHECK(artin_symbol(c13.F, field(c13, CMTag::K3), P3[0]) == 0);
    CHECK(artin_symbol(c13.F, field(c13, CMTag::K3), P3[1]) == 0);
    // K1 at the split primes above 3: (-1/F_3) = -1
    CHECK(artin_symbol(c13.F, field(c13, CMTag::K1), P3[0]) == -1);
    // inert prime above 5: norm 25, -1 is a square in F_25
    PrimeIdealF P5 = factor_rational_prime(c13.F, 5)[0];
    REQUIRE(P5.kind == SplitKind::Inert);
    CHECK(artin_symbol(c13.F, field(c13, CMTag::K1), P5) == 1);
    // ramified prime of F above 13: delta = -1 is a square mod 13
    PrimeIdealF P13 = factor_rational_prime(c13.F, 13)[0];
    CHECK(artin_symbol(c13.F, field(c13, CMTag::K1), P13) == 1);
}

TEST_CASE("eichler_symbol") {
    auto c7 = ctx(7);
    PrimeIdealF Q2 = factor_rational_prime(c7.F, 2)[0];
    const auto& B14 = order(c7, OrderLabel::B14, CMTag::K1);
    CHECK(eichler_symbol(c7.F, B14, Q2) == 1); // dyadic conductor
    PrimeIdealF Q3 = factor_rational_prime(c7.F, 3)[0];
    CHECK(eichler_symbol(c7.F, B14, Q3) == artin_symbol(c7.F, B14.field, Q3));
    const auto& OK = order(c7, OrderLabel::MaximalOrder, CMTag::K3);
    CHECK(eichler_symbol(c7.F, OK, Q2) == artin_symbol(c7.F, OK.field, Q2));

    auto c3 = ctx(3);
    PrimeIdealF T3 = factor_rational_prime(c3.F, 3)[0];
    CHECK(eichler_symbol(c3.F, order(c3, OrderLabel::B13, CMTag::K1), T3) == 1);

    // proper A-orders are rejected
    auto F13 = build_field(13);
    auto fields13 = enumerate_cm_fields(F13);
    auto a13 = enumerate_proper_A_orders(F13, fields13);
    CHECK_THROWS_AS(eichler_symbol(F13, a13[0], Q2), std::invalid_argument);
}

TEST_CASE("embedding_product") {
    auto c7 = ctx(7);
    const auto& K1 = field(c7, CMTag::K1);
    CHECK(embedding_product(c7.F, K1, {}, {}) == 1);
    // a split symbol inside D kills the product
    auto c13 = ctx(13);
    PrimeIdealF P5 = factor_rational_prime(c13.F, 5)[0];
    PrimeIdealF P2 = factor_rational_prime(c13.F, 2)[0];
    CHECK(embedding_product(c13.F, field(c13, CMTag::K1), {P5, P2}, {}) == 0);
    // B_{1,4} at N = {dyadic}: E = 2 E_{K1} = 2 (the eq for C = 2^1)
    PrimeIdealF Q2 = factor_rational_prime(c7.F, 2)[0];
    CHECK(embedding_product(c7.F, order(c7, OrderLabel::B14, CMTag::K1), {}, {Q2}) == 2);
    CHECK(embedding_product(c7.F, K1, {}, {}) * 2 == 2);
}

TEST_CASE("mass") {
    auto F5 = build_field(5);
    CHECK(mass(EichlerInput{F5, {}, {}}) == Rational(1, 60));
    auto F2 = build_field(2);
    CHECK(mass(EichlerInput{F2, {}, {}}) == Rational(1, 24));
    auto P2 = factor_rational_prime(F5, 2)[0], P3 = factor_rational_prime(F5, 3)[0];
    CHECK(mass(EichlerInput{F5, {P2, P3}, {}}) == Rational(2, 5));
}

TEST_CASE("elliptic_part") {
    auto c5 = ctx(5);
    CHECK(elliptic_part(EichlerInput{c5.F, {}, {}}, c5.inv) == Rational(59, 60));
    auto c13 = ctx(13);
    CHECK(elliptic_part(EichlerInput{c13.F, {}, {}}, c13.inv) == Rational(11, 12));
    // all embedding products vanish
    PrimeIdealF P2 = factor_rational_prime(c13.F, 2)[0];
    PrimeIdealF P5 = factor_rational_prime(c13.F, 5)[0];
    CHECK(elliptic_part(EichlerInput{c13.F, {P2, P5}, {}}, c13.inv) == Rational(0));
}

TEST_CASE("class_number_eichler: desk-scale values") {
    auto F5 = build_field(5);
    CHECK(class_number_eichler(EichlerInput{F5, {}, {}}).h_O == 1);
    auto F2 = build_field(2);
    CHECK(class_number_eichler(EichlerInput{F2, {}, {}}).h_O == 1);
    auto F13 = build_field(13);
    CHECK(class_number_eichler(EichlerInput{F13, {}, {}}).h_O == 1);
    auto P2 = factor_rational_prime(F5, 2)[0], P3 = factor_rational_prime(F5, 3)[0];
    auto rep = class_number_eichler(EichlerInput{F5, {P2, P3}, {}});
    CHECK(rep.h_O == 2);
    CHECK(rep.mass_value == Rational(2, 5));
    CHECK(rep.elliptic == Rational(8, 5));
}

TEST_CASE("input validation") {
    auto F5 = build_field(5);
    auto P2 = factor_rational_prime(F5, 2)[0], P3 = factor_rational_prime(F5, 3)[0];
    CHECK_THROWS_AS(validate(EichlerInput{F5, {P2}, {}}), std::invalid_argument);       // |D| odd
    CHECK_THROWS_AS(validate(EichlerInput{F5, {P2, P3}, {P3}}), std::invalid_argument); // overlap
    CHECK_THROWS_AS(validate(EichlerInput{F5, {P2, P2}, {}}), std::invalid_argument);   // square
}

TEST_CASE("sweep: integrality, closed forms, dyadic conductor splitting") {
    for (long p = 2; p < 60; ++p) {
        if (!is_prime(p)) continue;
        auto c = ctx(p);
        // class_number_eichler raises on non-integrality or closed-form mismatch
        verify_quaternion(c.F, c.fields, c.inv);
    }
}
