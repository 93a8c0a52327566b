#include <doctest.h>

#include <map>

#include "eichler/oracle.hpp"
#include "eichler/orders.hpp"
#include "eichler/verify.hpp"

using namespace eichler;

namespace {

struct Inventories {
    RealQuadField F;
    std::vector<CMFieldDescriptor> fields;
    std::vector<OrderInvariant> of;
    std::vector<OrderInvariant> a;
};

Inventories build(long p) {
    Inventories I;
    I.F = build_field(p);
    I.fields = enumerate_cm_fields(I.F);
    I.of = enumerate_suborders_OF(I.F, I.fields);
    if (p % 4 == 1) I.a = enumerate_proper_A_orders(I.F, I.fields);
    return I;
}

const OrderInvariant& pick(const std::vector<OrderInvariant>& v, OrderLabel l, CMTag t) {
    for (const auto& B : v)
        if (B.label == l && B.field.tag == t) return B;
    throw std::runtime_error("order not found");
}

} // namespace

TEST_CASE("O_F-inventory: p = 13 has only the two maximal orders") {
    auto I = build(13);
    REQUIRE(I.of.size() == 2);
    CHECK(I.of[0].label == OrderLabel::MaximalOrder);
    CHECK(I.of[1].label == OrderLabel::MaximalOrder);
    CHECK(I.of[0].w_b == 2);
    CHECK(I.of[1].w_b == 3);
}

TEST_CASE("O_F-inventory: p = 7 matches the five-order table") {
    auto I = build(7);
    REQUIRE(I.of.size() == 5);
    std::vector<int> ws;
    for (const auto& B : I.of) ws.push_back(B.w_b);
    CHECK(ws == std::vector<int>{4, 4, 2, 2, 3});
    long hK1 = pick(I.of, OrderLabel::MaximalOrder, CMTag::K1).h_b;
    // (2 - (2/7)) = 1
    CHECK(pick(I.of, OrderLabel::B12, CMTag::K1).h_b == hK1);
    CHECK(pick(I.of, OrderLabel::B14, CMTag::K1).h_b == hK1);
    CHECK(pick(I.of, OrderLabel::B12, CMTag::K1).index_in_OK == 2);
    CHECK(pick(I.of, OrderLabel::B14, CMTag::K1).index_in_OK == 4);
}

TEST_CASE("O_F-inventory: p = 3 has the extra index-3 order") {
    auto I = build(3);
    REQUIRE(I.of.size() == 5);
    CHECK(pick(I.of, OrderLabel::MaximalOrder, CMTag::K1).w_b == 12);
    CHECK(pick(I.of, OrderLabel::B12, CMTag::K1).h_b == 1); // h(B) = h(O_K) at p = 3
    CHECK(pick(I.of, OrderLabel::B14, CMTag::K1).h_b == 1);
    const auto& B13 = pick(I.of, OrderLabel::B13, CMTag::K1);
    CHECK(B13.w_b == 3);
    CHECK(B13.h_b == 1);
    CHECK(B13.index_in_OK == 3);
    REQUIRE(B13.conductor_support.size() == 1);
    CHECK(B13.conductor_support[0].ell == 3);
    CHECK(pick(I.of, OrderLabel::MaximalOrder, CMTag::K2).h_b == 2);
}

TEST_CASE("O_F-inventory: p = 2") {
    auto I = build(2);
    REQUIRE(I.of.size() == 3);
    const auto& B = pick(I.of, OrderLabel::B2sqrt2, CMTag::K1);
    CHECK(B.w_b == 2);
    CHECK(B.h_b == 1);
    CHECK(B.index_in_OK == 2);
    CHECK(pick(I.of, OrderLabel::MaximalOrder, CMTag::K1).w_b == 4);
}

TEST_CASE("proper A-orders at p = 13, 17, 5") {
    {
        auto I = build(13); // varpi = 3, (2/13) = -1
        REQUIRE(I.a.size() == 5);
        long hK1 = 1, hK3 = 2;
        CHECK(pick(I.a, OrderLabel::B12, CMTag::K1).h_b == hK1);
        CHECK(pick(I.a, OrderLabel::B14, CMTag::K1).h_b == 2 * hK1);
        CHECK(pick(I.a, OrderLabel::B34, CMTag::K3).h_b == hK3);
        CHECK(pick(I.a, OrderLabel::B32, CMTag::K3).h_b == hK3);
        CHECK(pick(I.a, OrderLabel::B32conj, CMTag::K3).h_b == hK3);
        for (const auto& B : I.a) CHECK(B.w_b == (B.field.tag == CMTag::K1 ? 2 : 3));
    }
    {
        auto I = build(17); // varpi = 1, (2/17) = +1
        REQUIRE(I.a.size() == 3);
        long hK1 = 2, hK3 = 1;
        CHECK(pick(I.a, OrderLabel::B12, CMTag::K1).h_b == hK1);
        CHECK(pick(I.a, OrderLabel::B14, CMTag::K1).h_b == 2 * hK1);
        CHECK(pick(I.a, OrderLabel::B34, CMTag::K3).h_b == 3 * hK3);
        // two dyadic primes; support exported as both, flagged provisional
        const auto& B34 = pick(I.a, OrderLabel::B34, CMTag::K3);
        CHECK(B34.conductor_support.size() == 2);
        CHECK(B34.support_provisional);
    }
    {
        auto I = build(5); // varpi = 3
        REQUIRE(I.a.size() == 5);
        CHECK(pick(I.a, OrderLabel::B32, CMTag::K3).w_b == 3);
        CHECK(pick(I.a, OrderLabel::B32conj, CMTag::K3).w_b == 3);
    }
    auto I7 = build(7);
    CHECK_THROWS_AS(enumerate_proper_A_orders(I7.F, I7.fields), std::invalid_argument);
}

TEST_CASE("B_{3,2} contains 2 O_K and has the twisted residue image") {
    for (long p : {5L, 13L, 29L, 53L, 61L}) {
        auto I = build(p);
        if (I.F.varpi_ != 3) continue;
        const auto& B32 = pick(I.a, OrderLabel::B32, CMTag::K3);
        const auto& K3 = B32.field;
        // generators 2, 2w, 2zeta6, 2w zeta6 of 2 O_K land in B_{3,2}
        for (const auto& e : K3.ok_basis) {
            CMElem two_e = cm_scale(Rational(2), e);
            CHECK(detail::cm_in_lattice(B32.basis, two_e));
        }
        CHECK(B32.index_in_OK == 2);
        // omega not in B (proper A-order)
        CHECK(!contains_omega(I.F, B32.basis));
    }
    // residue image shapes F_4 x F_2 / F_2 x F_4 checked by the composite verifier
    verify_orders(build(13).F, build(13).fields, build(13).of);
}

TEST_CASE("closed-form h(B) equals the finite-ring unit-index recomputation") {
    for (long p = 2; p < 200; ++p) {
        if (!is_prime(p)) continue;
        auto I = build(p);
        for (const auto& B : I.of) {
            if (B.label == OrderLabel::MaximalOrder) continue;
            CHECK(order_h_via_unit_indices(I.F, B) == B.h_b);
        }
        for (const auto& B : I.a) CHECK(order_h_via_unit_indices(I.F, B) == B.h_b);
    }
}

TEST_CASE("conductor support is visible in the lattice") {
    for (long p : {2L, 3L, 7L, 13L, 17L, 23L}) {
        auto I = build(p);
        for (const auto& inv : {I.of, I.a})
            for (const auto& B : inv)
                for (const auto& P : B.conductor_support)
                    CHECK(detail::multiple_of_OK_contained(B.field, B.basis, detail::int_elem(p, P.ell)));
    }
}

TEST_CASE("w(B) divides w_K") {
    for (long p = 2; p < 100; ++p) {
        if (!is_prime(p)) continue;
        auto I = build(p);
        for (const auto& B : I.of) CHECK(B.field.w_k % B.w_b == 0);
    }
}

TEST_CASE("every p = 3 mod 4 above 3 yields exactly the five-row table") {
    for (long p = 7; p < 200; p += 4) {
        if (!is_prime(p)) continue;
        auto I = build(p);
        REQUIRE(I.of.size() == 5);
        std::vector<OrderLabel> labels;
        std::vector<int> ws;
        for (const auto& B : I.of) {
            labels.push_back(B.label);
            ws.push_back(B.w_b);
        }
        CHECK(labels == std::vector<OrderLabel>{OrderLabel::MaximalOrder, OrderLabel::B12, OrderLabel::B14,
                                                OrderLabel::MaximalOrder, OrderLabel::MaximalOrder});
        CHECK(ws == std::vector<int>{4, 4, 2, 2, 3});
        long mult = 2 - kronecker(2L, p);
        long hK1 = pick(I.of, OrderLabel::MaximalOrder, CMTag::K1).h_b;
        CHECK(pick(I.of, OrderLabel::B12, CMTag::K1).h_b == mult * hK1);
        CHECK(pick(I.of, OrderLabel::B14, CMTag::K1).h_b == mult * hK1);
    }
}
