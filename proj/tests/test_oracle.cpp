#include <doctest.h>

#include "eichler/oracle.hpp"

using namespace eichler;

namespace {

const CMFieldDescriptor& pick(const std::vector<CMFieldDescriptor>& v, CMTag t) {
    for (const auto& K : v)
        if (K.tag == t) return K;
    throw std::runtime_error("no field");
}

} // namespace

TEST_CASE("brute_fundamental_unit") {
    CHECK(brute_fundamental_unit(2) == QuadInt(2, 1, 1));
    CHECK(brute_fundamental_unit(5) == QuadInt(5, 0, 1, QuadBasis::HalfPlusSqrt));
    CHECK(brute_fundamental_unit(19) == QuadInt(19, 170, 39));
    CHECK_THROWS_AS(brute_fundamental_unit(19, 10), std::runtime_error); // bound too small
}

TEST_CASE("dirichlet_class_number") {
    for (long p : {2L, 5L, 13L, 79L, 229L}) {
        auto F = build_field(p);
        CHECK(dirichlet_class_number(F) == F.h_F);
    }
    CHECK(build_field(229).h_F == 3);
}

TEST_CASE("residue_ring_mod2: unit counts and factor shapes") {
    {
        auto F = build_field(7);
        auto K1 = pick(enumerate_cm_fields(F), CMTag::K1);
        CHECK(residue_ring_mod2(K1).unit_count() == 4); // (2/7) = 1
    }
    {
        auto F = build_field(3);
        auto K1 = pick(enumerate_cm_fields(F), CMTag::K1);
        CHECK(residue_ring_mod2(K1).unit_count() == 12); // (2/3) = -1
    }
    {
        auto F = build_field(13);
        auto K3 = pick(enumerate_cm_fields(F), CMTag::K3);
        ResidueRing R = residue_ring_mod2(K3);
        auto factors = local_factors(R);
        REQUIRE(factors.size() == 2); // F_4 x F_4
        for (const auto& f : factors) {
            CHECK(f.size == 4);
            CHECK(!f.has_nilpotents());
            CHECK(f.residue_size == 4);
        }
        CHECK(R.unit_count() == 9);
    }
}

TEST_CASE("factor_two_directly") {
    {
        auto F = build_field(13);
        auto fields = enumerate_cm_fields(F);
        auto f1 = factor_two_directly(F, pick(fields, CMTag::K1));
        REQUIRE(f1.size() == 1); // ramified: nilpotents over the inert dyadic prime
        CHECK(f1[0].has_nilpotents());
        CHECK(f1[0].residue_size == 4);
        auto f3 = factor_two_directly(F, pick(fields, CMTag::K3));
        CHECK(f3.size() == 2); // two etale factors: the dyadic prime splits
    }
    {
        auto F = build_field(17); // 2 splits in F
        auto K3 = pick(enumerate_cm_fields(F), CMTag::K3);
        auto fs = factor_two_directly(F, K3);
        REQUIRE(fs.size() == 2);
        std::set<long> roots;
        for (const auto& f : fs) {
            CHECK(f.size == 4);
            CHECK(f.residue_size == 4); // residue degree doubles: inert
            roots.insert(f.over_root);
        }
        CHECK(roots == std::set<long>{0, 1});
    }
}

TEST_CASE("order_h_via_unit_indices: pinned cases") {
    {
        auto F = build_field(7);
        auto fields = enumerate_cm_fields(F);
        auto inv = enumerate_suborders_OF(F, fields);
        for (const auto& B : inv) {
            if (B.label != OrderLabel::B14) continue;
            CHECK(order_h_via_unit_indices(F, B) == (2 - kronecker(2L, 7L)) * pick(fields, CMTag::K1).h_k);
        }
    }
    {
        auto F = build_field(13);
        auto fields = enumerate_cm_fields(F);
        auto a = enumerate_proper_A_orders(F, fields);
        for (const auto& B : a)
            if (B.label == OrderLabel::B34)
                CHECK(order_h_via_unit_indices(F, B) == 3 * pick(fields, CMTag::K3).h_k / varpi(F));
    }
    {
        auto F = build_field(3);
        auto fields = enumerate_cm_fields(F);
        auto inv = enumerate_suborders_OF(F, fields);
        for (const auto& B : inv)
            if (B.label == OrderLabel::B13) CHECK(order_h_via_unit_indices(F, B) == 1);
    }
}

TEST_CASE("residue ring of a non-dyadic modulus: O_K/sqrt(-3)O_K at p = 3") {
    auto F = build_field(3);
    auto K1 = pick(enumerate_cm_fields(F), CMTag::K1);
    // sqrt(-3) = sqrt(3) * sqrt(-1)
    CMElem alpha{QuadRat(3, 0, 0), QuadRat(3, 0, 1)};
    ResidueRing R = residue_ring(K1, alpha);
    CHECK(R.n == 9);
    CHECK(R.unit_count() == 8); // the field F_9
    CHECK(R.nilradical().size() == 1);
}
