#include <doctest.h>

#include "eichler/cmfield.hpp"
#include "eichler/oracle.hpp"

using namespace eichler;

namespace {

std::vector<std::pair<CMTag, int>> table_rows(long p) {
    auto F = build_field(p);
    std::vector<std::pair<CMTag, int>> rows;
    for (const auto& K : enumerate_cm_fields(F)) rows.emplace_back(K.tag, K.w_k);
    return rows;
}

const CMFieldDescriptor& pick(const std::vector<CMFieldDescriptor>& v, CMTag t) {
    for (const auto& K : v)
        if (K.tag == t) return K;
    throw std::runtime_error("field not in list");
}

} // namespace

TEST_CASE("enumerate_cm_fields reproduces the (K, w_K) table") {
    using R = std::vector<std::pair<CMTag, int>>;
    CHECK(table_rows(2) == R{{CMTag::K1, 4}, {CMTag::K3, 3}});
    CHECK(table_rows(3) == R{{CMTag::K1, 12}, {CMTag::K2, 2}});
    CHECK(table_rows(5) == R{{CMTag::K1, 2}, {CMTag::K3, 3}, {CMTag::Zeta10, 5}});
    CHECK(table_rows(13) == R{{CMTag::K1, 2}, {CMTag::K3, 3}});
    CHECK(table_rows(7) == R{{CMTag::K1, 4}, {CMTag::K2, 2}, {CMTag::K3, 3}});
    CHECK(table_rows(11) == R{{CMTag::K1, 4}, {CMTag::K2, 2}, {CMTag::K3, 3}});
}

TEST_CASE("w_K = |mu_K| Q_{K/F} / 2 and delta is totally negative") {
    for (long p = 2; p < 100; ++p) {
        if (!is_prime(p)) continue;
        auto F = build_field(p);
        for (const auto& K : enumerate_cm_fields(F)) {
            CHECK(2 * K.w_k == K.mu_order * K.q_kf);
            CHECK(K.delta.to_rat().totally_negative());
        }
    }
}

TEST_CASE("hasse_unit_index") {
    auto F7 = build_field(7);
    auto K7 = enumerate_cm_fields(F7);
    CHECK(hasse_unit_index(pick(K7, CMTag::K1)) == 2);
    CHECK(hasse_unit_index(pick(K7, CMTag::K3)) == 1);
    auto F13 = build_field(13);
    auto K13 = enumerate_cm_fields(F13);
    CHECK(hasse_unit_index(pick(K13, CMTag::K1)) == 1);
}

TEST_CASE("class_number_cm: pinned small class numbers") {
    auto F2 = build_field(2);
    auto K2 = enumerate_cm_fields(F2);
    CHECK(pick(K2, CMTag::K3).h_k == 1); // Q(sqrt2, sqrt-3)
    CHECK(pick(K2, CMTag::K1).h_k == 1); // Q(zeta_8)

    auto F3 = build_field(3);
    auto K3 = enumerate_cm_fields(F3);
    CHECK(pick(K3, CMTag::K2).h_k == 2); // Q(sqrt3, sqrt-2)
    CHECK(pick(K3, CMTag::K1).h_k == 1); // Q(zeta_12)

    auto F5 = build_field(5);
    auto K5 = enumerate_cm_fields(F5);
    CHECK(pick(K5, CMTag::K1).h_k == 1);
    CHECK(pick(K5, CMTag::K3).h_k == 1);
    CHECK(pick(K5, CMTag::Zeta10).h_k == 1); // Q(zeta_10)

    auto F13 = build_field(13);
    CHECK(class_number_imag(-52) == 2);
    CHECK(pick(enumerate_cm_fields(F13), CMTag::K1).h_k == 1); // 1*2/2
}

TEST_CASE("Herglotz value is symmetric in the two imaginary subfields") {
    for (long p = 2; p < 100; ++p) {
        if (!is_prime(p)) continue;
        auto F = build_field(p);
        for (const auto& K : enumerate_cm_fields(F)) {
            if (K.tag == CMTag::Zeta10 || (p == 2 && K.tag == CMTag::K1)) continue;
            auto [dE, dEp] = imag_subfield_discs(K);
            long a = K.q_kf * F.h_F * class_number_imag(dE) * class_number_imag(dEp);
            long b = K.q_kf * F.h_F * class_number_imag(dEp) * class_number_imag(dE);
            CHECK(a == b);
            CHECK(a / 2 == K.h_k);
        }
    }
}

TEST_CASE("maximal_order_basis: pinned bases") {
    auto F13 = build_field(13);
    auto K13 = enumerate_cm_fields(F13);
    {
        // {1, (1+sqrt13)/2, i, (i + sqrt(-13))/2}
        const auto& b = pick(K13, CMTag::K1).ok_basis;
        QuadRat w(13, Rational(1, 2), Rational(1, 2));
        CHECK(cm_eq(b[0], cm_one(13)));
        CHECK(b[1].x == w);
        CHECK(b[1].y.is_zero());
        CHECK(b[2].x.is_zero());
        CHECK(b[2].y == QuadRat(13, 1, 0));
        CHECK(b[3].x.is_zero());
        CHECK(b[3].y == w);
    }
    {
        // {1, w, zeta6, w zeta6} with zeta6 = (1+sqrt(-3))/2
        const auto& b = pick(K13, CMTag::K3).ok_basis;
        QuadRat w(13, Rational(1, 2), Rational(1, 2));
        CHECK(b[1].x == w);
        CHECK(b[2].x == QuadRat(13, Rational(1, 2), 0));
        CHECK(b[2].y == QuadRat(13, Rational(1, 2), 0));
        CHECK(b[3].x == QuadRat(13, Rational(1, 4), Rational(1, 4)));
        CHECK(b[3].y == QuadRat(13, Rational(1, 4), Rational(1, 4)));
    }
    {
        // p = 7: O_{K_2} = Z[sqrt7, sqrt(-eps)]
        auto F7 = build_field(7);
        auto K7 = enumerate_cm_fields(F7);
        const auto& b = pick(K7, CMTag::K2).ok_basis;
        CHECK(b[1].x == QuadRat(7, 0, 1));
        CHECK(b[2].y == QuadRat(7, 1, 0));
        CHECK(b[3].y == QuadRat(7, 0, 1));
    }
}

TEST_CASE("maximal order bases are closed with the right discriminant") {
    for (long p = 2; p < 100; ++p) {
        if (!is_prime(p)) continue;
        auto F = build_field(p);
        for (const auto& K : enumerate_cm_fields(F)) {
            auto stc = detail::structure_constants(K.delta_rat(), K.ok_basis);
            CHECK(stc.has_value());
            CHECK(detail::lattice_discriminant(K.delta_rat(), K.ok_basis) == Rational(K.d_k));
            CHECK(K.d_k == absolute_discriminant_target(p, K.tag));
        }
    }
}

TEST_CASE("units of O_{K_1}/2O_{K_1}: count and group shape") {
    for (long p = 3; p < 200; p += 2) {
        if (!is_prime(p)) continue;
        auto F = build_field(p);
        auto K1 = pick(enumerate_cm_fields(F), CMTag::K1);
        ResidueRing R = residue_ring_mod2(K1);
        CHECK(R.n == 16);
        long units = R.unit_count();
        CHECK(units == 4 * (2 - kronecker(2L, p)));
        // (Z/2)^2 when 2 is a square mod p, else Z/3 + (Z/2)^2
        long exponent = 1;
        for (int i = 0; i < R.n; ++i) {
            if (!R.is_unit(i)) continue;
            long ord = 1;
            int x = i;
            while (x != R.one) { x = R.mul[x][i]; ++ord; }
            exponent = std::lcm(exponent, ord);
        }
        CHECK(exponent == (kronecker(2L, p) == 1 ? 2 : 6));
    }
}

TEST_CASE("delta for Q(zeta_10) squares correctly") {
    auto F5 = build_field(5);
    auto Z10 = pick(enumerate_cm_fields(F5), CMTag::Zeta10);
    // delta = (-5 - sqrt5)/2 and zeta5 = ((w-1) + sqrt(delta))/2 has order 5
    CHECK(Z10.delta.to_rat() == QuadRat(5, Rational(-5, 2), Rational(-1, 2)));
    const auto& z = Z10.ok_basis[1];
    CMElem acc = z;
    for (int i = 0; i < 4; ++i) acc = cm_mul(Z10.delta_rat(), acc, z);
    CHECK(cm_eq(acc, cm_one(5)));
}
