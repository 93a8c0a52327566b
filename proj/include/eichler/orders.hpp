#pragma once

// Inventories of quadratic orders B with w(B) > 1: the O_F-orders feeding
// the elliptic part of the class number formula, and the proper
// A = Z[sqrt p]-orders (p = 1 mod 4) exported as data.  Every order carries
// an explicit Z-basis; indices and lattice claims are verified at build
// time.

#include <string>
#include <vector>

#include "eichler/cmfield.hpp"

namespace eichler {

enum class OrderLabel { MaximalOrder, B12, B14, B13, B2sqrt2, B34, B32, B32conj };

inline const char* to_string(OrderLabel l) {
    switch (l) {
        case OrderLabel::MaximalOrder: return "O_K";
        case OrderLabel::B12: return "B_{1,2}";
        case OrderLabel::B14: return "B_{1,4}";
        case OrderLabel::B13: return "B_{1,3}";
        case OrderLabel::B2sqrt2: return "Z[sqrt2,i]";
        case OrderLabel::B34: return "B_{3,4}";
        case OrderLabel::B32: return "B_{3,2}";
        default: return "B_{3,2}'";
    }
}

enum class OrderBase { OF, A };

struct OrderInvariant {
    OrderLabel label = OrderLabel::MaximalOrder;
    CMFieldDescriptor field;
    OrderBase over = OrderBase::OF;
    long index_in_OK = 1;
    std::vector<PrimeIdealF> conductor_support;
    bool support_provisional = false; // p = 1 mod 8 A-orders: two dyadic primes
    int w_b = 0;
    long h_b = 0;
    std::array<CMElem, 4> basis;

    std::string name() const { return to_string(label); }
};

namespace detail {

inline long lattice_index_in_OK(const CMFieldDescriptor& K, const std::array<CMElem, 4>& basis) {
    Mat4 OK = basis_matrix(K.ok_basis);
    Mat4 coords;
    for (int i = 0; i < 4; ++i) {
        Vec4 c = solve_row(OK, cm_flatten(basis[i]));
        if (!all_integral(c))
            throw std::runtime_error("order basis not contained in O_K");
        coords[i] = c;
    }
    Rational d = det4(coords);
    Int idx = abs(d.to_integer());
    if (idx == 0) throw std::runtime_error("order basis degenerate");
    return idx.get_si();
}

// alpha * O_K contained in the order's lattice?
inline bool multiple_of_OK_contained(const CMFieldDescriptor& K, const std::array<CMElem, 4>& basis,
                                     const CMElem& alpha) {
    for (const auto& e : K.ok_basis)
        if (!cm_in_lattice(basis, cm_mul(K.delta_rat(), alpha, e))) return false;
    return true;
}

inline CMElem int_elem(long p, long n) { return {QuadRat(p, Rational(n), Rational(0)), QuadRat(p, 0, 0)}; }

} // namespace detail

// membership of omega = (1+sqrt p)/2 decides properness over A
inline bool contains_omega(const RealQuadField& F, const std::array<CMElem, 4>& basis) {
    CMElem w{F.omega(), QuadRat(F.p, 0, 0)};
    return detail::cm_in_lattice(basis, w);
}

namespace detail {

inline OrderInvariant make_order(const RealQuadField& F, const CMFieldDescriptor& K, OrderLabel label,
                                 OrderBase over, std::array<CMElem, 4> basis, long expect_index, int w_b,
                                 long h_b, std::vector<PrimeIdealF> support, bool provisional = false) {
    OrderInvariant B;
    B.label = label;
    B.field = K;
    B.over = over;
    B.basis = std::move(basis);
    B.index_in_OK = lattice_index_in_OK(K, B.basis);
    if (B.index_in_OK != expect_index)
        throw std::runtime_error(std::string("order ") + to_string(label) + ": index " +
                                 std::to_string(B.index_in_OK) + " != expected " + std::to_string(expect_index));
    for (const auto& bi : B.basis)
        for (const auto& bj : B.basis)
            if (!cm_in_lattice(B.basis, cm_mul(K.delta_rat(), bi, bj)))
                throw std::runtime_error(std::string("order ") + to_string(label) + ": not closed under multiplication");
    B.w_b = w_b;
    B.h_b = h_b;
    B.conductor_support = std::move(support);
    B.support_provisional = provisional;
    if (over == OrderBase::A && F.p % 4 == 1 && contains_omega(F, B.basis))
        throw std::runtime_error(std::string("order ") + to_string(label) + ": not a proper A-order");
    return B;
}

// common gadgets
inline std::array<CMElem, 4> b14_basis(const RealQuadField& F, const CMFieldDescriptor& K) {
    long p = F.p;
    CMElem one = cm_one(p);
    CMElem sqrtp{QuadRat(p, 0, 1), QuadRat(p, 0, 0)};
    CMElem gamma{QuadRat(p, 0, 0), QuadRat(p, 1, 0)};
    return {one, sqrtp, gamma, cm_mul(K.delta_rat(), sqrtp, gamma)};
}

inline std::array<CMElem, 4> b12_basis(const RealQuadField& F, const CMFieldDescriptor& K) {
    long p = F.p;
    // y_p = (1 + sqrt(-1))(1 + sqrt p)/2
    CMElem yp{QuadRat(p, Rational(1, 2), Rational(1, 2)), QuadRat(p, Rational(1, 2), Rational(1, 2))};
    auto b = b14_basis(F, K);
    return {b[0], b[1], b[2], yp};
}

} // namespace detail

// All O_F-orders B with w(B) > 1, one entry per isomorphism class:
// the maximal order of every table field, plus the dyadic chain
// B_{1,2}, B_{1,4} below O_{K_1} for p = 3 mod 4, Z[sqrt2, i] for p = 2,
// and B_{1,3} for p = 3.
inline std::vector<OrderInvariant> enumerate_suborders_OF(const RealQuadField& F,
                                                          const std::vector<CMFieldDescriptor>& fields) {
    long p = F.p;
    std::vector<OrderInvariant> out;
    auto dyadic = factor_rational_prime(F, 2);
    for (const auto& K : fields) {
        out.push_back(detail::make_order(F, K, OrderLabel::MaximalOrder, OrderBase::OF, K.ok_basis, 1,
                                         K.w_k, K.h_k, {}));
        if (K.tag == CMTag::K1 && p % 4 == 3) {
            long mult = 2 - kronecker(2L, p); // |(O_K/2O_K)^x| / |(B/2O_K)^x| carried into h
            long hB = (p == 3) ? K.h_k : mult * K.h_k;
            out.push_back(detail::make_order(F, K, OrderLabel::B12, OrderBase::OF,
                                             detail::b12_basis(F, K), 2, 4, hB, dyadic));
            out.push_back(detail::make_order(F, K, OrderLabel::B14, OrderBase::OF,
                                             detail::b14_basis(F, K), 4, 2, hB, dyadic));
            if (p == 3) {
                // B_{1,3} = Z[sqrt3, zeta6] inside K_1 = Q(zeta_12)
                CMElem one = cm_one(p);
                CMElem sqrtp{QuadRat(p, 0, 1), QuadRat(p, 0, 0)};
                CMElem zeta6{QuadRat(p, Rational(1, 2), 0), QuadRat(p, 0, Rational(1, 2))};
                std::array<CMElem, 4> basis = {one, sqrtp, zeta6, cm_mul(K.delta_rat(), sqrtp, zeta6)};
                out.push_back(detail::make_order(F, K, OrderLabel::B13, OrderBase::OF, basis, 3, 3, K.h_k,
                                                 factor_rational_prime(F, 3)));
            }
        }
        if (K.tag == CMTag::K1 && p == 2) {
            out.push_back(detail::make_order(F, K, OrderLabel::B2sqrt2, OrderBase::OF,
                                             detail::b14_basis(F, K), 2, 2, K.h_k, dyadic));
        }
    }
    return out;
}

// All proper A-orders B with w(B) > 1 for p = 1 mod 4 (A = Z[sqrt p]):
// B_{1,2}, B_{1,4} in K_1; B_{3,4} in K_3; and when the fundamental unit is
// not in A also B_{3,2} = A[eps zeta_6] and its conjugate.
inline std::vector<OrderInvariant> enumerate_proper_A_orders(const RealQuadField& F,
                                                             const std::vector<CMFieldDescriptor>& fields) {
    long p = F.p;
    if (p % 4 != 1) throw std::invalid_argument("enumerate_proper_A_orders: requires p = 1 mod 4");
    int w = F.varpi_;
    auto dyadic = factor_rational_prime(F, 2);
    bool provisional = p % 8 == 1; // two dyadic primes; support as computed, flagged
    std::vector<OrderInvariant> out;

    auto exact_div = [](long num, long den, const char* what) {
        if (num % den) throw NonIntegralError(std::string("enumerate_proper_A_orders: ") + what);
        return num / den;
    };

    for (const auto& K : fields) {
        if (K.tag == CMTag::K1) {
            long mult = 2 - kronecker(2L, p);
            long h12 = exact_div(mult * K.h_k, w, "h(B12) not divisible by varpi");
            long h14 = exact_div(2 * mult * K.h_k, w, "h(B14) not divisible by varpi");
            out.push_back(detail::make_order(F, K, OrderLabel::B12, OrderBase::A,
                                             detail::b12_basis(F, K), 2, 2, h12, dyadic, provisional));
            out.push_back(detail::make_order(F, K, OrderLabel::B14, OrderBase::A,
                                             detail::b14_basis(F, K), 4, 2, h14, dyadic, provisional));
        }
        if (K.tag == CMTag::K3) {
            CMElem one = cm_one(p);
            CMElem sqrtp{QuadRat(p, 0, 1), QuadRat(p, 0, 0)};
            CMElem zeta6{QuadRat(p, Rational(1, 2), 0), QuadRat(p, Rational(1, 2), 0)};
            std::array<CMElem, 4> b34 = {one, sqrtp, zeta6, cm_mul(K.delta_rat(), sqrtp, zeta6)};
            long h34 = exact_div(3 * K.h_k, w, "h(B34) not divisible by varpi");
            out.push_back(detail::make_order(F, K, OrderLabel::B34, OrderBase::A, b34, 4, 3, h34, dyadic,
                                             provisional));
            if (w == 3) {
                // B_{3,2} = A[eps zeta6]; as an A-module it is generated by
                // {1, eps zeta6, (eps zeta6)^2}, and it contains 2 O_K
                QuadRat eps = F.eps.to_rat();
                CMElem ez{eps * zeta6.x, eps * zeta6.y};
                CMElem ez2 = cm_mul(K.delta_rat(), ez, ez);
                std::vector<IntRow4> rows;
                for (const CMElem& g : {one, ez, ez2}) {
                    for (const QuadRat& m : {QuadRat(p, 1, 0), QuadRat(p, 0, 1)}) {
                        CMElem t{m * g.x, m * g.y};
                        Vec4 v = cm_flatten(t);
                        IntRow4 r;
                        for (int c = 0; c < 4; ++c) r[c] = (Rational(4) * v[c]).to_integer();
                        rows.push_back(r);
                    }
                }
                auto h = hnf_rows(rows);
                std::array<CMElem, 4> b32;
                for (int i = 0; i < 4; ++i) {
                    Vec4 vv;
                    for (int c = 0; c < 4; ++c) vv[c] = Rational(h[i][c], 4);
                    b32[i] = cm_unflatten(p, vv);
                }
                std::array<CMElem, 4> b32c;
                for (int i = 0; i < 4; ++i) b32c[i] = cm_conj_over_F(b32[i]);

                // 2 O_K subset B_{3,2} (checked on the basis 2, 2w, 2zeta6, 2w zeta6)
                if (!detail::multiple_of_OK_contained(K, b32, detail::int_elem(p, 2)))
                    throw std::runtime_error("B32 does not contain 2 O_K");
                out.push_back(detail::make_order(F, K, OrderLabel::B32, OrderBase::A, b32, 2, 3, K.h_k,
                                                 dyadic, provisional));
                out.push_back(detail::make_order(F, K, OrderLabel::B32conj, OrderBase::A, b32c, 2, 3,
                                                 K.h_k, dyadic, provisional));
            }
        }
    }
    return out;
}

} // namespace eichler
