#pragma once

// Eichler class number machinery for totally definite quaternion algebras
// over Q(sqrt p): Artin and Eichler symbols, local embedding products, the
// mass, the elliptic part, and h(O) = Mass(O) + Ell(O) for Eichler orders
// of square-free level.

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "eichler/oracle.hpp"

namespace eichler {

struct EichlerInput {
    RealQuadField F;
    std::vector<PrimeIdealF> D; // discriminant ideal (square-free, |D| even)
    std::vector<PrimeIdealF> N; // level (square-free, coprime to D)
};

inline void validate(const EichlerInput& in) {
    auto dup = [](std::vector<PrimeIdealF> v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) != v.end();
    };
    if (dup(in.D) || dup(in.N))
        throw std::invalid_argument("EichlerInput: repeated prime (ideals must be square-free)");
    for (const auto& P : in.D)
        for (const auto& Q : in.N)
            if (P == Q) throw std::invalid_argument("EichlerInput: D and N must be coprime");
    if (in.D.size() % 2)
        throw std::invalid_argument("EichlerInput: |D| must be even (definite algebra over a real quadratic field)");
}

namespace detail {

inline bool in_prime(const PrimeIdealF& P, const QuadRat& x) {
    auto [c0, c1] = reduce_mod_odd_prime(P, x);
    return P.kind == SplitKind::Inert ? (c0 == 0 && c1 == 0) : c0 == 0;
}

inline QuadRat odd_uniformizer(const RealQuadField& F, const PrimeIdealF& P) {
    switch (P.kind) {
        case SplitKind::Inert: return {F.p, Rational(P.ell), Rational(0)};
        case SplitKind::Ramified: return F.sqrt_p(); // odd ramified prime lies over p
        case SplitKind::Split:
        default: {
            long r = P.root;
            long l2 = P.ell * P.ell;
            if (((r * r - F.p) % l2 + l2) % l2 == 0) r += P.ell; // force v_P = 1 exactly
            return {F.p, Rational(-r), Rational(1)};             // sqrt(p) - r
        }
    }
}

} // namespace detail

// Artin symbol (K/P): +1 split, -1 inert, 0 ramified.  Odd P: strip the
// P-valuation of delta and apply the residue square test.  Dyadic P: read
// the answer off the primitive idempotent decomposition of O_K/2O_K, with
// factors matched to the dyadic primes of F and classified by residue
// degree.
inline int artin_symbol(const RealQuadField& F, const CMFieldDescriptor& K, const PrimeIdealF& P) {
    if (P.ell != 2) {
        QuadRat cur = K.delta_rat();
        int v = 0;
        QuadRat pi = detail::odd_uniformizer(F, P);
        while (detail::in_prime(P, cur)) {
            cur = cur / pi;
            if (++v > 64) throw std::runtime_error("artin_symbol: runaway valuation");
        }
        if (v & 1) return 0;
        return is_square_in_residue_field(P, cur);
    }
    auto factors = factor_two_directly(F, K);
    std::vector<LocalFactor> mine;
    for (auto& f : factors)
        if (f.over_root < 0 || f.over_root == P.root) mine.push_back(f);
    auto dim2 = [](int sz) {
        int d = 0;
        while ((1 << d) < sz) ++d;
        return d;
    };
    int eP = (P.kind == SplitKind::Ramified) ? 2 : 1;
    int total = 0;
    for (const auto& f : mine) total += dim2(f.size);
    if (total != 2 * eP * P.f())
        throw std::runtime_error("artin_symbol: dyadic factor dimensions inconsistent");
    if (mine.size() == 2) return 1;
    if (mine.size() != 1) throw std::runtime_error("artin_symbol: unexpected dyadic factor count");
    // one prime above P: inert iff the residue degree doubles
    return dim2(mine[0].residue_size) == 2 * P.f() ? -1 : 0;
}

// Eichler symbol (B/P): 1 on the conductor, the Artin symbol of the
// fraction field elsewhere.  Only defined for O_F-orders.
inline int eichler_symbol(const RealQuadField& F, const OrderInvariant& B, const PrimeIdealF& P) {
    if (B.over != OrderBase::OF)
        throw std::invalid_argument("eichler_symbol: embedding products of proper A-orders are out of scope");
    for (const auto& Q : B.conductor_support)
        if (Q == P) return 1;
    return artin_symbol(F, B.field, P);
}

// Memoizes Artin symbols per (field, prime); the dyadic symbol costs a
// quotient-ring build, and batch sweeps evaluate the same symbols across
// thousands of (D, N) inputs.
class SymbolOracle {
    const RealQuadField* F_;
    std::map<std::pair<CMTag, PrimeIdealF>, int> cache_;

public:
    explicit SymbolOracle(const RealQuadField& F) : F_(&F) {}

    int artin(const CMFieldDescriptor& K, const PrimeIdealF& P) {
        auto key = std::make_pair(K.tag, P);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        int s = artin_symbol(*F_, K, P);
        cache_.emplace(key, s);
        return s;
    }
    int eichler(const OrderInvariant& B, const PrimeIdealF& P) {
        if (B.over != OrderBase::OF)
            throw std::invalid_argument("eichler_symbol: embedding products of proper A-orders are out of scope");
        for (const auto& Q : B.conductor_support)
            if (Q == P) return 1;
        return artin(B.field, P);
    }
    long embedding(const CMFieldDescriptor& K, const std::vector<PrimeIdealF>& D,
                   const std::vector<PrimeIdealF>& N) {
        long e = 1;
        for (const auto& P : D) e *= 1 - artin(K, P);
        for (const auto& P : N) e *= 1 + artin(K, P);
        return e;
    }
    long embedding(const OrderInvariant& B, const std::vector<PrimeIdealF>& D,
                   const std::vector<PrimeIdealF>& N) {
        long e = 1;
        for (const auto& P : D) e *= 1 - eichler(B, P);
        for (const auto& P : N) e *= 1 + eichler(B, P);
        return e;
    }
};

// E_{K,D,N} = prod_{P|D} (1 - (K/P)) * prod_{P|N} (1 + (K/P))
inline long embedding_product(const RealQuadField& F, const CMFieldDescriptor& K,
                              const std::vector<PrimeIdealF>& D, const std::vector<PrimeIdealF>& N) {
    return SymbolOracle(F).embedding(K, D, N);
}

// E_{B,D,N}, equal to the product of the local optimal embedding numbers
inline long embedding_product(const RealQuadField& F, const OrderInvariant& B,
                              const std::vector<PrimeIdealF>& D, const std::vector<PrimeIdealF>& N) {
    return SymbolOracle(F).embedding(B, D, N);
}

// Mass(O) = (1/2) zeta_F(-1) h(F) prod_{P|D} (N(P)-1) prod_{P|N} (N(P)+1)
inline Rational mass(const EichlerInput& in) {
    Rational m = Rational(1, 2) * in.F.zeta_m1 * Rational(in.F.h_F);
    for (const auto& P : in.D) m *= Rational(P.norm() - 1);
    for (const auto& P : in.N) m *= Rational(P.norm() + 1);
    return m;
}

// Ell(O) = (1/2) sum_B h(B) (1 - 1/w(B)) E_{B,D,N} over the O_F-orders
// with w(B) > 1
inline Rational elliptic_part(const EichlerInput& in, const std::vector<OrderInvariant>& inventory,
                              SymbolOracle& sym) {
    Rational total(0);
    for (const auto& B : inventory) {
        long E = sym.embedding(B, in.D, in.N);
        if (E == 0) continue;
        total += Rational(1, 2) * Rational(B.h_b) * (Rational(1) - Rational(1, B.w_b)) * Rational(E);
    }
    return total;
}

inline Rational elliptic_part(const EichlerInput& in, const std::vector<OrderInvariant>& inventory) {
    SymbolOracle sym(in.F);
    return elliptic_part(in, inventory, sym);
}

struct Contribution {
    std::string order;
    std::string field;
    long h_b = 0;
    int w_b = 0;
    long embedding = 0;
    Rational term; // (1/2) h(B) (1 - 1/w(B)) E
};

struct ClassNumberReport {
    long p = 0;
    std::vector<PrimeIdealF> D, N;
    Rational mass_value;
    std::vector<Contribution> contributions;
    Rational elliptic;
    long h_O = 0;
};

namespace detail {

inline std::vector<PrimeIdealF> odd_part(const std::vector<PrimeIdealF>& v) {
    std::vector<PrimeIdealF> out;
    for (const auto& P : v)
        if (P.ell != 2) out.push_back(P);
    return out;
}

inline long count_dyadic(const std::vector<PrimeIdealF>& v) {
    long c = 0;
    for (const auto& P : v) c += (P.ell == 2);
    return c;
}

// closed forms for p > 5; evaluated independently of the generic assembly
inline Rational closed_form_h(const EichlerInput& in, const std::vector<CMFieldDescriptor>& fields,
                              SymbolOracle& sym) {
    const RealQuadField& F = in.F;
    auto field = [&](CMTag t) -> const CMFieldDescriptor& {
        for (const auto& K : fields)
            if (K.tag == t) return K;
        throw std::runtime_error("closed_form_h: missing field");
    };
    Rational M = mass(in);
    if (F.p % 4 == 1) {
        const auto &K1 = field(CMTag::K1), &K3 = field(CMTag::K3);
        return M + Rational(K1.h_k, 4) * Rational(sym.embedding(K1, in.D, in.N)) +
               Rational(K3.h_k, 3) * Rational(sym.embedding(K3, in.D, in.N));
    }
    const auto &K1 = field(CMTag::K1), &K2 = field(CMTag::K2), &K3 = field(CMTag::K3);
    // C_{D_(2), N_(2)} = [D has no dyadic part] * 2^{# dyadic primes of N}
    Rational C = count_dyadic(in.D) ? Rational(0) : Rational(1L << count_dyadic(in.N));
    long EK1_odd = sym.embedding(K1, detail::odd_part(in.D), detail::odd_part(in.N));
    Rational h = M;
    h += Rational(5 * (2 - kronecker(2L, F.p)) * K1.h_k, 8) * C * Rational(EK1_odd);
    h += Rational(3 * K1.h_k, 8) * Rational(sym.embedding(K1, in.D, in.N));
    h += Rational(K2.h_k, 4) * Rational(sym.embedding(K2, in.D, in.N));
    h += Rational(K3.h_k, 3) * Rational(sym.embedding(K3, in.D, in.N));
    return h;
}

} // namespace detail

// h(O) = Mass(O) + Ell(O); the sum must be a positive integer, and for
// p > 5 the congruence-class closed form must reproduce it.
inline ClassNumberReport class_number_eichler(const EichlerInput& in,
                                              const std::vector<CMFieldDescriptor>& fields,
                                              const std::vector<OrderInvariant>& inventory,
                                              SymbolOracle& sym) {
    validate(in);
    ClassNumberReport rep;
    rep.p = in.F.p;
    rep.D = in.D;
    rep.N = in.N;
    rep.mass_value = mass(in);
    Rational ell(0);
    for (const auto& B : inventory) {
        Contribution c;
        c.order = B.name();
        c.field = B.field.name();
        c.h_b = B.h_b;
        c.w_b = B.w_b;
        c.embedding = sym.embedding(B, in.D, in.N);
        c.term = Rational(1, 2) * Rational(c.h_b) * (Rational(1) - Rational(1, c.w_b)) * Rational(c.embedding);
        ell += c.term;
        rep.contributions.push_back(std::move(c));
    }
    rep.elliptic = ell;
    Rational h = rep.mass_value + rep.elliptic;
    if (!h.is_integer() || h.sign() <= 0)
        throw NonIntegralError("class_number_eichler: mass + elliptic = " + h.str() +
                               " is not a positive integer (p=" + std::to_string(in.F.p) + ")");
    rep.h_O = h.to_integer().get_si();
    if (in.F.p > 5) {
        Rational cf = detail::closed_form_h(in, fields, sym);
        if (cf != h)
            throw VerificationError("class_number_eichler: closed form " + cf.str() +
                                    " != generic assembly " + h.str() + " (p=" + std::to_string(in.F.p) + ")");
    }
    return rep;
}

inline ClassNumberReport class_number_eichler(const EichlerInput& in,
                                              const std::vector<CMFieldDescriptor>& fields,
                                              const std::vector<OrderInvariant>& inventory) {
    SymbolOracle sym(in.F);
    return class_number_eichler(in, fields, inventory, sym);
}

inline ClassNumberReport class_number_eichler(const EichlerInput& in) {
    auto fields = enumerate_cm_fields(in.F);
    auto inventory = enumerate_suborders_OF(in.F, fields);
    return class_number_eichler(in, fields, inventory);
}

} // namespace eichler
