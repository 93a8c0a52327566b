#pragma once

// The real quadratic field F = Q(sqrt p) for a prime p: integral basis,
// fundamental unit, zeta_F(-1), class number, and splitting of rational
// primes.  Everything is exact; no floating point on the main path.

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "eichler/arith.hpp"

namespace eichler {

enum class QuadBasis { Sqrt, HalfPlusSqrt };

// Element of F = Q(sqrt p) with rational coordinates: u + v*sqrt(p).
// Used for intermediate arithmetic (half- and quarter-integral coordinates
// show up in maximal-order bases).
struct QuadRat {
    long p = 0;
    Rational u, v;

    QuadRat() = default;
    QuadRat(long p_, Rational u_, Rational v_) : p(p_), u(std::move(u_)), v(std::move(v_)) {}

    QuadRat conj() const { return {p, u, -v}; }
    Rational trace() const { return u + u; }
    Rational norm() const { return u * u - Rational(p) * v * v; }
    bool is_zero() const { return u == Rational(0) && v == Rational(0); }

    friend QuadRat operator+(const QuadRat& a, const QuadRat& b) {
        check(a, b);
        return {a.p, a.u + b.u, a.v + b.v};
    }
    friend QuadRat operator-(const QuadRat& a, const QuadRat& b) {
        check(a, b);
        return {a.p, a.u - b.u, a.v - b.v};
    }
    QuadRat operator-() const { return {p, -u, -v}; }
    friend QuadRat operator*(const QuadRat& a, const QuadRat& b) {
        check(a, b);
        return {a.p, a.u * b.u + Rational(a.p) * a.v * b.v, a.u * b.v + a.v * b.u};
    }
    friend QuadRat operator*(const Rational& c, const QuadRat& a) { return {a.p, c * a.u, c * a.v}; }
    friend QuadRat operator/(const QuadRat& a, const QuadRat& b) {
        check(a, b);
        Rational n = b.norm();
        if (n == Rational(0)) throw std::invalid_argument("QuadRat: division by zero");
        QuadRat t = a * b.conj();
        return {a.p, t.u / n, t.v / n};
    }
    friend bool operator==(const QuadRat& a, const QuadRat& b) {
        return a.p == b.p && a.u == b.u && a.v == b.v;
    }

    // sign of the value under the real embedding with sqrt(p) > 0 (exact)
    int sign() const {
        int su = u.sign(), sv = v.sign();
        if (sv == 0) return su;
        if (su == 0) return sv;
        if (su == sv) return su;
        // |u| > |v| sqrt(p) iff u^2 > p v^2, and then the u-term dominates
        Rational d = u * u - Rational(p) * v * v;
        return d.sign() > 0 ? su : sv;
    }
    bool totally_negative() const { return sign() < 0 && conj().sign() < 0; }

private:
    static void check(const QuadRat& a, const QuadRat& b) {
        if (a.p != b.p) throw std::invalid_argument("QuadRat: mixed fields");
    }
};

// Element of O_F (or of A = Z[sqrt p]): a + b*sqrt(p) in basis Sqrt, or
// a + b*(1+sqrt(p))/2 in basis HalfPlusSqrt.  The half basis is only legal
// when p = 1 mod 4.
struct QuadInt {
    long p = 0;
    Int a, b;
    QuadBasis basis = QuadBasis::Sqrt;

    QuadInt() = default;
    QuadInt(long p_, Int a_, Int b_, QuadBasis basis_ = QuadBasis::Sqrt)
        : p(p_), a(std::move(a_)), b(std::move(b_)), basis(basis_) {
        if (basis == QuadBasis::HalfPlusSqrt && p % 4 != 1)
            throw std::invalid_argument("QuadInt: half basis requires p = 1 mod 4");
    }

    QuadRat to_rat() const {
        if (basis == QuadBasis::Sqrt) return {p, Rational(a), Rational(b)};
        return {p, Rational(2 * a + b, 2), Rational(b, 2)};
    }

    Int norm() const { return to_rat().norm().to_integer(); }
    Int trace() const { return to_rat().trace().to_integer(); }
    QuadInt conj() const {
        if (basis == QuadBasis::Sqrt) return {p, a, -b, basis};
        return {p, a + b, -b, basis};
    }

    friend bool operator==(const QuadInt& x, const QuadInt& y) {
        return x.p == y.p && x.to_rat() == y.to_rat();
    }

    std::string str() const {
        QuadRat r = to_rat();
        Int A = (r.u + r.u).to_integer(), B = (r.v + r.v).to_integer();
        std::string root = "sqrt(" + std::to_string(p) + ")";
        if (A % 2 == 0 && B % 2 == 0)
            return Int(A / 2).get_str() + ((B >= 0) ? "+" : "") + Int(B / 2).get_str() + "*" + root;
        return "(" + A.get_str() + ((B >= 0) ? "+" : "") + B.get_str() + "*" + root + ")/2";
    }
};

// Coordinates of x in the integral basis of the given type, or nullopt if x
// is not integral in that basis.
inline std::optional<std::pair<Int, Int>> coords_in_basis(const QuadRat& x, QuadBasis basis) {
    if (basis == QuadBasis::Sqrt) {
        if (!x.u.is_integer() || !x.v.is_integer()) return std::nullopt;
        return std::make_pair(x.u.to_integer(), x.v.to_integer());
    }
    // x = a + b*(1+sqrt p)/2  <=>  b = 2v, a = u - v
    Rational b = x.v + x.v, a = x.u - x.v;
    if (!a.is_integer() || !b.is_integer()) return std::nullopt;
    return std::make_pair(a.to_integer(), b.to_integer());
}

struct RealQuadField {
    long p = 0;
    long d_F = 0;            // field discriminant: p, 4p, or 8
    QuadBasis basis = QuadBasis::Sqrt;
    QuadInt eps;             // fundamental unit, > 1 under sqrt(p) > 0
    int norm_eps = 0;        // +1 or -1
    int varpi_ = 0;          // [O_F^x : A^x] for p = 1 mod 4, else 0
    long h_F = 0;            // wide class number
    Rational zeta_m1;        // zeta_F(-1), exact

    QuadRat sqrt_p() const { return {p, Rational(0), Rational(1)}; }
    // second element of the integral basis: (1+sqrt p)/2 or sqrt p
    QuadRat omega() const {
        if (basis == QuadBasis::HalfPlusSqrt) return {p, Rational(1, 2), Rational(1, 2)};
        return sqrt_p();
    }
    bool in_OF(const QuadRat& x) const { return coords_in_basis(x, basis).has_value(); }
};

enum class SplitKind { Split, Inert, Ramified };

inline const char* to_string(SplitKind k) {
    switch (k) {
        case SplitKind::Split: return "split";
        case SplitKind::Inert: return "inert";
        default: return "ramified";
    }
}

// A prime of O_F above the rational prime ell.  For odd ell the root is the
// image of sqrt(p) in the residue field (least nonnegative residue, and the
// pair of split primes carries roots r and ell - r); for a split dyadic
// prime it is the image of omega = (1+sqrt p)/2 in F_2; for a ramified
// dyadic prime it is the image of sqrt(p).  Inert primes carry no root.
struct PrimeIdealF {
    long ell = 0;
    SplitKind kind = SplitKind::Inert;
    long root = -1;

    long norm() const { return kind == SplitKind::Inert ? ell * ell : ell; }
    int f() const { return kind == SplitKind::Inert ? 2 : 1; }

    friend bool operator==(const PrimeIdealF& a, const PrimeIdealF& b) {
        return a.ell == b.ell && a.kind == b.kind && a.root == b.root;
    }
    friend bool operator<(const PrimeIdealF& a, const PrimeIdealF& b) {
        return std::tie(a.ell, a.root) < std::tie(b.ell, b.root);
    }

    std::string str() const {
        std::string s = "(" + std::to_string(ell) + "," + to_string(kind);
        if (root >= 0) s += ",r=" + std::to_string(root);
        return s + ")";
    }
};

namespace detail {

// Fundamental unit of the real quadratic order of discriminant Delta > 0
// (Delta = 0 or 1 mod 4, not a square), returned as (u, v) with
// eps = (u + v*sqrt(Delta))/2 and N(eps) = (u^2 - Delta v^2)/4 = +-1.
//
// Continued-fraction expansion of alpha = (P0 + sqrt Delta)/2, where P0 is
// the largest integer below sqrt(Delta) with P0 = Delta mod 2.  That alpha
// is reduced (alpha > 1, -1 < alpha' < 0), so the expansion is purely
// periodic; with period l and convergent denominators q_k (q_{-2} = 1,
// q_{-1} = 0), the unit is eps = q_{l-1} alpha + q_{l-2}, of norm (-1)^l.
inline std::pair<Int, Int> fundamental_unit_of_discriminant(long Delta) {
    if (Delta <= 0 || (Delta % 4 != 0 && Delta % 4 != 1))
        throw std::invalid_argument("fundamental unit: bad discriminant");
    long s = isqrt(Delta);
    if (s * s == Delta) throw std::invalid_argument("fundamental unit: square discriminant");
    long P0 = s;
    if (((P0 ^ Delta) & 1) != 0) --P0;
    const long Q0 = 2;

    long P = P0, Q = Q0;
    Int qkm2 = 1, qkm1 = 0;
    long steps = 0;
    while (true) {
        long a = (P + s) / Q;
        Int qk = Int(a) * qkm1 + qkm2;
        qkm2 = qkm1;
        qkm1 = qk;
        long Pn = a * Q - P;
        long Qn = (Delta - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
        if (P == P0 && Q == Q0) break;
        if (++steps > 10'000'000) throw std::runtime_error("fundamental unit: period overflow");
    }
    Int u = qkm1 * P0 + 2 * qkm2;
    Int v = qkm1;
    Int n4 = u * u - Delta * v * v;
    if (n4 != 4 && n4 != -4) throw std::runtime_error("fundamental unit: norm check failed");
    return {u, v};
}

} // namespace detail

// zeta_F(-1) by Siegel's finite sum:
//   zeta_F(-1) = (1/60) * sum_{b^2 < d, b = d mod 2} sigma1((d - b^2)/4).
inline Rational zeta_minus_one_of_discriminant(long d) {
    long total = 0;
    for (long b = (d % 2 == 0 ? 0 : 1); b * b < d; b += 2)
        total += (b == 0 ? 1 : 2) * sigma1((d - b * b) / 4);
    return Rational(total, 60);
}

namespace detail {

struct IndefForm {
    long a, b, c;
    friend bool operator<(const IndefForm& x, const IndefForm& y) {
        return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
    }
    friend bool operator==(const IndefForm& x, const IndefForm& y) {
        return std::tie(x.a, x.b, x.c) == std::tie(y.a, y.b, y.c);
    }
};

// (a,b,c) of discriminant D is reduced iff |sqrt(D) - 2|a|| < b < sqrt(D),
// i.e. 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b.
inline bool indef_reduced(long D, long aa, long b) {
    if (b <= 0 || b * b >= D) return false;
    long t = 2 * std::labs(aa);
    if (D >= (t + b) * (t + b)) return false;
    if (t > b && (t - b) * (t - b) >= D) return false;
    return true;
}

inline std::vector<IndefForm> reduced_indefinite_forms(long D) {
    std::vector<IndefForm> out;
    for (long b = (D % 2 == 0 ? 2 : 1); b * b < D; b += 2) {
        long n = (D - b * b) / 4; // = |a c|, with a c < 0
        for (long u = 1; u * u <= n; ++u) {
            if (n % u) continue;
            long w = n / u;
            for (long aa : {u, w}) {
                if (!indef_reduced(D, aa, b)) continue;
                out.push_back({aa, b, -(n / aa)});
                out.push_back({-aa, b, n / aa});
                if (u == w) break;
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline long floordiv(long x, long y) {
    long q = x / y, r = x % y;
    return (r != 0 && ((r < 0) != (y < 0))) ? q - 1 : q;
}

// one step along the cycle: (a,b,c) -> (c, b', (b'^2 - D)/(4c)) with
// b' = -b mod 2|c| shifted into the reduced window just below sqrt(D)
inline IndefForm rho(long D, const IndefForm& f) {
    long s = isqrt(D);
    long m = 2 * std::labs(f.c);
    long b0 = ((-f.b) % m + m) % m;
    long bp = b0 + m * floordiv(s - b0, m);
    long cp = (bp * bp - D) / (4 * f.c);
    return {f.c, bp, cp};
}

// number of cycles of reduced indefinite forms of discriminant D, i.e. the
// narrow form class number h+(D)
inline long count_form_cycles(long D) {
    auto forms = reduced_indefinite_forms(D);
    std::set<IndefForm> unseen(forms.begin(), forms.end());
    long cycles = 0;
    while (!unseen.empty()) {
        IndefForm start = *unseen.begin();
        ++cycles;
        IndefForm f = start;
        do {
            if (unseen.erase(f) == 0)
                throw std::runtime_error("form cycles: rho left the reduced set");
            f = rho(D, f);
        } while (!(f == start));
    }
    return cycles;
}

} // namespace detail

// --- field construction ----------------------------------------------------

inline long discriminant_of(long p) {
    if (p == 2) return 8;
    return p % 4 == 1 ? p : 4 * p;
}

inline RealQuadField build_field(long p) {
    if (!is_prime(p)) throw std::invalid_argument("build_field: p must be prime");
    RealQuadField F;
    F.p = p;
    F.d_F = discriminant_of(p);
    F.basis = (p % 4 == 1) ? QuadBasis::HalfPlusSqrt : QuadBasis::Sqrt;

    auto [u, v] = detail::fundamental_unit_of_discriminant(F.d_F);
    if (p % 4 == 1) {
        // eps = (u + v sqrt p)/2 = (u-v)/2 + v * (1+sqrt p)/2
        F.eps = QuadInt(p, (u - v) / 2, v, QuadBasis::HalfPlusSqrt);
    } else {
        // sqrt(d_F) = 2 sqrt(p), so eps = u/2 + v sqrt(p) with u even
        F.eps = QuadInt(p, u / 2, v, QuadBasis::Sqrt);
    }
    Int n = F.eps.norm();
    if (n != 1 && n != -1) throw std::runtime_error("build_field: unit norm not +-1");
    F.norm_eps = (n == 1) ? 1 : -1;

    // varpi = 1 iff eps lies in A = Z[sqrt p], i.e. its omega-coordinate is even
    if (p % 4 == 1) F.varpi_ = (F.eps.b % 2 == 0) ? 1 : 3;

    F.zeta_m1 = zeta_minus_one_of_discriminant(F.d_F);

    long cycles = detail::count_form_cycles(F.d_F);
    if (F.norm_eps == 1) {
        if (cycles % 2) throw std::runtime_error("build_field: odd cycle count with N(eps) = 1");
        F.h_F = cycles / 2;
    } else {
        F.h_F = cycles;
    }
    return F;
}

inline int varpi(const RealQuadField& F) {
    if (F.p % 4 != 1) throw std::invalid_argument("varpi: defined only for p = 1 mod 4");
    return F.varpi_;
}

// For p = 3 mod 4: the exact square root of eps/2, an element of (1/2)O_F
// congruent to (1+sqrt p)/2 mod O_F.  Writing eps = a + b sqrt(p) and
// x = (u + v sqrt p)/2, the system u^2 + p v^2 = 2a, uv = b forces
// {u^2, p v^2} = {a+1, a-1} since N(eps) = 1.  Both defining properties are
// verified exactly before returning.
inline QuadRat sqrt_half_unit(const RealQuadField& F) {
    if (F.p % 4 != 3) throw std::invalid_argument("sqrt_half_unit: requires p = 3 mod 4");
    const Int& ea = F.eps.a;
    QuadRat half_eps(F.p, Rational(F.eps.a, 2), Rational(F.eps.b, 2));
    for (int s : {1, -1}) {
        Int uu = ea + s, pvv = ea - s;
        if (uu < 0 || pvv < 0 || pvv % F.p != 0) continue;
        Int u = sqrt(uu), vv = pvv / F.p, v = sqrt(vv);
        if (u * u != uu || v * v != vv) continue;
        QuadRat x(F.p, Rational(u, 2), Rational(v, 2));
        if (!(x * x == half_eps)) continue;
        if (u % 2 == 0 || v % 2 == 0) continue; // x = (1+sqrt p)/2 mod O_F needs u, v odd
        return x;
    }
    throw std::runtime_error("sqrt_half_unit: no solution found (internal bug)");
}

inline Rational zeta_minus_one(const RealQuadField& F) { return F.zeta_m1; }

inline long class_number_real(const RealQuadField& F) { return F.h_F; }

inline std::vector<PrimeIdealF> factor_rational_prime(const RealQuadField& F, long ell) {
    if (!is_prime(ell)) throw std::invalid_argument("factor_rational_prime: ell must be prime");
    int k = kronecker(F.d_F, ell);
    if (k == -1) return {PrimeIdealF{ell, SplitKind::Inert, -1}};
    if (k == 0) {
        long root = (ell == 2) ? (F.p % 2) : 0;
        return {PrimeIdealF{ell, SplitKind::Ramified, root}};
    }
    if (ell == 2) {
        // p = 1 mod 8; both roots of x^2 - x - (p-1)/4 mod 2
        return {PrimeIdealF{2, SplitKind::Split, 0}, PrimeIdealF{2, SplitKind::Split, 1}};
    }
    long pm = ((F.p % ell) + ell) % ell;
    long r = -1;
    for (long t = 0; t < ell; ++t)
        if ((t * t) % ell == pm) { r = t; break; }
    if (r < 0) throw std::runtime_error("factor_rational_prime: split prime without root");
    long r2 = ell - r;
    if (r > r2) std::swap(r, r2);
    return {PrimeIdealF{ell, SplitKind::Split, r}, PrimeIdealF{ell, SplitKind::Split, r2}};
}

inline std::vector<PrimeIdealF> primes_above_2(const RealQuadField& F) {
    return factor_rational_prime(F, 2);
}

namespace detail {

// x mod P for odd ell: coordinates in F_ell (norm ell case: second entry 0)
// or in F_ell[t]/(t^2 - p) (inert case).
inline std::pair<long, long> reduce_mod_odd_prime(const PrimeIdealF& P, const QuadRat& x) {
    long ell = P.ell;
    auto red = [&](const Rational& r) -> long {
        unsigned long d = mpz_fdiv_ui(r.den().get_mpz_t(), ell);
        if (d == 0) throw std::invalid_argument("reduce mod P: denominator divisible by ell");
        unsigned long num = mpz_fdiv_ui(r.num().get_mpz_t(), ell);
        std::uint64_t inv = powmod_u64(d, ell - 2, ell);
        return static_cast<long>(mulmod_u64(num, inv, ell));
    };
    long cu = red(x.u), cv = red(x.v);
    if (P.kind == SplitKind::Inert) return {cu, cv};
    return {static_cast<long>((cu + static_cast<std::uint64_t>(cv) * P.root % ell) % ell), 0};
}

// image of an integral x in the residue field of a dyadic prime:
// (c0, c1) in F_2 x F_2 for the inert case (basis {1, omega} of F_4),
// (z, 0) otherwise.
inline std::pair<long, long> reduce_mod_dyadic(const PrimeIdealF& P, const QuadRat& x) {
    // coordinates on the integral basis of O_F
    Rational a, b;
    if (x.p % 4 == 1) {
        b = x.v + x.v;
        a = x.u - x.v;
    } else {
        a = x.u;
        b = x.v;
    }
    if (!a.is_integer() || !b.is_integer())
        throw std::invalid_argument("reduce mod 2: element not in O_F");
    long ca = mpz_fdiv_ui(a.to_integer().get_mpz_t(), 2);
    long cb = mpz_fdiv_ui(b.to_integer().get_mpz_t(), 2);
    switch (P.kind) {
        case SplitKind::Inert:
            return {ca, cb};
        case SplitKind::Split:
            return {(ca + cb * P.root) % 2, 0};
        case SplitKind::Ramified:
        default:
            // basis is {1, sqrt p}; sqrt(p) -> p mod 2
            return {(ca + cb * (x.p % 2)) % 2, 0};
    }
}

} // namespace detail

// Quadratic-residue test of x in the residue field of P: 0 if x = 0 there,
// else +-1 by the Euler criterion (computed in F_ell[t]/(t^2 - p) when P is
// inert).  In residue characteristic 2 the Frobenius is onto, so every
// nonzero element is a square.
inline int is_square_in_residue_field(const PrimeIdealF& P, const QuadRat& x) {
    long ell = P.ell;
    if (ell == 2) {
        auto [c0, c1] = detail::reduce_mod_dyadic(P, x);
        return (c0 == 0 && c1 == 0) ? 0 : 1;
    }
    auto [c0, c1] = detail::reduce_mod_odd_prime(P, x);
    if (P.kind != SplitKind::Inert) {
        if (c0 == 0) return 0;
        return detail::powmod_u64(c0, (ell - 1) / 2, ell) == 1 ? 1 : -1;
    }
    if (c0 == 0 && c1 == 0) return 0;
    long pm = ((x.p % ell) + ell) % ell;
    std::uint64_t e = (static_cast<std::uint64_t>(ell) * ell - 1) / 2;
    auto mul2 = [&](std::pair<long, long> A, std::pair<long, long> B) {
        long z0 = static_cast<long>((detail::mulmod_u64(A.first, B.first, ell) +
                                     detail::mulmod_u64(detail::mulmod_u64(A.second, B.second, ell), pm, ell)) %
                                    ell);
        long z1 = static_cast<long>((detail::mulmod_u64(A.first, B.second, ell) +
                                     detail::mulmod_u64(A.second, B.first, ell)) %
                                    ell);
        return std::make_pair(z0, z1);
    };
    std::pair<long, long> r{1, 0}, b{c0, c1};
    while (e) {
        if (e & 1) r = mul2(r, b);
        b = mul2(b, b);
        e >>= 1;
    }
    if (r.second != 0) throw std::runtime_error("is_square: Euler power not in the prime field");
    return r.first == 1 ? 1 : -1;
}

inline int is_square_in_residue_field(const PrimeIdealF& P, const QuadInt& x) {
    return is_square_in_residue_field(P, x.to_rat());
}

} // namespace eichler
