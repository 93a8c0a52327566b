#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace eichler {

using Int = mpz_class;

// Thrown when a quantity that must come out integral does not (bug trap:
// indicates a wrong unit index or class number upstream).
struct NonIntegralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by --verify style cross-checks when an oracle disagrees with the
// closed-form path.
struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact rational, always in lowest terms with positive denominator.
class Rational {
    mpq_class q_;

public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {}
    Rational(const Int& n) : q_(n) {}
    Rational(const Int& num, const Int& den) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    Rational(long num, long den) : Rational(Int(num), Int(den)) {}

    Int num() const { return q_.get_num(); }
    Int den() const { return q_.get_den(); }

    bool is_integer() const { return q_.get_den() == 1; }
    Int to_integer() const {
        if (!is_integer()) throw NonIntegralError("Rational: " + str() + " is not an integer");
        return q_.get_num();
    }

    int sign() const { return sgn(q_); }

    Rational operator-() const { Rational r; r.q_ = -q_; return r; }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.q_ == 0) throw std::invalid_argument("Rational: division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

    double to_double() const { return q_.get_d(); }

    // Canonical "num/den" form, e.g. "1/30", "-3/2", "4/1".
    std::string str() const { return q_.get_num().get_str() + "/" + q_.get_den().get_str(); }
};

// Kronecker symbol (a|n), the usual extension of the Jacobi symbol to all
// nonzero n.  Multiplicative in both arguments.
inline int kronecker(Int a, Int n) {
    if (n == 0) throw std::invalid_argument("kronecker: n must be nonzero");
    int res = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) res = -res;
    }
    // split off the even part of n; (a|2) = 0, +1, -1 for a even, a = +-1,
    // a = +-3 mod 8
    auto twos = mpz_scan1(n.get_mpz_t(), 0);
    if (twos > 0) {
        if (mpz_even_p(a.get_mpz_t())) return 0;
        unsigned long a8 = mpz_fdiv_ui(a.get_mpz_t(), 8);
        if ((twos & 1) && (a8 == 3 || a8 == 5)) res = -res;
        n >>= twos;
    }
    // Jacobi symbol for odd n >= 1 by reciprocity
    a = a % n;
    if (a < 0) a += n;
    while (a != 0) {
        auto v = mpz_scan1(a.get_mpz_t(), 0);
        if (v > 0) {
            a >>= v;
            unsigned long n8 = mpz_fdiv_ui(n.get_mpz_t(), 8);
            if ((v & 1) && (n8 == 3 || n8 == 5)) res = -res;
        }
        std::swap(a, n);
        if (mpz_fdiv_ui(a.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(n.get_mpz_t(), 4) == 3) res = -res;
        a = a % n;
    }
    return n == 1 ? res : 0;
}

inline int kronecker(long a, long n) { return kronecker(Int(a), Int(n)); }

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

} // namespace detail

// Deterministic Miller-Rabin for the full 64-bit range (fixed witness set,
// valid for n < 3.3 * 10^24).
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t w : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = detail::powmod_u64(w, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline bool is_prime(long n) { return n >= 2 && is_prime(static_cast<std::uint64_t>(n)); }

// Prime factorization by trial division, returned as (prime, exponent) pairs
// in increasing order of the prime.
inline std::vector<std::pair<long, int>> factorize(long n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be positive");
    std::vector<std::pair<long, int>> out;
    for (long q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
        if (n % q) continue;
        int e = 0;
        while (n % q == 0) { n /= q; ++e; }
        out.emplace_back(q, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// Sum of positive divisors.
inline long sigma1(long n) {
    if (n < 1) throw std::invalid_argument("sigma1: n must be positive");
    long s = 1;
    for (auto [q, e] : factorize(n)) {
        long qe = 1, geom = 1;
        for (int i = 0; i < e; ++i) { qe *= q; geom += qe; }
        s *= geom;
    }
    return s;
}

inline bool is_squarefree(long n) {
    if (n < 1) throw std::invalid_argument("is_squarefree: n must be positive");
    for (auto [q, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

// floor(sqrt(n)) for n >= 0, exact.
inline long isqrt(long n) {
    if (n < 0) throw std::invalid_argument("isqrt: negative argument");
    if (n == 0) return 0;
    long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

} // namespace eichler
