#pragma once

// Class numbers of imaginary quadratic fields by exhaustive enumeration of
// reduced binary quadratic forms.  Only fundamental discriminants are
// accepted; this is the oracle-grade h(k) input to the biquadratic class
// number formula.

#include <vector>

#include "eichler/arith.hpp"

namespace eichler {

struct ReducedForm {
    long a, b, c;
};

inline bool is_fundamental_discriminant(long d) {
    if (d >= 0) return false;
    long m = d % 4;
    if (m < 0) m += 4;
    if (m == 1) return is_squarefree(-d);
    if (m != 0) return false;
    long q = d / 4;
    long qm = ((q % 4) + 4) % 4;
    return (qm == 2 || qm == 3) && is_squarefree(-q);
}

// All reduced forms (a,b,c) with b^2 - 4ac = d:  |b| <= a <= c, and b >= 0
// whenever |b| = a or a = c.  b_max overrides the search bound
// floor(sqrt(|d|/3)) so tests can prove exhaustiveness by re-scanning.
inline std::vector<ReducedForm> reduced_forms_imag(long d, long b_max = -1) {
    if (d >= 0 || (((d % 4) + 4) % 4 != 0 && ((d % 4) + 4) % 4 != 1))
        throw std::invalid_argument("reduced_forms_imag: d must be a negative discriminant");
    if (b_max < 0) b_max = isqrt((-d) / 3);
    std::vector<ReducedForm> out;
    for (long b = (d % 2 == 0 ? 0 : 1); b <= b_max; b += 2) {
        long m = (b * b - d) / 4; // = a c
        for (long a = std::max(b, 1L); a * a <= m; ++a) {
            if (m % a) continue;
            long c = m / a;
            out.push_back({a, b, c});
            if (b != 0 && b != a && a != c) out.push_back({a, -b, c});
        }
    }
    return out;
}

inline long class_number_imag(long d) {
    if (!is_fundamental_discriminant(d))
        throw std::invalid_argument("class_number_imag: " + std::to_string(d) +
                                    " is not a fundamental discriminant < 0");
    return static_cast<long>(reduced_forms_imag(d).size());
}

} // namespace eichler
