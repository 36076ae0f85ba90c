#pragma once

#include <map>
#include <vector>

#include "poly.hpp"

namespace ffqlat {

/// Monic irreducibles of exact degree d, in canonical order.
inline std::vector<Poly> monic_irreducibles(const Fq& F, int d) {
    std::vector<Poly> out;
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= F.q();
    for (long long idx = 0; idx < count; ++idx) {
        std::vector<FqElem> c(d + 1, F.zero());
        long long v = idx;
        for (int i = 0; i < d; ++i) {
            c[i] = F.from_index(static_cast<int>(v % F.q()));
            v /= F.q();
        }
        c[d] = F.one();
        Poly f(F, c);
        if (poly_irreducible(f)) out.push_back(f);
    }
    return out;
}

/// Factorization of a nonzero polynomial into monic irreducibles with
/// multiplicities, plus the unit leading coefficient. Distinct-degree
/// splitting first, then trial division by enumerated irreducibles of the
/// right degree; adequate for the desk-scale degrees this library handles.
class Factorization {
   public:
    FqElem unit;
    std::map<Poly, int> factors;  // monic irreducible -> multiplicity
};

inline void factor_into(Poly f, Factorization& out) {
    const Fq& F = f.field();
    if (f.deg() <= 0) return;
    // f = g(t^p)^... with f' = 0: all exponents divisible by p, take p-th root
    Poly df = f.derivative();
    if (df.is_zero()) {
        int p = F.p();
        std::vector<FqElem> c;
        for (int i = 0; i <= f.deg().value(); i += p) {
            // p-th root of a coefficient: x -> x^{p^{e-1}} inverts Frobenius
            FqElem a = f.coeff(i);
            for (int k = 0; k < F.e() - 1; ++k) a = F.frobenius(a);
            c.push_back(a);
        }
        Factorization sub;
        factor_into(Poly(F, c), sub);
        for (auto& [g, m] : sub.factors) out.factors[g] += m * p;
        return;
    }
    Poly g = poly_gcd(f, df);
    if (g.deg() > 0) {
        // f = (f/g) * g, both proper divisors; multiplicities add
        factor_into(f / g, out);
        factor_into(g, out);
        return;
    }
    // squarefree and separable: distinct-degree split, then trial division
    Poly rest = f.monic();
    int d = 1;
    while (rest.deg() >= 1) {
        if (2 * d > rest.deg().value()) {
            out.factors[rest] += 1;  // what remains is irreducible
            break;
        }
        // gcd with t^{q^d} - t picks up the factors of degree dividing d;
        // lower degrees were removed at earlier d, so these have degree d
        Poly tq = poly_t_qpow_mod(rest, d);
        Poly block = poly_gcd(tq - (Poly::t(F) % rest), rest);
        if (block.deg() >= 1) {
            rest = (rest / block).monic();
            for (const Poly& pi : monic_irreducibles(F, d)) {
                if (block.deg() < d) break;
                auto [q, r] = block.divmod(pi);
                if (r.is_zero()) {
                    out.factors[pi] += 1;
                    block = q;
                }
            }
            if (block.deg() >= 1) throw Error("internal: distinct-degree block did not split");
        }
        ++d;
    }
}

inline Factorization factor(const Poly& f) {
    if (f.is_zero()) throw InputError("factoring the zero polynomial");
    Factorization out;
    out.unit = f.lc();
    factor_into(f.monic(), out);
    return out;
}

/// v_pi(f) for nonzero f.
inline int poly_valuation(const Poly& f, const Poly& pi) {
    if (f.is_zero()) throw InputError("valuation of zero polynomial");
    Poly g = f;
    int v = 0;
    while (true) {
        auto [q, r] = g.divmod(pi);
        if (!r.is_zero()) return v;
        g = q;
        ++v;
    }
}

}  // namespace ffqlat
