#pragma once

#include <string>

#include "factor.hpp"
#include "ratfunc.hpp"

namespace ffqlat {

/// A place of K = F_q(t): a monic irreducible pi (finite), or infinity.
class Place {
   public:
    static Place infinity(const Fq& F) {
        Place v;
        v.infinite_ = true;
        v.pi_ = Poly::zero(F);
        return v;
    }
    static Place finite(Poly pi) {
        if (!pi.is_monic()) pi = pi.monic();
        if (!poly_irreducible(pi)) throw InputError("place generator is not irreducible: " + pi.to_string());
        Place v;
        v.infinite_ = false;
        v.pi_ = std::move(pi);
        return v;
    }

    bool is_infinity() const { return infinite_; }
    const Poly& pi() const {
        assert(!infinite_);
        return pi_;
    }
    int degree() const { return infinite_ ? 1 : pi_.deg().value(); }
    const Fq& field() const { return pi_.field(); }
    /// Residue field order q^deg.
    long long residue_size() const {
        long long r = 1;
        for (int i = 0; i < degree(); ++i) r *= field().q();
        return r;
    }

    int valuation(const RatFunc& f) const {
        if (infinite_) {
            // v_inf = -deg
            return -f.deg_infinity().value();
        }
        return f.valuation(pi_);
    }

    std::string to_string() const { return infinite_ ? "infinity" : pi_.to_string(); }

    friend bool operator==(const Place& a, const Place& b) {
        return a.infinite_ == b.infinite_ && a.pi_ == b.pi_;
    }
    friend bool operator<(const Place& a, const Place& b) {
        if (a.infinite_ != b.infinite_) return b.infinite_;
        return a.pi_ < b.pi_;
    }

   private:
    bool infinite_ = false;
    Poly pi_;
};

/// Quadratic character of the residue field at v, applied to a v-unit:
/// +1 for residues that are squares, -1 otherwise.
inline int residue_chi(const RatFunc& u, const Place& v) {
    const Fq& F = u.field();
    if (v.is_infinity()) return F.chi(u.lc_infinity());
    // Euler criterion in A/(pi)
    Poly r = u.residue(v.pi());
    if (r.is_zero()) throw InputError("unit reduced to zero at the place");
    long long e = (v.residue_size() - 1) / 2;
    Poly pw = poly_powmod(r, static_cast<unsigned long long>(e), v.pi());
    if (pw == Poly::one(F)) return 1;
    return -1;
}

/// Tame Hilbert symbol (a,b)_v over K_v (all residue characteristics odd):
/// (a,b)_v = eta_v((-1)^{v(a)v(b)} a^{v(b)} b^{-v(a)}).
inline int hilbert_symbol(const RatFunc& a, const RatFunc& b, const Place& v) {
    if (a.is_zero() || b.is_zero()) throw InputError("Hilbert symbol of zero");
    int va = v.valuation(a), vb = v.valuation(b);
    const Fq& F = a.field();
    RatFunc u(Poly::one(F));
    // a^{vb} * b^{-va}, assembled without huge exponents via split parts
    auto pow_rf = [](RatFunc base, int n) {
        RatFunc r(Poly::one(base.field()));
        bool inv = n < 0;
        if (inv) n = -n;
        while (n) {
            if (n & 1) r = r * base;
            base = base * base;
            n >>= 1;
        }
        return inv ? r.inverse() : r;
    };
    u = pow_rf(a, vb) * pow_rf(b, -va);
    if ((va * vb) % 2 != 0) u = RatFunc(Poly::constant(F, F.neg(F.one()))) * u;
    return residue_chi(u, v);
}

inline int hilbert_symbol(const Poly& a, const Poly& b, const Place& v) {
    return hilbert_symbol(RatFunc(a), RatFunc(b), v);
}

/// The finitely many places where (a,b) can be nontrivial: divisors of a or
/// b, plus infinity.
inline std::vector<Place> relevant_places(const RatFunc& a, const RatFunc& b) {
    std::map<Poly, int> seen;
    for (const RatFunc* f : {&a, &b}) {
        for (const Poly* g : {&f->num(), &f->den()}) {
            if (g->deg() < 1) continue;
            for (auto& [pi, m] : factor(*g).factors) seen[pi] = 1;
        }
    }
    std::vector<Place> out;
    for (auto& [pi, m] : seen) out.push_back(Place::finite(pi));
    out.push_back(Place::infinity(a.field()));
    return out;
}

}  // namespace ffqlat
