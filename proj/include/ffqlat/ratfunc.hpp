#pragma once

#include <string>
#include <utility>

#include "laurent.hpp"
#include "poly.hpp"

namespace ffqlat {

/// Element of K = F_q(t), kept reduced with monic denominator.
class RatFunc {
   public:
    RatFunc() = default;
    explicit RatFunc(Poly num) : num_(std::move(num)), den_(Poly::one(num_.field())) {}
    RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw InputError("rational function with zero denominator");
        normalize();
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    const Fq& field() const { return num_.field(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_poly() const { return den_ == Poly::one(field()); }

    /// Degree as a Laurent series at infinity (deg num - deg den).
    Degree deg_infinity() const {
        if (num_.is_zero()) return Degree::neg_inf();
        return Degree(num_.deg().value() - den_.deg().value());
    }
    /// Leading coefficient of the expansion at infinity.
    FqElem lc_infinity() const { return field().div(num_.lc(), den_.lc()); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw InputError("division by zero rational function");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    RatFunc inverse() const {
        if (is_zero()) throw InputError("inverting zero");
        return RatFunc(den_, num_);
    }

    /// Valuation at the monic irreducible pi (v(0) treated as an error).
    int valuation(const Poly& pi) const {
        if (is_zero()) throw InputError("valuation of zero");
        return val(num_, pi) - val(den_, pi);
    }

    /// Write *this = pi^v * u with u a pi-unit; returns (v, u).
    std::pair<int, RatFunc> split_at(const Poly& pi) const {
        if (is_zero()) throw InputError("splitting zero");
        Poly n = num_, d = den_;
        int v = 0;
        while (true) {
            auto [q, r] = n.divmod(pi);
            if (!r.is_zero()) break;
            n = q;
            ++v;
        }
        while (true) {
            auto [q, r] = d.divmod(pi);
            if (!r.is_zero()) break;
            d = q;
            --v;
        }
        return {v, RatFunc(n, d)};
    }

    /// Image in the residue field A/(pi) for a pi-integral element, as a Poly
    /// of degree < deg pi (numerator times inverse denominator mod pi).
    Poly residue(const Poly& pi) const {
        if (is_zero()) return Poly::zero(field());
        if (!num_.is_zero() && valuation(pi) < 0) throw InputError("residue of a non-integral element");
        Poly n = num_ % pi;
        Poly d = den_ % pi;
        return (n * poly_invmod(d, pi)) % pi;
    }

    /// Laurent expansion at infinity, correct down to target_precision.
    LaurentSeries expand_at_infinity(int target_precision) const {
        LaurentSeries n = LaurentSeries::from_poly(num_);
        if (num_.is_zero()) return LaurentSeries::zero(field());
        if (den_.is_constant()) return field().inv(den_.lc()) * n;
        LaurentSeries di = laurent_invert(LaurentSeries::from_poly(den_),
                                          target_precision - num_.deg().value() - 1);
        return (n * di).truncated(target_precision);
    }

    std::string to_string() const {
        if (is_poly()) return num_.to_string();
        return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
    }

   private:
    static int val(const Poly& f, const Poly& pi) {
        Poly g = f;
        int v = 0;
        while (true) {
            auto [q, r] = g.divmod(pi);
            if (!r.is_zero()) return v;
            g = q;
            ++v;
        }
    }
    void normalize() {
        const Fq& F = num_.field();
        if (num_.is_zero()) {
            den_ = Poly::one(F);
            return;
        }
        Poly g = poly_gcd(num_, den_);
        if (g.deg() > 0) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        FqElem il = F.inv(den_.lc());
        num_ = il * num_;
        den_ = il * den_;
    }

    Poly num_, den_;
};

}  // namespace ffqlat
