#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fq.hpp"

namespace ffqlat {

/// Degree of a polynomial. deg(0) is a distinguished value below every
/// integer, never -1; comparisons and + treat it accordingly.
class Degree {
   public:
    constexpr Degree() : finite_(false), v_(0) {}
    constexpr explicit Degree(int v) : finite_(true), v_(v) {}
    static constexpr Degree neg_inf() { return Degree(); }

    constexpr bool finite() const { return finite_; }
    constexpr int value() const {
        assert(finite_);
        return v_;
    }
    /// value() with a fallback for deg(0), for contexts that need an int.
    constexpr int value_or(int fallback) const { return finite_ ? v_ : fallback; }

    friend constexpr bool operator==(Degree a, Degree b) {
        return a.finite_ == b.finite_ && (!a.finite_ || a.v_ == b.v_);
    }
    friend constexpr bool operator!=(Degree a, Degree b) { return !(a == b); }
    friend constexpr bool operator<(Degree a, Degree b) {
        if (!a.finite_) return b.finite_;
        if (!b.finite_) return false;
        return a.v_ < b.v_;
    }
    friend constexpr bool operator<=(Degree a, Degree b) { return a < b || a == b; }
    friend constexpr bool operator>(Degree a, Degree b) { return b < a; }
    friend constexpr bool operator>=(Degree a, Degree b) { return b <= a; }
    friend constexpr bool operator<(Degree a, int b) { return !a.finite_ || a.v_ < b; }
    friend constexpr bool operator<=(Degree a, int b) { return !a.finite_ || a.v_ <= b; }
    friend constexpr bool operator>(Degree a, int b) { return a.finite_ && a.v_ > b; }
    friend constexpr bool operator>=(Degree a, int b) { return a.finite_ && a.v_ >= b; }
    friend constexpr bool operator==(Degree a, int b) { return a.finite_ && a.v_ == b; }
    friend constexpr Degree operator+(Degree a, Degree b) {
        if (!a.finite_ || !b.finite_) return neg_inf();
        return Degree(a.v_ + b.v_);
    }
    friend constexpr Degree operator+(Degree a, int b) {
        return a.finite_ ? Degree(a.v_ + b) : neg_inf();
    }

   private:
    bool finite_;
    int v_;
};

/// Element of A = F_q[t], dense little-endian coefficients, leading
/// coefficient nonzero unless zero polynomial.
class Poly {
   public:
    Poly() : F_(nullptr) {}
    explicit Poly(const Fq& F) : F_(&F) {}
    Poly(const Fq& F, std::vector<FqElem> coeffs) : F_(&F), c_(std::move(coeffs)) { trim(); }
    /// Polynomial from integer coefficients (little-endian, mapped through
    /// the prime subfield).
    Poly(const Fq& F, std::initializer_list<long long> ints) : F_(&F) {
        for (long long n : ints) c_.push_back(F.from_int(n));
        trim();
    }

    static Poly zero(const Fq& F) { return Poly(F); }
    static Poly constant(const Fq& F, FqElem a) {
        Poly r(F);
        if (a.v != 0) r.c_ = {a};
        return r;
    }
    static Poly one(const Fq& F) { return constant(F, F.one()); }
    /// c * t^k
    static Poly monomial(const Fq& F, FqElem cc, int k) {
        Poly r(F);
        if (cc.v != 0) {
            r.c_.assign(k + 1, F.zero());
            r.c_[k] = cc;
        }
        return r;
    }
    static Poly t(const Fq& F) { return monomial(F, F.one(), 1); }

    const Fq& field() const {
        assert(F_);
        return *F_;
    }
    bool is_zero() const { return c_.empty(); }
    Degree deg() const { return c_.empty() ? Degree::neg_inf() : Degree(static_cast<int>(c_.size()) - 1); }
    FqElem lc() const { return c_.empty() ? FqElem{0} : c_.back(); }
    FqElem coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return {0};
        return c_[i];
    }
    const std::vector<FqElem>& coeffs() const { return c_; }
    bool is_monic() const { return !c_.empty() && c_.back() == F_->one(); }
    bool is_constant() const { return c_.size() <= 1; }

    FqElem eval(FqElem x) const {
        FqElem r = F_->zero();
        for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) r = F_->add(F_->mul(r, x), c_[i]);
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        a.check(b);
        Poly r(*a.F_);
        r.c_.resize(std::max(a.c_.size(), b.c_.size()), a.F_->zero());
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.F_->add(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)));
        r.trim();
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        a.check(b);
        Poly r(*a.F_);
        r.c_.resize(std::max(a.c_.size(), b.c_.size()), a.F_->zero());
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.F_->sub(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)));
        r.trim();
        return r;
    }
    Poly operator-() const {
        Poly r = *this;
        for (auto& x : r.c_) x = F_->neg(x);
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check(b);
        Poly r(*a.F_);
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, a.F_->zero());
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].v == 0) continue;
            for (size_t j = 0; j < b.c_.size(); ++j)
                r.c_[i + j] = a.F_->add(r.c_[i + j], a.F_->mul(a.c_[i], b.c_[j]));
        }
        r.trim();
        return r;
    }
    friend Poly operator*(FqElem s, const Poly& a) {
        Poly r = a;
        for (auto& x : r.c_) x = a.F_->mul(s, x);
        r.trim();
        return r;
    }
    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.F_ && b.F_) a.check(b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /// Division with remainder: *this = q*b + r, deg r < deg b.
    std::pair<Poly, Poly> divmod(const Poly& b) const {
        check(b);
        if (b.is_zero()) throw InputError("polynomial division by zero");
        Poly rem = *this, quot(*F_);
        if (deg() < b.deg()) return {quot, rem};
        quot.c_.assign(c_.size() - b.c_.size() + 1, F_->zero());
        FqElem ilb = F_->inv(b.lc());
        while (!rem.is_zero() && rem.deg() >= b.deg()) {
            int shift = rem.deg().value() - b.deg().value();
            FqElem f = F_->mul(rem.lc(), ilb);
            quot.c_[shift] = f;
            // rem -= f * t^shift * b
            for (size_t i = 0; i < b.c_.size(); ++i)
                rem.c_[shift + i] = F_->sub(rem.c_[shift + i], F_->mul(f, b.c_[i]));
            rem.trim();
        }
        quot.trim();
        return {quot, rem};
    }
    Poly operator/(const Poly& b) const { return divmod(b).first; }
    Poly operator%(const Poly& b) const { return divmod(b).second; }

    Poly monic() const {
        if (is_zero()) return *this;
        return F_->inv(lc()) * *this;
    }

    /// Formal derivative.
    Poly derivative() const {
        Poly r(*F_);
        if (c_.size() <= 1) return r;
        r.c_.resize(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i)
            r.c_[i - 1] = F_->mul(F_->from_int(static_cast<long long>(i)), c_[i]);
        r.trim();
        return r;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) {
            if (c_[i].v == 0) continue;
            if (!s.empty()) s += "+";
            bool unit_coeff = (c_[i].v == 1);
            if (i == 0 || !unit_coeff) s += F_->to_string(c_[i]);
            if (i > 0) {
                if (!unit_coeff) s += "*";
                s += "t";
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s;
    }

    /// Total order: by degree, then coefficient indices from the top down.
    friend bool operator<(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
        for (int i = static_cast<int>(a.c_.size()) - 1; i >= 0; --i)
            if (a.c_[i].v != b.c_[i].v) return a.c_[i].v < b.c_[i].v;
        return false;
    }

   private:
    void trim() {
        while (!c_.empty() && c_.back().v == 0) c_.pop_back();
    }
    void check(const Poly& b) const {
        assert(F_ && b.F_);
        if (F_ != b.F_ && !F_->same_as(*b.F_)) throw FieldMismatchError("polynomials over different fields");
    }

    const Fq* F_;
    std::vector<FqElem> c_;
};

inline std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) { return a.divmod(b); }

inline Poly poly_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Extended gcd: returns (g, u, v) monic g with u*a + v*b = g.
inline std::tuple<Poly, Poly, Poly> poly_xgcd(const Poly& a, const Poly& b) {
    const Fq& F = a.field();
    Poly r0 = a, r1 = b;
    Poly s0 = Poly::one(F), s1 = Poly::zero(F);
    Poly t0 = Poly::zero(F), t1 = Poly::one(F);
    while (!r1.is_zero()) {
        auto [q, r2] = r0.divmod(r1);
        Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    FqElem il = F.inv(r0.lc());
    return {il * r0, il * s0, il * t0};
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& mod) { return (a * b) % mod; }

inline Poly poly_powmod(Poly base, unsigned long long n, const Poly& mod) {
    Poly r = Poly::one(base.field()) % mod;
    base = base % mod;
    while (n) {
        if (n & 1) r = poly_mulmod(r, base, mod);
        base = poly_mulmod(base, base, mod);
        n >>= 1;
    }
    return r;
}

/// Inverse of a mod m (gcd(a, m) = 1), else InputError.
inline Poly poly_invmod(const Poly& a, const Poly& m) {
    auto [g, u, v] = poly_xgcd(a % m, m);
    if (!(g == Poly::one(a.field()))) throw InputError("element not invertible modulo " + m.to_string());
    return u % m;
}

/// t^{q^k} mod f via iterated q-power maps.
inline Poly poly_t_qpow_mod(const Poly& f, int k) {
    const Fq& F = f.field();
    Poly x = Poly::t(F) % f;
    for (int i = 0; i < k; ++i) x = poly_powmod(x, static_cast<unsigned long long>(F.q()), f);
    return x;
}

/// Irreducibility over F_q: deg d >= 1, t^{q^d} = t mod f and
/// gcd(t^{q^{d/l}} - t, f) = 1 for every prime l | d.
inline bool poly_irreducible(const Poly& f) {
    if (!f.deg().finite() || f.deg().value() < 1) return false;
    int d = f.deg().value();
    const Fq& F = f.field();
    Poly x = Poly::t(F) % f;
    std::vector<Poly> qpowers;  // t^{q^{i+1}} mod f
    Poly cur = x;
    for (int i = 0; i < d; ++i) {
        cur = poly_powmod(cur, static_cast<unsigned long long>(F.q()), f);
        qpowers.push_back(cur);
    }
    if (!((qpowers[d - 1] - x) % f == Poly::zero(F))) return false;
    for (int l = 2; l <= d; ++l) {
        if (d % l != 0) continue;
        bool prime = true;
        for (int m = 2; m * m <= l; ++m)
            if (l % m == 0) prime = false;
        if (!prime) continue;
        Poly g = poly_gcd(qpowers[d / l - 1] - x, f);
        if (!(g == Poly::one(F))) return false;
    }
    return true;
}

}  // namespace ffqlat
