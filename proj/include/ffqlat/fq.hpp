#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace ffqlat {

/// An element of F_q, identified by its canonical index.
///
/// Prime field: the index is the residue 0..p-1. Extension field F_{p^e}:
/// the element c_0 + c_1*x + ... + c_{e-1}*x^{e-1} (x = class of the modulus
/// variable) has index c_0 + c_1*p + ... + c_{e-1}*p^{e-1}.
struct FqElem {
    uint16_t v = 0;
    friend bool operator==(FqElem a, FqElem b) { return a.v == b.v; }
    friend bool operator!=(FqElem a, FqElem b) { return a.v != b.v; }
    friend bool operator<(FqElem a, FqElem b) { return a.v < b.v; }
};

namespace detail {

// Plain F_p[x] arithmetic on coefficient vectors, used only while building
// field tables and checking modulus irreducibility.
inline std::vector<int> fpx_trim(std::vector<int> a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

inline std::vector<int> fpx_mulmod(const std::vector<int>& a, const std::vector<int>& b,
                                   const std::vector<int>& mod, int p) {
    std::vector<int> prod(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    // reduce by the monic modulus
    int dm = static_cast<int>(mod.size()) - 1;
    for (int i = static_cast<int>(prod.size()) - 1; i >= dm; --i) {
        int c = prod[i];
        if (c == 0) continue;
        prod[i] = 0;
        for (int j = 0; j < dm; ++j) prod[i - dm + j] = ((prod[i - dm + j] - c * mod[j]) % p + p) % p;
    }
    prod.resize(dm);
    return prod;
}

inline std::vector<int> fpx_powmod(std::vector<int> base, unsigned long long exp,
                                   const std::vector<int>& mod, int p) {
    std::vector<int> r{1};
    r.resize(mod.size() - 1, 0);
    base.resize(mod.size() - 1, 0);
    while (exp) {
        if (exp & 1) r = fpx_mulmod(r, base, mod, p);
        base = fpx_mulmod(base, base, mod, p);
        exp >>= 1;
    }
    return r;
}

inline std::vector<int> fpx_gcd(std::vector<int> a, std::vector<int> b, int p) {
    a = fpx_trim(std::move(a));
    b = fpx_trim(std::move(b));
    while (!b.empty()) {
        // a mod b
        int db = static_cast<int>(b.size()) - 1;
        int invlb = 1;
        for (int i = 1; i < p; ++i)
            if (b[db] * i % p == 1) invlb = i;
        while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
            int da = static_cast<int>(a.size()) - 1;
            int c = a[da] * invlb % p;
            for (int j = 0; j <= db; ++j) a[da - db + j] = ((a[da - db + j] - c * b[j]) % p + p) % p;
            a = fpx_trim(std::move(a));
        }
        std::swap(a, b);
    }
    return a;
}

inline bool fpx_irreducible(const std::vector<int>& mod, int p) {
    int e = static_cast<int>(mod.size()) - 1;
    if (e <= 0) return false;
    // x^{p^e} == x mod f, and gcd(x^{p^{e/l}} - x, f) = 1 for prime l | e
    std::vector<int> x{0, 1};
    std::vector<int> frob = x;
    frob.resize(e, 0);
    std::vector<std::vector<int>> powers;  // powers[k] = x^{p^{k+1}} mod f
    for (int k = 0; k < e; ++k) {
        frob = fpx_powmod(frob, static_cast<unsigned long long>(p), mod, p);
        powers.push_back(frob);
    }
    std::vector<int> diff = powers[e - 1];
    diff.resize(e, 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    if (!fpx_trim(diff).empty()) return false;
    for (int l = 2; l <= e; ++l) {
        if (e % l != 0) continue;
        bool is_prime = true;
        for (int d = 2; d * d <= l; ++d)
            if (l % d == 0) is_prime = false;
        if (!is_prime) continue;
        std::vector<int> g = powers[e / l - 1];
        g.resize(e, 0);
        g[1] = ((g[1] - 1) % p + p) % p;
        auto gc = fpx_gcd(g, mod, p);
        if (!(gc.size() == 1)) return false;
    }
    return true;
}

}  // namespace detail

/// Field context for F_q, q = p^e with p odd. All element operations go
/// through this object; it is immutable after construction and safe to share
/// across threads. Never a global: callers pass it explicitly.
class Fq {
   public:
    /// Prime field F_p.
    explicit Fq(int p) : Fq(p, 1, {}) {}

    /// F_{p^e} with a monic irreducible modulus over F_p (coefficients
    /// little-endian, length e+1, leading coefficient 1). For e = 1 the
    /// modulus is ignored. Built-in moduli exist for q in {9, 25, 27, 49};
    /// see with_q().
    Fq(int p, int e, std::vector<int> modulus) : p_(p), e_(e) {
        if (p < 3 || !is_prime(p)) throw InputError("field characteristic must be an odd prime");
        if (e < 1 || e > 6) throw InputError("extension degree out of supported range 1..6");
        long long qq = 1;
        for (int i = 0; i < e; ++i) qq *= p;
        if (qq > kMaxQ) throw InputError("field order too large (max " + std::to_string(kMaxQ) + ")");
        q_ = static_cast<int>(qq);
        if (e == 1) {
            modulus_ = {0, 1};
        } else {
            if (static_cast<int>(modulus.size()) != e + 1 || modulus.back() != 1)
                throw InputError("modulus must be monic of degree e");
            for (int& c : modulus) c = ((c % p) + p) % p;
            if (!detail::fpx_irreducible(modulus, p))
                throw InputError("modulus polynomial is not irreducible over F_p");
            modulus_ = std::move(modulus);
        }
        build_tables();
    }

    /// Field of order q using the built-in modulus table for q in {9,25,27,49}
    /// (prime q needs no modulus).
    static Fq with_q(int q) {
        for (int pp = 2; pp * pp <= q; ++pp)
            if (q % pp == 0) {
                int e = 0;
                long long t = q;
                while (t % pp == 0) {
                    t /= pp;
                    ++e;
                }
                if (t != 1) throw InputError("field order must be a prime power");
                return Fq(pp, e, builtin_modulus(q));
            }
        return Fq(q);
    }

    static std::vector<int> builtin_modulus(int q) {
        switch (q) {
            case 9: return {2, 2, 1};      // x^2 + 2x + 2
            case 25: return {2, 4, 1};     // x^2 + 4x + 2
            case 27: return {1, 2, 0, 1};  // x^3 + 2x + 1
            case 49: return {3, 6, 1};     // x^2 + 6x + 3
            default:
                throw InputError("no built-in modulus for q = " + std::to_string(q) +
                                 "; supply one explicitly");
        }
    }

    int p() const { return p_; }
    int e() const { return e_; }
    int q() const { return q_; }
    const std::vector<int>& modulus() const { return modulus_; }

    FqElem zero() const { return {0}; }
    FqElem one() const { return {1}; }
    /// The canonical non-square: least index failing the Euler criterion.
    FqElem delta() const { return delta_; }

    FqElem from_int(long long n) const {
        if (e_ == 1) return {static_cast<uint16_t>(((n % p_) + p_) % p_)};
        // interpret n as an integer multiple of 1 in the prime subfield
        return {static_cast<uint16_t>(((n % p_) + p_) % p_)};
    }
    /// Element from its canonical index (0..q-1).
    FqElem from_index(int idx) const {
        if (idx < 0 || idx >= q_) throw InputError("element index out of range");
        return {static_cast<uint16_t>(idx)};
    }

    FqElem add(FqElem a, FqElem b) const { return {add_[a.v * q_ + b.v]}; }
    FqElem sub(FqElem a, FqElem b) const { return {add_[a.v * q_ + neg_[b.v]]}; }
    FqElem mul(FqElem a, FqElem b) const { return {mul_[a.v * q_ + b.v]}; }
    FqElem neg(FqElem a) const { return {neg_[a.v]}; }
    FqElem inv(FqElem a) const {
        if (a.v == 0) throw InputError("division by zero in F_q");
        return {inv_[a.v]};
    }
    FqElem div(FqElem a, FqElem b) const { return mul(a, inv(b)); }
    FqElem half(FqElem a) const { return mul(a, half_); }
    FqElem two() const { return add(one(), one()); }

    /// Frobenius x -> x^p.
    FqElem frobenius(FqElem a) const { return {frob_[a.v]}; }
    /// Trace to the prime field, as an integer 0..p-1.
    int trace(FqElem a) const { return trace_[a.v]; }
    /// Quadratic character: +1 on nonzero squares, -1 on non-squares, 0 at 0.
    int chi(FqElem a) const { return chi_[a.v]; }
    bool is_square(FqElem a) const { return chi_[a.v] >= 0; }

    FqElem pow(FqElem a, long long n) const {
        if (n < 0) {
            a = inv(a);
            n = -n;
        }
        FqElem r = one();
        while (n) {
            if (n & 1) r = mul(r, a);
            a = mul(a, a);
            n >>= 1;
        }
        return r;
    }

    /// Coefficient vector over F_p (ascending powers of the generator).
    std::vector<int> coords(FqElem a) const {
        std::vector<int> c(e_);
        int v = a.v;
        for (int i = 0; i < e_; ++i) {
            c[i] = v % p_;
            v /= p_;
        }
        return c;
    }

    std::string to_string(FqElem a) const { return std::to_string(a.v); }

    bool same_as(const Fq& other) const {
        return p_ == other.p_ && e_ == other.e_ && modulus_ == other.modulus_;
    }

    // Raw table access for hot loops.
    const uint16_t* add_table() const { return add_.data(); }
    const uint16_t* mul_table() const { return mul_.data(); }
    const uint16_t* neg_table() const { return neg_.data(); }
    const uint8_t* trace_table() const { return trace_.data(); }

    static constexpr int kMaxQ = 512;

   private:
    static bool is_prime(int n) {
        if (n < 2) return false;
        for (int d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    void build_tables() {
        add_.resize(static_cast<size_t>(q_) * q_);
        mul_.resize(static_cast<size_t>(q_) * q_);
        neg_.resize(q_);
        inv_.resize(q_);
        frob_.resize(q_);
        trace_.resize(q_);
        chi_.resize(q_);

        auto to_vec = [&](int idx) {
            std::vector<int> c(e_);
            for (int i = 0; i < e_; ++i) {
                c[i] = idx % p_;
                idx /= p_;
            }
            return c;
        };
        auto to_idx = [&](const std::vector<int>& c) {
            int idx = 0;
            for (int i = e_ - 1; i >= 0; --i) idx = idx * p_ + (i < static_cast<int>(c.size()) ? c[i] : 0);
            return idx;
        };

        for (int a = 0; a < q_; ++a) {
            auto va = to_vec(a);
            for (int b = 0; b < q_; ++b) {
                auto vb = to_vec(b);
                std::vector<int> s(e_);
                for (int i = 0; i < e_; ++i) s[i] = (va[i] + vb[i]) % p_;
                add_[static_cast<size_t>(a) * q_ + b] = static_cast<uint16_t>(to_idx(s));
                auto prod = detail::fpx_mulmod(va, vb, modulus_, p_);
                mul_[static_cast<size_t>(a) * q_ + b] = static_cast<uint16_t>(to_idx(prod));
            }
            std::vector<int> n(e_);
            for (int i = 0; i < e_; ++i) n[i] = (p_ - va[i]) % p_;
            neg_[a] = static_cast<uint16_t>(to_idx(n));
        }
        inv_[0] = 0;
        for (int a = 1; a < q_; ++a)
            for (int b = 1; b < q_; ++b)
                if (mul_[static_cast<size_t>(a) * q_ + b] == 1) inv_[a] = static_cast<uint16_t>(b);
        for (int a = 0; a < q_; ++a) {
            // a^p by square-and-multiply
            uint16_t f = 1, cur = static_cast<uint16_t>(a);
            int ex = p_;
            while (ex) {
                if (ex & 1) f = mul_[static_cast<size_t>(f) * q_ + cur];
                cur = mul_[static_cast<size_t>(cur) * q_ + cur];
                ex >>= 1;
            }
            frob_[a] = f;
        }
        for (int a = 0; a < q_; ++a) {
            // trace = a + a^p + ... + a^{p^{e-1}}
            uint16_t acc = static_cast<uint16_t>(a), cur = static_cast<uint16_t>(a);
            for (int i = 1; i < e_; ++i) {
                cur = frob_[cur];
                acc = add_[static_cast<size_t>(acc) * q_ + cur];
            }
            if (acc >= static_cast<uint16_t>(p_)) throw Error("internal: trace left the prime field");
            trace_[a] = static_cast<uint8_t>(acc);
        }
        // Euler criterion
        chi_[0] = 0;
        for (int a = 1; a < q_; ++a) {
            uint16_t r = 1, cur = static_cast<uint16_t>(a);
            long long ex = (q_ - 1) / 2;
            while (ex) {
                if (ex & 1) r = mul_[static_cast<size_t>(r) * q_ + cur];
                cur = mul_[static_cast<size_t>(cur) * q_ + cur];
                ex >>= 1;
            }
            chi_[a] = (r == 1) ? 1 : -1;
        }
        delta_ = {0};
        for (int a = 2; a < q_; ++a)
            if (chi_[a] < 0) {
                delta_ = {static_cast<uint16_t>(a)};
                break;
            }
        if (delta_.v == 0) throw Error("internal: no non-square found");
        half_ = inv(from_int(2));
    }

    int p_, e_, q_;
    std::vector<int> modulus_;
    std::vector<uint16_t> add_, mul_, neg_, inv_, frob_;
    std::vector<uint8_t> trace_;
    std::vector<int8_t> chi_;
    FqElem delta_{0}, half_{0};
};

}  // namespace ffqlat
