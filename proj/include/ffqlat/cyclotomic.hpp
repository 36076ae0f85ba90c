#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace ffqlat {

/// Exact element of Z[zeta_p]: integer coordinates in the power basis
/// zeta^0 .. zeta^{p-2}, reduced by 1 + zeta + ... + zeta^{p-1} = 0.
/// Canonical form is unique, so equality is coefficient-wise.
class CycValue {
   public:
    CycValue() : p_(0) {}
    explicit CycValue(int p) : p_(p), c_(p - 1, 0) {}
    static CycValue integer(int p, long long n) {
        CycValue r(p);
        r.c_[0] = n;
        return r;
    }
    /// zeta_p^k
    static CycValue root(int p, long long k) {
        CycValue r(p);
        r.add_root(k, 1);
        return r;
    }

    int p() const { return p_; }
    const std::vector<long long>& coords() const { return c_; }

    /// Add n * zeta^k in place (k arbitrary integer).
    void add_root(long long k, long long n) {
        int kk = static_cast<int>(((k % p_) + p_) % p_);
        if (kk < p_ - 1) {
            c_[kk] += n;
        } else {
            // zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})
            for (int j = 0; j < p_ - 1; ++j) c_[j] -= n;
        }
    }

    bool is_zero() const {
        for (auto x : c_)
            if (x != 0) return false;
        return true;
    }

    friend CycValue operator+(const CycValue& a, const CycValue& b) {
        a.check(b);
        CycValue r = a;
        for (int i = 0; i < a.p_ - 1; ++i) r.c_[i] += b.c_[i];
        return r;
    }
    friend CycValue operator-(const CycValue& a, const CycValue& b) {
        a.check(b);
        CycValue r = a;
        for (int i = 0; i < a.p_ - 1; ++i) r.c_[i] -= b.c_[i];
        return r;
    }
    CycValue operator-() const {
        CycValue r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend CycValue operator*(const CycValue& a, const CycValue& b) {
        a.check(b);
        CycValue r(a.p_);
        for (int i = 0; i < a.p_ - 1; ++i) {
            if (a.c_[i] == 0) continue;
            for (int j = 0; j < a.p_ - 1; ++j) {
                if (b.c_[j] == 0) continue;
                r.add_root(i + j, a.c_[i] * b.c_[j]);
            }
        }
        return r;
    }
    friend CycValue operator*(long long s, const CycValue& a) {
        CycValue r = a;
        for (auto& x : r.c_) x *= s;
        return r;
    }
    friend bool operator==(const CycValue& a, const CycValue& b) {
        a.check(b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const CycValue& a, const CycValue& b) { return !(a == b); }

    /// Complex conjugation zeta -> zeta^{-1}.
    CycValue conj() const {
        CycValue r(p_);
        for (int i = 0; i < p_ - 1; ++i)
            if (c_[i] != 0) r.add_root(-i, c_[i]);
        return r;
    }

    CycValue pow(int n) const {
        CycValue r = integer(p_, 1);
        for (int i = 0; i < n; ++i) r = r * *this;
        return r;
    }

    /// Embedding with zeta_p = exp(2*pi*i/p).
    std::complex<double> embed() const {
        std::complex<double> r = 0;
        for (int j = 0; j < p_ - 1; ++j) {
            if (c_[j] == 0) continue;
            double ang = 2.0 * M_PI * j / p_;
            r += static_cast<double>(c_[j]) * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        return r;
    }
    double abs() const { return std::abs(embed()); }

    std::string to_string() const {
        std::string s;
        for (int j = 0; j < p_ - 1; ++j) {
            if (c_[j] == 0) continue;
            if (!s.empty() && c_[j] > 0) s += "+";
            if (j == 0) {
                s += std::to_string(c_[j]);
            } else {
                if (c_[j] == -1)
                    s += "-";
                else if (c_[j] != 1)
                    s += std::to_string(c_[j]) + "*";
                s += "z" + std::to_string(p_);
                if (j > 1) s += "^" + std::to_string(j);
            }
        }
        return s.empty() ? "0" : s;
    }

   private:
    void check(const CycValue& b) const {
        if (p_ != b.p_) throw FieldMismatchError("cyclotomic values with different p");
    }
    int p_;
    std::vector<long long> c_;
};

/// A cyclotomic integer divided by an exact half-integer power of q:
/// value = sum / q^{q_half_power/2}. Covers the averages mu and the Weil
/// indices gamma, whose normalizations are q^{+-k/2}.
struct ScaledCycValue {
    CycValue sum;
    int q_half_power = 0;  // value = sum / q^{q_half_power/2}
    int q = 0;

    std::complex<double> embed() const {
        return sum.embed() / std::pow(static_cast<double>(q), q_half_power / 2.0);
    }
    double abs() const { return std::abs(embed()); }
    /// log_q of the magnitude (for audibility checks).
    double log_q_abs() const {
        double a = sum.abs();
        return std::log(a) / std::log(static_cast<double>(q)) - q_half_power / 2.0;
    }

    friend ScaledCycValue operator*(const ScaledCycValue& a, const ScaledCycValue& b) {
        return {a.sum * b.sum, a.q_half_power + b.q_half_power, a.q};
    }

    /// Exact when the scale parities agree, numeric (1e-9) otherwise.
    friend bool scaled_equal(const ScaledCycValue& a, const ScaledCycValue& b) {
        if (a.q != b.q) return false;
        if (((a.q_half_power - b.q_half_power) % 2) == 0) {
            CycValue x = a.sum, y = b.sum;
            int d = (b.q_half_power - a.q_half_power) / 2;
            long long scale = 1;
            for (int i = 0; i < std::abs(d); ++i) scale *= a.q;
            if (d > 0)
                x = scale * x;
            else if (d < 0)
                y = scale * y;
            return x == y;
        }
        return std::abs(a.embed() - b.embed()) < 1e-9;
    }
};

}  // namespace ffqlat
