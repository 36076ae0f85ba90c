#pragma once

#include <limits>
#include <map>
#include <string>

#include "poly.hpp"

namespace ffqlat {

/// Truncated element of K_infinity = F_q((1/t)): finitely many positive
/// powers of t, tail extending downward. `prec` is the lowest exponent
/// guaranteed correct; reading below it is a hard error, not a zero.
/// Polynomials embed exactly (no unknown tail).
class LaurentSeries {
   public:
    LaurentSeries() : F_(nullptr), exact_(true), prec_(0) {}
    explicit LaurentSeries(const Fq& F) : F_(&F), exact_(true), prec_(0) {}

    static LaurentSeries from_poly(const Poly& f) {
        LaurentSeries s(f.field());
        for (int i = 0; i <= f.deg().value_or(-1); ++i)
            if (f.coeff(i).v != 0) s.c_[i] = f.coeff(i);
        return s;
    }
    static LaurentSeries zero(const Fq& F) { return LaurentSeries(F); }
    /// c * t^k, exact.
    static LaurentSeries monomial(const Fq& F, FqElem c, int k) {
        LaurentSeries s(F);
        if (c.v != 0) s.c_[k] = c;
        return s;
    }

    const Fq& field() const { return *F_; }
    bool exact() const { return exact_; }
    /// Lowest exponent guaranteed correct (meaningless if exact()).
    int precision() const { return prec_; }

    bool known_zero() const { return exact_ && c_.empty(); }

    /// Highest known nonzero exponent. Requires a known nonzero term or an
    /// exact zero (in which case Degree::neg_inf()).
    Degree top() const {
        if (!c_.empty()) return Degree(c_.rbegin()->first);
        if (exact_) return Degree::neg_inf();
        throw PrecisionError("series has no known nonzero term above its precision");
    }

    FqElem coeff(int i) const {
        if (!exact_ && i < prec_)
            throw PrecisionError("coefficient request at exponent " + std::to_string(i) +
                                 " below tracked precision " + std::to_string(prec_));
        auto it = c_.find(i);
        return it == c_.end() ? FqElem{0} : it->second;
    }

    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
        a.check(b);
        LaurentSeries r(*a.F_);
        r.exact_ = a.exact_ && b.exact_;
        if (!r.exact_) {
            r.prec_ = std::numeric_limits<int>::min();
            if (!a.exact_) r.prec_ = std::max(r.prec_, a.prec_);
            if (!b.exact_) r.prec_ = std::max(r.prec_, b.prec_);
        }
        r.c_ = a.c_;
        for (auto& [i, v] : b.c_) {
            FqElem s = a.F_->add(r.coeff_raw(i), v);
            if (s.v == 0)
                r.c_.erase(i);
            else
                r.c_[i] = s;
        }
        r.drop_below_precision();
        return r;
    }
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }
    LaurentSeries operator-() const {
        LaurentSeries r = *this;
        for (auto& [i, v] : r.c_) v = F_->neg(v);
        return r;
    }

    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
        a.check(b);
        LaurentSeries r(*a.F_);
        // Unknown-tail interactions bound the sound range of the product.
        r.exact_ = a.exact_ && b.exact_;
        if (!r.exact_) {
            long long pr = std::numeric_limits<long long>::min();
            if (!a.exact_ && b.top_bound() != std::numeric_limits<int>::min())
                pr = std::max(pr, static_cast<long long>(a.prec_) + b.top_bound());
            if (!b.exact_ && a.top_bound() != std::numeric_limits<int>::min())
                pr = std::max(pr, static_cast<long long>(b.prec_) + a.top_bound());
            if (pr == std::numeric_limits<long long>::min()) {
                r.exact_ = true;  // the only unknown tails multiply exact zeros
            } else {
                r.prec_ = static_cast<int>(pr);
            }
        }
        for (auto& [i, x] : a.c_)
            for (auto& [j, y] : b.c_) {
                if (!r.exact_ && i + j < r.prec_) continue;
                FqElem s = a.F_->add(r.coeff_raw(i + j), a.F_->mul(x, y));
                if (s.v == 0)
                    r.c_.erase(i + j);
                else
                    r.c_[i + j] = s;
            }
        r.drop_below_precision();
        return r;
    }
    friend LaurentSeries operator*(FqElem s, const LaurentSeries& a) {
        LaurentSeries r = a;
        if (s.v == 0) return a.exact_ ? zero(*a.F_) : truncate_zero(*a.F_, a.prec_);
        for (auto& [i, v] : r.c_) v = a.F_->mul(s, v);
        return r;
    }

    /// Multiply by t^k.
    LaurentSeries shifted(int k) const {
        LaurentSeries r(*F_);
        r.exact_ = exact_;
        r.prec_ = exact_ ? 0 : prec_ + k;
        for (auto& [i, v] : c_) r.c_[i + k] = v;
        return r;
    }

    /// Drop knowledge below new_prec (marks the series inexact).
    LaurentSeries truncated(int new_prec) const {
        LaurentSeries r = *this;
        if (r.exact_ || new_prec > r.prec_) {
            r.exact_ = false;
            r.prec_ = new_prec;
        }
        r.drop_below_precision();
        return r;
    }

    static LaurentSeries truncate_zero(const Fq& F, int prec) {
        LaurentSeries r(F);
        r.exact_ = false;
        r.prec_ = prec;
        return r;
    }

    std::string to_string() const {
        std::string s;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            if (!s.empty()) s += "+";
            s += F_->to_string(it->second);
            if (it->first != 0) s += "*t^" + std::to_string(it->first);
        }
        if (s.empty()) s = "0";
        if (!exact_) s += " + O(t^" + std::to_string(prec_ - 1) + ")";
        return s;
    }

    const std::map<int, FqElem>& known_coeffs() const { return c_; }

   private:
    FqElem coeff_raw(int i) const {
        auto it = c_.find(i);
        return it == c_.end() ? FqElem{0} : it->second;
    }
    int top_bound() const {
        int t = c_.empty() ? std::numeric_limits<int>::min() : c_.rbegin()->first;
        if (!exact_) t = std::max(t, prec_ - 1);
        return t;
    }
    void drop_below_precision() {
        if (exact_) return;
        for (auto it = c_.begin(); it != c_.end();)
            if (it->first < prec_)
                it = c_.erase(it);
            else
                ++it;
    }
    void check(const LaurentSeries& b) const {
        assert(F_ && b.F_);
        if (F_ != b.F_ && !F_->same_as(*b.F_)) throw FieldMismatchError("series over different fields");
    }

    const Fq* F_;
    bool exact_;
    int prec_;
    std::map<int, FqElem> c_;  // exponent -> nonzero coefficient
};

/// Inverse of x computed so that x * result = 1 down to target_precision.
inline LaurentSeries laurent_invert(const LaurentSeries& x, int target_precision) {
    const Fq& F = x.field();
    if (x.known_zero()) throw InputError("inverting the zero series");
    Degree dtop = x.top();  // throws if no known leading term
    int d = dtop.value();
    FqElem c = x.coeff(d);
    // x = c t^d (1 + eps), eps strictly lower order; invert by geometric series.
    LaurentSeries eps(F);
    {
        FqElem ic = F.inv(c);
        LaurentSeries unit = LaurentSeries::monomial(F, ic, -d);
        eps = (unit * x) - LaurentSeries::monomial(F, F.one(), 0);
    }
    int rel = target_precision + d;  // required relative precision of (1+eps)^{-1}
    LaurentSeries acc = LaurentSeries::monomial(F, F.one(), 0);
    LaurentSeries term = acc;
    LaurentSeries neg_eps = -eps;
    if (!neg_eps.known_zero()) {
        int steps = 0;
        while (true) {
            term = (term * neg_eps).truncated(rel);
            if (term.known_coeffs().empty()) break;
            acc = acc + term;
            if (++steps > 4 * (std::abs(target_precision) + std::abs(d) + 4))
                throw PrecisionError("geometric series for inversion failed to terminate");
        }
    }
    if (x.exact() && neg_eps.known_zero())
        return LaurentSeries::monomial(F, F.inv(c), -d);  // exact monomial inverse
    LaurentSeries r = LaurentSeries::monomial(F, F.inv(c), -d) * acc;
    // Unknown tail of x limits the inverse to exponents >= prec(x) - 2d.
    int rp = target_precision;
    if (!x.exact()) rp = std::max(rp, x.precision() - 2 * d);
    return r.truncated(rp);
}

}  // namespace ffqlat
