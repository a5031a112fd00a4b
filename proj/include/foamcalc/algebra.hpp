// Exact scalar arithmetic for the foam calculator: arbitrary-precision
// rationals and sparse Laurent polynomials in q (and in q,t).
//
// Everything in the engine is computed over Q; there is no floating point
// anywhere. Rational wraps GMP's mpq_class, which keeps values canonical
// (lowest terms, positive denominator).

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>

namespace foamcalc {

class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(long n, long d) : v_(n, d) { v_.canonicalize(); }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    static Rational fromString(const std::string& s) {
        mpq_class q(s);
        q.canonicalize();
        return Rational(q);
    }

    bool isZero() const { return sgn(v_) == 0; }
    bool isOne() const { return v_ == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) { v_ /= o.v_; return *this; }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

    // Canonical "p" or "p/q" rendering.
    std::string str() const {
        std::ostringstream os;
        os << v_;
        return os.str();
    }

    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

// Sparse univariate Laurent polynomial in q with Rational coefficients.
// Invariant: no zero coefficients are stored.
class LaurentPoly {
public:
    using Terms = std::map<int, Rational>;

    LaurentPoly() = default;
    explicit LaurentPoly(const Rational& c) {
        if (!c.isZero()) terms_[0] = c;
    }

    static LaurentPoly monomial(int qExp, const Rational& c = Rational(1)) {
        LaurentPoly p;
        if (!c.isZero()) p.terms_[qExp] = c;
        return p;
    }

    // The quantum integer [n] = (q^n - q^-n)/(q - q^-1) = q^{n-1} + q^{n-3} + ... + q^{1-n}.
    static LaurentPoly quantumInt(int n) {
        LaurentPoly p;
        for (int e = 1 - n; e <= n - 1; e += 2) p.terms_[e] = Rational(1);
        return p;
    }

    bool isZero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }

    Rational coeff(int qExp) const {
        auto it = terms_.find(qExp);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add(int qExp, const Rational& c) {
        if (c.isZero()) return;
        auto it = terms_.find(qExp);
        if (it == terms_.end()) {
            terms_[qExp] = c;
        } else {
            it->second += c;
            if (it->second.isZero()) terms_.erase(it);
        }
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.terms_) add(e, c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.terms_) add(e, -c);
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add(ea + eb, ca * cb);
        return r;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    // Terms sorted by q-exponent ascending, e.g. "q^-2 + 1 + q^2".
    std::string str() const;

private:
    Terms terms_;
};

// Sparse polynomial in t and q; the Poincare polynomials of the homology
// live here. Substituting t = -1 recovers a LaurentPoly.
class BiPoly {
public:
    struct Key {
        int tExp;
        int qExp;
        auto operator<=>(const Key&) const = default;
    };
    using Terms = std::map<Key, Rational>;

    BiPoly() = default;

    static BiPoly monomial(int tExp, int qExp, const Rational& c = Rational(1)) {
        BiPoly p;
        if (!c.isZero()) p.terms_[{tExp, qExp}] = c;
        return p;
    }
    static BiPoly fromLaurent(const LaurentPoly& l, int tExp = 0) {
        BiPoly p;
        for (const auto& [e, c] : l.terms()) p.terms_[{tExp, e}] = c;
        return p;
    }

    bool isZero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }

    Rational coeff(int tExp, int qExp) const {
        auto it = terms_.find({tExp, qExp});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add(int tExp, int qExp, const Rational& c) {
        if (c.isZero()) return;
        Key k{tExp, qExp};
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_[k] = c;
        } else {
            it->second += c;
            if (it->second.isZero()) terms_.erase(it);
        }
    }

    BiPoly& operator+=(const BiPoly& o) {
        for (const auto& [k, c] : o.terms_) add(k.tExp, k.qExp, c);
        return *this;
    }
    friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }

    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        BiPoly r;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_)
                r.add(ka.tExp + kb.tExp, ka.qExp + kb.qExp, ca * cb);
        return r;
    }
    BiPoly& operator*=(const BiPoly& o) { return *this = *this * o; }

    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

    // Substitute a rational value for t; t = -1 gives the graded Euler
    // characteristic of whatever this is the Poincare polynomial of.
    LaurentPoly evalT(const Rational& t0) const {
        LaurentPoly r;
        for (const auto& [k, c] : terms_) {
            Rational tp(1);
            int n = k.tExp >= 0 ? k.tExp : -k.tExp;
            for (int i = 0; i < n; ++i) tp *= t0;
            if (k.tExp < 0) tp = Rational(1) / tp;
            r.add(k.qExp, c * tp);
        }
        return r;
    }

    // Terms sorted by (t-exponent, q-exponent) ascending, e.g.
    // "q^4 + q^8*t^2 + q^12*t^3".
    std::string str() const;

private:
    Terms terms_;
};

namespace detail {
// Renders one monomial c * q^qe * t^te (te omitted when absent).
std::string renderTerm(const Rational& c, int qExp, bool hasT, int tExp);
}  // namespace detail

}  // namespace foamcalc
