#pragma once

#include <functional>
#include <ostream>
#include <sstream>
#include <string>

#include "qmirror/poly.hpp"

namespace qmirror {

/// Element of Q(s) in reduced form s^shift * num / den.
///
/// num has nonzero constant term (or is zero), den is a primitive integer
/// polynomial with positive leading coefficient and nonzero constant term,
/// and gcd(num, den) = 1. Zero is 0/1 with shift 0.
class QCoeff {
public:
    QCoeff() : den_(Poly::constant(1)) {}
    QCoeff(long v) : QCoeff(mpq_class(v)) {}
    QCoeff(const mpq_class& v) : den_(Poly::constant(1))
    {
        if (v != 0) num_ = Poly::constant(v);
    }

    /// a * s^e.
    static QCoeff monomial(const mpq_class& a, int e)
    {
        QCoeff r(a);
        if (a != 0) r.shift_ = e;
        return r;
    }
    static QCoeff s_pow(int e) { return monomial(1, e); }

    /// s^shift * num / den, reduced.
    static QCoeff fraction(int shift, Poly num, Poly den)
    {
        if (den.is_zero()) throw DivisionByZero();
        QCoeff r;
        if (num.is_zero()) return r;
        const int kn = num.low_order(), kd = den.low_order();
        r.shift_ = shift + kn - kd;
        r.num_ = num.shifted_down(kn);
        r.den_ = den.shifted_down(kd);
        r.reduce();
        return r;
    }

    /// Laurent polynomial sum_k c[k] s^(low + k).
    static QCoeff laurent(int low, std::vector<mpq_class> c)
    {
        return fraction(low, Poly(std::move(c)), Poly::constant(1));
    }

    bool is_zero() const { return num_.is_zero(); }
    bool is_laurent() const { return den_.is_one(); }
    int shift() const { return shift_; }
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool operator==(const QCoeff& o) const
    {
        return shift_ == o.shift_ && num_ == o.num_ && den_ == o.den_;
    }

    friend QCoeff operator+(const QCoeff& a, const QCoeff& b)
    {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const int lo = std::min(a.shift_, b.shift_);
        const Poly pa = Poly::monomial(1, a.shift_ - lo) * a.num_;
        const Poly pb = Poly::monomial(1, b.shift_ - lo) * b.num_;
        if (a.den_ == b.den_) return fraction(lo, pa + pb, a.den_);
        return fraction(lo, pa * b.den_ + pb * a.den_, a.den_ * b.den_);
    }

    QCoeff operator-() const
    {
        QCoeff r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend QCoeff operator-(const QCoeff& a, const QCoeff& b) { return a + (-b); }

    friend QCoeff operator*(const QCoeff& a, const QCoeff& b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_laurent() && b.is_laurent()) {
            QCoeff r;
            r.shift_ = a.shift_ + b.shift_;
            r.num_ = a.num_ * b.num_;
            return r;
        }
        return fraction(a.shift_ + b.shift_, a.num_ * b.num_, a.den_ * b.den_);
    }

    friend QCoeff operator/(const QCoeff& a, const QCoeff& b)
    {
        if (b.is_zero()) throw DivisionByZero();
        if (a.is_zero()) return {};
        return fraction(a.shift_ - b.shift_, a.num_ * b.den_, a.den_ * b.num_);
    }

    QCoeff& operator+=(const QCoeff& o) { return *this = *this + o; }
    QCoeff& operator-=(const QCoeff& o) { return *this = *this - o; }
    QCoeff& operator*=(const QCoeff& o) { return *this = *this * o; }
    QCoeff& operator/=(const QCoeff& o) { return *this = *this / o; }

    /// Value at s = 1.
    mpq_class classical_limit() const
    {
        if (is_zero()) return 0;
        const mpq_class d = den_.eval(1);
        if (d == 0) throw PoleError();
        return num_.eval(1) / d;
    }

    /// Image under s -> 1/s.
    QCoeff bar() const
    {
        if (is_zero()) return {};
        auto rev = [](const Poly& p) {
            std::vector<mpq_class> v(p.c.rbegin(), p.c.rend());
            return Poly(std::move(v));
        };
        return fraction(-shift_ - num_.degree() + den_.degree(), rev(num_), rev(den_));
    }

    std::string str() const
    {
        std::string n = poly_str(num_, shift_);
        if (den_.is_one()) return n;
        return "(" + n + ")/(" + poly_str(den_, 0) + ")";
    }

private:
    static std::string poly_str(const Poly& p, int shift)
    {
        if (p.is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int k = 0; k <= p.degree(); ++k) {
            const mpq_class& a = p.c[k];
            if (a == 0) continue;
            const int e = k + shift;
            mpq_class mag = abs(a);
            if (first) {
                if (a < 0) os << '-';
            } else {
                os << (a < 0 ? " - " : " + ");
            }
            first = false;
            if (e == 0) {
                os << mag.get_str();
            } else {
                if (mag != 1) os << mag.get_str() << '*';
                os << "s^" << e;
            }
        }
        return os.str();
    }

    void reduce()
    {
        if (!den_.is_one()) {
            const Poly g = gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = divmod(num_, g).first;
                den_ = divmod(den_, g).first;
            }
        }
        // Make den primitive in Z[s] with positive leading coefficient.
        mpz_class l = 1;
        for (const auto& x : den_.c) l = lcm(l, mpz_class(x.get_den()));
        mpz_class g = 0;
        for (const auto& x : den_.c) g = gcd(g, mpz_class(x.get_num() * (l / x.get_den())));
        mpq_class f(l, g);
        if (den_.lead() < 0) f = -f;
        f.canonicalize();
        if (f != 1) {
            den_ = f * den_;
            num_ = f * num_;
        }
    }

    int shift_ = 0;
    Poly num_;
    Poly den_;
};

inline std::ostream& operator<<(std::ostream& os, const QCoeff& q) { return os << q.str(); }

inline QCoeff pow(QCoeff a, int e)
{
    if (e < 0) return pow(QCoeff(1) / a, -e);
    QCoeff r(1);
    while (e > 0) {
        if (e & 1) r *= a;
        a *= a;
        e >>= 1;
    }
    return r;
}

/// s^k - s^-k.
inline QCoeff s_diff(int k) { return QCoeff::s_pow(k) - QCoeff::s_pow(-k); }

/// Quantum integer [k]_s = (s^k - s^-k) / (s - s^-1).
inline QCoeff quantum_int(int k) { return s_diff(k) / s_diff(1); }

} // namespace qmirror
