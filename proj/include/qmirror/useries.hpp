#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "qmirror/qcoeff.hpp"

namespace qmirror {

/// Gaussian rational re + i*im.
struct Gauss {
    mpq_class re{0};
    mpq_class im{0};

    Gauss() = default;
    Gauss(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}
    static Gauss i() { return {0, 1}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool operator==(const Gauss& o) const { return re == o.re && im == o.im; }
    Gauss operator+(const Gauss& o) const { return {re + o.re, im + o.im}; }
    Gauss operator-(const Gauss& o) const { return {re - o.re, im - o.im}; }
    Gauss operator-() const { return {-re, -im}; }
    Gauss operator*(const Gauss& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    Gauss& operator+=(const Gauss& o) { re += o.re; im += o.im; return *this; }
    Gauss& operator-=(const Gauss& o) { re -= o.re; im -= o.im; return *this; }
    Gauss inverse() const
    {
        const mpq_class n = re * re + im * im;
        if (n == 0) throw DivisionByZero();
        return {re / n, -im / n};
    }

    std::string str() const
    {
        if (im == 0) return re.get_str();
        if (re == 0) return im.get_str() + "*i";
        return "(" + re.get_str() + (im < 0 ? " - " : " + ") + mpq_class(abs(im)).get_str() + "*i)";
    }
};

/// Truncated Laurent series in u with Gaussian rational coefficients,
/// known exactly on the window u^low .. u^high. An empty window has high < low.
class USeries {
public:
    USeries() = default;
    USeries(int low, int high) : low_(low), high_(high), c_(std::max(0, high - low + 1)) {}

    int low() const { return low_; }
    int high() const { return high_; }
    bool empty_window() const { return high_ < low_; }

    /// Coefficient of u^k; zero below the window, an error above it.
    const Gauss& at(int k) const
    {
        static const Gauss zero;
        if (k < low_) return zero;
        if (k > high_) throw Error("coefficient outside series window");
        return c_[k - low_];
    }
    Gauss& operator[](int k) { return c_.at(k - low_); }

    friend USeries operator+(const USeries& a, const USeries& b)
    {
        USeries r(std::min(a.low_, b.low_), std::min(a.high_, b.high_));
        for (int k = r.low_; k <= r.high_; ++k) r[k] = a.at(k) + b.at(k);
        return r;
    }
    USeries operator-() const
    {
        USeries r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend USeries operator-(const USeries& a, const USeries& b) { return a + (-b); }

    friend USeries operator*(const USeries& a, const USeries& b)
    {
        USeries r(a.low_ + b.low_, std::min(a.high_ + b.low_, b.high_ + a.low_));
        for (int i = a.low_; i <= a.high_; ++i) {
            if (a.at(i).is_zero()) continue;
            for (int j = b.low_; j <= b.high_ && i + j <= r.high_; ++j) r[i + j] += a.at(i) * b.at(j);
        }
        return r;
    }

    USeries scaled(const Gauss& g) const
    {
        USeries r = *this;
        for (auto& x : r.c_) x = x * g;
        return r;
    }

    /// Restricts the window to [low, high'] with high' <= high.
    USeries truncated(int high) const
    {
        USeries r(low_, std::min(high, high_));
        for (int k = r.low_; k <= r.high_; ++k) r[k] = at(k);
        return r;
    }

    /// Exact equality on the common window.
    bool agrees_with(const USeries& o) const
    {
        const int hi = std::min(high_, o.high_);
        for (int k = std::min(low_, o.low_); k <= hi; ++k)
            if (!(at(k) == o.at(k))) return false;
        return true;
    }

    bool only_even_powers() const
    {
        for (int k = low_; k <= high_; ++k)
            if ((k % 2 != 0) && !at(k).is_zero()) return false;
        return true;
    }

    bool is_real() const
    {
        for (int k = low_; k <= high_; ++k)
            if (at(k).im != 0) return false;
        return true;
    }

    std::string str() const
    {
        std::ostringstream os;
        bool first = true;
        for (int k = low_; k <= high_; ++k) {
            if (at(k).is_zero()) continue;
            if (!first) os << " + ";
            first = false;
            os << at(k).str();
            if (k != 0) os << "*u^" << k;
        }
        if (first) os << '0';
        os << " + O(u^" << high_ + 1 << ')';
        return os.str();
    }

private:
    int low_ = 0;
    int high_ = -1;
    std::vector<Gauss> c_;
};

namespace detail {

/// Coefficients u^0 .. u^order of s^e * p(s) with s = exp(iu/2).
inline std::vector<Gauss> laurent_to_u(int e, const Poly& p, int order)
{
    std::vector<Gauss> out(std::max(0, order + 1));
    std::vector<mpq_class> pw(p.c.size(), 1); // (k+e)/2 to the n-th power, times 1/n!
    mpq_class fact_inv = 1;
    for (int n = 0; n <= order; ++n) {
        mpq_class sum = 0;
        for (std::size_t k = 0; k < p.c.size(); ++k) {
            if (p.c[k] == 0) continue;
            sum += p.c[k] * pw[k];
            mpq_class step(static_cast<long>(k) + e, 2);
            step.canonicalize();
            pw[k] *= step;
        }
        sum *= fact_inv;
        fact_inv /= n + 1;
        switch (n % 4) { // i^n
        case 0: out[n] = Gauss(sum, 0); break;
        case 1: out[n] = Gauss(0, sum); break;
        case 2: out[n] = Gauss(-sum, 0); break;
        default: out[n] = Gauss(0, -sum); break;
        }
    }
    return out;
}

} // namespace detail

/// Expansion of a(s) under s = exp(iu/2), exact through u^K.
inline USeries u_expand(const QCoeff& a, int K)
{
    if (a.is_zero()) return USeries(0, K);
    const int vn = root_multiplicity_at_one(a.num());
    const int vd = root_multiplicity_at_one(a.den());
    const int low = vn - vd;
    USeries r(low, K);
    if (K < low) return r;
    const int M = K - low;
    const auto nser = detail::laurent_to_u(a.shift(), a.num(), vn + M);
    const auto dser = detail::laurent_to_u(0, a.den(), vd + M);
    // d' inverse by recurrence, then multiply with n'.
    std::vector<Gauss> inv(M + 1);
    const Gauss d0inv = dser[vd].inverse();
    inv[0] = d0inv;
    for (int k = 1; k <= M; ++k) {
        Gauss acc;
        for (int j = 1; j <= k; ++j) acc += dser[vd + j] * inv[k - j];
        inv[k] = -(acc * d0inv);
    }
    for (int k = 0; k <= M; ++k) {
        Gauss acc;
        for (int j = 0; j <= k; ++j) acc += nser[vn + j] * inv[k - j];
        r[low + k] = acc;
    }
    return r;
}

} // namespace qmirror
