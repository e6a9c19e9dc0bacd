/*
   Copyright 2026 The bethe-xxx Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef BETHE_RATFUN_HPP
#define BETHE_RATFUN_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace bethe {

/// Rational function num(u)/den(u). The denominator is kept monic; in exact
/// mode the fraction is also reduced by the polynomial gcd.
template <class S>
class RatFun {
   public:
    RatFun() : num_(), den_(scalar<S>(1)) {}
    RatFun(const S& c) : num_(c), den_(scalar<S>(1)) {}  // NOLINT
    RatFun(Poly<S> num) : num_(std::move(num)), den_(scalar<S>(1)) {}  // NOLINT
    RatFun(Poly<S> num, Poly<S> den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    const Poly<S>& num() const { return num_; }
    const Poly<S>& den() const { return den_; }

    S operator()(const S& u) const { return num_(u) / den_(u); }
    template <class T>
    T eval_as(const T& u) const {
        return num_.eval_as(u) / den_.eval_as(u);
    }

    /// r(u + shift).
    RatFun shifted(const S& shift) const { return RatFun(num_.shifted(shift), den_.shifted(shift)); }

    template <class T>
    RatFun<T> cast() const {
        return RatFun<T>(num_.template cast<T>(), den_.template cast<T>());
    }

    RatFun operator-() const { return RatFun(-num_, den_, raw_tag{}); }
    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
    friend RatFun operator*(const RatFun& a, const RatFun& b) { return RatFun(a.num_ * b.num_, a.den_ * b.den_); }
    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        if (b.num_.is_zero()) throw std::domain_error("rational function division by zero");
        return RatFun(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
    RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
    RatFun& operator*=(const RatFun& o) { return *this = *this * o; }

    bool is_zero() const { return num_.is_zero(); }

    /// Exact mode: identity of reduced fractions.
    friend bool operator==(const RatFun& a, const RatFun& b) { return a.num_ * b.den_ == b.num_ * a.den_; }

   private:
    struct raw_tag {};
    RatFun(Poly<S> num, Poly<S> den, raw_tag) : num_(std::move(num)), den_(std::move(den)) {}

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = Poly<S>(scalar<S>(1));
            return;
        }
        if constexpr (ScalarTraits<S>::exact) {
            if (den_.degree() > 0) {
                auto g = gcd(num_, den_);
                if (g.degree() > 0) {
                    num_ = divmod(num_, g).first;
                    den_ = divmod(den_, g).first;
                }
            }
        }
        const S lead = den_.leading();
        if (!(lead == scalar<S>(1))) {
            const S inv = scalar<S>(1) / lead;
            num_ *= inv;
            den_ *= inv;
        }
    }

    Poly<S> num_;
    Poly<S> den_;
};

/// Deterministic sample points 101, 103, 105, ... that avoid poles of the
/// given denominators.
template <class S>
std::vector<S> sample_points(std::size_t count, const std::vector<const Poly<S>*>& dens, double eps = kDefaultEps) {
    std::vector<S> pts;
    for (std::int64_t u = 101; pts.size() < count; u += 2) {
        const S x = scalar<S>(u);
        bool pole = std::any_of(dens.begin(), dens.end(), [&](const Poly<S>* d) { return is_zero((*d)(x), eps); });
        if (!pole) pts.push_back(x);
    }
    return pts;
}

/// Equality of rational functions: cross-multiplication in exact mode,
/// evaluation at deg+1 sample points with relative tolerance eps otherwise.
template <class S>
bool equal(const RatFun<S>& a, const RatFun<S>& b, double eps = kDefaultEps) {
    if constexpr (ScalarTraits<S>::exact) {
        return a == b;
    } else {
        const int deg = std::max(a.num().degree() + b.den().degree(), b.num().degree() + a.den().degree());
        auto pts = sample_points<S>(static_cast<std::size_t>(std::max(deg, 0)) + 1, {&a.den(), &b.den()}, eps);
        for (const auto& u : pts) {
            const S x = a(u), y = b(u);
            const double scale = std::max({1.0, magnitude(x), magnitude(y)});
            if (magnitude(x - y) > eps * scale) return false;
        }
        return true;
    }
}

/// Truncated expansion c_0 + c_1 u^{-1} + ... + c_order u^{-order}. The
/// coefficient type may be a scalar or a matrix. Products are truncated at the
/// smaller order of the operands.
template <class T>
struct SeriesUinv {
    std::vector<T> c;

    int order() const { return static_cast<int>(c.size()) - 1; }
    const T& operator[](int s) const { return c.at(static_cast<std::size_t>(s)); }
    T& operator[](int s) { return c.at(static_cast<std::size_t>(s)); }

    SeriesUinv truncated(int order) const {
        if (order > this->order()) throw std::invalid_argument("cannot extend a truncated series");
        return {std::vector<T>(c.begin(), c.begin() + order + 1)};
    }

    friend SeriesUinv operator+(const SeriesUinv& a, const SeriesUinv& b) {
        const int o = std::min(a.order(), b.order());
        SeriesUinv r = a.truncated(o);
        for (int s = 0; s <= o; ++s) r[s] += b[s];
        return r;
    }
    friend SeriesUinv operator-(const SeriesUinv& a, const SeriesUinv& b) {
        const int o = std::min(a.order(), b.order());
        SeriesUinv r = a.truncated(o);
        for (int s = 0; s <= o; ++s) r[s] -= b[s];
        return r;
    }
    template <class F>
    SeriesUinv scaled(const F& f) const {
        SeriesUinv r = *this;
        for (auto& x : r.c) x = f * x;
        return r;
    }
};

/// Cauchy product of two series; a scalar times a matrix series gives a
/// matrix series.
template <class A, class B>
auto series_product(const SeriesUinv<A>& a, const SeriesUinv<B>& b) {
    using R = std::conditional_t<std::is_same_v<A, scalar_of_t<A>>, B, A>;
    const int o = std::min(a.order(), b.order());
    SeriesUinv<R> r;
    r.c.reserve(static_cast<std::size_t>(o) + 1);
    for (int m = 0; m <= o; ++m) {
        R acc = R(a[0] * b[m]);
        for (int i = 1; i <= m; ++i) acc += R(a[i] * b[m - i]);
        r.c.push_back(std::move(acc));
    }
    return r;
}

/// Expansion at u = infinity by long division, truncated at u^{-order}.
/// Throws std::domain_error when deg num > deg den (pole at infinity).
template <class S>
SeriesUinv<S> series_at_infinity(const RatFun<S>& r, int order) {
    const auto& num = r.num();
    const auto& den = r.den();
    if (num.degree() > den.degree()) throw std::domain_error("series_at_infinity: pole at infinity");
    const int q = den.degree();
    SeriesUinv<S> out;
    out.c.assign(static_cast<std::size_t>(order) + 1, scalar<S>(0));
    const S lead = den.leading();
    for (int m = 0; m <= order; ++m) {
        S acc = num[q - m];
        for (int s = std::max(0, m - q); s < m; ++s) acc -= out[s] * den[q - m + s];
        out[m] = acc / lead;
    }
    return out;
}

}  // namespace bethe

#endif  // BETHE_RATFUN_HPP
