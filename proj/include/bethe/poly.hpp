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

#ifndef BETHE_POLY_HPP
#define BETHE_POLY_HPP

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "scalar.hpp"

namespace bethe {

/// Univariate polynomial in u with coefficients in ascending degree.
///
/// Exact zero coefficients are trimmed from the top so that degree() is the
/// index of the leading coefficient; the zero polynomial has degree -1.
/// Floating-mode polynomials are never trimmed by tolerance implicitly, use
/// trimmed(eps) where a numerical degree is wanted.
template <class S>
class Poly {
   public:
    Poly() = default;
    Poly(const S& c) : c_{c} { trim(); }  // NOLINT: constants convert implicitly
    explicit Poly(std::vector<S> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(std::initializer_list<S> coeffs) : c_(coeffs) { trim(); }

    /// The polynomial u.
    static Poly x() { return Poly(std::vector<S>{scalar<S>(0), scalar<S>(1)}); }
    static Poly monomial(int degree, const S& coeff = scalar<S>(1)) {
        std::vector<S> c(static_cast<std::size_t>(degree) + 1, scalar<S>(0));
        c.back() = coeff;
        return Poly(std::move(c));
    }
    /// u - root.
    static Poly linear(const S& root) { return Poly(std::vector<S>{-root, scalar<S>(1)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<S>& coeffs() const { return c_; }
    /// Coefficient of u^i (zero outside the stored range).
    S operator[](int i) const { return (i < 0 || i > degree()) ? scalar<S>(0) : c_[static_cast<std::size_t>(i)]; }
    S leading() const { return c_.empty() ? scalar<S>(0) : c_.back(); }

    template <class T>
    T eval_as(const T& u) const {
        T r = lift<T>(scalar<S>(0));
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * u + lift<T>(*it);
        return r;
    }
    S operator()(const S& u) const {
        S r = scalar<S>(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * u + *it;
        return r;
    }

    /// p(u + shift).
    Poly shifted(const S& shift) const {
        Poly r;
        const Poly lin(std::vector<S>{shift, scalar<S>(1)});
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * lin + Poly(*it);
        return r;
    }

    Poly monic() const {
        if (c_.empty()) throw std::domain_error("monic() of the zero polynomial");
        return *this * (scalar<S>(1) / leading());
    }

    /// Drops leading coefficients with |c| <= eps.
    Poly trimmed(double eps) const {
        Poly r = *this;
        while (!r.c_.empty() && bethe::is_zero(r.c_.back(), eps)) r.c_.pop_back();
        return r;
    }

    template <class T>
    Poly<T> cast() const {
        std::vector<T> c;
        c.reserve(c_.size());
        for (const auto& v : c_) c.push_back(lift<T>(v));
        return Poly<T>(std::move(c));
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }
    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), scalar<S>(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), scalar<S>(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    Poly& operator*=(const S& s) {
        for (auto& v : c_) v *= s;
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const S& s) { return a *= s; }
    friend Poly operator*(const S& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<S> r(a.c_.size() + b.c_.size() - 1, scalar<S>(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    /// Euclidean division; throws on division by zero.
    friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw std::domain_error("polynomial division by zero");
        if (a.degree() < b.degree()) return {Poly(), a};
        std::vector<S> rem = a.c_;
        std::vector<S> quo(static_cast<std::size_t>(a.degree() - b.degree() + 1), scalar<S>(0));
        const S lead = b.leading();
        for (int k = a.degree() - b.degree(); k >= 0; --k) {
            S f = rem[static_cast<std::size_t>(k + b.degree())] / lead;
            quo[static_cast<std::size_t>(k)] = f;
            for (int j = 0; j <= b.degree(); ++j) rem[static_cast<std::size_t>(k + j)] -= f * b.c_[static_cast<std::size_t>(j)];
        }
        rem.resize(static_cast<std::size_t>(b.degree()));
        return {Poly(std::move(quo)), Poly(std::move(rem))};
    }

   private:
    void trim() {
        if constexpr (ScalarTraits<S>::exact) {
            while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
        } else {
            while (!c_.empty() && c_.back() == S(0)) c_.pop_back();
        }
    }

    std::vector<S> c_;
};

/// Monic gcd over the rationals.
inline Poly<Rational> gcd(Poly<Rational> a, Poly<Rational> b) {
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

/// prod_s (u - roots_s).
template <class S>
Poly<S> poly_from_roots(std::span<const S> roots) {
    Poly<S> p(scalar<S>(1));
    for (const auto& r : roots) p *= Poly<S>::linear(r);
    return p;
}

/// a_1..a_n with prod_s (u - b_s) = u^n + sum_j (-1)^j a_j u^{n-j}.
template <class S>
std::vector<S> elementary_symmetric(std::span<const S> b) {
    // e[j] holds the j-th elementary symmetric function of the prefix seen so far.
    std::vector<S> e(b.size() + 1, scalar<S>(0));
    e[0] = scalar<S>(1);
    for (std::size_t s = 0; s < b.size(); ++s)
        for (std::size_t j = s + 1; j >= 1; --j) e[j] += e[j - 1] * b[s];
    return {e.begin() + 1, e.end()};
}

template <class S>
std::ostream& operator<<(std::ostream& os, const Poly<S>& p) {
    os << '[';
    for (int i = 0; i <= p.degree(); ++i) os << (i ? ", " : "") << ScalarTraits<S>::to_string(p[i]);
    return os << ']';
}

}  // namespace bethe

#endif  // BETHE_POLY_HPP
