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

#ifndef BETHE_DIFFOP_HPP
#define BETHE_DIFFOP_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratfun.hpp"

namespace bethe {

/// base^u * poly(u).
template <class S>
struct QuasiExp {
    S base = scalar<S>(1);
    Poly<S> poly;

    QuasiExp() = default;
    QuasiExp(S b, Poly<S> p) : base(std::move(b)), poly(std::move(p)) {
        if (is_zero(base, 0.0)) throw std::invalid_argument("quasi-exponential with zero base");
    }
    /// A plain polynomial (base 1).
    static QuasiExp polynomial(Poly<S> p) { return QuasiExp(scalar<S>(1), std::move(p)); }
};

/// base^u * r(u) with a rational r; the result type of applying a DiffOp.
template <class S>
struct QuasiExpRat {
    S base = scalar<S>(1);
    RatFun<S> r;
};

/// Integer power of a scalar, negative exponents allowed.
template <class S>
S ipow(const S& x, int e) {
    S r = scalar<S>(1);
    S b = e >= 0 ? x : scalar<S>(1) / x;
    for (int k = 0; k < std::abs(e); ++k) r *= b;
    return r;
}

/// Finite sum of c_k(u) tau^k, (tau f)(u) = f(u-1). Products follow
/// c(u) tau^a * d(u) tau^b = c(u) d(u-a) tau^(a+b).
template <class S>
class DiffOp {
   public:
    DiffOp() = default;
    DiffOp(const RatFun<S>& c) { set(0, c); }  // NOLINT
    DiffOp(const S& c) : DiffOp(RatFun<S>(c)) {}  // NOLINT

    /// c * tau^k.
    static DiffOp tau(int k = 1, const RatFun<S>& c = RatFun<S>(scalar<S>(1))) {
        DiffOp d;
        d.set(k, c);
        return d;
    }

    const std::map<int, RatFun<S>>& terms() const { return c_; }
    RatFun<S> coeff(int k) const {
        auto it = c_.find(k);
        return it == c_.end() ? RatFun<S>() : it->second;
    }
    void set(int k, const RatFun<S>& c) {
        if (c.is_zero())
            c_.erase(k);
        else
            c_[k] = c;
    }
    bool is_zero() const { return c_.empty(); }
    int max_power() const { return c_.empty() ? 0 : c_.rbegin()->first; }
    int min_power() const { return c_.empty() ? 0 : c_.begin()->first; }

    friend DiffOp operator+(const DiffOp& a, const DiffOp& b) {
        DiffOp r = a;
        for (const auto& [k, c] : b.c_) r.set(k, r.coeff(k) + c);
        return r;
    }
    friend DiffOp operator-(const DiffOp& a, const DiffOp& b) {
        DiffOp r = a;
        for (const auto& [k, c] : b.c_) r.set(k, r.coeff(k) - c);
        return r;
    }
    friend DiffOp operator*(const DiffOp& a, const DiffOp& b) {
        DiffOp r;
        for (const auto& [ka, ca] : a.c_)
            for (const auto& [kb, cb] : b.c_) r.set(ka + kb, r.coeff(ka + kb) + ca * cb.shifted(scalar<S>(-ka)));
        return r;
    }
    friend DiffOp operator*(const RatFun<S>& f, const DiffOp& d) { return DiffOp(f) * d; }

    template <class T>
    DiffOp<T> cast() const {
        DiffOp<T> r;
        for (const auto& [k, c] : c_) r.set(k, c.template cast<T>());
        return r;
    }

   private:
    std::map<int, RatFun<S>> c_;
};

/// D applied to base^u r(u): base^u * sum_k c_k(u) base^(-k) r(u-k).
template <class S>
QuasiExpRat<S> diffop_apply(const DiffOp<S>& d, const QuasiExpRat<S>& f) {
    RatFun<S> out;
    for (const auto& [k, c] : d.terms()) out += c * f.r.shifted(scalar<S>(-k)) * RatFun<S>(ipow(f.base, -k));
    return {f.base, out};
}

template <class S>
QuasiExpRat<S> diffop_apply(const DiffOp<S>& d, const QuasiExp<S>& f) {
    return diffop_apply(d, QuasiExpRat<S>{f.base, RatFun<S>(f.poly)});
}

/// True when D f vanishes: exactly in exact mode, at sample points otherwise.
template <class S>
bool annihilates(const DiffOp<S>& d, const QuasiExp<S>& f, double eps = kDefaultEps) {
    return equal(diffop_apply(d, f).r, RatFun<S>(), eps);
}

/// [u^e] of sum_m c_m(u) base^{-m} p(u-m), where c_m is the expansion at
/// infinity of the coefficient of tau^m.
template <class S>
S applied_coefficient(const std::vector<SeriesUinv<S>>& c, const S& base, const Poly<S>& p, int e) {
    S acc = scalar<S>(0);
    for (std::size_t m = 0; m < c.size(); ++m) {
        const Poly<S> pm = p.shifted(scalar<S>(-static_cast<int>(m))) * ipow(base, -static_cast<int>(m));
        for (int s = std::max(0, -e); e + s <= pm.degree(); ++s) {
            if (s > c[m].order()) throw std::invalid_argument("applied_coefficient: series is too short");
            acc += c[m][s] * pm[e + s];
        }
    }
    return acc;
}

/// Monic p of degree `top` whose coefficients of u^{top-j}, j in `js`, are
/// unknown and all others zero, fixed one j at a time in increasing order by
/// the vanishing of [u^{top-nu-j}] D(base^u p). Throws std::domain_error when
/// an equation does not involve its unknown.
template <class S>
Poly<S> triangular_kernel(const std::vector<SeriesUinv<S>>& c, const S& base, int top, const std::vector<int>& js, int nu,
                          double eps = kDefaultEps) {
    std::vector<S> coef(static_cast<std::size_t>(top) + 1, scalar<S>(0));
    coef[static_cast<std::size_t>(top)] = scalar<S>(1);
    for (int j : js) {
        auto& x = coef[static_cast<std::size_t>(top - j)];
        x = scalar<S>(0);
        const S c0 = applied_coefficient(c, base, Poly<S>(coef), top - nu - j);
        x = scalar<S>(1);
        const S slope = applied_coefficient(c, base, Poly<S>(coef), top - nu - j) - c0;
        if (is_zero(slope, ScalarTraits<S>::exact ? 0.0 : eps))
            throw std::domain_error("triangular_kernel: coefficient " + std::to_string(j) + " is not determined");
        x = -c0 / slope;
    }
    return Poly<S>(coef);
}

/// max over fixed sample points of |D f| / sum_k |c_k(u) base^{-k} p(u-k)|.
template <class S>
double sampled_residual(const DiffOp<S>& d, const QuasiExp<S>& f) {
    static const Complex pts[] = {{0.5, 0.37}, {1.3, -0.8}, {3.7, 2.1}, {-2.3, 1.7}, {6.1, -3.3}, {10.7, 0.9}};
    const auto base = to_complex(f.base);
    const auto p = f.poly.template cast<Complex>();
    double worst = 0.0;
    for (const Complex& u : pts) {
        Complex sum = 0.0;
        double scale = 0.0;
        for (const auto& [k, ck] : d.terms()) {
            const Complex term = ck.template cast<Complex>()(u) * std::pow(base, -k) * p(u - static_cast<double>(k));
            sum += term;
            scale += std::abs(term);
        }
        if (scale > 0.0) worst = std::max(worst, std::abs(sum) / scale);
    }
    return worst;
}

/// Every permutation of {0..k-1} paired with its sign, in lexicographic order.
inline std::vector<std::pair<std::vector<int>, int>> signed_permutations(int k) {
    std::vector<int> p(static_cast<std::size_t>(k));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::pair<std::vector<int>, int>> out;
    do {
        int inv = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) inv += p[i] > p[j];
        out.emplace_back(p, inv % 2 ? -1 : 1);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// Row determinant: sum over sigma of sign * a_{1,s(1)} a_{2,s(2)} ... a_{N,s(N)},
/// factors multiplied left to right in row order. Works for any entry type
/// with +, -, * and a zero value.
template <class E>
E rdet(const std::vector<std::vector<E>>& m, const E& zero = E()) {
    const int k = static_cast<int>(m.size());
    for (const auto& row : m)
        if (static_cast<int>(row.size()) != k) throw std::invalid_argument("rdet: matrix is not square");
    if (k == 0) throw std::invalid_argument("rdet: empty matrix");
    E total = zero;
    for (const auto& [perm, sign] : signed_permutations(k)) {
        E term = m[0][static_cast<std::size_t>(perm[0])];
        for (int r = 1; r < k; ++r) term = term * m[static_cast<std::size_t>(r)][static_cast<std::size_t>(perm[r])];
        if (sign > 0)
            total = total + term;
        else
            total = total - term;
    }
    return total;
}

/// det(g_i(u-j+1)) for g_i(u) = f_i(u+shift), factored as
/// base_product^u * base_product^shift * poly(u).
template <class S>
struct DiscreteWronskian {
    S base_product = scalar<S>(1);
    int shift = 0;
    Poly<S> poly;
};

template <class S>
DiscreteWronskian<S> discrete_wronskian(const std::vector<QuasiExp<S>>& fs, int shift = 0) {
    const int n = static_cast<int>(fs.size());
    DiscreteWronskian<S> w;
    w.shift = shift;
    std::vector<std::vector<Poly<S>>> m(fs.size());
    for (int i = 0; i < n; ++i) {
        const auto& f = fs[static_cast<std::size_t>(i)];
        if (f.poly.is_zero()) throw std::invalid_argument("discrete_wronskian: zero function");
        w.base_product *= f.base;
        for (int j = 0; j < n; ++j)
            m[static_cast<std::size_t>(i)].push_back(f.poly.shifted(scalar<S>(shift - j)) * ipow(f.base, -j));
    }
    w.poly = n == 0 ? Poly<S>(scalar<S>(1)) : rdet(m, Poly<S>());
    return w;
}

/// Rebases 1 + sum_k (-1)^k B_k tau^k into sum_m (-1)^m C_m (tau^-1 - 1)^(N-m)
/// after right multiplication by tau^-N. Input (B_0 = 1, B_1, ..., B_N);
/// returns C_m = sum_{k<=m} (-1)^(m-k) binom(N-k, N-m) B_k.
template <class T>
std::vector<SeriesUinv<T>> tau_basis_change(const std::vector<SeriesUinv<T>>& b) {
    if (b.empty()) throw std::invalid_argument("tau_basis_change: empty input");
    const int n = static_cast<int>(b.size()) - 1;
    std::vector<SeriesUinv<T>> c;
    for (int m = 0; m <= n; ++m) {
        SeriesUinv<T> cm = b[static_cast<std::size_t>(m)];
        for (int k = 0; k < m; ++k) {
            const auto w = binomial(n - k, n - m);
            const std::int64_t coef = ((m - k) % 2 ? -1 : 1) * w;
            cm = cm + b[static_cast<std::size_t>(k)].scaled(scalar<scalar_of_t<T>>(coef));
        }
        c.push_back(std::move(cm));
    }
    return c;
}

}  // namespace bethe

#endif  // BETHE_DIFFOP_HPP
