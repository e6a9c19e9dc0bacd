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

#ifndef BETHE_WRONSKI_HPP
#define BETHE_WRONSKI_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bethe.hpp"
#include "diffop.hpp"
#include "yangian.hpp"

namespace bethe {

enum class SpaceKind { quasi_exp, polynomial };

inline const char* to_string(SpaceKind k) { return k == SpaceKind::quasi_exp ? "quasi_exp" : "polynomial"; }

/// Exponent set P = {d_1 > ... > d_N}, d_i = lambda_i + N - i.
inline std::vector<int> exponent_set(const Weight& lambda) {
    std::vector<int> d;
    for (int i = 1; i <= lambda.N(); ++i) d.push_back(lambda[i - 1] + lambda.N() - i);
    return d;
}

/// Indices j of the coordinates attached to basis function i (1-based):
/// 1..lambda_i for quasi-exponentials, 1..d_i with d_i - j not in P for
/// polynomials.
inline std::vector<int> coordinate_indices(SpaceKind kind, const Weight& lambda, int i) {
    std::vector<int> js;
    if (kind == SpaceKind::quasi_exp) {
        for (int j = 1; j <= lambda[i - 1]; ++j) js.push_back(j);
        return js;
    }
    const auto d = exponent_set(lambda);
    const int di = d[static_cast<std::size_t>(i - 1)];
    for (int j = 1; j <= di; ++j)
        if (std::find(d.begin(), d.end(), di - j) == d.end()) js.push_back(j);
    return js;
}

/// A point of the space of quasi-exponentials (q distinct) or of the space of
/// polynomials (q = 1). coords[i-1] lists the coordinates of f_i in the order
/// of coordinate_indices.
template <class S>
struct SpacePoint {
    SpaceKind kind = SpaceKind::quasi_exp;
    std::vector<S> q;
    Weight lambda;
    std::vector<std::vector<S>> coords;

    int N() const { return lambda.N(); }
    int n() const { return lambda.n(); }

    /// Top degree of f_i.
    int top(int i) const {
        return kind == SpaceKind::quasi_exp ? lambda[i - 1] : exponent_set(lambda)[static_cast<std::size_t>(i - 1)];
    }

    void validate() const {
        const int N = lambda.N();
        if (N == 0) throw std::invalid_argument("space point: empty weight");
        if (static_cast<int>(q.size()) != N) throw std::invalid_argument("space point: q must have N entries");
        if (static_cast<int>(coords.size()) != N) throw std::invalid_argument("space point: one coordinate list per basis function");
        if (kind == SpaceKind::polynomial) {
            if (!lambda.is_partition()) throw std::invalid_argument("space point: polynomial mode needs a partition");
            for (const auto& x : q)
                if (!is_zero(x - scalar<S>(1), 0.0)) throw std::invalid_argument("space point: polynomial mode needs q = 1");
        } else {
            for (int i = 0; i < N; ++i) {
                if (is_zero(q[static_cast<std::size_t>(i)], 0.0)) throw std::invalid_argument("space point: zero q");
                for (int j = i + 1; j < N; ++j)
                    if (is_zero(q[static_cast<std::size_t>(i)] - q[static_cast<std::size_t>(j)], 0.0))
                        throw std::invalid_argument("space point: q must be distinct");
            }
        }
        for (int i = 1; i <= N; ++i)
            if (coords[static_cast<std::size_t>(i - 1)].size() != coordinate_indices(kind, lambda, i).size())
                throw std::invalid_argument("space point: wrong number of coordinates for f_" + std::to_string(i));
    }

    /// Generic point with every coordinate zero.
    static SpacePoint origin(SpaceKind kind, std::vector<S> q, const Weight& lambda) {
        SpacePoint x{kind, std::move(q), lambda, {}};
        for (int i = 1; i <= lambda.N(); ++i) x.coords.emplace_back(coordinate_indices(kind, lambda, i).size(), scalar<S>(0));
        return x;
    }

    /// Monic polynomial part of f_i.
    Poly<S> poly(int i) const {
        const int d = top(i);
        std::vector<S> c(static_cast<std::size_t>(d) + 1, scalar<S>(0));
        c[static_cast<std::size_t>(d)] = scalar<S>(1);
        const auto js = coordinate_indices(kind, lambda, i);
        for (std::size_t k = 0; k < js.size(); ++k) c[static_cast<std::size_t>(d - js[k])] = coords[static_cast<std::size_t>(i - 1)][k];
        return Poly<S>(c);
    }

    std::vector<QuasiExp<S>> functions() const {
        std::vector<QuasiExp<S>> fs;
        for (int i = 1; i <= N(); ++i) fs.emplace_back(q[static_cast<std::size_t>(i - 1)], poly(i));
        return fs;
    }

    /// Reads the coordinates off monic functions of the right degrees; throws
    /// when a function has the wrong degree or a monomial excluded by P.
    static SpacePoint from_functions(SpaceKind kind, const std::vector<S>& q, const Weight& lambda, const std::vector<QuasiExp<S>>& fs,
                                     double eps = kDefaultEps) {
        SpacePoint x{kind, q, lambda, {}};
        if (static_cast<int>(fs.size()) != lambda.N()) throw std::invalid_argument("space point: one function per basis index");
        for (int i = 1; i <= lambda.N(); ++i) {
            const auto& p = fs[static_cast<std::size_t>(i - 1)].poly;
            const int d = x.top(i);
            if (p.degree() != d || !is_zero(p.leading() - scalar<S>(1), eps))
                throw std::invalid_argument("space point: f_" + std::to_string(i) + " is not monic of degree " + std::to_string(d));
            const auto js = coordinate_indices(kind, lambda, i);
            std::vector<S> c;
            for (int j : js) c.push_back(p[d - j]);
            for (int j = 1; j <= d; ++j)
                if (std::find(js.begin(), js.end(), j) == js.end() && !is_zero(p[d - j], eps))
                    throw std::invalid_argument("space point: f_" + std::to_string(i) + " has an excluded monomial");
            x.coords.push_back(std::move(c));
        }
        x.validate();
        return x;
    }

    template <class T>
    SpacePoint<T> cast() const {
        SpacePoint<T> r{kind, {}, lambda, {}};
        for (const auto& x : q) r.q.push_back(lift<T>(x));
        for (const auto& row : coords) {
            r.coords.emplace_back();
            for (const auto& x : row) r.coords.back().push_back(lift<T>(x));
        }
        return r;
    }
};

/// (a_1, ..., a_n) with Wr(f(u-1)) = const * (u^n + sum_s (-1)^s a_s u^{n-s}).
template <class S>
struct WronskiImage {
    std::vector<S> a;
    S leading = scalar<S>(1);  // coefficient of u^n in the polynomial part
    Poly<S> monic;
};

template <class S>
WronskiImage<S> wronski_map(const SpacePoint<S>& X) {
    X.validate();
    const auto w = discrete_wronskian(X.functions(), -1);
    if (w.poly.is_zero()) throw std::domain_error("wronski_map: Wronskian vanishes identically");
    if (w.poly.degree() != X.n()) throw std::domain_error("wronski_map: Wronskian has degree " + std::to_string(w.poly.degree()));
    WronskiImage<S> img;
    img.leading = w.poly.leading();
    img.monic = w.poly.monic();
    const int n = X.n();
    for (int s = 1; s <= n; ++s) img.a.push_back(s % 2 ? S(-img.monic[n - s]) : img.monic[n - s]);
    return img;
}

/// max_s |a_s - e_s(b)| / max(1, |e_s(b)|); infinite on a length mismatch.
template <class S>
double image_residual(const std::vector<S>& a, const std::vector<S>& b) {
    const auto e = elementary_symmetric(std::span<const S>(b));
    if (e.size() != a.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t s = 0; s < a.size(); ++s) worst = std::max(worst, magnitude(S(a[s] - e[s])) / std::max(1.0, magnitude(e[s])));
    return worst;
}

/// The monic difference operator 1 + sum_k (-1)^k F_k(u) tau^k whose kernel is
/// spanned by the basis functions of X. Built from the (N+1)x(N+1) row
/// determinant and normalized by its actual tau^0 coefficient.
template <class S>
DiffOp<S> space_diffop(const SpacePoint<S>& X) {
    X.validate();
    const int N = X.N();
    // Row i, column j: f_i(u-j) / q_i^u.
    std::vector<std::vector<Poly<S>>> rows(static_cast<std::size_t>(N));
    for (int i = 1; i <= N; ++i) {
        const Poly<S> p = X.poly(i);
        const S& base = X.q[static_cast<std::size_t>(i - 1)];
        for (int j = 0; j <= N; ++j) rows[static_cast<std::size_t>(i - 1)].push_back(p.shifted(scalar<S>(-j)) * ipow(base, -j));
    }
    auto minor = [&](int drop) {
        std::vector<std::vector<Poly<S>>> m(static_cast<std::size_t>(N));
        for (int i = 0; i < N; ++i)
            for (int j = 0; j <= N; ++j)
                if (j != drop) m[static_cast<std::size_t>(i)].push_back(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        return rdet(m, Poly<S>());
    };
    const Poly<S> m0 = minor(0);
    if (m0.is_zero()) throw std::domain_error("space_diffop: degenerate space (zero Wronskian)");
    DiffOp<S> d(scalar<S>(1));
    for (int k = 1; k <= N; ++k) {
        Poly<S> mk = minor(k);
        if (k % 2) mk = -mk;
        d.set(k, RatFun<S>(mk, m0));
    }
    return d;
}

/// F_k(u) = (-1)^k [tau^k] D, k = 0..N.
template <class S>
std::vector<RatFun<S>> space_coefficients(const DiffOp<S>& d, int N) {
    std::vector<RatFun<S>> f;
    for (int k = 0; k <= N; ++k) f.push_back(k % 2 ? -d.coeff(k) : d.coeff(k));
    return f;
}

/// Expansion coefficients of the space operator: F_{k,s} (quasi-exponential
/// mode) or G_{k,s} (polynomial mode), k = 0..N, s = 0..order.
template <class S>
struct CoeffTable {
    SpaceKind kind = SpaceKind::quasi_exp;
    std::vector<SeriesUinv<S>> series;

    int N() const { return static_cast<int>(series.size()) - 1; }
    int order() const { return series.empty() ? -1 : series.front().order(); }
    const S& at(int k, int s) const { return series.at(static_cast<std::size_t>(k))[s]; }
};

/// Smallest order that extract_coeffs accepts and recover_coordinates needs.
inline int default_order(const Weight& lambda) {
    const int N = lambda.N();
    const int l1 = N ? lambda[0] : 0;
    return std::max(lambda.n() + N + 2, l1 + 2 * N);
}

template <class S>
CoeffTable<S> extract_coeffs(const SpacePoint<S>& X, int order) {
    if (order < X.n() + X.N()) throw std::invalid_argument("extract_coeffs: order must be at least n + N");
    const auto f = space_coefficients(space_diffop(X), X.N());
    std::vector<SeriesUinv<S>> b;
    for (const auto& r : f) b.push_back(series_at_infinity(r, order));
    CoeffTable<S> t;
    t.kind = X.kind;
    t.series = X.kind == SpaceKind::quasi_exp ? b : tau_basis_change(b);
    return t;
}

namespace detail {

/// Coefficients c_m(u), m = 0..N, of tau^m rebuilt from a table.
template <class S>
std::vector<SeriesUinv<S>> operator_series(const CoeffTable<S>& t) {
    const int N = t.N();
    std::vector<SeriesUinv<S>> c;
    if (t.kind == SpaceKind::quasi_exp) {
        for (int k = 0; k <= N; ++k) c.push_back(k % 2 ? t.series[static_cast<std::size_t>(k)].scaled(scalar<S>(-1)) : t.series[static_cast<std::size_t>(k)]);
        return c;
    }
    // sum_k (-1)^k G_k (tau^-1 - 1)^(N-k) tau^N = sum_k (-1)^k G_k (1 - tau)^(N-k) tau^k.
    for (int m = 0; m <= N; ++m) {
        SeriesUinv<S> cm;
        cm.c.assign(static_cast<std::size_t>(t.order()) + 1, scalar<S>(0));
        for (int k = 0; k <= m; ++k) {
            const std::int64_t w = binomial(N - k, m - k) * (m % 2 ? -1 : 1);
            cm = cm + t.series[static_cast<std::size_t>(k)].scaled(scalar<S>(w));
        }
        c.push_back(std::move(cm));
    }
    return c;
}

}  // namespace detail

/// Rebuilds the space point from its coefficient table: for each f_i and
/// increasing j, the coefficient of u^{top_i - 1 - j} (quasi-exponentials) or
/// u^{top_i - N - j} (polynomials) of D f_i is affine in the j-th coordinate.
template <class S>
SpacePoint<S> recover_coordinates(const CoeffTable<S>& t, const std::vector<S>& q, const Weight& lambda, double eps = kDefaultEps) {
    const int N = lambda.N();
    if (t.N() != N) throw std::invalid_argument("recover_coordinates: table has the wrong number of series");
    auto X = SpacePoint<S>::origin(t.kind, q, lambda);
    X.validate();
    const auto c = detail::operator_series(t);
    const int nu = t.kind == SpaceKind::quasi_exp ? 1 : N;
    for (int i = 1; i <= N; ++i) {
        const auto js = coordinate_indices(t.kind, lambda, i);
        const Poly<S> p = triangular_kernel(c, q[static_cast<std::size_t>(i - 1)], X.top(i), js, nu, eps);
        auto& row = X.coords[static_cast<std::size_t>(i - 1)];
        for (std::size_t k = 0; k < js.size(); ++k) row[k] = p[X.top(i) - js[k]];
    }
    return X;
}

/// chi(x) = prod_s (x - lambda_s - N + s); its roots are the exponent set.
template <class S>
Poly<S> chi_polynomial(const Weight& lambda) {
    Poly<S> p(scalar<S>(1));
    for (int d : exponent_set(lambda)) p *= Poly<S>::linear(scalar<S>(d));
    return p;
}

/// Space point attached to a Bethe solution, with the checks that tie it to
/// the solution.
template <class S>
struct Fiber {
    SpacePoint<S> point;
    WronskiImage<S> image;
    double image_residual = 0.0;                  // against e_s(b)
    std::vector<double> kernel_residuals;
};

/// Kernel of the fundamental operator of t, read as a space point.
template <class S>
Fiber<S> fiber_from_bethe(const BetheRoots<S>& t, const BetheProblem<S>& prob, double tol = 1e-8) {
    prob.validate();
    const SpaceKind kind = prob.q_is_one() ? SpaceKind::polynomial : SpaceKind::quasi_exp;
    if (kind == SpaceKind::quasi_exp && !prob.q_distinct()) throw std::invalid_argument("fiber_from_bethe: q must be distinct or all 1");
    auto K = bethe_kernel(t, prob.b, prob.q, prob.lambda, tol);
    if (!K.ok) throw std::runtime_error("fiber_from_bethe: " + K.defect);
    const double eps = ScalarTraits<S>::exact ? 0.0 : std::sqrt(tol);
    Fiber<S> f{SpacePoint<S>::from_functions(kind, prob.q, prob.lambda, K.functions, eps), {}, 0.0, K.residuals};
    f.image = wronski_map(f.point);
    f.image_residual = image_residual(f.image.a, prob.b);
    return f;
}

/// Largest relative gap between the coefficients of a table and the Rayleigh
/// quotients of the matching operator coefficients on w, s = 1..order.
inline double spectrum_gap(const std::vector<SeriesUinv<Matrix<Complex>>>& ops, const std::vector<Complex>& w,
                           const CoeffTable<Complex>& table, int order) {
    double worst = 0.0;
    for (int k = 1; k < static_cast<int>(ops.size()) && k <= table.N(); ++k)
        for (int s = 1; s <= order; ++s) {
            const Complex want = table.at(k, s);
            const Complex got = rayleigh(ops[static_cast<std::size_t>(k)][s], w);
            worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
        }
    return worst;
}

}  // namespace bethe

#endif  // BETHE_WRONSKI_HPP
