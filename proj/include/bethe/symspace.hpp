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

#ifndef BETHE_SYMSPACE_HPP
#define BETHE_SYMSPACE_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "tensorrep.hpp"

namespace bethe {

/// Exponent vector of z_1^a_1 ... z_n^a_n.
using Monomial = std::vector<int>;

inline int total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

/// Every monomial in n variables of total degree <= d, ordered by degree and
/// then lexicographically.
inline std::vector<Monomial> monomials(int n, int d) {
    std::vector<Monomial> out;
    for (int deg = 0; deg <= d; ++deg) {
        std::vector<Monomial> layer;
        Monomial m(static_cast<std::size_t>(n), 0);
        auto rec = [&](auto&& self, int pos, int left) -> void {
            if (pos == n - 1 || n == 0) {
                if (n > 0) m[static_cast<std::size_t>(pos)] = left;
                if (n > 0 || left == 0) layer.push_back(m);
                return;
            }
            for (int a = left; a >= 0; --a) {
                m[static_cast<std::size_t>(pos)] = a;
                self(self, pos + 1, left - a);
            }
        };
        rec(rec, 0, deg);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

/// An element of V (x) C[z_1..z_n] with all monomial degrees <= cutoff;
/// vector parts live on `basis`. Exact arithmetic only.
struct VPoly {
    std::shared_ptr<const Basis> basis;
    int cutoff = 0;
    std::map<Monomial, TensorVector<Rational>> terms;

    int n() const { return basis->n(); }

    static VPoly zero(std::shared_ptr<const Basis> basis, int cutoff) { return VPoly{std::move(basis), cutoff, {}}; }

    /// The constant v (x) 1.
    static VPoly constant(std::shared_ptr<const Basis> basis, int cutoff, TensorVector<Rational> v) {
        VPoly f = zero(basis, cutoff);
        f.add(Monomial(static_cast<std::size_t>(basis->n()), 0), v);
        return f;
    }

    /// Adds c * z^m (x) v; terms above the cutoff are dropped.
    void add(const Monomial& m, const TensorVector<Rational>& v, const Rational& c = Rational(1)) {
        if (total_degree(m) > cutoff) return;
        auto& slot = terms[m];
        if (slot.empty()) slot.assign(basis->size(), Rational(0));
        for (std::size_t i = 0; i < v.size(); ++i) slot[i] += c * v[i];
        if (std::all_of(slot.begin(), slot.end(), [](const Rational& x) { return sgn(x) == 0; })) terms.erase(m);
    }

    /// Largest degree of a nonzero term (-1 for zero).
    int degree() const {
        int d = -1;
        for (const auto& [m, v] : terms) d = std::max(d, total_degree(m));
        return d;
    }

    friend bool operator==(const VPoly& a, const VPoly& b) { return a.terms == b.terms; }
    friend VPoly operator+(VPoly a, const VPoly& b) {
        for (const auto& [m, v] : b.terms) a.add(m, v);
        return a;
    }
    friend VPoly operator-(VPoly a, const VPoly& b) {
        for (const auto& [m, v] : b.terms) a.add(m, v, Rational(-1));
        return a;
    }

    /// Coordinates over monomials(n, cutoff) x basis, monomial-major.
    std::vector<Rational> flatten() const {
        const auto mons = monomials(n(), cutoff);
        std::vector<Rational> out;
        out.reserve(mons.size() * basis->size());
        for (const auto& m : mons) {
            auto it = terms.find(m);
            for (std::size_t i = 0; i < basis->size(); ++i) out.push_back(it == terms.end() ? Rational(0) : it->second[i]);
        }
        return out;
    }
    static VPoly unflatten(std::shared_ptr<const Basis> basis, int cutoff, const std::vector<Rational>& x) {
        VPoly f = zero(basis, cutoff);
        const auto mons = monomials(basis->n(), cutoff);
        const std::size_t dim = basis->size();
        if (x.size() != mons.size() * dim) throw std::invalid_argument("VPoly: coordinate vector has the wrong length");
        for (std::size_t k = 0; k < mons.size(); ++k) f.add(mons[k], TensorVector<Rational>(x.begin() + static_cast<std::ptrdiff_t>(k * dim), x.begin() + static_cast<std::ptrdiff_t>((k + 1) * dim)));
        return f;
    }

    /// Same element over another basis containing every code used here.
    VPoly rebased(std::shared_ptr<const Basis> to) const {
        VPoly f = zero(to, cutoff);
        for (const auto& [m, v] : terms) {
            TensorVector<Rational> w(to->size(), Rational(0));
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (sgn(v[i]) == 0) continue;
                auto j = to->index_of(basis->code(i));
                if (!j) throw std::invalid_argument("VPoly: target basis misses a code");
                w[*j] = v[i];
            }
            f.add(m, w);
        }
        return f;
    }
};

/// (x^a y^b - x^b y^a) / (x - y) as a list of exponent pairs with signs.
inline std::vector<std::pair<std::pair<int, int>, int>> divided_difference(int a, int b) {
    std::vector<std::pair<std::pair<int, int>, int>> out;
    if (a == b) return out;
    const int sign = a > b ? 1 : -1;
    const int lo = std::min(a, b), gap = std::abs(a - b);
    for (int k = 0; k < gap; ++k) out.push_back({{lo + k, lo + gap - 1 - k}, sign});
    return out;
}

/// s_i f = P^{(i,i+1)} f^{s_i} + (f - f^{s_i}) / (z_i - z_{i+1}), where f^{s_i}
/// swaps z_i and z_{i+1} (1-based i).
inline VPoly sn_act(int i, const VPoly& f) {
    const int n = f.n();
    if (i < 1 || i >= n) throw std::invalid_argument("sn_act: index out of range");
    const auto P = permutation_matrix<Rational>(i, i + 1, *f.basis);
    VPoly out = VPoly::zero(f.basis, f.cutoff);
    const auto a = static_cast<std::size_t>(i - 1), b = static_cast<std::size_t>(i);
    for (const auto& [m, v] : f.terms) {
        Monomial sw = m;
        std::swap(sw[a], sw[b]);
        out.add(sw, P * v);
        for (const auto& [e, sign] : divided_difference(m[a], m[b])) {
            Monomial t = m;
            t[a] = e.first;
            t[b] = e.second;
            out.add(t, v, Rational(sign));
        }
    }
    return out;
}

/// Multiplication by a scalar polynomial given as monomial -> coefficient.
inline VPoly multiply(const std::map<Monomial, Rational>& p, const VPoly& f) {
    VPoly out = VPoly::zero(f.basis, f.cutoff);
    for (const auto& [m, c] : p)
        for (const auto& [fm, v] : f.terms) {
            Monomial t = fm;
            for (std::size_t s = 0; s < t.size(); ++s) t[s] += m[s];
            out.add(t, v, c);
        }
    return out;
}

/// The elementary symmetric polynomial sigma_k(z_1..z_n).
inline std::map<Monomial, Rational> elementary_symmetric_poly(int n, int k) {
    std::map<Monomial, Rational> out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != k) continue;
        Monomial m(static_cast<std::size_t>(n), 0);
        for (int s = 0; s < n; ++s) m[static_cast<std::size_t>(s)] = (mask >> s) & 1u;
        out[m] = 1;
    }
    return out;
}

/// e_{ij} acting on the vector part; the result lives on `to`.
inline VPoly gl_act(int i, int j, const VPoly& f, std::shared_ptr<const Basis> to) {
    const auto m = gl_matrix<Rational>(i, j, *f.basis, *to);
    VPoly out = VPoly::zero(to, f.cutoff);
    for (const auto& [mon, v] : f.terms) out.add(mon, m * v);
    return out;
}

/// Numerator L_{ij}(u) of the Yangian action at a fixed u: the product
/// (u - z_n + P^{(0,n)}) ... (u - z_1 + P^{(0,1)}) applied to e_j (x) f and
/// read off at e_i. Vector parts are taken over the full basis, and the
/// cutoff grows by n.
inline VPoly yangian_numerator(int i, int j, const Rational& u, const VPoly& f) {
    const int N = f.basis->N(), n = f.n();
    auto full = std::make_shared<const Basis>(Basis::full(N, n));
    const VPoly g = f.rebased(full);
    // (aux color, code, monomial) -> coefficient
    std::map<std::pair<int, std::pair<Code, Monomial>>, Rational> state;
    for (const auto& [m, v] : g.terms)
        for (std::size_t k = 0; k < v.size(); ++k)
            if (sgn(v[k]) != 0) state[{j - 1, {full->code(k), m}}] += v[k];
    for (int s = 0; s < n; ++s) {
        decltype(state) next;
        for (const auto& [key, c] : state) {
            const auto& [aux, rest] = key;
            const auto& [code, m] = rest;
            next[key] += u * c;
            Monomial up = m;
            up[static_cast<std::size_t>(s)] += 1;
            next[{aux, {code, up}}] -= c;
            next[{color_at(code, s, N, n), {with_color(code, s, aux, N, n), m}}] += c;
        }
        state = std::move(next);
    }
    VPoly out = VPoly::zero(full, f.cutoff + n);
    for (const auto& [key, c] : state) {
        if (key.first != i - 1 || sgn(c) == 0) continue;
        TensorVector<Rational> e(full->size(), Rational(0));
        e[*full->index_of(key.second.first)] = c;
        out.add(key.second.second, e);
    }
    return out;
}

/// Substitutes z_s = b_s.
template <class S>
TensorVector<S> evaluate_at_b(const VPoly& f, const std::vector<S>& b) {
    if (static_cast<int>(b.size()) != f.n()) throw std::invalid_argument("evaluate_at_b: need one value per variable");
    TensorVector<S> out(f.basis->size(), scalar<S>(0));
    for (const auto& [m, v] : f.terms) {
        S mon = scalar<S>(1);
        for (std::size_t s = 0; s < m.size(); ++s)
            for (int k = 0; k < m[s]; ++k) mon *= b[s];
        for (std::size_t i = 0; i < v.size(); ++i) out[i] += mon * lift<S>(v[i]);
    }
    return out;
}

enum class CharacterMode { weight, singular };

namespace detail {

/// Matrix of a linear map VPoly -> VPoly on flattened coordinates.
template <class F>
Matrix<Rational> vpoly_matrix(std::shared_ptr<const Basis> from, std::shared_ptr<const Basis> to, int cutoff, F&& map) {
    const auto mons = monomials(from->n(), cutoff);
    const std::size_t cols = mons.size() * from->size(), rows = mons.size() * to->size();
    Matrix<Rational> m(rows, cols);
    std::vector<Rational> e(cols, Rational(0));
    for (std::size_t c = 0; c < cols; ++c) {
        e[c] = 1;
        const auto img = map(VPoly::unflatten(from, cutoff, e)).flatten();
        e[c] = 0;
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = img[r];
    }
    return m;
}

}  // namespace detail

/// Basis of the S_n-invariants of degree <= d in V_lambda (x) C[z]; in
/// singular mode also killed by every e_{ij}, i < j.
inline std::vector<VPoly> invariant_basis(const Weight& lambda, int d, CharacterMode mode = CharacterMode::weight) {
    if (mode == CharacterMode::singular && !lambda.is_partition()) throw std::invalid_argument("invariant_basis: singular mode needs a partition");
    const int n = lambda.n(), N = lambda.N();
    auto basis = std::make_shared<const Basis>(Basis::weight(lambda));
    std::vector<Matrix<Rational>> blocks;
    for (int i = 1; i < n; ++i)
        blocks.push_back(detail::vpoly_matrix(basis, basis, d, [&](const VPoly& f) { return sn_act(i, f) - f; }));
    if (mode == CharacterMode::singular)
        for (int i = 1; i <= N; ++i)
            for (int j = i + 1; j <= N; ++j) {
                auto to = gl_target(*basis, i, j);
                if (!to) continue;
                auto tp = std::make_shared<const Basis>(*to);
                blocks.push_back(detail::vpoly_matrix(basis, tp, d, [&](const VPoly& f) { return gl_act(i, j, f, tp); }));
            }
    const std::size_t cols = monomials(n, d).size() * basis->size();
    std::size_t rows = 0;
    for (const auto& b : blocks) rows += b.rows();
    std::vector<VPoly> out;
    if (rows == 0) {
        std::vector<Rational> e(cols, Rational(0));
        for (std::size_t c = 0; c < cols; ++c) {
            e[c] = 1;
            out.push_back(VPoly::unflatten(basis, d, e));
            e[c] = 0;
        }
        return out;
    }
    Matrix<Rational> stack(rows, cols);
    std::size_t r0 = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < cols; ++c) stack(r0 + r, c) = b(r, c);
        r0 += b.rows();
    }
    for (const auto& v : nullspace(stack)) out.push_back(VPoly::unflatten(basis, d, v));
    return out;
}

/// dim F_k / F_{k-1} of the invariants, k = 0..cutoff.
inline std::vector<std::int64_t> invariant_graded_dims(const Weight& lambda, int cutoff, CharacterMode mode = CharacterMode::weight) {
    std::vector<std::int64_t> out;
    std::int64_t prev = 0;
    for (int k = 0; k <= cutoff; ++k) {
        const auto dim = static_cast<std::int64_t>(invariant_basis(lambda, k, mode).size());
        out.push_back(dim - prev);
        prev = dim;
    }
    return out;
}

/// Integer power series truncated at t^cutoff.
using IntSeries = std::vector<std::int64_t>;

namespace detail {

inline IntSeries series_mul(const IntSeries& a, const IntSeries& b) {
    IntSeries r(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < r.size() && j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

/// 1 / (t)_a = prod_{j=1}^a 1 / (1 - t^j).
inline IntSeries inverse_pochhammer(int a, int cutoff) {
    IntSeries r(static_cast<std::size_t>(cutoff) + 1, 0);
    r[0] = 1;
    for (int j = 1; j <= a; ++j)
        for (int k = j; k <= cutoff; ++k) r[static_cast<std::size_t>(k)] += r[static_cast<std::size_t>(k - j)];
    return r;
}

}  // namespace detail

/// Closed-form graded character of the invariants of weight lambda (weight
/// mode) or of their singular part, expanded to t^cutoff.
inline IntSeries graded_character(const Weight& lambda, CharacterMode mode, int cutoff) {
    if (cutoff < 0) throw std::invalid_argument("graded_character: negative cutoff");
    const int N = lambda.N();
    IntSeries one(static_cast<std::size_t>(cutoff) + 1, 0);
    one[0] = 1;
    if (mode == CharacterMode::weight) {
        IntSeries r = one;
        for (int i = 0; i < N; ++i) r = detail::series_mul(r, detail::inverse_pochhammer(lambda[i], cutoff));
        return r;
    }
    if (!lambda.is_partition()) throw std::invalid_argument("graded_character: singular mode needs a partition");
    IntSeries r = one;
    for (int i = 1; i <= N; ++i) r = detail::series_mul(r, detail::inverse_pochhammer(lambda[i - 1] + N - i, cutoff));
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) {
            IntSeries f = one;
            const int e = lambda[i - 1] - lambda[j - 1] + j - i;
            if (e <= cutoff) f[static_cast<std::size_t>(e)] -= 1;
            r = detail::series_mul(r, f);
        }
    int shift = 0;
    for (int i = 1; i <= N; ++i) shift += (i - 1) * lambda[i - 1];
    IntSeries out(static_cast<std::size_t>(cutoff) + 1, 0);
    for (int k = shift; k <= cutoff; ++k) out[static_cast<std::size_t>(k)] = r[static_cast<std::size_t>(k - shift)];
    return out;
}

/// t^{sum (i-1) lambda_i}: lowest filtration degree of the singular invariants.
inline int singular_min_degree(const Weight& lambda) {
    int k = 0;
    for (int i = 1; i <= lambda.N(); ++i) k += (i - 1) * lambda[i - 1];
    return k;
}

}  // namespace bethe

#endif  // BETHE_SYMSPACE_HPP
