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

#ifndef BETHE_YANGIAN_HPP
#define BETHE_YANGIAN_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "diffop.hpp"
#include "linalg.hpp"
#include "tensorrep.hpp"

namespace bethe {

/// V(b) = C^N(b_1) (x) ... (x) C^N(b_n).
template <class S>
struct EvaluationData {
    int N = 1;
    std::vector<S> b;

    int n() const { return static_cast<int>(b.size()); }

    /// b_s = 2(s - 1).
    static EvaluationData generic(int N, int n) {
        EvaluationData ev{N, {}};
        for (int s = 0; s < n; ++s) ev.b.push_back(scalar<S>(2 * s));
        return ev;
    }
    template <class T>
    EvaluationData<T> cast() const {
        EvaluationData<T> r{N, {}};
        for (const auto& x : b) r.b.push_back(lift<T>(x));
        return r;
    }
};

/// prod_{m=m0}^{m1-1} prod_a (u - m - b_a).
template <class S>
Poly<S> shifted_product(const EvaluationData<S>& ev, int m0, int m1) {
    Poly<S> p(scalar<S>(1));
    for (int m = m0; m < m1; ++m)
        for (const auto& b : ev.b) p *= Poly<S>::linear(b + scalar<S>(m));
    return p;
}

/// Matrix over a basis whose entries are rational functions of u with one
/// common scalar denominator: sum_p num[p] u^p / den(u).
template <class S>
struct OperatorRatFun {
    std::shared_ptr<const Basis> basis;
    std::vector<Matrix<S>> num;
    Poly<S> den{scalar<S>(1)};

    std::size_t dim() const { return basis->size(); }
    int degree() const { return static_cast<int>(num.size()) - 1; }
    Matrix<S> coefficient(int p) const {
        if (p < 0 || p > degree()) return Matrix<S>(dim(), dim());
        return num[static_cast<std::size_t>(p)];
    }

    template <class T>
    Matrix<T> numerator_as(const T& u) const {
        Matrix<T> acc(dim(), dim());
        T pw = lift<T>(scalar<S>(1));
        for (const auto& c : num) {
            acc += c.template cast<T>() * pw;
            pw = pw * u;
        }
        return acc;
    }
    template <class T>
    Matrix<T> evaluate_as(const T& u) const {
        const T d = den.eval_as(u);
        if (is_zero(d, 0.0)) throw std::domain_error("operator evaluated at a pole");
        return numerator_as(u) * (lift<T>(scalar<S>(1)) / d);
    }
    Matrix<S> evaluate(const S& u) const { return evaluate_as<S>(u); }

    /// Entry (r, c) as a rational function.
    RatFun<S> entry(std::size_t r, std::size_t c) const {
        std::vector<S> coeffs;
        for (const auto& m : num) coeffs.push_back(m(r, c));
        return RatFun<S>(Poly<S>(coeffs), den);
    }

    /// Expansion in u^{-1} up to u^{-order}; needs deg num <= deg den.
    SeriesUinv<Matrix<S>> series(int order) const {
        SeriesUinv<Matrix<S>> out;
        out.c.assign(static_cast<std::size_t>(order) + 1, Matrix<S>(dim(), dim()));
        for (int p = 0; p <= degree(); ++p) {
            if (num[static_cast<std::size_t>(p)].is_zero(0.0)) continue;
            auto s = series_at_infinity(RatFun<S>(Poly<S>::monomial(p), den), order);
            for (int m = 0; m <= order; ++m)
                if (!is_zero(s[m], 0.0)) out[m] += num[static_cast<std::size_t>(p)] * s[m];
        }
        return out;
    }

    template <class T>
    OperatorRatFun<T> cast() const {
        OperatorRatFun<T> r{basis, {}, den.template cast<T>()};
        for (const auto& m : num) r.num.push_back(m.template cast<T>());
        return r;
    }
};

/// Sparse vector over basis codes with polynomial-in-u coefficients.
template <class S>
using SparseVec = std::map<Code, Poly<S>>;

/// L_{ij}(u - shift) applied to v, where
/// L(u) = (u - b_n + P^{(0,n)}) ... (u - b_1 + P^{(0,1)}) and
/// L |e_j (x) w> = sum_i e_i (x) L_{ij} w. Indices i, j are 1-based.
template <class S>
SparseVec<S> apply_L(const EvaluationData<S>& ev, int i, int j, int shift, const SparseVec<S>& v) {
    const int N = ev.N, n = ev.n();
    std::map<std::pair<int, Code>, Poly<S>> state;
    for (const auto& [c, p] : v) state[{j - 1, c}] = p;
    for (int s = 0; s < n; ++s) {
        const Poly<S> lin = Poly<S>::linear(ev.b[static_cast<std::size_t>(s)] + scalar<S>(shift));
        std::map<std::pair<int, Code>, Poly<S>> next;
        for (const auto& [key, p] : state) {
            const auto [a, c] = key;
            next[key] += p * lin;
            const int cs = color_at(c, s, N, n);
            next[{cs, with_color(c, s, a, N, n)}] += p;
        }
        state.clear();
        for (auto& [key, p] : next)
            if (!p.is_zero()) state.emplace(key, std::move(p));
    }
    SparseVec<S> out;
    for (auto& [key, p] : state)
        if (key.first == i - 1) out.emplace(key.second, std::move(p));
    return out;
}

/// Assembles numerator matrices column by column from a sparse action.
/// Any image component outside the basis is an implementation error.
template <class S, class F>
std::vector<Matrix<S>> assemble(const Basis& basis, F&& column) {
    std::vector<SparseVec<S>> cols;
    int deg = -1;
    for (std::size_t c = 0; c < basis.size(); ++c) {
        cols.push_back(column(basis.code(c)));
        for (const auto& [code, p] : cols.back()) deg = std::max(deg, p.degree());
    }
    std::vector<Matrix<S>> num(static_cast<std::size_t>(std::max(deg, 0)) + 1, Matrix<S>(basis.size(), basis.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& [code, p] : cols[c]) {
            if (p.is_zero()) continue;
            auto row = basis.index_of(code);
            if (!row) throw std::logic_error("operator leaks outside the chosen basis");
            for (int k = 0; k <= p.degree(); ++k) num[static_cast<std::size_t>(k)](*row, c) = p[k];
        }
    return num;
}

template <class S>
SparseVec<S> unit(Code c) {
    return SparseVec<S>{{c, Poly<S>(scalar<S>(1))}};
}

/// N x N matrix of L_{ij}(u) as polynomial operators on `basis`.
template <class S>
std::vector<std::vector<OperatorRatFun<S>>> build_L(const EvaluationData<S>& ev, std::shared_ptr<const Basis> basis) {
    std::vector<std::vector<OperatorRatFun<S>>> L(static_cast<std::size_t>(ev.N));
    for (int i = 1; i <= ev.N; ++i)
        for (int j = 1; j <= ev.N; ++j) {
            auto num = assemble<S>(*basis, [&](Code c) { return apply_L(ev, i, j, 0, unit<S>(c)); });
            L[static_cast<std::size_t>(i - 1)].push_back({basis, std::move(num), Poly<S>(scalar<S>(1))});
        }
    return L;
}

/// T_{ij}(u) = L_{ij}(u) / prod_a (u - b_a).
template <class S>
OperatorRatFun<S> T_entry(int i, int j, const EvaluationData<S>& ev, std::shared_ptr<const Basis> basis) {
    auto num = assemble<S>(*basis, [&](Code c) { return apply_L(ev, i, j, 0, unit<S>(c)); });
    return {basis, std::move(num), shifted_product(ev, 0, 1)};
}

/// Numerator of M_{ib,jb}(u) applied to a basis vector; its denominator is
/// prod_{m<k} prod_a (u - m - b_a).
template <class S>
SparseVec<S> minor_column(const std::vector<int>& ib, const std::vector<int>& jb, const EvaluationData<S>& ev, Code c) {
    const int k = static_cast<int>(ib.size());
    SparseVec<S> total;
    for (const auto& [perm, sign] : signed_permutations(k)) {
        SparseVec<S> v = unit<S>(c);
        for (int r = k - 1; r >= 0 && !v.empty(); --r)
            v = apply_L(ev, ib[static_cast<std::size_t>(r)], jb[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])], r, v);
        for (auto& [code, p] : v) {
            if (sign > 0)
                total[code] += p;
            else
                total[code] -= p;
        }
    }
    for (auto it = total.begin(); it != total.end();) it = it->second.is_zero() ? total.erase(it) : std::next(it);
    return total;
}

inline void check_index_set(const std::vector<int>& s, int N) {
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (s[t] < 1 || s[t] > N) throw std::invalid_argument("index out of range");
        if (t > 0 && s[t] <= s[t - 1]) throw std::invalid_argument("index set must be strictly increasing");
    }
}

/// M_{ib,jb}(u) = sum_sigma sgn T_{i1,j_s(1)}(u) ... T_{ik,j_s(k)}(u-k+1).
template <class S>
OperatorRatFun<S> quantum_minor(const std::vector<int>& ib, const std::vector<int>& jb, const EvaluationData<S>& ev,
                                std::shared_ptr<const Basis> basis) {
    if (ib.size() != jb.size() || ib.empty()) throw std::invalid_argument("quantum_minor: index sets differ in size");
    check_index_set(ib, ev.N);
    check_index_set(jb, ev.N);
    auto num = assemble<S>(*basis, [&](Code c) { return minor_column(ib, jb, ev, c); });
    return {basis, std::move(num), shifted_product(ev, 0, static_cast<int>(ib.size()))};
}

template <class S>
OperatorRatFun<S> qdet(const EvaluationData<S>& ev, std::shared_ptr<const Basis> basis) {
    std::vector<int> all;
    for (int i = 1; i <= ev.N; ++i) all.push_back(i);
    return quantum_minor(all, all, ev, basis);
}

/// All k-subsets of {1..N} in lexicographic order.
inline std::vector<std::vector<int>> subsets(int N, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int x = start; x <= N; ++x) {
            cur.push_back(x);
            self(self, x + 1);
            cur.pop_back();
        }
    };
    rec(rec, 1);
    return out;
}

/// B_k^q(u) = sum_{|ib|=k} q_ib M_{ib,ib}(u) over the common denominator
/// prod_{m<N} prod_a (u - m - b_a). Throws std::logic_error on leakage out of
/// the basis (a weight basis must be preserved).
template <class S>
OperatorRatFun<S> transfer_matrix(int k, const std::vector<S>& q, const EvaluationData<S>& ev,
                                  std::shared_ptr<const Basis> basis) {
    if (k < 1 || k > ev.N) throw std::invalid_argument("transfer_matrix: k out of range");
    if (static_cast<int>(q.size()) != ev.N) throw std::invalid_argument("transfer_matrix: q has the wrong length");
    for (const auto& x : q)
        if (is_zero(x, 0.0)) throw std::invalid_argument("transfer_matrix: q must be nonzero");
    const Poly<S> pad = shifted_product(ev, k, ev.N);
    const auto sets = subsets(ev.N, k);
    auto num = assemble<S>(*basis, [&](Code c) {
        SparseVec<S> total;
        for (const auto& ib : sets) {
            S weight = scalar<S>(1);
            for (int i : ib) weight *= q[static_cast<std::size_t>(i - 1)];
            for (auto& [code, p] : minor_column(ib, ib, ev, c)) total[code] += p * pad * weight;
        }
        return total;
    });
    return {basis, std::move(num), shifted_product(ev, 0, ev.N)};
}

/// (B_0 = Id, B_1, ..., B_N) expanded to order u^{-order}.
template <class S>
std::vector<SeriesUinv<Matrix<S>>> transfer_series(const std::vector<S>& q, const EvaluationData<S>& ev,
                                                   std::shared_ptr<const Basis> basis, int order) {
    std::vector<SeriesUinv<Matrix<S>>> out;
    SeriesUinv<Matrix<S>> id;
    id.c.assign(static_cast<std::size_t>(order) + 1, Matrix<S>(basis->size(), basis->size()));
    id.c[0] = Matrix<S>::identity(basis->size());
    out.push_back(id);
    for (int k = 1; k <= ev.N; ++k) out.push_back(transfer_matrix(k, q, ev, basis).series(order));
    return out;
}

/// C_{k,s} on V_lambda and on V_lambda^sing (q = 1).
template <class S>
struct CTable {
    Weight lambda;
    std::shared_ptr<const Basis> basis;
    Matrix<S> singular;                              // columns span V_lambda^sing
    std::vector<SeriesUinv<Matrix<S>>> weight_space;  // C_k on V_lambda, k = 0..N
    std::vector<SeriesUinv<Matrix<S>>> restricted;    // C_k on V_lambda^sing
};

/// C_k(u) from D^{q=1}(u,tau) tau^{-N} = sum_k (-1)^k C_k(u) (tau^{-1} - 1)^{N-k}.
template <class S>
CTable<S> C_coefficients(const EvaluationData<S>& ev, const Weight& lambda, int order) {
    if (!lambda.is_partition()) throw std::invalid_argument("C_coefficients: lambda must be a partition");
    CTable<S> t;
    t.lambda = lambda;
    t.basis = std::make_shared<const Basis>(Basis::weight(lambda));
    std::vector<S> ones(static_cast<std::size_t>(ev.N), scalar<S>(1));
    t.weight_space = tau_basis_change(transfer_series(ones, ev, t.basis, order));
    auto sing = singular_basis(lambda);
    t.singular = Matrix<Rational>::from_columns(sing, t.basis->size()).template cast<S>();
    for (const auto& ck : t.weight_space) {
        SeriesUinv<Matrix<S>> r;
        for (const auto& m : ck.c) {
            if (sing.empty()) {
                r.c.push_back(Matrix<S>());
                continue;
            }
            auto sol = solve(t.singular, m * t.singular);
            if (!sol || !(sol->residual <= 1e-8 * std::max(1.0, m.max_abs()))) throw std::logic_error("C_k does not preserve V_lambda^sing");
            r.c.push_back(sol->x);
        }
        t.restricted.push_back(std::move(r));
    }
    return t;
}

/// Result of an identity check: number of tested instances and the first
/// failing one, if any.
struct CheckResult {
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::string first_failure;

    bool ok() const { return failures == 0; }
    void fail(const std::string& what) {
        if (failures++ == 0) first_failure = what;
    }
    void merge(const CheckResult& o) {
        checked += o.checked;
        if (!o.ok() && ok()) first_failure = o.first_failure;
        failures += o.failures;
    }
};

/// (u-v)[T_ij(u), T_kl(v)] = T_kj(v) T_il(u) - T_kj(u) T_il(v) for all index
/// quadruples. The scalar factor prod (u-b_a)(v-b_a) cancels, so this compares
/// the u^a v^b coefficients of the polynomial L-identity exactly.
template <class S>
CheckResult check_yangian_relations(const EvaluationData<S>& ev) {
    auto basis = std::make_shared<const Basis>(Basis::full(ev.N, ev.n()));
    auto L = build_L(ev, basis);
    const int N = ev.N, top = ev.n() + 1;
    auto A = [&](int i, int j, int p) { return L[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].coefficient(p); };
    CheckResult res;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l)
                    for (int a = 0; a <= top; ++a)
                        for (int b = 0; b <= top; ++b) {
                            auto lhs = commutator(A(i, j, a - 1), A(k, l, b)) - commutator(A(i, j, a), A(k, l, b - 1));
                            auto rhs = A(k, j, b) * A(i, l, a) - A(k, j, a) * A(i, l, b);
                            ++res.checked;
                            if (!(lhs - rhs).is_zero()) {
                                std::ostringstream os;
                                os << "T(" << i + 1 << j + 1 << "),T(" << k + 1 << l + 1 << ") at u^" << a << " v^" << b;
                                res.fail(os.str());
                            }
                        }
    return res;
}

/// [X(u), Y(v)] = 0 as a two-variable identity: every numerator coefficient of
/// X commutes with every numerator coefficient of Y.
template <class S>
bool commute_identically(const OperatorRatFun<S>& x, const OperatorRatFun<S>& y, double eps = kDefaultEps) {
    for (const auto& a : x.num)
        for (const auto& b : y.num)
            if (!commutator(a, b).is_zero(eps)) return false;
    return true;
}

template <class S>
bool commutes_with(const OperatorRatFun<S>& x, const Matrix<S>& m, double eps = kDefaultEps) {
    for (const auto& a : x.num)
        if (!commutator(a, m).is_zero(eps)) return false;
    return true;
}

/// Deterministic sample pairs (u, v) used for pointwise commutativity checks.
inline std::vector<std::pair<Rational, Rational>> sample_pairs() {
    return {{Rational(1, 3), Rational(7, 2)}, {Rational(-5, 2), Rational(11, 7)}, {Rational(13, 5), Rational(-2, 9)},
            {Rational(17, 4), Rational(19, 3)}, {Rational(-7, 6), Rational(-23, 8)}};
}

/// Pointwise [B_k(u), B_l(v)] = 0 at the sample pairs. Scalar denominators
/// are dropped so that sample points may coincide with poles.
template <class S>
bool commute_at_samples(const OperatorRatFun<S>& x, const OperatorRatFun<S>& y, double eps = kDefaultEps) {
    for (const auto& [u, v] : sample_pairs()) {
        const S su = lift<S>(u), sv = lift<S>(v);
        if (!commutator(x.numerator_as(su), y.numerator_as(sv)).is_zero(eps)) return false;
    }
    return true;
}

/// q_1 ... q_N prod_a (u - b_a + 1)/(u - b_a) over the transfer-matrix denominator.
template <class S>
bool is_bn_scalar(const OperatorRatFun<S>& bn, const std::vector<S>& q, const EvaluationData<S>& ev) {
    S qq = scalar<S>(1);
    for (const auto& x : q) qq *= x;
    Poly<S> expected = shifted_product(ev, -1, 0) * shifted_product(ev, 1, ev.N) * qq;
    const auto id = Matrix<S>::identity(bn.dim());
    const int deg = std::max(bn.degree(), expected.degree());
    for (int p = 0; p <= deg; ++p)
        if (!(bn.coefficient(p) == id * expected[p])) return false;
    return bn.den == shifted_product(ev, 0, ev.N);
}

}  // namespace bethe

#endif  // BETHE_YANGIAN_HPP
