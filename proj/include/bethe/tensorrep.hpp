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

#ifndef BETHE_TENSORREP_HPP
#define BETHE_TENSORREP_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "linalg.hpp"

namespace bethe {

/// gl_N weight lambda = (lambda_1, ..., lambda_N), n = |lambda|.
struct Weight {
    std::vector<int> lambda;

    Weight() = default;
    explicit Weight(std::vector<int> l) : lambda(std::move(l)) {
        for (int x : lambda)
            if (x < 0) throw std::invalid_argument("weight with a negative entry");
    }
    int N() const { return static_cast<int>(lambda.size()); }
    int n() const { return std::accumulate(lambda.begin(), lambda.end(), 0); }
    int operator[](int i) const { return lambda.at(static_cast<std::size_t>(i)); }
    bool is_partition() const { return std::is_sorted(lambda.rbegin(), lambda.rend()); }
    /// l_a = lambda_{a+1} + ... + lambda_N for a = 0..N.
    std::vector<int> root_counts() const {
        std::vector<int> l(lambda.size() + 1, 0);
        for (int a = N() - 1; a >= 0; --a) l[static_cast<std::size_t>(a)] = l[static_cast<std::size_t>(a) + 1] + lambda[static_cast<std::size_t>(a)];
        return l;
    }
    friend bool operator==(const Weight&, const Weight&) = default;
};

/// (lambda_1, 0, ..., 0): the weight of v_1 (x) ... (x) v_1.
inline Weight highest_weight(int N, int n) {
    std::vector<int> l(static_cast<std::size_t>(N), 0);
    l[0] = n;
    return Weight(l);
}

/// A basis vector v_{i_1} (x) ... (x) v_{i_n} is encoded as the base-N integer
/// with digits i_s - 1, slot 1 most significant. Numeric order of codes is the
/// lexicographic order of the color sequence.
using Code = std::uint64_t;

inline std::vector<int> colors_of(Code c, int N, int n) {
    std::vector<int> col(static_cast<std::size_t>(n));
    for (int s = n - 1; s >= 0; --s) {
        col[static_cast<std::size_t>(s)] = static_cast<int>(c % static_cast<Code>(N));
        c /= static_cast<Code>(N);
    }
    return col;
}

inline Code code_of(const std::vector<int>& colors, int N) {
    Code c = 0;
    for (int x : colors) c = c * static_cast<Code>(N) + static_cast<Code>(x);
    return c;
}

/// Color (0-based) of slot s (0-based) in a code.
inline int color_at(Code c, int s, int N, int n) {
    for (int k = n - 1; k > s; --k) c /= static_cast<Code>(N);
    return static_cast<int>(c % static_cast<Code>(N));
}

inline Code with_color(Code c, int s, int color, int N, int n) {
    Code p = 1;
    for (int k = n - 1; k > s; --k) p *= static_cast<Code>(N);
    const Code old = (c / p) % static_cast<Code>(N);
    return c - old * p + static_cast<Code>(color) * p;
}

/// I = (I_1, ..., I_N), disjoint sets of 1-based slots covering {1..n}.
struct IndexDecomposition {
    std::vector<std::vector<int>> sets;

    static IndexDecomposition from_colors(const std::vector<int>& colors, int N) {
        IndexDecomposition d;
        d.sets.assign(static_cast<std::size_t>(N), {});
        for (std::size_t s = 0; s < colors.size(); ++s) d.sets[static_cast<std::size_t>(colors[s])].push_back(static_cast<int>(s) + 1);
        return d;
    }
    /// 0-based colors per slot.
    std::vector<int> colors(int n) const {
        std::vector<int> c(static_cast<std::size_t>(n), -1);
        for (std::size_t j = 0; j < sets.size(); ++j)
            for (int s : sets[j]) c.at(static_cast<std::size_t>(s - 1)) = static_cast<int>(j);
        return c;
    }
    friend bool operator==(const IndexDecomposition&, const IndexDecomposition&) = default;
};

/// Ordered list of basis codes: either all of (C^N)^{(x)n} or one weight subspace.
class Basis {
   public:
    static Basis full(int N, int n) {
        Basis b(N, n);
        Code total = 1;
        for (int s = 0; s < n; ++s) total *= static_cast<Code>(N);
        for (Code c = 0; c < total; ++c) b.push(c);
        return b;
    }
    static Basis weight(const Weight& w) {
        Basis b(w.N(), w.n());
        b.weight_ = w;
        std::vector<int> colors;
        for (int j = 0; j < w.N(); ++j) colors.insert(colors.end(), static_cast<std::size_t>(w[j]), j);
        do {
            b.push(code_of(colors, w.N()));
        } while (std::next_permutation(colors.begin(), colors.end()));
        return b;
    }

    int N() const { return N_; }
    int n() const { return n_; }
    std::size_t size() const { return codes_.size(); }
    Code code(std::size_t i) const { return codes_.at(i); }
    const std::vector<Code>& codes() const { return codes_; }
    std::optional<std::size_t> index_of(Code c) const {
        auto it = index_.find(c);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    const std::optional<Weight>& weight() const { return weight_; }
    std::vector<int> colors(std::size_t i) const { return colors_of(codes_.at(i), N_, n_); }
    IndexDecomposition decomposition(std::size_t i) const { return IndexDecomposition::from_colors(colors(i), N_); }
    /// 1-based color string, e.g. "12" for v_1 (x) v_2.
    std::string label(std::size_t i) const {
        std::string s;
        for (int c : colors(i)) s += std::to_string(c + 1);
        return s;
    }

   private:
    Basis(int N, int n) : N_(N), n_(n) {
        if (N < 1 || n < 0) throw std::invalid_argument("basis needs N >= 1 and n >= 0");
    }
    void push(Code c) {
        index_.emplace(c, codes_.size());
        codes_.push_back(c);
    }

    int N_, n_;
    std::vector<Code> codes_;
    std::unordered_map<Code, std::size_t> index_;
    std::optional<Weight> weight_;
};

/// I_lambda in lexicographic order of (i_1, ..., i_n). Throws if |lambda| != n.
inline std::vector<IndexDecomposition> enumerate_basis(int N, int n, const Weight& w) {
    if (w.N() != N) throw std::invalid_argument("weight length differs from N");
    if (w.n() != n) throw std::invalid_argument("|lambda| differs from n");
    auto b = Basis::weight(w);
    std::vector<IndexDecomposition> out;
    for (std::size_t i = 0; i < b.size(); ++i) out.push_back(b.decomposition(i));
    return out;
}

/// Coefficient vector over a Basis.
template <class S>
using TensorVector = std::vector<S>;

/// Weight of e_{ij} applied to a weight basis, or nullopt when the image is zero.
inline std::optional<Weight> shifted_weight(const Weight& w, int i, int j) {
    auto l = w.lambda;
    l[static_cast<std::size_t>(i - 1)] += 1;
    l[static_cast<std::size_t>(j - 1)] -= 1;
    if (l[static_cast<std::size_t>(j - 1)] < 0) return std::nullopt;
    return Weight(l);
}

/// Basis of the image of e_{ij} on `from` (the full space maps to itself).
inline std::optional<Basis> gl_target(const Basis& from, int i, int j) {
    if (!from.weight()) return from;
    auto w = shifted_weight(*from.weight(), i, j);
    if (!w) return std::nullopt;
    return Basis::weight(*w);
}

/// Matrix of e_{ij} = sum_s e_{ij}^{(s)} (1-based i, j) from `from` to `to`.
template <class S = Rational>
Matrix<S> gl_matrix(int i, int j, const Basis& from, const Basis& to) {
    Matrix<S> m(to.size(), from.size());
    const int N = from.N(), n = from.n();
    for (std::size_t col = 0; col < from.size(); ++col) {
        const Code c = from.code(col);
        for (int s = 0; s < n; ++s) {
            if (color_at(c, s, N, n) != j - 1) continue;
            auto row = to.index_of(with_color(c, s, i - 1, N, n));
            if (!row) throw std::logic_error("gl_matrix: image outside the target basis");
            m(*row, col) += scalar<S>(1);
        }
    }
    return m;
}

/// e_{ij} v for v given over `from`; the result lives on gl_target(from, i, j)
/// and is empty when that space is zero.
template <class S>
TensorVector<S> glN_action(int i, int j, const TensorVector<S>& v, const Basis& from) {
    auto to = gl_target(from, i, j);
    if (!to) return {};
    return gl_matrix<S>(i, j, from, *to) * v;
}

/// Swap of tensor slots i and j (1-based) as a matrix on `basis`.
template <class S = Rational>
Matrix<S> permutation_matrix(int i, int j, const Basis& basis) {
    Matrix<S> m(basis.size(), basis.size());
    const int N = basis.N(), n = basis.n();
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const Code c = basis.code(col);
        const int ci = color_at(c, i - 1, N, n), cj = color_at(c, j - 1, N, n);
        const Code d = with_color(with_color(c, i - 1, cj, N, n), j - 1, ci, N, n);
        m(*basis.index_of(d), col) = scalar<S>(1);
    }
    return m;
}

template <class S>
TensorVector<S> permutation_op(int i, int j, const TensorVector<S>& v, const Basis& basis) {
    if (i < 1 || j < 1 || i > basis.n() || j > basis.n()) throw std::invalid_argument("permutation_op: slot out of range");
    return permutation_matrix<S>(i, j, basis) * v;
}

/// Stack of e_{ij}, i < j, on V_lambda; its kernel is V_lambda^sing.
inline Matrix<Rational> raising_stack(const Basis& weight_basis) {
    std::vector<Matrix<Rational>> blocks;
    std::size_t rows = 0;
    const int N = weight_basis.N();
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) {
            auto to = gl_target(weight_basis, i, j);
            if (!to) continue;
            blocks.push_back(gl_matrix<Rational>(i, j, weight_basis, *to));
            rows += blocks.back().rows();
        }
    Matrix<Rational> m(rows, weight_basis.size());
    std::size_t r0 = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < b.cols(); ++c) m(r0 + r, c) = b(r, c);
        r0 += b.rows();
    }
    return m;
}

/// Basis of V_lambda^sing by exact null space, in enumerate_basis coordinates.
inline std::vector<TensorVector<Rational>> singular_basis(const Weight& w) {
    auto basis = Basis::weight(w);
    auto stack = raising_stack(basis);
    if (stack.rows() == 0) {
        std::vector<TensorVector<Rational>> all;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            TensorVector<Rational> e(basis.size(), Rational(0));
            e[i] = 1;
            all.push_back(e);
        }
        return all;
    }
    return nullspace(stack);
}

/// v_lambda = sum over I_lambda of v_I.
template <class S = Rational>
TensorVector<S> cyclic_vector(const Weight& w) {
    return TensorVector<S>(Basis::weight(w).size(), scalar<S>(1));
}

/// Every weight with N entries summing to n, in lexicographic order.
inline std::vector<Weight> all_weights(int N, int n) {
    std::vector<Weight> out;
    std::vector<int> l(static_cast<std::size_t>(N), 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == N - 1) {
            l[static_cast<std::size_t>(pos)] = left;
            out.emplace_back(l);
            return;
        }
        for (int x = left; x >= 0; --x) {
            l[static_cast<std::size_t>(pos)] = x;
            self(self, pos + 1, left - x);
        }
    };
    if (N >= 1) rec(rec, 0, n);
    return out;
}

/// Partitions of n with at most N parts, padded with zeros to length N.
inline std::vector<Weight> partitions(int N, int n) {
    std::vector<Weight> out;
    for (auto& w : all_weights(N, n))
        if (w.is_partition()) out.push_back(w);
    return out;
}

}  // namespace bethe

#endif  // BETHE_TENSORREP_HPP
