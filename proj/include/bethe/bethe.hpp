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

#ifndef BETHE_BETHE_HPP
#define BETHE_BETHE_HPP

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "diffop.hpp"
#include "linalg.hpp"
#include "tensorrep.hpp"

namespace bethe {

template <class S>
struct BetheProblem {
    Weight lambda;
    std::vector<S> q;
    std::vector<S> b;

    int N() const { return lambda.N(); }
    int n() const { return lambda.n(); }
    /// l_0 = n, l_1, ..., l_N = 0.
    std::vector<int> l() const { return lambda.root_counts(); }
    int root_count() const {
        auto ls = l();
        return std::accumulate(ls.begin() + 1, ls.end() - 1, 0);
    }
    bool q_is_one() const {
        return std::all_of(q.begin(), q.end(), [](const S& x) { return is_zero(x - scalar<S>(1), 0.0); });
    }
    bool q_distinct() const {
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = i + 1; j < q.size(); ++j)
                if (is_zero(q[i] - q[j], 0.0)) return false;
        return true;
    }
    void validate() const {
        if (N() < 1) throw std::invalid_argument("BetheProblem: N must be positive");
        if (static_cast<int>(q.size()) != N()) throw std::invalid_argument("BetheProblem: q must have N entries");
        if (static_cast<int>(b.size()) != n()) throw std::invalid_argument("BetheProblem: b must have n entries");
        for (int x : lambda.lambda)
            if (x < 0) throw std::invalid_argument("BetheProblem: negative weight entry");
        for (const auto& x : q)
            if (is_zero(x, 0.0)) throw std::invalid_argument("BetheProblem: q must be nonzero");
    }
    template <class T>
    BetheProblem<T> cast() const {
        BetheProblem<T> p{lambda, {}, {}};
        for (const auto& x : q) p.q.push_back(lift<T>(x));
        for (const auto& x : b) p.b.push_back(lift<T>(x));
        return p;
    }
};

/// Roots t^(a)_j stored as blocks[a-1][j-1], a = 1..N-1.
template <class S>
struct BetheRoots {
    std::vector<std::vector<S>> blocks;

    static BetheRoots empty_for(const std::vector<int>& l) {
        BetheRoots r;
        for (std::size_t a = 1; a + 1 < l.size(); ++a) r.blocks.emplace_back(static_cast<std::size_t>(l[a]));
        return r;
    }
    std::vector<S> flat() const {
        std::vector<S> x;
        for (const auto& blk : blocks) x.insert(x.end(), blk.begin(), blk.end());
        return x;
    }
    void assign(const std::vector<S>& x) {
        std::size_t k = 0;
        for (auto& blk : blocks)
            for (auto& v : blk) v = x.at(k++);
    }
    /// t^(a), with t^(0) = b and t^(N) empty.
    const std::vector<S>& level(int a, const std::vector<S>& b) const {
        static const std::vector<S> none;
        if (a == 0) return b;
        if (a < 1 || a > static_cast<int>(blocks.size())) return none;
        return blocks[static_cast<std::size_t>(a - 1)];
    }
    template <class T>
    BetheRoots<T> cast() const {
        BetheRoots<T> r;
        for (const auto& blk : blocks) {
            r.blocks.emplace_back();
            for (const auto& v : blk) r.blocks.back().push_back(lift<T>(v));
        }
        return r;
    }
};

// ---------------------------------------------------------------------------
// Bethe ansatz equations in denominator-free form.

namespace detail {

/// x_self - other + c; other is a root index (>= 0) or b_s encoded as -1-s.
template <class S>
struct Factor {
    int other;
    S c;
};

template <class S>
struct Equation {
    int self;
    int qa;  // LHS carries q_qa, RHS q_{qa+1} (0-based)
    std::vector<Factor<S>> lhs, rhs;
};

template <class S>
std::vector<Equation<S>> bae_equations(const std::vector<int>& l) {
    const int N = static_cast<int>(l.size()) - 1;
    std::vector<int> offset(static_cast<std::size_t>(N) + 1, 0);
    for (int a = 1; a < N; ++a) offset[static_cast<std::size_t>(a + 1)] = offset[static_cast<std::size_t>(a)] + l[static_cast<std::size_t>(a)];
    auto var = [&](int a, int j) { return a == 0 ? -1 - j : offset[static_cast<std::size_t>(a)] + j; };
    const S one = scalar<S>(1), zero = scalar<S>(0);
    std::vector<Equation<S>> eqs;
    for (int a = 1; a < N; ++a)
        for (int j = 0; j < l[static_cast<std::size_t>(a)]; ++j) {
            Equation<S> e{var(a, j), a - 1, {}, {}};
            for (int jp = 0; jp < l[static_cast<std::size_t>(a - 1)]; ++jp) {
                e.lhs.push_back({var(a - 1, jp), one});
                e.rhs.push_back({var(a - 1, jp), zero});
            }
            for (int jp = 0; jp < l[static_cast<std::size_t>(a)]; ++jp) {
                if (jp == j) continue;
                e.lhs.push_back({var(a, jp), -one});
                e.rhs.push_back({var(a, jp), one});
            }
            if (a + 1 < N)
                for (int jp = 0; jp < l[static_cast<std::size_t>(a + 1)]; ++jp) {
                    e.lhs.push_back({var(a + 1, jp), zero});
                    e.rhs.push_back({var(a + 1, jp), -one});
                }
            eqs.push_back(std::move(e));
        }
    return eqs;
}

/// Value of q * prod factors and, optionally, its gradient in (x, b).
template <class S>
S side_value(const std::vector<Factor<S>>& fs, int self, const S& coef, const std::vector<S>& x, const std::vector<S>& b,
             std::type_identity_t<std::vector<S>>* dx, std::type_identity_t<std::vector<S>>* db) {
    const std::size_t m = fs.size();
    std::vector<S> val(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& f = fs[i];
        const S& o = f.other >= 0 ? x[static_cast<std::size_t>(f.other)] : b[static_cast<std::size_t>(-1 - f.other)];
        val[i] = x[static_cast<std::size_t>(self)] - o + f.c;
    }
    std::vector<S> prefix(m + 1, coef), suffix(m + 1, scalar<S>(1));
    for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] * val[i];
    for (std::size_t i = m; i-- > 0;) suffix[i] = suffix[i + 1] * val[i];
    if (dx)
        for (std::size_t i = 0; i < m; ++i) {
            const S g = prefix[i] * suffix[i + 1];
            (*dx)[static_cast<std::size_t>(self)] += g;
            if (fs[i].other >= 0)
                (*dx)[static_cast<std::size_t>(fs[i].other)] -= g;
            else if (db)
                (*db)[static_cast<std::size_t>(-1 - fs[i].other)] -= g;
        }
    return prefix[m];
}

}  // namespace detail

/// LHS - RHS of every equation, in block order. Empty when there are no roots.
template <class S>
std::vector<S> bae_residual(const BetheRoots<S>& t, const BetheProblem<S>& prob) {
    const auto eqs = detail::bae_equations<S>(prob.l());
    const auto x = t.flat();
    std::vector<S> r;
    for (const auto& e : eqs) {
        const S qa = prob.q[static_cast<std::size_t>(e.qa)], qb = prob.q[static_cast<std::size_t>(e.qa + 1)];
        r.push_back(detail::side_value(e.lhs, e.self, qa, x, prob.b, nullptr, nullptr) -
                    detail::side_value(e.rhs, e.self, qb, x, prob.b, nullptr, nullptr));
    }
    return r;
}

/// Scale-free residual: max_j |L_j - R_j| / max(1, |L_j|, |R_j|).
template <class S>
double bae_relative_residual(const BetheRoots<S>& t, const BetheProblem<S>& prob) {
    const auto eqs = detail::bae_equations<S>(prob.l());
    const auto x = t.flat();
    double worst = 0.0;
    for (const auto& e : eqs) {
        const S L = detail::side_value(e.lhs, e.self, prob.q[static_cast<std::size_t>(e.qa)], x, prob.b, nullptr, nullptr);
        const S R = detail::side_value(e.rhs, e.self, prob.q[static_cast<std::size_t>(e.qa + 1)], x, prob.b, nullptr, nullptr);
        worst = std::max(worst, magnitude(L - R) / std::max({1.0, magnitude(L), magnitude(R)}));
    }
    return worst;
}

/// Residual vector F, its Jacobian in x and in b, with each equation divided
/// by max(1, |L|, |R|) so that Newton sees a scale-free system.
struct BaeSystem {
    std::vector<detail::Equation<Complex>> eqs;
    std::vector<Complex> q;

    explicit BaeSystem(const BetheProblem<Complex>& prob) : eqs(detail::bae_equations<Complex>(prob.l())), q(prob.q) {}

    std::size_t size() const { return eqs.size(); }

    void eval(const std::vector<Complex>& x, const std::vector<Complex>& b, std::vector<Complex>& F, Matrix<Complex>* Jx,
              Matrix<Complex>* Jb, double* rel) const {
        const std::size_t m = eqs.size();
        F.assign(m, 0.0);
        if (rel) *rel = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            const auto& e = eqs[r];
            std::vector<Complex> dxl(x.size()), dxr(x.size()), dbl(b.size()), dbr(b.size());
            const bool jac = Jx != nullptr;
            const Complex L = detail::side_value(e.lhs, e.self, q[static_cast<std::size_t>(e.qa)], x, b, jac ? &dxl : nullptr,
                                                 jac ? &dbl : nullptr);
            const Complex R = detail::side_value(e.rhs, e.self, q[static_cast<std::size_t>(e.qa + 1)], x, b,
                                                 jac ? &dxr : nullptr, jac ? &dbr : nullptr);
            const double scale = std::max({1.0, std::abs(L), std::abs(R)});
            F[r] = (L - R) / scale;
            if (rel) *rel = std::max(*rel, std::abs(F[r]));
            if (Jx)
                for (std::size_t c = 0; c < x.size(); ++c) (*Jx)(r, c) = (dxl[c] - dxr[c]) / scale;
            if (Jb)
                for (std::size_t c = 0; c < b.size(); ++c) (*Jb)(r, c) = (dbl[c] - dbr[c]) / scale;
        }
    }
};

// ---------------------------------------------------------------------------
// n = 1 closed form and cluster starts.

/// Unique solution for n = 1 and lambda = e_{k+1}:
/// t^(i) = b1 + sum_{j<=i} q_j / (q_{k+1} - q_j), i = 1..k.
template <class S>
BetheRoots<S> solve_n1(int k, const std::vector<S>& q, const S& b1) {
    const int N = static_cast<int>(q.size());
    if (k < 0 || k >= N) throw std::invalid_argument("solve_n1: k out of range");
    std::vector<int> l(static_cast<std::size_t>(N) + 1, 0);
    l[0] = 1;
    for (int a = 1; a <= k; ++a) l[static_cast<std::size_t>(a)] = 1;
    auto t = BetheRoots<S>::empty_for(l);
    S acc = b1;
    for (int i = 1; i <= k; ++i) {
        const S diff = q[static_cast<std::size_t>(k)] - q[static_cast<std::size_t>(i - 1)];
        if (is_zero(diff, 0.0)) throw std::invalid_argument("solve_n1: q_{k+1} coincides with an earlier q_j");
        acc += q[static_cast<std::size_t>(i - 1)] / diff;
        t.blocks[static_cast<std::size_t>(i - 1)][0] = acc;
    }
    return t;
}

/// Start point for the basis vector with the given 0-based slot colors: slot s
/// of color c contributes roots b_s + sum_{j<=a} q_j/(q_{c+1} - q_j) to blocks
/// a = 1..c, and block a lists its roots in slot order.
template <class S>
BetheRoots<S> cluster_start(const std::vector<int>& colors, const std::vector<S>& q, const std::vector<S>& b) {
    const int N = static_cast<int>(q.size());
    BetheRoots<S> t;
    t.blocks.resize(static_cast<std::size_t>(std::max(N - 1, 0)));
    for (std::size_t s = 0; s < colors.size(); ++s) {
        const int c = colors[s];
        auto one = solve_n1(c, q, b[s]);
        for (int a = 1; a <= c; ++a) t.blocks[static_cast<std::size_t>(a - 1)].push_back(one.blocks[static_cast<std::size_t>(a - 1)][0]);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Off-diagonality and deduplication.

/// Smallest relative distance between roots that must differ (within a block
/// and across adjacent blocks); +inf when there are no such pairs.
template <class S>
double offdiagonal_margin(const BetheRoots<S>& t) {
    double m = std::numeric_limits<double>::infinity();
    auto gap = [&](const S& x, const S& y) {
        m = std::min(m, magnitude(x - y) / std::max({1.0, magnitude(x), magnitude(y)}));
    };
    for (std::size_t a = 0; a < t.blocks.size(); ++a) {
        const auto& blk = t.blocks[a];
        for (std::size_t j = 0; j < blk.size(); ++j)
            for (std::size_t jp = j + 1; jp < blk.size(); ++jp) gap(blk[j], blk[jp]);
        if (a + 1 < t.blocks.size())
            for (const auto& x : blk)
                for (const auto& y : t.blocks[a + 1]) gap(x, y);
    }
    return m;
}

/// Sorts each block by (re, im), with values rounded to a 1e-9 grid so the
/// order is stable under rounding noise.
inline void canonicalize(BetheRoots<Complex>& t) {
    auto key = [](const Complex& z) {
        return std::pair{std::round(z.real() * 1e9), std::round(z.imag() * 1e9)};
    };
    for (auto& blk : t.blocks) std::sort(blk.begin(), blk.end(), [&](const Complex& x, const Complex& y) { return key(x) < key(y); });
}

/// Equal up to within-block permutation, matched greedily with tolerance tol.
inline bool same_solution(const BetheRoots<Complex>& x, const BetheRoots<Complex>& y, double tol) {
    if (x.blocks.size() != y.blocks.size()) return false;
    for (std::size_t a = 0; a < x.blocks.size(); ++a) {
        const auto& bx = x.blocks[a];
        const auto& by = y.blocks[a];
        if (bx.size() != by.size()) return false;
        std::vector<bool> used(by.size(), false);
        for (const auto& v : bx) {
            bool found = false;
            for (std::size_t k = 0; k < by.size() && !found; ++k)
                if (!used[k] && std::abs(v - by[k]) <= tol * std::max(1.0, std::abs(v))) used[k] = found = true;
            if (!found) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Newton and path tracking.

struct SolverOptions {
    double y0 = 1000.0;
    double newton_tol = 1e-12;
    int max_newton = 200;
    double dedup_tol = 1e-6;
    double offdiag_tol = 1e-8;
    std::uint64_t seed = 0;
    int gaudin_factor = 50;
    std::vector<double> angles{0.7, 1.9, 2.6};
    int max_steps = 100000;
};

namespace detail {

inline std::optional<std::vector<Complex>> linear_solve(const Matrix<Complex>& a, const std::vector<Complex>& rhs) {
    auto sol = solve_vector(a, rhs, 0.0);
    if (!sol) return std::nullopt;
    for (const auto& v : *sol)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return std::nullopt;
    return sol;
}

inline double vec_norm(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const auto& z : v) s = std::max(s, std::abs(z));
    return s;
}

/// Newton polish; returns the final scaled residual, or nullopt on a
/// singular Jacobian.
inline std::optional<double> newton(const BaeSystem& sys, std::vector<Complex>& x, const std::vector<Complex>& b, double tol,
                                    int max_iter) {
    std::vector<Complex> F;
    Matrix<Complex> J(sys.size(), x.size());
    double rel = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        sys.eval(x, b, F, &J, nullptr, &rel);
        if (rel <= tol) return rel;
        auto dx = linear_solve(J, F);
        if (!dx) return std::nullopt;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= (*dx)[i];
        if (vec_norm(*dx) <= 1e-15 * std::max(1.0, vec_norm(x))) {
            sys.eval(x, b, F, nullptr, nullptr, &rel);
            return rel;
        }
    }
    sys.eval(x, b, F, nullptr, nullptr, &rel);
    return rel;
}

inline std::vector<Complex> path_b(const std::vector<Complex>& target, const std::vector<Complex>& dir, double y) {
    std::vector<Complex> b(target.size());
    for (std::size_t s = 0; s < b.size(); ++s) b[s] = target[s] + y * dir[s];
    return b;
}

/// Tracks x(y) along b(y) = target + y * dir from y = y0 down to 0 with an
/// Euler predictor and a Newton corrector. Returns false when the step size
/// underflows or the step budget runs out.
inline bool track(const BaeSystem& sys, std::vector<Complex>& x, const std::vector<Complex>& target,
                  const std::vector<Complex>& dir, double y0, int max_steps) {
    double y = y0;
    double h = 0.05 * std::max(y, 1.0);
    std::vector<Complex> F;
    Matrix<Complex> Jx(sys.size(), x.size()), Jb(sys.size(), target.size());
    for (int step = 0; step < max_steps && y > 0.0; ++step) {
        h = std::min({h, 0.05 * std::max(y, 1.0), y});
        if (h < 1e-12 * std::max(1.0, y)) return false;
        auto b = path_b(target, dir, y);
        sys.eval(x, b, F, &Jx, &Jb, nullptr);
        std::vector<Complex> db(sys.size());
        for (std::size_t r = 0; r < sys.size(); ++r)
            for (std::size_t c = 0; c < dir.size(); ++c) db[r] += Jb(r, c) * dir[c];
        auto v = linear_solve(Jx, db);  // dx/dy = -v
        if (!v) return false;
        const double ynew = y - h;
        std::vector<Complex> xp = x;
        for (std::size_t i = 0; i < x.size(); ++i) xp[i] += h * (*v)[i];
        const auto bn = path_b(target, dir, ynew);
        bool ok = false;
        double prev = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 6; ++it) {
            double rel = 0.0;
            sys.eval(xp, bn, F, &Jx, nullptr, &rel);
            if (rel <= 1e-10) {
                ok = true;
                break;
            }
            auto dx = linear_solve(Jx, F);
            if (!dx) break;
            const double nd = vec_norm(*dx);
            if (it > 0 && nd > 0.5 * prev) break;
            prev = nd;
            for (std::size_t i = 0; i < x.size(); ++i) xp[i] -= (*dx)[i];
        }
        if (ok) {
            x = std::move(xp);
            y = ynew;
            h *= 1.25;
        } else {
            h *= 0.5;
        }
    }
    return y <= 0.0;
}

inline int thread_count(std::size_t tasks) {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("BETHE_THREADS")) n = std::atoi(env);
    n = std::max(1, n);
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(tasks, 1)));
}

/// Runs fn(i) for i < count on a small pool; results are indexed by i.
template <class F>
void parallel_for(std::size_t count, F&& fn) {
    const int workers = thread_count(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Gaudin-limit seeds for q = 1.

/// Residual of the Gaudin equations with v^(0) = d; also fills the Jacobian.
inline std::vector<Complex> gaudin_residual(const std::vector<Complex>& v, const std::vector<int>& l,
                                            const std::vector<Complex>& d, Matrix<Complex>* J) {
    const int N = static_cast<int>(l.size()) - 1;
    std::vector<int> offset(static_cast<std::size_t>(N) + 1, 0);
    for (int a = 1; a < N; ++a) offset[static_cast<std::size_t>(a + 1)] = offset[static_cast<std::size_t>(a)] + l[static_cast<std::size_t>(a)];
    std::vector<Complex> F(v.size());
    auto add = [&](std::size_t row, int self, int other, bool other_is_d, double w) {
        const Complex o = other_is_d ? d[static_cast<std::size_t>(other)] : v[static_cast<std::size_t>(other)];
        const Complex inv = 1.0 / (v[static_cast<std::size_t>(self)] - o);
        F[row] += w * inv;
        if (J) {
            (*J)(row, static_cast<std::size_t>(self)) -= w * inv * inv;
            if (!other_is_d) (*J)(row, static_cast<std::size_t>(other)) += w * inv * inv;
        }
    };
    for (int a = 1; a < N; ++a)
        for (int j = 0; j < l[static_cast<std::size_t>(a)]; ++j) {
            const int self = offset[static_cast<std::size_t>(a)] + j;
            const auto row = static_cast<std::size_t>(self);
            for (int jp = 0; jp < l[static_cast<std::size_t>(a - 1)]; ++jp)
                add(row, self, a == 1 ? jp : offset[static_cast<std::size_t>(a - 1)] + jp, a == 1, 1.0);
            for (int jp = 0; jp < l[static_cast<std::size_t>(a)]; ++jp)
                if (jp != j) add(row, self, offset[static_cast<std::size_t>(a)] + jp, false, -2.0);
            if (a + 1 < N)
                for (int jp = 0; jp < l[static_cast<std::size_t>(a + 1)]; ++jp) add(row, self, offset[static_cast<std::size_t>(a + 1)] + jp, false, 1.0);
        }
    return F;
}

/// Off-diagonal Gaudin solutions from seeded random multi-start Newton,
/// deduplicated up to within-block permutation and canonically sorted.
inline std::vector<BetheRoots<Complex>> solve_gaudin(const std::vector<int>& l, const std::vector<Complex>& d,
                                                     std::size_t wanted, const SolverOptions& opt) {
    const auto blank = BetheRoots<Complex>::empty_for(l);
    const std::size_t dim = blank.flat().size();
    std::vector<BetheRoots<Complex>> found;
    if (dim == 0) {
        found.push_back(blank);
        return found;
    }
    double lo = d[0].real(), hi = lo;
    for (const auto& z : d) lo = std::min(lo, z.real()), hi = std::max(hi, z.real());
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> re(lo - 1.0, hi + 1.0), im(-1.0, 1.0);
    const std::size_t starts = static_cast<std::size_t>(opt.gaudin_factor) * std::max<std::size_t>(wanted, 1);
    for (std::size_t s = 0; s < starts && found.size() < wanted; ++s) {
        std::vector<Complex> v(dim);
        for (auto& z : v) z = Complex(re(rng), im(rng));
        bool ok = false;
        for (int it = 0; it < 100; ++it) {
            Matrix<Complex> J(dim, dim);
            auto F = gaudin_residual(v, l, d, &J);
            if (detail::vec_norm(F) <= 1e-12) {
                ok = true;
                break;
            }
            auto dx = detail::linear_solve(J, F);
            if (!dx) break;
            for (std::size_t i = 0; i < dim; ++i) v[i] -= (*dx)[i];
            if (detail::vec_norm(v) > 1e6) break;
        }
        if (!ok) continue;
        auto t = blank;
        t.assign(v);
        if (offdiagonal_margin(t) <= 1e-6) continue;
        bool near_d = false;
        for (const auto& z : t.blocks[0])
            for (const auto& e : d) near_d |= std::abs(z - e) < 1e-6;
        if (near_d) continue;
        canonicalize(t);
        if (std::none_of(found.begin(), found.end(), [&](const auto& f) { return same_solution(f, t, opt.dedup_tol); }))
            found.push_back(t);
    }
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
        auto fx = x.flat(), fy = y.flat();
        return std::lexicographical_compare(fx.begin(), fx.end(), fy.begin(), fy.end(), [](const Complex& p, const Complex& q) {
            return std::pair{p.real(), p.imag()} < std::pair{q.real(), q.imag()};
        });
    });
    return found;
}

// ---------------------------------------------------------------------------
// Weight functions and Bethe vectors.

/// W_I(t; b): symmetrization within each block of U_I(t; b). `colors` are
/// the 0-based slot colors of v_I. Also returns the sum of |terms| of the
/// symmetrization, a natural scale for deciding whether W vanishes.
template <class S>
std::pair<S, double> weight_function_scaled(const std::vector<int>& colors, const BetheRoots<S>& t, const std::vector<S>& b) {
    const int Nm1 = static_cast<int>(t.blocks.size());
    // i^(a): sorted 1-based slots whose color index is >= a.
    std::vector<std::vector<int>> idx(static_cast<std::size_t>(Nm1) + 1);
    for (int a = 0; a <= Nm1; ++a)
        for (std::size_t s = 0; s < colors.size(); ++s)
            if (colors[s] >= a) idx[static_cast<std::size_t>(a)].push_back(static_cast<int>(s) + 1);
    for (int a = 1; a <= Nm1; ++a)
        if (idx[static_cast<std::size_t>(a)].size() != t.blocks[static_cast<std::size_t>(a - 1)].size())
            throw std::invalid_argument("weight_function: root counts do not match the index decomposition");

    std::vector<std::vector<int>> perm(static_cast<std::size_t>(Nm1));
    for (int a = 0; a < Nm1; ++a) {
        perm[static_cast<std::size_t>(a)].resize(t.blocks[static_cast<std::size_t>(a)].size());
        std::iota(perm[static_cast<std::size_t>(a)].begin(), perm[static_cast<std::size_t>(a)].end(), 0);
    }
    const S one = scalar<S>(1);
    S total = scalar<S>(0);
    double scale = 0.0;
    while (true) {
        auto root = [&](int a, int j) -> const S& {
            if (a == 0) return b[static_cast<std::size_t>(j)];
            return t.blocks[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(perm[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(j)])];
        };
        S U = one;
        for (int a = 1; a <= Nm1; ++a) {
            const auto& ia = idx[static_cast<std::size_t>(a)];
            const auto& ip = idx[static_cast<std::size_t>(a - 1)];
            for (std::size_t j = 0; j < ia.size(); ++j) {
                const S& x = root(a, static_cast<int>(j));
                for (std::size_t jp = 0; jp < ip.size(); ++jp) {
                    if (ip[jp] < ia[j])
                        U *= x - root(a - 1, static_cast<int>(jp)) + one;
                    else if (ip[jp] > ia[j])
                        U *= x - root(a - 1, static_cast<int>(jp));
                }
                for (std::size_t jp = j + 1; jp < ia.size(); ++jp) {
                    const S diff = x - root(a, static_cast<int>(jp));
                    U *= (diff + one) / diff;
                }
            }
        }
        total += U;
        scale += magnitude(U);
        int a = Nm1 - 1;
        for (; a >= 0; --a)
            if (std::next_permutation(perm[static_cast<std::size_t>(a)].begin(), perm[static_cast<std::size_t>(a)].end())) break;
        if (a < 0) break;
    }
    return {total, scale};
}

template <class S>
S weight_function(const IndexDecomposition& I, const BetheRoots<S>& t, const std::vector<S>& b) {
    return weight_function_scaled(I.colors(static_cast<int>(b.size())), t, b).first;
}

/// Coefficient of v_I in the Bethe vector of V(b) with L(u) ordered
/// (u - b_n + P^{(0,n)}) ... (u - b_1 + P^{(0,1)}): the weight function taken
/// on the reversed tensor order, W_{rev I}(t; rev b).
template <class S>
std::pair<S, double> bethe_coefficient(const std::vector<int>& colors, const BetheRoots<S>& t, const std::vector<S>& b) {
    return weight_function_scaled(std::vector<int>(colors.rbegin(), colors.rend()), t, std::vector<S>(b.rbegin(), b.rend()));
}

/// omega_lambda(t, b) over Basis::weight(lambda).
template <class S>
TensorVector<S> bethe_vector(const Weight& lambda, const BetheRoots<S>& t, const std::vector<S>& b) {
    auto basis = Basis::weight(lambda);
    TensorVector<S> v;
    for (std::size_t i = 0; i < basis.size(); ++i) v.push_back(bethe_coefficient(basis.colors(i), t, b).first);
    return v;
}

/// True when omega is zero relative to the size of the terms that built it.
template <class S>
bool bethe_vector_vanishes(const Weight& lambda, const BetheRoots<S>& t, const std::vector<S>& b, double tol = 1e-10) {
    auto basis = Basis::weight(lambda);
    double norm = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        auto [w, s] = bethe_coefficient(basis.colors(i), t, b);
        norm = std::max(norm, magnitude(w));
        scale = std::max(scale, s);
    }
    return norm <= tol * std::max(scale, 1e-300);
}

// ---------------------------------------------------------------------------
// Eigenvalues and the fundamental difference operator.

/// chi_a(u) = q_a prod_j (u - t^(a-1)_j + 1)/(u - t^(a-1)_j)
///                prod_j (u - t^(a)_j - 1)/(u - t^(a)_j), t^(0) = b.
template <class S>
S chi(int a, const S& u, const BetheRoots<S>& t, const std::vector<S>& b, const std::vector<S>& q) {
    const S one = scalar<S>(1);
    S v = q[static_cast<std::size_t>(a - 1)];
    for (const auto& x : t.level(a - 1, b)) {
        if (is_zero(u - x, 0.0)) throw std::domain_error("chi: pole");
        v *= (u - x + one) / (u - x);
    }
    for (const auto& x : t.level(a, b)) {
        if (is_zero(u - x, 0.0)) throw std::domain_error("chi: pole");
        v *= (u - x - one) / (u - x);
    }
    return v;
}

/// c_k(u) = sum_{a_1<...<a_k} chi_{a_1}(u) chi_{a_2}(u-1) ... chi_{a_k}(u-k+1).
template <class S>
S eigenvalue_ck(int k, const S& u, const BetheRoots<S>& t, const std::vector<S>& b, const std::vector<S>& q) {
    const int N = static_cast<int>(q.size());
    if (k < 0 || k > N) throw std::invalid_argument("eigenvalue_ck: k out of range");
    if (k == 0) return scalar<S>(1);
    S total = scalar<S>(0);
    std::vector<int> sel(static_cast<std::size_t>(k));
    auto rec = [&](auto&& self, int pos, int start) -> void {
        if (pos == k) {
            S p = scalar<S>(1);
            for (int r = 0; r < k; ++r) p *= chi(sel[static_cast<std::size_t>(r)], S(u - scalar<S>(r)), t, b, q);
            total += p;
            return;
        }
        for (int a = start; a <= N; ++a) {
            sel[static_cast<std::size_t>(pos)] = a;
            self(self, pos + 1, a + 1);
        }
    };
    rec(rec, 0, 1);
    return total;
}

template <class S>
RatFun<S> chi_ratfun(int a, const BetheRoots<S>& t, const std::vector<S>& b, const std::vector<S>& q) {
    const S one = scalar<S>(1);
    Poly<S> num(q[static_cast<std::size_t>(a - 1)]), den(one);
    for (const auto& x : t.level(a - 1, b)) {
        num *= Poly<S>::linear(x - one);
        den *= Poly<S>::linear(x);
    }
    for (const auto& x : t.level(a, b)) {
        num *= Poly<S>::linear(x + one);
        den *= Poly<S>::linear(x);
    }
    return RatFun<S>(num, den);
}

/// D_t = (1 - chi_1 tau) ... (1 - chi_N tau) = sum_k (-1)^k c_k(u) tau^k.
template <class S>
DiffOp<S> fundamental_operator(const BetheRoots<S>& t, const std::vector<S>& b, const std::vector<S>& q) {
    DiffOp<S> d(scalar<S>(1));
    for (int a = 1; a <= static_cast<int>(q.size()); ++a) d = d * (DiffOp<S>(scalar<S>(1)) - DiffOp<S>::tau(1, chi_ratfun(a, t, b, q)));
    return d;
}

// ---------------------------------------------------------------------------
// Kernels of the fundamental operator.

template <class S>
struct KernelResult {
    std::vector<QuasiExp<S>> functions;
    std::vector<double> residuals;  // relative residual of D f_k
    bool ok = true;
    std::string defect;
};

namespace detail {

inline std::vector<int> kernel_degrees(const Weight& lambda, bool ones) {
    const int N = lambda.N();
    std::vector<int> degs;
    for (int k = 1; k <= N; ++k) degs.push_back(ones ? lambda[k - 1] + N - k : lambda[k - 1]);
    return degs;
}

inline int kernel_order(const Weight& lambda, bool ones) {
    const auto degs = kernel_degrees(lambda, ones);
    return (degs.empty() ? 0 : *std::max_element(degs.begin(), degs.end())) + lambda.N() + 1;
}

template <class S>
bool all_ones(const std::vector<S>& q) {
    return std::all_of(q.begin(), q.end(), [](const S& x) { return is_zero(x - scalar<S>(1), 0.0); });
}

/// c holds the expansions of the tau^m coefficients, m = 0..N; residual(f)
/// judges a candidate.
template <class S, class R>
KernelResult<S> kernel_core(const std::vector<SeriesUinv<S>>& c, const std::vector<S>& q, const Weight& lambda, double tol, R&& residual) {
    const int N = lambda.N();
    if (static_cast<int>(q.size()) != N) throw std::invalid_argument("kernel_quasiexp: q must have N entries");
    const bool ones = all_ones(q);
    const auto degs = kernel_degrees(lambda, ones);
    KernelResult<S> out;
    for (int k = 1; k <= N; ++k) {
        const int top = degs[static_cast<std::size_t>(k - 1)];
        std::vector<int> js;
        for (int j = 1; j <= top; ++j)
            if (!ones || std::find(degs.begin(), degs.end(), top - j) == degs.end()) js.push_back(j);
        const S base = ones ? scalar<S>(1) : q[static_cast<std::size_t>(k - 1)];
        Poly<S> p(scalar<S>(1));
        double res = std::numeric_limits<double>::infinity();
        try {
            p = triangular_kernel(c, base, top, js, ones ? N : 1);
            res = residual(QuasiExp<S>(base, p));
        } catch (const std::domain_error&) {
        }
        out.residuals.push_back(res);
        if (!(res <= tol) && out.ok) {
            out.ok = false;
            out.defect = "no kernel element of degree " + std::to_string(top) + " for k = " + std::to_string(k);
        }
        out.functions.emplace_back(base, p);
    }
    return out;
}

}  // namespace detail

/// Kernel of D in the form {q_k^u p_k(u)}, deg p_k = lambda_k, p_k monic
/// (q distinct), or {f_k(u)} with deg f_k = d_k = lambda_k + N - k, monic and
/// with no monomials u^{d_j}, j != k, below the top (q = 1). Candidates come
/// from the expansion of D at infinity; residuals are exact (0 or infinity)
/// in exact mode and sampled otherwise.
template <class S>
KernelResult<S> kernel_quasiexp(const DiffOp<S>& d, const std::vector<S>& q, const Weight& lambda, double tol = 1e-8) {
    const int order = detail::kernel_order(lambda, detail::all_ones(q));
    std::vector<SeriesUinv<S>> c;
    for (int m = 0; m <= lambda.N(); ++m) c.push_back(series_at_infinity(d.coeff(m), order));
    return detail::kernel_core(c, q, lambda, tol, [&](const QuasiExp<S>& f) {
        if constexpr (ScalarTraits<S>::exact)
            return annihilates(d, f) ? 0.0 : std::numeric_limits<double>::infinity();
        else
            return sampled_residual(d, f);
    });
}

/// Expansion of chi_a(u - r) at infinity.
template <class S>
SeriesUinv<S> chi_series(int a, int r, const BetheRoots<S>& t, const std::vector<S>& b, const std::vector<S>& q, int order) {
    SeriesUinv<S> out;
    out.c.assign(static_cast<std::size_t>(order) + 1, scalar<S>(0));
    out.c[0] = q[static_cast<std::size_t>(a - 1)];
    // 1 +- 1/(u - y) with 1/(u - y) = sum_{s>=1} y^{s-1} u^{-s}.
    auto factor = [&](const S& y, int sign) {
        SeriesUinv<S> f;
        f.c.assign(static_cast<std::size_t>(order) + 1, scalar<S>(0));
        f.c[0] = scalar<S>(1);
        S pw = scalar<S>(sign);
        for (int s = 1; s <= order; ++s) {
            f[s] = pw;
            pw *= y;
        }
        out = series_product(out, f);
    };
    for (const auto& x : t.level(a - 1, b)) factor(S(x + scalar<S>(r)), 1);
    for (const auto& x : t.level(a, b)) factor(S(x + scalar<S>(r)), -1);
    return out;
}

/// Expansions of c_0(u), ..., c_N(u) at infinity.
template <class S>
std::vector<SeriesUinv<S>> eigenvalue_series(const BetheRoots<S>& t, const std::vector<S>& b, const std::vector<S>& q, int order) {
    const int N = static_cast<int>(q.size());
    std::vector<std::vector<SeriesUinv<S>>> chis(static_cast<std::size_t>(N));
    for (int a = 1; a <= N; ++a)
        for (int r = 0; r < N; ++r) chis[static_cast<std::size_t>(a - 1)].push_back(chi_series(a, r, t, b, q, order));
    std::vector<SeriesUinv<S>> out;
    for (int k = 0; k <= N; ++k) {
        SeriesUinv<S> total;
        total.c.assign(static_cast<std::size_t>(order) + 1, scalar<S>(0));
        if (k == 0) total.c[0] = scalar<S>(1);
        for (unsigned mask = 0; k > 0 && mask < (1u << N); ++mask) {
            if (std::popcount(mask) != k) continue;
            SeriesUinv<S> p;
            int j = 0;
            for (int a = 1; a <= N; ++a) {
                if (!(mask >> (a - 1) & 1u)) continue;
                const auto& x = chis[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(j)];
                p = j++ == 0 ? x : series_product(p, x);
            }
            total = total + p;
        }
        out.push_back(std::move(total));
    }
    return out;
}

/// Kernel of the fundamental operator of t, built from the eigenvalue
/// expansions and checked against c_k(u) at sample points (exactly in exact
/// mode).
template <class S>
KernelResult<S> bethe_kernel(const BetheRoots<S>& t, const std::vector<S>& b, const std::vector<S>& q, const Weight& lambda, double tol = 1e-8) {
    const int N = lambda.N();
    auto c = eigenvalue_series(t, b, q, detail::kernel_order(lambda, detail::all_ones(q)));
    for (int m = 1; m <= N; m += 2) c[static_cast<std::size_t>(m)] = c[static_cast<std::size_t>(m)].scaled(scalar<S>(-1));
    if constexpr (ScalarTraits<S>::exact) {
        const auto d = fundamental_operator(t, b, q);
        return detail::kernel_core(c, q, lambda, tol,
                                   [&](const QuasiExp<S>& f) { return annihilates(d, f) ? 0.0 : std::numeric_limits<double>::infinity(); });
    } else {
        return detail::kernel_core(c, q, lambda, tol, [&](const QuasiExp<S>& f) {
            double worst = 0.0;
            for (const Complex& u : {Complex(0.5, 0.37), Complex(1.3, -0.8), Complex(3.7, 2.1), Complex(-2.3, 1.7), Complex(6.1, -3.3)}) {
                Complex sum = 0.0;
                double scale = 0.0;
                try {
                    for (int k = 0; k <= N; ++k) {
                        const Complex term = (k % 2 ? -1.0 : 1.0) * eigenvalue_ck(k, u, t, b, q) * std::pow(f.base, -k) * f.poly(u - static_cast<double>(k));
                        sum += term;
                        scale += std::abs(term);
                    }
                } catch (const std::domain_error&) {
                    continue;
                }
                if (scale > 0.0) worst = std::max(worst, std::abs(sum) / scale);
            }
            return worst;
        });
    }
}

/// max_j |w_j - e_j| / max(1, |e_j|) between the monic part of
/// Wr(f_1(u-1), ..., f_N(u-1)) and prod_s (u - b_s).
template <class S>
double wronskian_residual(const std::vector<QuasiExp<S>>& fs, const std::vector<S>& b) {
    auto w = discrete_wronskian(fs, -1);
    if (w.poly.is_zero()) return std::numeric_limits<double>::infinity();
    const Poly<S> got = w.poly.monic();
    const Poly<S> want = poly_from_roots(std::span<const S>(b));
    if (got.degree() != want.degree()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (int j = 0; j <= want.degree(); ++j)
        worst = std::max(worst, magnitude(got[j] - want[j]) / std::max(1.0, magnitude(want[j])));
    return worst;
}

/// ||B w - c w|| / (max(1, |c|) ||w||).
inline double eigen_residual(const Matrix<Complex>& B, const std::vector<Complex>& w, const Complex& c) {
    const auto Bw = B * w;
    std::vector<Complex> diff(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) diff[i] = Bw[i] - c * w[i];
    return norm2(diff) / (std::max(1.0, std::abs(c)) * norm2(w));
}

/// Rayleigh quotient w^* B w / w^* w.
inline Complex rayleigh(const Matrix<Complex>& B, const std::vector<Complex>& w) {
    const auto Bw = B * w;
    Complex num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        num += std::conj(w[i]) * Bw[i];
        den += std::conj(w[i]) * w[i];
    }
    return num / den;
}

/// Deterministic off-pole sample points for eigenvalue checks.
inline std::vector<Complex> eigen_sample_points() { return {{0.5, 0.37}, {1.3, -0.8}, {3.7, 2.1}}; }

// ---------------------------------------------------------------------------
// The solver.

enum class Strategy { automatic, q_distinct, q_one };

struct SolveReport {
    std::vector<BetheRoots<Complex>> solutions;
    std::vector<double> residuals;
    std::vector<double> margins;
    std::size_t expected = 0;
    std::size_t paths = 0;
    std::size_t failed_paths = 0;
    std::size_t zero_vectors = 0;
    std::vector<double> angles_used;
    std::vector<std::string> warnings;

    bool shortfall() const { return solutions.size() < expected; }
    bool nonconvergent() const { return shortfall() && failed_paths > 0; }
};

/// Target solution count: dim V_lambda (q distinct) or dim V_lambda^sing (q = 1).
inline std::size_t expected_solutions(const Weight& lambda, bool q_one) {
    if (q_one) return lambda.is_partition() ? singular_basis(lambda).size() : 0;
    return Basis::weight(lambda).size();
}

/// Solutions of the Bethe ansatz equations by homotopy continuation along
/// b(y) = b + y e^{i theta} d, from y = y0 down to 0, retried over the angles
/// in `opt.angles` while the count falls short.
/// q distinct: d_s = s, starts are the cluster solutions, one per basis vector.
/// q = 1: d_s = s, starts are y0 e^{i theta} v for Gaudin solutions v.
template <class S>
SolveReport solve_bae(const BetheProblem<S>& prob_in, Strategy strategy = Strategy::automatic, const SolverOptions& opt = {}) {
    prob_in.validate();
    const auto prob = prob_in.template cast<Complex>();
    if (strategy == Strategy::automatic) strategy = prob.q_is_one() ? Strategy::q_one : Strategy::q_distinct;
    if (strategy == Strategy::q_distinct && !prob.q_distinct()) throw std::invalid_argument("solve_bae: q must be distinct");
    if (strategy == Strategy::q_one && !prob.q_is_one()) throw std::invalid_argument("solve_bae: q must be all ones");
    const bool q_one = strategy == Strategy::q_one;

    SolveReport rep;
    rep.expected = expected_solutions(prob.lambda, q_one);
    const auto l = prob.l();
    const auto blank = BetheRoots<Complex>::empty_for(l);
    const BaeSystem sys(prob);
    const int n = prob.n();
    std::vector<Complex> d(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) d[static_cast<std::size_t>(s)] = static_cast<double>(s + 1);

    if (prob.root_count() == 0) {
        if (rep.expected > 0) {
            rep.solutions.push_back(blank);
            rep.residuals.push_back(0.0);
            rep.margins.push_back(std::numeric_limits<double>::infinity());
        }
        return rep;
    }

    auto accept = [&](BetheRoots<Complex> t, double residual) {
        const double margin = offdiagonal_margin(t);
        if (!(residual <= 1e-9) || margin <= opt.offdiag_tol) return;
        canonicalize(t);
        for (const auto& f : rep.solutions)
            if (same_solution(f, t, opt.dedup_tol)) return;
        if (bethe_vector_vanishes(prob.lambda, t, prob.b)) {
            ++rep.zero_vectors;
            rep.warnings.push_back("solution with vanishing Bethe vector excluded");
            return;
        }
        rep.solutions.push_back(std::move(t));
        rep.residuals.push_back(residual);
        rep.margins.push_back(margin);
    };

    std::vector<BetheRoots<Complex>> gaudin;
    if (q_one) gaudin = solve_gaudin(l, d, rep.expected, opt);

    for (double theta : opt.angles) {
        if (!rep.shortfall()) break;
        rep.angles_used.push_back(theta);
        const Complex omega = std::polar(1.0, theta);
        std::vector<Complex> dir(d.size());
        for (std::size_t s = 0; s < d.size(); ++s) dir[s] = omega * d[s];
        const auto b0 = detail::path_b(prob.b, dir, opt.y0);

        std::vector<std::vector<Complex>> starts;
        if (q_one) {
            for (const auto& v : gaudin) {
                auto x = v.flat();
                for (auto& z : x) z *= opt.y0 * omega;
                starts.push_back(std::move(x));
            }
        } else {
            auto basis = Basis::weight(prob.lambda);
            for (std::size_t i = 0; i < basis.size(); ++i) starts.push_back(cluster_start(basis.colors(i), prob.q, b0).flat());
        }

        std::vector<std::optional<std::pair<std::vector<Complex>, double>>> results(starts.size());
        detail::parallel_for(starts.size(), [&](std::size_t i) {
            auto x = starts[i];
            if (!detail::newton(sys, x, b0, 1e-13, 50)) return;
            if (!detail::track(sys, x, prob.b, dir, opt.y0, opt.max_steps)) return;
            auto res = detail::newton(sys, x, prob.b, opt.newton_tol, opt.max_newton);
            if (!res) return;
            results[i] = std::pair{std::move(x), *res};
        });
        rep.paths += starts.size();
        for (auto& r : results) {
            if (!r) {
                ++rep.failed_paths;
                continue;
            }
            auto t = blank;
            t.assign(r->first);
            const double residual = bae_relative_residual(t, prob);
            accept(std::move(t), residual);
        }
    }
    std::sort(rep.solutions.begin(), rep.solutions.end(), [](const auto& x, const auto& y) {
        auto fx = x.flat(), fy = y.flat();
        return std::lexicographical_compare(fx.begin(), fx.end(), fy.begin(), fy.end(), [](const Complex& p, const Complex& q) {
            return std::pair{std::round(p.real() * 1e9), std::round(p.imag() * 1e9)} <
                   std::pair{std::round(q.real() * 1e9), std::round(q.imag() * 1e9)};
        });
    });
    // Residuals and margins follow the sorted order.
    rep.residuals.clear();
    rep.margins.clear();
    for (const auto& t : rep.solutions) {
        rep.residuals.push_back(bae_relative_residual(t, prob));
        rep.margins.push_back(offdiagonal_margin(t));
    }
    if (rep.shortfall())
        rep.warnings.push_back("found " + std::to_string(rep.solutions.size()) + " of " + std::to_string(rep.expected) +
                               " solutions");
    return rep;
}

}  // namespace bethe

#endif  // BETHE_BETHE_HPP
