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

#include <catch_amalgamated.hpp>

#include <random>

#include "bethe/bethe.hpp"
#include "bethe/wronski.hpp"
#include "bethe/yangian.hpp"

using namespace bethe;
using Q = Rational;
using C = Complex;

namespace {

Q r(long p, long q = 1) {
    Q x(p, q);
    x.canonicalize();
    return x;
}

std::vector<Q> qs(std::initializer_list<long> v) {
    std::vector<Q> out;
    for (long x : v) out.push_back(r(x));
    return out;
}

SpacePoint<Q> worked_example() {
    SpacePoint<Q> x{SpaceKind::quasi_exp, qs({1, 2}), Weight({1, 0}), {{r(3)}, {}}};
    x.validate();
    return x;
}

SpacePoint<Q> random_point(std::mt19937_64& rng, SpaceKind kind, std::vector<Q> q, const Weight& lambda) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
    auto x = SpacePoint<Q>::origin(kind, std::move(q), lambda);
    for (auto& row : x.coords)
        for (auto& c : row) c = r(num(rng), den(rng));
    return x;
}

// Every partition with N parts and lambda_1 <= 2.
std::vector<Weight> small_partitions(int N) {
    std::vector<Weight> out;
    for (const auto& w : all_weights(N, 0)) out.push_back(w);
    for (int n = 1; n <= 2 * N; ++n)
        for (const auto& w : all_weights(N, n))
            if (w.is_partition() && w[0] <= 2) out.push_back(w);
    return out;
}

// det of the k x k matrix m, by cofactor expansion.
C det(const std::vector<std::vector<C>>& m) {
    const std::size_t k = m.size();
    if (k == 1) return m[0][0];
    C total = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<std::vector<C>> sub;
        for (std::size_t i = 1; i < k; ++i) {
            sub.emplace_back();
            for (std::size_t j = 0; j < k; ++j)
                if (j != c) sub.back().push_back(m[i][j]);
        }
        total += (c % 2 ? -1.0 : 1.0) * m[0][c] * det(sub);
    }
    return total;
}

}  // namespace

TEST_CASE("Wronski map of the worked quasi-exponential example", "[wronski]") {
    auto img = wronski_map(worked_example());
    REQUIRE(img.a.size() == 1);
    CHECK(img.a[0] == 0);
    // det [[u+2, u+1], [2^(u-1), 2^(u-2)]] = -2^(u-2) u.
    CHECK(img.leading == r(-1, 4) * 2);
    CHECK(img.monic == Poly<Q>::x());
}

TEST_CASE("Wronski map of trivial weights", "[wronski]") {
    SpacePoint<Q> x{SpaceKind::quasi_exp, qs({1, 2, 3}), Weight({0, 0, 0}), {{}, {}, {}}};
    auto img = wronski_map(x);
    CHECK(img.a.empty());
    CHECK(img.monic == Poly<Q>(r(1)));
    // Polynomial mode: f = (u, 1), det [[u-1, u-2], [1, 1]] = 1.
    SpacePoint<Q> p{SpaceKind::polynomial, qs({1, 1}), Weight({0, 0}), {{}, {}}};
    auto pi = wronski_map(p);
    CHECK(pi.a.empty());
    CHECK(pi.leading == 1);
    CHECK(p.poly(1) == Poly<Q>::x());
}

TEST_CASE("Wronski map agrees with a direct determinant", "[wronski]") {
    std::mt19937_64 rng(11);
    const std::vector<std::pair<SpaceKind, std::vector<Q>>> modes{{SpaceKind::quasi_exp, {r(1), r(-2), r(1, 3)}},
                                                                   {SpaceKind::polynomial, qs({1, 1, 1})}};
    for (const auto& [kind, q3] : modes)
        for (int N = 1; N <= 3; ++N)
            for (const auto& lam : small_partitions(N)) {
                std::vector<Q> q(q3.begin(), q3.begin() + N);
                auto X = random_point(rng, kind, q, lam);
                auto img = wronski_map(X);
                auto Xc = X.cast<C>();
                for (C u : {C(0.3, 0.7), C(-1.2, 0.4)}) {
                    std::vector<std::vector<C>> m;
                    C pref = 1.0;
                    for (int i = 1; i <= N; ++i) {
                        const C base = Xc.q[static_cast<std::size_t>(i - 1)];
                        pref *= std::pow(base, u - 1.0);
                        m.emplace_back();
                        for (int j = 0; j < N; ++j) m.back().push_back(std::pow(base, u - 1.0 - C(j)) * Xc.poly(i)(u - 1.0 - C(j)));
                    }
                    const C want = det(m);
                    const C got = pref * to_complex(img.leading) * img.monic.cast<C>()(u);
                    CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
                }
            }
}

TEST_CASE("Wronskian prefactors", "[wronski]") {
    std::mt19937_64 rng(19);
    for (const auto& lam : {Weight({1, 0}), Weight({2, 1}), Weight({1, 1, 1}), Weight({2, 0, 1})}) {
        std::vector<Q> q{r(3), r(-1, 2), r(5)};
        q.resize(static_cast<std::size_t>(lam.N()));
        Q want = 1;
        for (int i = 0; i < lam.N(); ++i)
            for (int j = i + 1; j < lam.N(); ++j) want *= 1 / q[static_cast<std::size_t>(j)] - 1 / q[static_cast<std::size_t>(i)];
        CHECK(wronski_map(random_point(rng, SpaceKind::quasi_exp, q, lam)).leading == want);
    }
    // Polynomial mode: the expansion gives prod_{i<j} (d_i - d_j).
    for (const auto& lam : small_partitions(3)) {
        auto d = exponent_set(lam);
        Q want = 1;
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = i + 1; j < d.size(); ++j) want *= d[i] - d[j];
        CHECK(wronski_map(random_point(rng, SpaceKind::polynomial, qs({1, 1, 1}), lam)).leading == want);
    }
}

TEST_CASE("space operator of the worked example", "[wronski]") {
    auto X = worked_example();
    auto D = space_diffop(X);
    auto F = space_coefficients(D, 2);
    CHECK(F[0] == RatFun<Q>(r(1)));
    CHECK(F[1] == RatFun<Q>(Poly<Q>{r(1), r(3)}, Poly<Q>::x()));
    CHECK(F[2] == RatFun<Q>(Poly<Q>{r(2), r(2)}, Poly<Q>::x()));
    // Same operator as (1 - ((u+1)/u) tau)(1 - 2 tau).
    auto fund = fundamental_operator(BetheRoots<Q>::empty_for({1, 0, 0}), qs({0}), qs({1, 2}));
    for (int k = 0; k <= 2; ++k) CHECK(D.coeff(k) == fund.coeff(k));
    for (const auto& f : X.functions()) CHECK(annihilates(D, f));
}

TEST_CASE("top coefficient is the shifted Wronskian ratio", "[wronski]") {
    std::mt19937_64 rng(5);
    for (const auto& lam : {Weight({1, 0}), Weight({2, 1}), Weight({1, 1, 0}), Weight({2, 1, 1})}) {
        std::vector<Q> q{r(2), r(-1), r(1, 2)};
        q.resize(static_cast<std::size_t>(lam.N()));
        auto X = random_point(rng, SpaceKind::quasi_exp, q, lam);
        auto F = space_coefficients(space_diffop(X), lam.N());
        Q prod = 1;
        for (const auto& x : q) prod *= x;
        auto W = wronski_map(X).monic;
        CHECK(F[static_cast<std::size_t>(lam.N())] == RatFun<Q>(W.shifted(r(1)) * prod, W));
    }
}

TEST_CASE("space operator annihilates its basis", "[wronski]") {
    std::mt19937_64 rng(7);
    for (int N = 1; N <= 3; ++N)
        for (const auto& lam : small_partitions(N)) {
            std::vector<Q> q{r(3), r(1), r(-1, 2)};
            q.resize(static_cast<std::size_t>(N));
            for (auto kind : {SpaceKind::quasi_exp, SpaceKind::polynomial}) {
                auto X = random_point(rng, kind, kind == SpaceKind::polynomial ? std::vector<Q>(q.size(), r(1)) : q, lam);
                auto D = space_diffop(X);
                CHECK(D.coeff(0) == RatFun<Q>(r(1)));
                for (const auto& f : X.functions()) CHECK(annihilates(D, f));
            }
        }
}

TEST_CASE("coefficient tables", "[wronski]") {
    auto t = extract_coeffs(worked_example(), 4);
    CHECK(t.at(1, 0) == 3);
    CHECK(t.at(2, 0) == 2);
    CHECK(t.at(1, 1) == 1);
    CHECK(t.at(2, 1) == 2);
    for (int s = 2; s <= 4; ++s) CHECK(t.at(1, s) == 0);
    CHECK_THROWS_AS(extract_coeffs(worked_example(), 2), std::invalid_argument);

    // Polynomial mode: G_0 = 1, G_{k,s} = 0 below the diagonal, and the
    // diagonal constants are fixed by chi.
    std::mt19937_64 rng(3);
    for (int N = 1; N <= 3; ++N)
        for (const auto& lam : small_partitions(N)) {
            auto X = random_point(rng, SpaceKind::polynomial, std::vector<Q>(static_cast<std::size_t>(N), r(1)), lam);
            auto g = extract_coeffs(X, default_order(lam));
            CHECK(g.at(0, 0) == 1);
            for (int s = 1; s <= g.order(); ++s) CHECK(g.at(0, s) == 0);
            for (int k = 1; k <= N; ++k)
                for (int s = 0; s < k; ++s) CHECK(g.at(k, s) == 0);
            Poly<Q> lhs;
            for (int k = 0; k <= N; ++k) {
                Poly<Q> falling(r(1));
                for (int j = 0; j < N - k; ++j) falling *= Poly<Q>::linear(r(j));
                lhs += falling * (k % 2 ? Q(-g.at(k, k)) : g.at(k, k));
            }
            CHECK(lhs == chi_polynomial<Q>(lam));
        }
    auto g21 = extract_coeffs(random_point(rng, SpaceKind::polynomial, qs({1, 1}), Weight({2, 1})), 8);
    CHECK(g21.at(1, 1) == 3);
    CHECK(g21.at(2, 2) == 3);
}

TEST_CASE("coordinates round-trip through the coefficient table", "[wronski]") {
    std::mt19937_64 rng(2026);
    for (int rep = 0; rep < 3; ++rep)
        for (int N = 1; N <= 3; ++N)
            for (const auto& lam : small_partitions(N)) {
                std::vector<Q> q{r(1), r(-3), r(2, 5)};
                q.resize(static_cast<std::size_t>(N));
                for (auto kind : {SpaceKind::quasi_exp, SpaceKind::polynomial}) {
                    if (kind == SpaceKind::polynomial) q.assign(q.size(), r(1));
                    auto X = random_point(rng, kind, q, lam);
                    auto back = recover_coordinates(extract_coeffs(X, default_order(lam)), q, lam);
                    CHECK(back.coords == X.coords);
                }
            }
    auto one = recover_coordinates(extract_coeffs(worked_example(), 4), qs({1, 2}), Weight({1, 0}));
    CHECK(one.coords[0] == std::vector<Q>{r(3)});
}

TEST_CASE("chi polynomial", "[wronski]") {
    CHECK(chi_polynomial<Q>(Weight({2, 1})) == Poly<Q>::linear(r(3)) * Poly<Q>::linear(r(1)));
    CHECK(chi_polynomial<Q>(Weight({0, 0, 0})) == Poly<Q>::linear(r(2)) * Poly<Q>::linear(r(1)) * Poly<Q>::x());
    for (const auto& lam : small_partitions(3)) {
        auto chi = chi_polynomial<Q>(lam);
        for (int d : exponent_set(lam)) CHECK(chi(r(d)) == 0);
    }
}

TEST_CASE("space point construction checks", "[wronski]") {
    CHECK(coordinate_indices(SpaceKind::polynomial, Weight({1, 1}), 1) == std::vector<int>{2});
    CHECK(coordinate_indices(SpaceKind::polynomial, Weight({1, 1}), 2) == std::vector<int>{1});
    SpacePoint<Q> bad{SpaceKind::quasi_exp, qs({2, 2}), Weight({1, 0}), {{r(1)}, {}}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    SpacePoint<Q> short_coords{SpaceKind::quasi_exp, qs({1, 2}), Weight({1, 0}), {{}, {}}};
    CHECK_THROWS_AS(wronski_map(short_coords), std::invalid_argument);
    std::vector<QuasiExp<Q>> fs{QuasiExp<Q>::polynomial(Poly<Q>{r(0), r(1), r(1)}), QuasiExp<Q>::polynomial(Poly<Q>{r(0), r(1)})};
    CHECK_THROWS_AS(SpacePoint<Q>::from_functions(SpaceKind::polynomial, qs({1, 1}), Weight({1, 1}), fs), std::invalid_argument);
}

TEST_CASE("fiber of exact Bethe solutions", "[wronski]") {
    BetheProblem<Q> p{Weight({1, 0}), qs({1, 2}), qs({0})};
    auto f = fiber_from_bethe(BetheRoots<Q>::empty_for(p.lambda.root_counts()), p);
    CHECK(f.point.coords[0] == std::vector<Q>{r(3)});
    CHECK(f.image.a == std::vector<Q>{r(0)});
    CHECK(f.image_residual == 0.0);

    BetheProblem<Q> p1{Weight({1, 1}), qs({1, 1}), qs({0, 2})};
    auto g = fiber_from_bethe(BetheRoots<Q>{{{r(1, 2)}}}, p1);
    CHECK(g.point.kind == SpaceKind::polynomial);
    CHECK(g.image.monic == Poly<Q>::x() * Poly<Q>::linear(r(2)));
    CHECK(g.image_residual == 0.0);
}

TEST_CASE("fiber coefficients match the transfer-matrix spectrum", "[wronski]") {
    for (const auto& prob : {BetheProblem<Q>{Weight({2, 1}), qs({1, 2}), qs({0, 2, 4})},
                             BetheProblem<Q>{Weight({1, 1, 1}), qs({1, 2, 4}), qs({0, 2, 4})},
                             BetheProblem<Q>{Weight({2, 2}), qs({1, 1}), qs({0, 2, 4, 6})}}) {
        auto rep = solve_bae(prob);
        REQUIRE(rep.solutions.size() == rep.expected);
        auto pc = prob.cast<C>();
        EvaluationData<C> ev{prob.N(), pc.b};
        const int order = prob.n() + prob.N();
        std::vector<SeriesUinv<Matrix<C>>> ops;
        if (prob.q_is_one())
            ops = C_coefficients(ev, prob.lambda, order).weight_space;
        else
            ops = transfer_series(pc.q, ev, std::make_shared<const Basis>(Basis::weight(prob.lambda)), order);
        for (const auto& t : rep.solutions) {
            auto f = fiber_from_bethe(t, pc);
            CHECK(f.image_residual < 1e-8);
            auto table = extract_coeffs(f.point, order);
            CHECK(spectrum_gap(ops, bethe_vector(prob.lambda, t, pc.b), table, order) < 1e-8);
        }
    }
}
