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

#include "bethe/symspace.hpp"
#include "bethe/yangian.hpp"

using namespace bethe;
using Q = Rational;

namespace {

Q r(long p, long q = 1) {
    Q x(p, q);
    x.canonicalize();
    return x;
}

std::shared_ptr<const Basis> full(int N, int n) { return std::make_shared<const Basis>(Basis::full(N, n)); }

VPoly random_vpoly(std::mt19937_64& rng, std::shared_ptr<const Basis> basis, int cutoff, int max_deg) {
    std::uniform_int_distribution<long> coef(-4, 4);
    VPoly f = VPoly::zero(basis, cutoff);
    for (const auto& m : monomials(basis->n(), max_deg)) {
        TensorVector<Q> v(basis->size());
        for (auto& x : v) x = coef(rng);
        f.add(m, v);
    }
    return f;
}

// Value of f at a rational point z.
TensorVector<Q> at(const VPoly& f, const std::vector<Q>& z) { return evaluate_at_b(f, z); }

// Number of partitions of k into parts of size at most a.
std::int64_t bounded_partitions(int k, int a) {
    if (k == 0) return 1;
    if (a == 0) return 0;
    std::int64_t total = 0;
    for (int part = 1; part <= std::min(a, k); ++part) total += bounded_partitions(k - part, part);
    return total;
}

}  // namespace

TEST_CASE("monomial enumeration", "[symspace]") {
    CHECK(monomials(2, 2).size() == 6);
    CHECK(monomials(3, 3).size() == 20);
    CHECK(monomials(3, 1).front() == Monomial{0, 0, 0});
    CHECK(monomials(0, 2).size() == 1);
}

TEST_CASE("S_n action on constants is the permutation", "[symspace]") {
    auto basis = full(2, 2);
    TensorVector<Q> v12(4, r(0)), v11(4, r(0)), v21(4, r(0));
    v11[*basis->index_of(code_of({0, 0}, 2))] = 1;
    v12[*basis->index_of(code_of({0, 1}, 2))] = 1;
    v21[*basis->index_of(code_of({1, 0}, 2))] = 1;
    CHECK(sn_act(1, VPoly::constant(basis, 2, v12)) == VPoly::constant(basis, 2, v21));
    CHECK(sn_act(1, VPoly::constant(basis, 2, v11)) == VPoly::constant(basis, 2, v11));
    CHECK_THROWS_AS(sn_act(2, VPoly::constant(basis, 2, v11)), std::invalid_argument);
}

TEST_CASE("S_n action matches the defining formula pointwise", "[symspace]") {
    std::mt19937_64 rng(1);
    auto basis = full(2, 3);
    const std::vector<Q> z{r(1, 3), r(-2), r(5, 7)};
    for (int rep = 0; rep < 5; ++rep) {
        auto f = random_vpoly(rng, basis, 3, 3);
        for (int i = 1; i <= 2; ++i) {
            auto zs = z;
            std::swap(zs[static_cast<std::size_t>(i - 1)], zs[static_cast<std::size_t>(i)]);
            const Q gap = z[static_cast<std::size_t>(i - 1)] - z[static_cast<std::size_t>(i)];
            auto fz = at(f, z), fs = at(f, zs);
            auto want = permutation_matrix<Q>(i, i + 1, *basis) * fs;
            for (std::size_t k = 0; k < want.size(); ++k) want[k] += (fz[k] - fs[k]) / gap;
            CHECK(at(sn_act(i, f), z) == want);
        }
    }
}

TEST_CASE("Coxeter relations", "[symspace]") {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 3; ++rep) {
        auto f3 = random_vpoly(rng, full(2, 3), 3, 3);
        for (int i = 1; i <= 2; ++i) CHECK(sn_act(i, sn_act(i, f3)) == f3);
        auto f = random_vpoly(rng, full(2, 4), 2, 2);
        for (int i = 1; i <= 3; ++i) CHECK(sn_act(i, sn_act(i, f)) == f);
        for (int i = 1; i <= 2; ++i) CHECK(sn_act(i, sn_act(i + 1, sn_act(i, f))) == sn_act(i + 1, sn_act(i, sn_act(i + 1, f))));
        CHECK(sn_act(1, sn_act(3, f)) == sn_act(3, sn_act(1, f)));
    }
}

TEST_CASE("S_n action commutes with gl_N and symmetric multiplication", "[symspace]") {
    std::mt19937_64 rng(3);
    auto basis = full(3, 3);
    auto f = random_vpoly(rng, basis, 3, 2);
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            for (int s = 1; s <= 2; ++s) CHECK(gl_act(i, j, sn_act(s, f), basis) == sn_act(s, gl_act(i, j, f, basis)));
    auto g = random_vpoly(rng, full(2, 3), 3, 1);
    for (int k = 1; k <= 2; ++k) {
        auto sigma = elementary_symmetric_poly(3, k);
        for (int s = 1; s <= 2; ++s) CHECK(multiply(sigma, sn_act(s, g)) == sn_act(s, multiply(sigma, g)));
    }
}

TEST_CASE("invariants in low degree", "[symspace]") {
    auto inv = invariant_basis(Weight({1, 1}), 0);
    REQUIRE(inv.size() == 1);
    const auto& v = inv[0].terms.begin()->second;
    CHECK(v[0] == v[1]);
    CHECK(sgn(v[0]) != 0);
    for (int n = 1; n <= 3; ++n) CHECK(invariant_basis(highest_weight(2, n), 0).size() == 1);
    for (const auto& f : invariant_basis(Weight({2, 1}), 2))
        for (int i = 1; i <= 2; ++i) CHECK(sn_act(i, f) == f);
}

TEST_CASE("closed-form graded characters", "[symspace]") {
    CHECK(graded_character(Weight({1, 1}), CharacterMode::weight, 3) == IntSeries{1, 2, 3, 4});
    CHECK(graded_character(Weight({1, 1}), CharacterMode::singular, 3) == IntSeries{0, 1, 1, 2});
    CHECK(graded_character(Weight({3, 0}), CharacterMode::singular, 4) == graded_character(Weight({3, 0}), CharacterMode::weight, 4));
    CHECK_THROWS_AS(graded_character(Weight({0, 1}), CharacterMode::singular, 2), std::invalid_argument);
    // Weight mode against a partition-count oracle.
    for (int a = 0; a <= 3; ++a) {
        auto ch = graded_character(Weight({a, 0}), CharacterMode::weight, 6);
        for (int k = 0; k <= 6; ++k) CHECK(ch[static_cast<std::size_t>(k)] == bounded_partitions(k, a));
    }
}

TEST_CASE("invariant graded dimensions match the characters", "[symspace]") {
    for (int n = 1; n <= 3; ++n)
        for (const auto& lam : all_weights(2, n)) {
            CHECK(invariant_graded_dims(lam, 3) == graded_character(lam, CharacterMode::weight, 3));
            if (lam.is_partition())
                CHECK(invariant_graded_dims(lam, 3, CharacterMode::singular) == graded_character(lam, CharacterMode::singular, 3));
        }
}

TEST_CASE("singular invariants start at the expected degree", "[symspace]") {
    for (const auto& lam : {Weight({1, 1}), Weight({2, 1})}) {
        const int k = singular_min_degree(lam);
        auto dims = invariant_graded_dims(lam, k, CharacterMode::singular);
        for (int j = 0; j < k; ++j) CHECK(dims[static_cast<std::size_t>(j)] == 0);
        CHECK(dims[static_cast<std::size_t>(k)] == 1);
    }
}

TEST_CASE("evaluation at b", "[symspace]") {
    auto basis = std::make_shared<const Basis>(Basis::weight(Weight({2, 1})));
    auto v = cyclic_vector<Q>(Weight({2, 1}));
    const std::vector<Q> b{r(0), r(2), r(5, 2)};
    CHECK(evaluate_at_b(VPoly::constant(basis, 1, v), b) == v);
    auto f = multiply(elementary_symmetric_poly(3, 1), VPoly::constant(basis, 1, v));
    auto want = v;
    for (auto& x : want) x *= r(9, 2);
    CHECK(evaluate_at_b(f, b) == want);
}

TEST_CASE("evaluation intertwines the Yangian action", "[symspace]") {
    EvaluationData<Q> ev{2, {r(0), r(2)}};
    auto fb = full(2, 2);
    const Q u = r(7, 3);
    std::vector<VPoly> samples;
    for (const auto& lam : all_weights(2, 2))
        for (const auto& f : invariant_basis(lam, 1)) samples.push_back(f.rebased(fb));
    std::mt19937_64 rng(4);
    samples.push_back(random_vpoly(rng, fb, 1, 1));
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
            auto L = T_entry(i, j, ev, fb).numerator_as(u);
            for (const auto& f : samples) CHECK(evaluate_at_b(yangian_numerator(i, j, u, f), ev.b) == L * evaluate_at_b(f, ev.b));
        }
}
