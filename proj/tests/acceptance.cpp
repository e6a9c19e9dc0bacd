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

// Acceptance suite: one pass/fail line per criterion. Exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <limits>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bethe/bethe.hpp"
#include "bethe/symspace.hpp"
#include "bethe/tensorrep.hpp"
#include "bethe/wronski.hpp"
#include "bethe/yangian.hpp"

using namespace bethe;
using Q = Rational;
using C = Complex;

namespace {

constexpr double kTol = 1e-8;

struct Outcome {
    bool ok = true;
    std::string detail;
};

std::vector<Q> rationals(std::initializer_list<long> v) {
    std::vector<Q> out;
    for (long x : v) out.push_back(Q(x));
    return out;
}

std::vector<Q> prefix(std::vector<Q> v, int n) {
    v.resize(static_cast<std::size_t>(n));
    return v;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(2);
    os << std::scientific << x;
    return os.str();
}

// 1. Yangian relations, N = 2, 3, n = 2, b = (0, 2).
Outcome yangian_relations() {
    Outcome o;
    std::size_t checked = 0;
    for (int N = 2; N <= 3; ++N) {
        auto r = check_yangian_relations(EvaluationData<Q>{N, rationals({0, 2})});
        checked += r.checked;
        if (!r.ok()) {
            o.ok = false;
            o.detail = "N=" + std::to_string(N) + " fails at " + r.first_failure;
            return o;
        }
    }
    o.detail = std::to_string(checked) + " coefficient identities exact";
    return o;
}

// 2. Transfer matrices commute with each other at the sample pairs, with the
// Cartan part for q distinct and with gl_N for q = 1.
Outcome commutativity() {
    Outcome o;
    std::size_t checks = 0;
    for (int N = 1; N <= 3; ++N)
        for (int n = 1; n <= 3; ++n) {
            auto ev = EvaluationData<Q>::generic(N, n);
            auto basis = std::make_shared<const Basis>(Basis::full(N, n));
            for (bool ones : {false, true}) {
                auto q = ones ? std::vector<Q>(static_cast<std::size_t>(N), Q(1)) : prefix(rationals({1, 2, 4}), N);
                std::vector<OperatorRatFun<Q>> B;
                for (int k = 1; k <= N; ++k) B.push_back(transfer_matrix(k, q, ev, basis));
                for (int k = 0; k < N; ++k) {
                    for (int l = 0; l < N; ++l, ++checks)
                        if (!commute_at_samples(B[k], B[l])) o.ok = false;
                    for (int i = 1; i <= N; ++i)
                        for (int j = 1; j <= N; ++j) {
                            if (!ones && i != j) continue;
                            ++checks;
                            if (!commutes_with(B[k], gl_matrix<Q>(i, j, *basis, *basis))) o.ok = false;
                        }
                }
            }
        }
    o.detail = std::to_string(checks) + " exact commutators, N<=3, n<=3";
    return o;
}

// 3. qdet coefficients commute with every T_ij, N = 2, n = 2.
Outcome centrality() {
    Outcome o;
    auto ev = EvaluationData<Q>{2, rationals({0, 2})};
    auto basis = std::make_shared<const Basis>(Basis::full(2, 2));
    auto qd = qdet(ev, basis);
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) o.ok = o.ok && commute_identically(qd, T_entry(i, j, ev, basis));
    o.detail = "4 entries";
    return o;
}

// 4. B_N is the scalar q_1...q_N prod (u - b_a + 1)/(u - b_a).
Outcome scalar_top() {
    Outcome o;
    int cases = 0;
    for (int N = 1; N <= 3; ++N)
        for (int n = 1; n <= 3; ++n, ++cases) {
            auto ev = EvaluationData<Q>::generic(N, n);
            auto basis = std::make_shared<const Basis>(Basis::full(N, n));
            auto q = prefix(rationals({1, 2, 4}), N);
            o.ok = o.ok && is_bn_scalar(transfer_matrix(N, q, ev, basis), q, ev);
        }
    o.detail = std::to_string(cases) + " (N, n) pairs";
    return o;
}

// 5. C_{k,s} = 0 for s < k; C_{k,k} scalar on V^sing and fixed by chi.
Outcome c_structure() {
    Outcome o;
    int cases = 0;
    for (int N = 2; N <= 3; ++N)
        for (int n = 1; n <= 4; ++n)
            for (const auto& lam : partitions(N, n)) {
                ++cases;
                auto t = C_coefficients(EvaluationData<Q>::generic(N, n), lam, N + 1);
                for (int k = 1; k <= N; ++k)
                    for (int s = 0; s < k; ++s) o.ok = o.ok && t.weight_space[k][s].is_zero();
                const std::size_t d = t.singular.cols();
                Poly<Q> lhs;
                for (int k = 0; k <= N; ++k) {
                    const auto& m = t.restricted[k][k];
                    o.ok = o.ok && d > 0 && m == Matrix<Q>::identity(d) * m(0, 0);
                    Poly<Q> f(Q(1));
                    for (int j = 0; j < N - k; ++j) f *= Poly<Q>::linear(Q(j));
                    lhs += f * (k % 2 ? Q(-m(0, 0)) : m(0, 0));
                }
                o.ok = o.ok && lhs == chi_polynomial<Q>(lam);
                if (lam == Weight({2, 1})) o.ok = o.ok && t.restricted[1][1](0, 0) == 3 && t.restricted[2][2](0, 0) == 3;
            }
    o.detail = std::to_string(cases) + " partitions";
    return o;
}

struct Sector {
    BetheProblem<Q> prob;
    SolveReport rep;
    std::vector<std::vector<C>> vectors;
};

Sector solve_sector(BetheProblem<Q> prob) {
    Sector s{std::move(prob), {}, {}};
    s.rep = solve_bae(s.prob);
    const auto pc = s.prob.cast<C>();
    for (const auto& t : s.rep.solutions) s.vectors.push_back(bethe_vector(s.prob.lambda, t, pc.b));
    return s;
}

// Largest relative eigenvector residual of B_k(u) at the sample points.
double eigen_check(const Sector& s) {
    const auto pc = s.prob.cast<C>();
    EvaluationData<Q> ev{s.prob.N(), s.prob.b};
    auto basis = std::make_shared<const Basis>(Basis::weight(s.prob.lambda));
    double worst = 0.0;
    for (int k = 1; k <= s.prob.N(); ++k) {
        auto B = transfer_matrix(k, s.prob.q, ev, basis);
        for (const auto& u : eigen_sample_points()) {
            auto Bu = B.evaluate_as(u);
            for (std::size_t i = 0; i < s.vectors.size(); ++i)
                worst = std::max(worst, eigen_residual(Bu, s.vectors[i], eigenvalue_ck(k, u, s.rep.solutions[i], pc.b, pc.q)));
        }
    }
    return worst;
}

// 6. Completeness, eigenvectors and simple spectrum for lambda = (2, 1).
Outcome completeness(const Sector& s) {
    Outcome o;
    const std::size_t dim = Basis::weight(s.prob.lambda).size();
    const double eig = eigen_check(s);
    const auto pc = s.prob.cast<C>();
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.rep.solutions.size(); ++i)
        for (std::size_t j = i + 1; j < s.rep.solutions.size(); ++j) {
            double gap = 0.0;
            for (int k = 1; k <= s.prob.N(); ++k)
                for (const auto& u : eigen_sample_points())
                    gap = std::max(gap, std::abs(eigenvalue_ck(k, u, s.rep.solutions[i], pc.b, pc.q) -
                                                 eigenvalue_ck(k, u, s.rep.solutions[j], pc.b, pc.q)));
            sep = std::min(sep, gap);
        }
    o.ok = s.rep.solutions.size() == dim && dim == 3 && eig <= kTol && sep > kTol;
    o.detail = std::to_string(s.rep.solutions.size()) + "/" + std::to_string(dim) + " solutions, eigen residual " + fmt(eig) +
               ", min eigenvalue separation " + fmt(sep);
    return o;
}

// 7. q = 1 singular sector for lambda = (2, 2).
Outcome singular_sector(const Sector& s) {
    Outcome o;
    const std::size_t dim = singular_basis(s.prob.lambda).size();
    auto basis = Basis::weight(s.prob.lambda);
    auto e12 = gl_matrix<Q>(1, 2, basis, *gl_target(basis, 1, 2)).cast<C>();
    double raising = 0.0, ck = 0.0;
    const int order = s.prob.n() + s.prob.N();
    auto table = C_coefficients(EvaluationData<C>{s.prob.N(), s.prob.cast<C>().b}, s.prob.lambda, order);
    for (const auto& w : s.vectors) {
        raising = std::max(raising, norm2(e12 * w) / norm2(w));
        for (int k = 0; k <= s.prob.N(); ++k)
            for (int p = 0; p <= order; ++p) {
                const auto& m = table.weight_space[static_cast<std::size_t>(k)][p];
                ck = std::max(ck, eigen_residual(m, w, rayleigh(m, w)));
            }
    }
    o.ok = s.rep.solutions.size() == dim && dim == 2 && raising <= kTol && ck <= kTol;
    o.detail = std::to_string(s.rep.solutions.size()) + "/" + std::to_string(dim) + " solutions, e_12 residual " + fmt(raising) +
               ", C_{k,s} eigen residual " + fmt(ck);
    return o;
}

// 8. Kernel degrees and the monic Wronskian prod (u - b_s).
Outcome kernels(const std::vector<const Sector*>& sectors) {
    Outcome o;
    double worst = 0.0;
    int count = 0;
    for (const auto* s : sectors) {
        const auto pc = s->prob.cast<C>();
        const bool ones = s->prob.q_is_one();
        Poly<C> target(C(1.0));
        for (const auto& b : pc.b) target *= Poly<C>::linear(b);
        for (const auto& t : s->rep.solutions) {
            ++count;
            auto K = bethe_kernel(t, pc.b, pc.q, s->prob.lambda, kTol);
            if (!K.ok) {
                o.ok = false;
                continue;
            }
            const int N = s->prob.N();
            for (int k = 1; k <= N; ++k) {
                const int want = s->prob.lambda[k - 1] + (ones ? N - k : 0);
                o.ok = o.ok && K.functions[static_cast<std::size_t>(k - 1)].poly.degree() == want;
            }
            auto f = fiber_from_bethe(t, pc, kTol);
            if (f.image.monic.degree() != target.degree()) {
                o.ok = false;
                continue;
            }
            for (int i = 0; i <= target.degree(); ++i) worst = std::max(worst, std::abs(f.image.monic[i] - target[i]));
        }
    }
    o.ok = o.ok && count > 0 && worst <= kTol;
    o.detail = std::to_string(count) + " kernels, Wronskian coefficient residual " + fmt(worst);
    return o;
}

// 9. Fiber coefficients against the spectrum, and the coordinate round-trip.
Outcome fiber_spectrum(const std::vector<const Sector*>& sectors) {
    Outcome o;
    double worst = 0.0;
    for (const auto* s : sectors) {
        const auto pc = s->prob.cast<C>();
        const int order = s->prob.n() + s->prob.N();
        EvaluationData<C> ev{s->prob.N(), pc.b};
        auto ops = s->prob.q_is_one()
                       ? C_coefficients(ev, s->prob.lambda, order).weight_space
                       : transfer_series(pc.q, ev, std::make_shared<const Basis>(Basis::weight(s->prob.lambda)), order);
        for (std::size_t i = 0; i < s->rep.solutions.size(); ++i) {
            auto f = fiber_from_bethe(s->rep.solutions[i], pc, kTol);
            worst = std::max(worst, spectrum_gap(ops, s->vectors[i], extract_coeffs(f.point, order), order));
        }
    }
    std::mt19937_64 rng(20261017);
    std::uniform_int_distribution<long> num(-9, 9), den(1, 6);
    int trips = 0, exact = 0;
    for (int N = 1; N <= 3; ++N)
        for (int n = 0; n <= 4; ++n)
            for (const auto& lam : partitions(N, n))
                for (auto kind : {SpaceKind::quasi_exp, SpaceKind::polynomial}) {
                    auto q = kind == SpaceKind::polynomial ? std::vector<Q>(static_cast<std::size_t>(N), Q(1))
                                                           : prefix({Q(1), Q(-3), Q(2, 5)}, N);
                    auto X = SpacePoint<Q>::origin(kind, q, lam);
                    for (auto& row : X.coords)
                        for (auto& c : row) {
                            c = Q(num(rng), den(rng));
                            c.canonicalize();
                        }
                    ++trips;
                    if (recover_coordinates(extract_coeffs(X, default_order(lam)), q, lam).coords == X.coords) ++exact;
                }
    o.ok = worst <= kTol && exact == trips;
    o.detail = "coefficient gap " + fmt(worst) + ", " + std::to_string(exact) + "/" + std::to_string(trips) + " exact round-trips";
    return o;
}

// 10. Graded characters of the invariants up to degree 3.
Outcome characters() {
    Outcome o;
    int tables = 0;
    for (const auto& lam : {Weight({1, 1}), Weight({2, 1})})
        for (auto mode : {CharacterMode::weight, CharacterMode::singular}) {
            ++tables;
            o.ok = o.ok && invariant_graded_dims(lam, 3, mode) == graded_character(lam, mode, 3);
        }
    o.detail = std::to_string(tables) + " graded tables to degree 3";
    return o;
}

// 11. Closed-form n = 1 solutions have exactly zero BAE residual.
Outcome closed_form() {
    Outcome o;
    int cases = 0;
    for (int N = 3; N <= 4; ++N)
        for (int k = 1; k <= std::min(3, N - 1); ++k, ++cases) {
            auto q = prefix(rationals({1, 2, 4, 8}), N);
            std::vector<int> lam(static_cast<std::size_t>(N), 0);
            lam[static_cast<std::size_t>(k)] = 1;
            BetheProblem<Q> prob{Weight(lam), q, {Q(3, 7)}};
            for (const auto& r : bae_residual(solve_n1(k, q, Q(3, 7)), prob)) o.ok = o.ok && sgn(r) == 0;
        }
    o.detail = std::to_string(cases) + " cases";
    return o;
}

}  // namespace

int main() {
    using Clock = std::chrono::steady_clock;
    int failures = 0;
    auto report = [&](int id, const char* name, double limit, const std::function<Outcome()>& fn) {
        const auto start = Clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        if (limit > 0 && secs > limit) {
            o.ok = false;
            o.detail += ", over the time limit";
        }
        if (!o.ok) ++failures;
        std::printf("criterion %2d %-28s %s  %s (%.2fs)\n", id, name, o.ok ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
    };

    report(1, "yangian-relations", 60, yangian_relations);
    report(2, "commutativity", 0, commutativity);
    report(3, "qdet-centrality", 0, centrality);
    report(4, "scalar-top-transfer", 0, scalar_top);
    report(5, "C-coefficient-structure", 0, c_structure);

    Sector weight, sing;
    const auto start = Clock::now();
    weight = solve_sector({Weight({2, 1}), rationals({1, 2}), rationals({0, 2, 4})});
    const double solve_secs = std::chrono::duration<double>(Clock::now() - start).count();
    report(6, "completeness-eigenvectors", 60 - solve_secs, [&] { return completeness(weight); });
    report(7, "q1-singular-sector", 0, [&] {
        sing = solve_sector({Weight({2, 2}), rationals({1, 1}), rationals({0, 2, 4, 6})});
        return singular_sector(sing);
    });
    report(8, "kernel-wronskian", 0, [&] { return kernels({&weight, &sing}); });
    report(9, "fiber-spectrum", 0, [&] { return fiber_spectrum({&weight, &sing}); });
    report(10, "graded-characters", 120, characters);
    report(11, "closed-form-n1", 0, closed_form);

    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
