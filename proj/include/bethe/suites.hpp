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

#ifndef BETHE_SUITES_HPP
#define BETHE_SUITES_HPP

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "bethe.hpp"
#include "io.hpp"
#include "symspace.hpp"
#include "tensorrep.hpp"
#include "wronski.hpp"
#include "yangian.hpp"

namespace bethe {

/// Largest full tensor space on which the full-space identities run.
inline constexpr std::int64_t kFullSpaceLimit = 27;

namespace detail {

inline bool full_space_fits(int N, int n) {
    std::int64_t dim = 1;
    for (int s = 0; s < n; ++s)
        if ((dim *= N) > kFullSpaceLimit) return false;
    return true;
}

inline void record_check(Section& sec, const std::string& name, const CheckResult& r) {
    auto& rec = sec.add(name, r.ok());
    rec.data = {{"checked", r.checked}, {"failures", r.failures}};
    if (!r.ok()) rec.note = r.first_failure;
}

/// Adds an upper-triangular block of ones to the constant numerator
/// coefficient; used by the negative-control fixture.
template <class S>
void corrupt(OperatorRatFun<S>& op) {
    auto& m = op.num.at(0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) m(i, j) += scalar<S>(1);
}

template <class S>
std::vector<SeriesUinv<Matrix<Complex>>> to_complex(const std::vector<SeriesUinv<Matrix<S>>>& ops) {
    std::vector<SeriesUinv<Matrix<Complex>>> out;
    for (const auto& op : ops) {
        SeriesUinv<Matrix<Complex>> r;
        for (const auto& m : op.c) r.c.push_back(m.template cast<Complex>());
        out.push_back(std::move(r));
    }
    return out;
}

inline bool gaps_exceed_one(const std::vector<Rational>& b) {
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j)
            if (abs(b[i] - b[j]) <= 1) return false;
    return true;
}

template <class S>
Json matrix_json(const Matrix<S>& m) {
    Json a = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        a.push_back(row);
    }
    return a;
}

}  // namespace detail

/// Exact identity suite: Yangian relations, centrality of qdet, commuting
/// transfer matrices, the scalar top transfer matrix and the C_k structure.
inline Section cmd_verify_algebra(const RunConfig& cfg) {
    if (cfg.mode != Mode::exact) throw ConfigError("verify-algebra runs in exact mode only");
    Section sec{"verify-algebra", {}, false, Json::object()};
    const EvaluationData<Rational> ev{cfg.N, cfg.b};
    const bool full = detail::full_space_fits(cfg.N, cfg.n);
    auto full_basis = std::make_shared<const Basis>(Basis::full(cfg.N, cfg.n));

    if (full) {
        detail::record_check(sec, "yangian_relations", check_yangian_relations(ev));
        CheckResult central;
        auto qd = qdet(ev, full_basis);
        for (int i = 1; i <= cfg.N; ++i)
            for (int j = 1; j <= cfg.N; ++j) {
                ++central.checked;
                if (!commute_identically(qd, T_entry(i, j, ev, full_basis)))
                    central.fail("qdet vs T(" + std::to_string(i) + std::to_string(j) + ")");
            }
        detail::record_check(sec, "qdet_central", central);
    } else {
        const std::string why = "full tensor space larger than " + std::to_string(kFullSpaceLimit);
        sec.skip("yangian_relations", why);
        sec.skip("qdet_central", why);
    }

    auto basis = std::make_shared<const Basis>(Basis::weight(cfg.lambda));
    std::vector<OperatorRatFun<Rational>> B;
    for (int k = 1; k <= cfg.N; ++k) B.push_back(transfer_matrix(k, cfg.q, ev, basis));
    if (cfg.self_test == "corrupt_operator") detail::corrupt(B[0]);
    CheckResult identical, sampled;
    for (int k = 0; k < cfg.N; ++k)
        for (int l = k; l < cfg.N; ++l) {
            const std::string what = "B_" + std::to_string(k + 1) + ", B_" + std::to_string(l + 1);
            ++identical.checked;
            ++sampled.checked;
            if (!commute_identically(B[k], B[l])) identical.fail(what);
            if (!commute_at_samples(B[k], B[l])) sampled.fail(what);
        }
    detail::record_check(sec, "transfer_commute_identically", identical);
    detail::record_check(sec, "transfer_commute_at_samples", sampled);

    if (full) {
        // q = 1 transfer matrices commute with gl_N; twisted ones with the Cartan part.
        CheckResult sym;
        for (int k = 1; k <= cfg.N; ++k) {
            auto Bk = transfer_matrix(k, cfg.q, ev, full_basis);
            for (int i = 1; i <= cfg.N; ++i)
                for (int j = 1; j <= cfg.N; ++j) {
                    if (!cfg.q_ones && i != j) continue;
                    ++sym.checked;
                    if (!commutes_with(Bk, gl_matrix<Rational>(i, j, *full_basis, *full_basis)))
                        sym.fail("B_" + std::to_string(k) + " vs e_" + std::to_string(i) + std::to_string(j));
                }
        }
        detail::record_check(sec, cfg.q_ones ? "transfer_commute_gl" : "transfer_commute_cartan", sym);
    } else {
        sec.skip(cfg.q_ones ? "transfer_commute_gl" : "transfer_commute_cartan", "full tensor space too large");
    }

    sec.add("top_transfer_scalar", is_bn_scalar(B.back(), cfg.q, ev));

    if (cfg.lambda.is_partition()) {
        auto t = C_coefficients(ev, cfg.lambda, cfg.N + 1);
        CheckResult lower;
        for (int k = 1; k <= cfg.N; ++k)
            for (int s = 0; s < k; ++s) {
                ++lower.checked;
                if (!t.weight_space[k][s].is_zero()) lower.fail("C_" + std::to_string(k) + "," + std::to_string(s));
            }
        detail::record_check(sec, "C_vanishes_below_diagonal", lower);
        const std::size_t d = t.singular.cols();
        if (d == 0) {
            sec.skip("C_diagonal_chi", "no singular vectors of this weight");
        } else {
            bool scalar_ok = true;
            Poly<Rational> lhs;
            Json diag = Json::array();
            for (int k = 0; k <= cfg.N; ++k) {
                const auto& m = t.restricted[k][k];
                scalar_ok = scalar_ok && m == Matrix<Rational>::identity(d) * m(0, 0);
                diag.push_back(to_json(m(0, 0)));
                Poly<Rational> f(Rational(1));
                for (int j = 0; j < cfg.N - k; ++j) f *= Poly<Rational>::linear(Rational(j));
                lhs += f * (k % 2 ? Rational(-m(0, 0)) : m(0, 0));
            }
            auto& rec = sec.add("C_diagonal_chi", scalar_ok && lhs == chi_polynomial<Rational>(cfg.lambda));
            rec.data = {{"C_kk", diag}};
        }
    } else {
        sec.skip("C_vanishes_below_diagonal", "lambda is not a partition");
        sec.skip("C_diagonal_chi", "lambda is not a partition");
    }
    return sec;
}

/// Solver output of one run, shared by the spectrum and fiber commands.
struct SpectrumRun {
    BetheProblem<Rational> problem;
    SolveReport report;
};

inline SpectrumRun solve_config(const RunConfig& cfg) {
    auto prob = cfg.problem();
    if (!cfg.q_ones && !prob.q_distinct()) throw ConfigError("q must be pairwise distinct or all ones");
    return {prob, solve_bae(prob, Strategy::automatic, cfg.solver_options())};
}

namespace detail {

template <class S>
std::vector<OperatorRatFun<S>> weight_transfer_matrices(const RunConfig& cfg, std::shared_ptr<const Basis> basis) {
    const auto prob = cfg.problem().template cast<S>();
    const EvaluationData<S> ev{cfg.N, prob.b};
    std::vector<OperatorRatFun<S>> B;
    for (int k = 1; k <= cfg.N; ++k) B.push_back(transfer_matrix(k, prob.q, ev, basis));
    return B;
}

template <class S>
std::vector<std::vector<Matrix<Complex>>> sampled_transfer(const RunConfig& cfg, std::shared_ptr<const Basis> basis) {
    std::vector<std::vector<Matrix<Complex>>> out;
    for (const auto& B : weight_transfer_matrices<S>(cfg, basis)) {
        out.emplace_back();
        for (const auto& u : eigen_sample_points()) out.back().push_back(B.evaluate_as(u));
    }
    return out;
}

}  // namespace detail

/// Roots, Bethe vectors and eigenvalue checks. extra["table"] holds the
/// eigenvalue rows (solution, k, u, c_k(u)) for CSV export.
inline Section cmd_spectrum(const RunConfig& cfg, const SpectrumRun& run) {
    Section sec{"spectrum", {}, false, Json::object()};
    const auto& rep = run.report;
    const auto pc = run.problem.cast<Complex>();

    auto& count = sec.add("solution_count", rep.solutions.size() == rep.expected);
    count.data = {{"found", rep.solutions.size()}, {"expected", rep.expected}, {"paths", rep.paths}, {"failed_paths", rep.failed_paths},
                  {"excluded_zero_vectors", rep.zero_vectors}, {"sector", cfg.q_ones ? "singular" : "weight"}};
    if (!rep.warnings.empty()) count.note = rep.warnings.front();
    if (rep.nonconvergent()) {
        count.status = CheckStatus::skipped;
        sec.nonconvergent = true;
    }

    auto basis = std::make_shared<const Basis>(Basis::weight(cfg.lambda));
    const auto samples = eigen_sample_points();
    std::vector<std::vector<Matrix<Complex>>> Bu;
    if (!rep.solutions.empty())
        Bu = cfg.mode == Mode::exact ? detail::sampled_transfer<Rational>(cfg, basis) : detail::sampled_transfer<Complex>(cfg, basis);

    std::vector<std::vector<Complex>> tuples;
    Json table = Json::array();
    for (std::size_t i = 0; i < rep.solutions.size(); ++i) {
        const auto& t = rep.solutions[i];
        const auto w = bethe_vector(cfg.lambda, t, pc.b);
        double worst = 0.0;
        Json values = Json::array();
        tuples.emplace_back();
        for (int k = 1; k <= cfg.N; ++k)
            for (std::size_t p = 0; p < samples.size(); ++p) {
                const Complex c = eigenvalue_ck(k, samples[p], t, pc.b, pc.q);
                worst = std::max(worst, eigen_residual(Bu[static_cast<std::size_t>(k - 1)][p], w, c));
                tuples.back().push_back(c);
                values.push_back({{"k", k}, {"u", to_json(samples[p])}, {"value", to_json(c)}});
                table.push_back({i, k, to_json(samples[p]), to_json(c)});
            }
        auto& rec = sec.add("eigenvector[" + std::to_string(i) + "]", worst <= cfg.tol.eig);
        rec.residuals = {{"eigen", worst}, {"bae", rep.residuals[i]}, {"offdiagonal_margin", rep.margins[i]}};
        rec.data = {{"roots", to_json(t)}, {"eigenvalues", values}};

        if (cfg.q_ones) {
            double sing = 0.0;
            for (int a = 1; a < cfg.N; ++a) {
                auto to = gl_target(*basis, a, a + 1);
                if (!to) continue;
                sing = std::max(sing, norm2(gl_matrix<Rational>(a, a + 1, *basis, *to).cast<Complex>() * w) / norm2(w));
            }
            auto& s = sec.add("singular[" + std::to_string(i) + "]", sing <= cfg.tol.eig);
            s.residuals = {{"raising", sing}};
        }
    }

    double separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tuples.size(); ++i)
        for (std::size_t j = i + 1; j < tuples.size(); ++j) {
            double gap = 0.0;
            for (std::size_t m = 0; m < tuples[i].size(); ++m) gap = std::max(gap, std::abs(tuples[i][m] - tuples[j][m]));
            separation = std::min(separation, gap);
        }
    const bool simple = separation > cfg.tol.eig;
    const bool enforced = !cfg.q_ones && detail::gaps_exceed_one(cfg.b);
    if (tuples.size() < 2) {
        sec.skip("simple_spectrum", "fewer than two solutions");
    } else {
        auto& rec = sec.add("simple_spectrum", simple || !enforced);
        rec.residuals = {{"min_separation", separation}};
        rec.data = {{"simple", simple}, {"enforced", enforced}};
    }
    sec.extra["table"] = table;
    return sec;
}

/// Fiber points of the Wronski map and their coefficient tables against the
/// transfer-matrix spectrum, s = 1..smax.
inline Section cmd_fiber(const RunConfig& cfg, const SpectrumRun& run) {
    Section sec{"fiber", {}, run.report.nonconvergent(), Json::object()};
    const auto& rep = run.report;
    const auto pc = run.problem.cast<Complex>();
    const int order = std::max(cfg.smax, cfg.n + cfg.N);
    if (rep.solutions.empty()) {
        sec.skip("fibers", "no Bethe solutions");
        return sec;
    }

    auto basis = std::make_shared<const Basis>(Basis::weight(cfg.lambda));
    std::vector<SeriesUinv<Matrix<Complex>>> ops;
    if (cfg.q_ones) {
        ops = cfg.mode == Mode::exact ? detail::to_complex(C_coefficients(EvaluationData<Rational>{cfg.N, cfg.b}, cfg.lambda, order).weight_space)
                                      : C_coefficients(EvaluationData<Complex>{cfg.N, pc.b}, cfg.lambda, order).weight_space;
    } else {
        ops = cfg.mode == Mode::exact ? detail::to_complex(transfer_series(cfg.q, EvaluationData<Rational>{cfg.N, cfg.b}, basis, order))
                                      : transfer_series(pc.q, EvaluationData<Complex>{cfg.N, pc.b}, basis, order);
    }

    const bool rootless = run.problem.root_count() == 0;
    for (std::size_t i = 0; i < rep.solutions.size(); ++i) {
        const auto& t = rep.solutions[i];
        const std::string name = "fiber[" + std::to_string(i) + "]";
        try {
            Json point, image;
            double image_res = 0.0, kernel_res = 0.0;
            SpacePoint<Complex> X;
            if (rootless) {
                auto f = fiber_from_bethe(BetheRoots<Rational>::empty_for(run.problem.l()), run.problem, cfg.tol.eig);
                point = to_json(f.point);
                image = to_json(f.image.monic);
                image_res = f.image_residual;
                X = f.point.template cast<Complex>();
            } else {
                auto f = fiber_from_bethe(t, pc, cfg.tol.eig);
                point = to_json(f.point);
                image = to_json(f.image.monic);
                image_res = f.image_residual;
                for (double r : f.kernel_residuals) kernel_res = std::max(kernel_res, r);
                X = f.point;
            }
            const auto table = extract_coeffs(X, order);
            const double gap = spectrum_gap(ops, bethe_vector(cfg.lambda, t, pc.b), table, order);
            Json degrees = Json::array();
            bool degrees_ok = true;
            for (int k = 1; k <= cfg.N; ++k) {
                const int d = X.poly(k).degree();
                degrees.push_back(d);
                degrees_ok = degrees_ok && d == X.top(k);
            }
            auto& rec = sec.add(name, degrees_ok && image_res <= cfg.tol.eig && kernel_res <= cfg.tol.eig && gap <= cfg.tol.eig);
            rec.residuals = {{"wronskian", image_res}, {"kernel", kernel_res}, {"coefficients_vs_spectrum", gap}};
            rec.data = {{"point", point}, {"wronskian_monic", image}, {"kernel_degrees", degrees}};
        } catch (const std::runtime_error& e) {
            sec.add(name, false).note = e.what();
        } catch (const std::domain_error& e) {
            sec.add(name, false).note = e.what();
        }
    }
    return sec;
}

/// Graded dimensions of the S_n-invariants against the closed-form series.
inline Section cmd_characters(const RunConfig& cfg) {
    if (cfg.mode != Mode::exact) throw ConfigError("characters runs in exact mode only");
    Section sec{"characters", {}, false, Json::object()};
    for (auto mode : {CharacterMode::weight, CharacterMode::singular}) {
        const std::string name = mode == CharacterMode::weight ? "graded_dims_weight" : "graded_dims_singular";
        if (mode == CharacterMode::singular && !cfg.lambda.is_partition()) {
            sec.skip(name, "lambda is not a partition");
            continue;
        }
        const auto got = invariant_graded_dims(cfg.lambda, cfg.cutoff, mode);
        const auto want = graded_character(cfg.lambda, mode, cfg.cutoff);
        auto& rec = sec.add(name, got == want);
        rec.data = {{"computed", got}, {"series", want}, {"cutoff", cfg.cutoff}};
        if (mode == CharacterMode::singular) rec.data["min_degree"] = singular_min_degree(cfg.lambda);
    }
    return sec;
}

}  // namespace bethe

#endif  // BETHE_SUITES_HPP
