#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gtkf/errors.hpp"
#include "gtkf/simplex.hpp"
#include "oracles.hpp"

using namespace gtkf;

namespace {

bool satisfies(const LinearProgram& lp, const std::vector<double>& x, double tol = 1e-7) {
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
        if (x[j] < -tol) return false;
        if (!lp.upper.empty() && x[j] > lp.upper[j] + tol) return false;
    }
    for (const auto& c : lp.constraints) {
        double lhs = 0.0;
        for (auto [j, v] : c.terms) lhs += v * x[j];
        if (c.sense == Sense::LessEqual && lhs > c.rhs + tol) return false;
        if (c.sense == Sense::GreaterEqual && lhs < c.rhs - tol) return false;
        if (c.sense == Sense::Equal && std::abs(lhs - c.rhs) > tol) return false;
    }
    return true;
}

double objective_at(const std::vector<double>& c, const std::vector<double>& x) {
    double v = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) v += c[j] * x[j];
    return v;
}

LinearProgram random_lp(std::mt19937_64& rng, std::size_t n, std::size_t m, bool lazy) {
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    std::uniform_int_distribution<int> sense(0, 4);
    std::bernoulli_distribution zero(0.25);
    LinearProgram lp;
    for (std::size_t j = 0; j < n; ++j) lp.add_variable(std::round(coef(rng) * 2.0) / 2.0, 1.0 + std::abs(coef(rng)));
    for (std::size_t i = 0; i < m; ++i) {
        LinearConstraint c;
        for (std::size_t j = 0; j < n; ++j) {
            if (!zero(rng)) c.terms.emplace_back(j, std::round(coef(rng) * 2.0) / 2.0);
        }
        const int s = sense(rng);
        c.sense = s < 2 ? Sense::LessEqual : (s < 4 ? Sense::GreaterEqual : Sense::Equal);
        c.rhs = std::round(coef(rng) * 2.0) / 2.0;
        c.lazy = lazy && c.sense == Sense::LessEqual;
        lp.constraints.push_back(std::move(c));
    }
    return lp;
}

} // namespace

TEST(Simplex, SingleLowerBound) {
    LinearProgram lp;
    lp.add_variable(1.0);
    lp.constraints.push_back({{{0, 1.0}}, Sense::GreaterEqual, 3.0});
    const auto r = solve_lp(lp);
    EXPECT_NEAR(r.x[0], 3.0, 1e-12);
    EXPECT_NEAR(r.objective, 3.0, 1e-12);
}

TEST(Simplex, MaximizeWithinBox) {
    // max x + 2y s.t. x + y <= 1.5, 0 <= x, y <= 1.
    LinearProgram lp;
    lp.add_variable(-1.0, 1.0);
    lp.add_variable(-2.0, 1.0);
    lp.constraints.push_back({{{0, 1.0}, {1, 1.0}}, Sense::LessEqual, 1.5});
    const auto r = solve_lp(lp);
    EXPECT_NEAR(r.x[0], 0.5, 1e-12);
    EXPECT_NEAR(r.x[1], 1.0, 1e-12);
    EXPECT_NEAR(r.objective, -2.5, 1e-12);
}

TEST(Simplex, EqualityRows) {
    // min x - y s.t. x + y = 2, x - y >= -1.
    LinearProgram lp;
    lp.add_variable(1.0);
    lp.add_variable(-1.0);
    lp.constraints.push_back({{{0, 1.0}, {1, 1.0}}, Sense::Equal, 2.0});
    lp.constraints.push_back({{{0, 1.0}, {1, -1.0}}, Sense::GreaterEqual, -1.0});
    const auto r = solve_lp(lp);
    EXPECT_NEAR(r.x[0], 0.5, 1e-12);
    EXPECT_NEAR(r.x[1], 1.5, 1e-12);
}

TEST(Simplex, Infeasible) {
    LinearProgram lp;
    lp.add_variable(1.0, 1.0);
    lp.constraints.push_back({{{0, 1.0}}, Sense::GreaterEqual, 2.0});
    EXPECT_THROW((void)solve_lp(lp), NumericError);
}

TEST(Simplex, Unbounded) {
    LinearProgram lp;
    lp.add_variable(-1.0);
    lp.add_variable(0.0);
    lp.constraints.push_back({{{0, 1.0}, {1, -1.0}}, Sense::LessEqual, 1.0});
    EXPECT_THROW((void)solve_lp(lp), NumericError);
}

TEST(Simplex, IterationCap) {
    LinearProgram lp;
    for (int j = 0; j < 4; ++j) lp.add_variable(-1.0, 1.0);
    lp.constraints.push_back({{{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}}, Sense::LessEqual, 2.5});
    SimplexOptions opts;
    opts.max_iterations = 1;
    EXPECT_THROW((void)solve_lp(lp, opts), NumericError);
}

TEST(Simplex, SecondaryObjectiveBreaksTies) {
    // min x + y s.t. x + y >= 1: every point of the segment is optimal.
    LinearProgram lp;
    lp.add_variable(1.0);
    lp.add_variable(1.0);
    lp.constraints.push_back({{{0, 1.0}, {1, 1.0}}, Sense::GreaterEqual, 1.0});
    lp.secondary = {1.0, 0.0};
    auto r = solve_lp(lp);
    EXPECT_NEAR(r.x[0], 0.0, 1e-12);
    EXPECT_NEAR(r.x[1], 1.0, 1e-12);
    lp.secondary = {0.0, 1.0};
    r = solve_lp(lp);
    EXPECT_NEAR(r.x[0], 1.0, 1e-12);
    EXPECT_NEAR(r.x[1], 0.0, 1e-12);
    EXPECT_NEAR(r.objective, 1.0, 1e-12);
}

TEST(Simplex, DegenerateProblemTerminates) {
    // Many redundant constraints through the optimal vertex.
    LinearProgram lp;
    lp.add_variable(-1.0);
    lp.add_variable(-1.0);
    for (int i = 1; i <= 30; ++i) {
        const double a = i / 10.0;
        lp.constraints.push_back({{{0, a}, {1, 1.0}}, Sense::LessEqual, a + 1.0});
        lp.constraints.push_back({{{0, 1.0}, {1, a}}, Sense::LessEqual, a + 1.0});
    }
    SimplexOptions opts;
    opts.degenerate_limit = 2;
    const auto r = solve_lp(lp, opts);
    EXPECT_NEAR(r.objective, -2.0, 1e-9);
}

TEST(Simplex, MatchesVertexEnumeration) {
    std::mt19937_64 rng(2024);
    int feasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto lp = random_lp(rng, 3, 3 + trial % 3, false);
        const double best = oracle::lp_vertex_minimum(lp);
        if (!std::isfinite(best)) {
            EXPECT_THROW((void)solve_lp(lp), NumericError) << trial;
            continue;
        }
        ++feasible;
        const auto r = solve_lp(lp);
        EXPECT_TRUE(satisfies(lp, r.x)) << trial;
        EXPECT_NEAR(r.objective, best, 1e-8) << trial;
        EXPECT_NEAR(objective_at(lp.objective, r.x), r.objective, 1e-9) << trial;
    }
    EXPECT_GT(feasible, 60);
}

TEST(Simplex, LazyRowsGiveSameOptimum) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        auto seed = rng();
        std::mt19937_64 a(seed), b(seed);
        const auto eager = random_lp(a, 4, 5, false);
        const auto lazy = random_lp(b, 4, 5, true);
        const double best = oracle::lp_vertex_minimum(eager);
        if (!std::isfinite(best)) {
            EXPECT_THROW((void)solve_lp(lazy), NumericError) << trial;
            continue;
        }
        const auto r = solve_lp(lazy);
        EXPECT_TRUE(satisfies(lazy, r.x)) << trial;
        EXPECT_NEAR(r.objective, best, 1e-8) << trial;
    }
}

TEST(Simplex, FrequentRefactorizationAgrees) {
    std::mt19937_64 rng(5);
    LinearProgram lp;
    const std::size_t n = 40;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t j = 0; j < n; ++j) lp.add_variable(-u(rng), 1.0);
    for (int i = 0; i < 25; ++i) {
        LinearConstraint c;
        for (std::size_t j = 0; j < n; ++j) {
            if (u(rng) < 0.3) c.terms.emplace_back(j, u(rng));
        }
        c.rhs = 1.0 + u(rng);
        lp.constraints.push_back(std::move(c));
    }
    SimplexOptions often;
    often.refactor_interval = 1;
    SimplexOptions rarely;
    rarely.refactor_interval = 1000;
    const auto a = solve_lp(lp, often);
    const auto b = solve_lp(lp, rarely);
    EXPECT_NEAR(a.objective, b.objective, 1e-9);
    EXPECT_TRUE(satisfies(lp, a.x));
    EXPECT_TRUE(satisfies(lp, b.x));
}
