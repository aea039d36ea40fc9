#include <limits>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "gtkf/decoder.hpp"
#include "gtkf/errors.hpp"
#include "oracles.hpp"

using namespace gtkf;

namespace {

FaultVector random_sparse(std::mt19937_64& rng, std::size_t n, std::size_t weight) {
    FaultVector f(n);
    std::uniform_int_distribution<std::size_t> col(0, n - 1);
    while (f.count() < weight) f.set(col(rng));
    return f;
}

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

} // namespace

TEST(Decode, ZeroOutcomeGivesNoFaults) {
    const auto phi = generate_matrix(20, 5, 30, 0.1, 3);
    EXPECT_TRUE(decode(phi, OutcomeVector(20)).none());
}

TEST(Decode, IdentityRecoversAnyPattern) {
    const auto phi = SamplingMatrix::identity(3, 5);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = random_sparse(rng, 15, trial % 10);
        EXPECT_EQ(decode(phi, boolean_encode(phi, f)), f);
    }
}

TEST(Decode, ToyInstanceMatchesExactDecoder) {
    const auto phi = oracle::toy_matrix();
    const auto g = boolean_encode(phi, oracle::toy_faults());
    const auto f = decode(phi, g);
    EXPECT_EQ(f, brute_force_decode(phi, g, 2));
    // Sensor 3 @ step 2 alone explains every positive test.
    EXPECT_EQ(f.ones(), std::vector<std::size_t>{column_index(2, 1, 4)});
}

TEST(Decode, ExactOnTwoDisjunctDesign) {
    const auto phi = oracle::affine_plane_matrix(2, 6);
    ASSERT_TRUE(is_d_disjunct(phi, 2));
    for (std::size_t a = 0; a < phi.cols(); ++a) {
        for (std::size_t b = a; b < phi.cols(); ++b) {
            FaultVector f(phi.cols());
            f.set(a);
            f.set(b);
            const auto g = boolean_encode(phi, f);
            EXPECT_EQ(decode(phi, g), f) << a << ' ' << b;
            EXPECT_EQ(brute_force_decode(phi, g, 2), f);
        }
    }
}

TEST(Decode, ExactOnRandomOneDisjunctMatrices) {
    std::size_t certified = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        const auto phi = generate_matrix(12, 2, 5, 0.3, seed);
        if (!is_d_disjunct(phi, 1)) continue;
        ++certified;
        for (std::size_t a = 0; a < phi.cols(); ++a) {
            FaultVector f(phi.cols());
            f.set(a);
            EXPECT_EQ(decode(phi, boolean_encode(phi, f)), f) << seed << ' ' << a;
        }
    }
    EXPECT_GT(certified, 10u);
}

TEST(Decode, TiesPreferFaultsOverFlippedOutcomes) {
    // Either sensor 1 is faulty and test 3 flipped, or tests 1 and 2 flipped:
    // both cost 2, and the one with less slack wins.
    const auto phi = SamplingMatrix::from_rows(1, 3, {"100", "100", "100"});
    const auto g = BitVector::from_string("110");
    const auto sol = relax(phi, g);
    EXPECT_NEAR(sol.objective, 2.0, 1e-9);
    EXPECT_NEAR(total(sol.slack), 1.0, 1e-9);
    EXPECT_EQ(decode(phi, g).to_string(), "100");
}

TEST(Relax, SolutionIsFeasible) {
    std::mt19937_64 rng(11);
    const auto phi = generate_matrix(30, 5, 20, 0.05, 8);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = boolean_encode(phi, random_sparse(rng, phi.cols(), 3));
        g.set(static_cast<std::size_t>(trial) % 30, !g.test(static_cast<std::size_t>(trial) % 30));
        const auto sol = relax(phi, g);
        ASSERT_EQ(sol.f_frac.size(), phi.cols());
        ASSERT_EQ(sol.slack.size(), phi.tests());
        for (std::size_t t = 0; t < phi.tests(); ++t) {
            const auto members = phi.row(t).ones();
            if (g.test(t)) {
                double s = sol.slack[t];
                for (auto j : members) s += sol.f_frac[j];
                EXPECT_GE(s, 1.0 - 1e-9);
            } else {
                for (auto j : members) EXPECT_LE(sol.f_frac[j], sol.slack[t] + 1e-9);
            }
        }
        for (double v : sol.f_frac) {
            EXPECT_GE(v, -1e-12);
            EXPECT_LE(v, 1.0 + 1e-12);
        }
        EXPECT_NEAR(sol.objective, total(sol.f_frac) + total(sol.slack), 1e-9);
    }
}

TEST(Relax, SlackShrinksAsLambdaGrows) {
    std::mt19937_64 rng(4);
    const auto phi = generate_matrix(25, 4, 10, 0.1, 2);
    for (int trial = 0; trial < 8; ++trial) {
        auto g = boolean_encode(phi, random_sparse(rng, phi.cols(), 2));
        for (std::size_t t = 0; t < 25; t += 6) g.set(t, !g.test(t));
        double prev = std::numeric_limits<double>::infinity();
        for (double lambda : {0.1, 0.5, 1.0, 2.0, 10.0}) {
            DecoderConfig cfg;
            cfg.lambda = lambda;
            const double s = total(relax(phi, g, cfg).slack);
            EXPECT_LE(s, prev + 1e-9) << lambda;
            prev = s;
        }
    }
}

TEST(Relax, ZeroLambdaExplainsEverythingWithSlack) {
    const auto phi = oracle::toy_matrix();
    DecoderConfig cfg;
    cfg.lambda = 0.0;
    const auto sol = relax(phi, BitVector::from_string("1110"), cfg);
    EXPECT_NEAR(sol.objective, 0.0, 1e-12);
}

TEST(Decode, RejectsBadInput) {
    const auto phi = oracle::toy_matrix();
    EXPECT_THROW((void)decode(phi, OutcomeVector(3)), ArgumentError);
    DecoderConfig cfg;
    cfg.lambda = -1.0;
    EXPECT_THROW((void)decode(phi, OutcomeVector(4), cfg), ConfigError);
    cfg.lambda = 1.0;
    cfg.round_threshold = 1.5;
    EXPECT_THROW((void)decode(phi, OutcomeVector(4), cfg), ConfigError);
}

TEST(BruteForce, PrefersFewestMismatchesThenWeight) {
    const auto phi = SamplingMatrix::identity(1, 4);
    EXPECT_EQ(brute_force_decode(phi, BitVector::from_string("0110"), 2).to_string(), "0110");
    // Three positives but only two faults allowed: first lexicographic pair.
    EXPECT_EQ(brute_force_decode(phi, BitVector::from_string("1110"), 2).to_string(), "1100");
    EXPECT_TRUE(brute_force_decode(phi, OutcomeVector(4), 2).none());
}

TEST(BruteForce, Budget) {
    const auto phi = generate_matrix(10, 5, 150, 0.1, 1);
    EXPECT_THROW((void)brute_force_decode(phi, OutcomeVector(10), 4), BudgetExceeded);
    EXPECT_THROW((void)brute_force_decode(phi, OutcomeVector(9), 1), ArgumentError);
}
