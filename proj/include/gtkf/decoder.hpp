// Fault-vector decoding from group-testing outcomes.
#pragma once

#include <vector>

#include "gtkf/group_testing.hpp"
#include "gtkf/simplex.hpp"

namespace gtkf {

struct DecoderConfig {
    double lambda = 1.0;          // weight of the per-test slack variables
    double round_threshold = 0.5; // f_frac >= threshold decodes as faulty

    void validate() const;
};

struct LpSolution {
    std::vector<double> f_frac; // one per column of Phi, in [0, 1]
    std::vector<double> slack;  // one per test, >= 0
    double objective = 0.0;
};

/// Noisy Boolean compressed-sensing LP relaxation:
///   minimize  sum_j f_j + lambda * sum_t xi_t
///   s.t.      sum_{j in row t} f_j + xi_t >= 1   for positive tests
///             f_j <= xi_t  for every j in row t  for negative tests
///             0 <= f <= 1,  xi >= 0.
/// Among optimal solutions the one with least total slack is returned, so
/// faults are preferred over flipped outcomes when both explain g equally well.
LpSolution relax(const SamplingMatrix& phi, const OutcomeVector& g, const DecoderConfig& cfg = {});

/// The LP handed to solve_lp by relax(); variables are f (cols) followed by xi (tests).
LinearProgram build_relaxation(const SamplingMatrix& phi, const OutcomeVector& g, const DecoderConfig& cfg);

/// relax() followed by rounding at cfg.round_threshold.
FaultVector decode(const SamplingMatrix& phi, const OutcomeVector& g, const DecoderConfig& cfg = {});

/// Exact oracle: among f with at most d_max ones, minimize the number of
/// mismatches |(Phi . f) XOR g|, then the weight, then the index set
/// lexicographically. Throws BudgetExceeded when sum_{w<=d_max} C(cols, w) > budget.
FaultVector brute_force_decode(const SamplingMatrix& phi, const OutcomeVector& g, std::size_t d_max,
                               double budget = 2e7);

} // namespace gtkf
