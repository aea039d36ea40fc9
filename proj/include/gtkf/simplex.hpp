// Revised bounded-variable simplex (sparse LU basis) for small and medium linear programs.
#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace gtkf {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct LinearConstraint {
    std::vector<std::pair<std::size_t, double>> terms; // (variable, coefficient)
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
    /// Lazy rows enter the working problem only once the current point
    /// violates them; the optimum is that of the full problem either way.
    bool lazy = false;
};

/// minimize c^T x  subject to  constraints,  0 <= x <= upper.
struct LinearProgram {
    std::vector<double> objective;
    std::vector<double> upper; // empty means +inf for every variable
    std::vector<LinearConstraint> constraints;
    /// Optional tie-break objective minimized over the optimal face of `objective`.
    std::vector<double> secondary;

    static constexpr double kInf = std::numeric_limits<double>::infinity();

    [[nodiscard]] std::size_t num_vars() const { return objective.size(); }
    std::size_t add_variable(double cost, double ub = kInf);
};

struct SimplexOptions {
    std::size_t max_iterations = 200000;
    double tolerance = 1e-9;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    std::size_t degenerate_limit = 64;
    /// Basis updates between sparse LU refactorizations.
    std::size_t refactor_interval = 64;
};

struct LpResult {
    std::vector<double> x;
    double objective = 0.0;
    std::size_t iterations = 0;
};

/// Throws NumericError when infeasible, unbounded, or the iteration cap is hit.
LpResult solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

} // namespace gtkf
