// Chi-square distribution utilities.
#pragma once

#include <cstddef>
#include <vector>

namespace gtkf {

/// Regularized lower incomplete gamma P(a, x): series for x < a + 1,
/// Lentz continued fraction for Q(a, x) otherwise.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// without cancellation in the upper tail.
double regularized_gamma_q(double a, double x);

double chi2_cdf(double x, double dof);

/// Inverse CDF. Bisection to bracket the root, then Newton polish.
/// Throws ArgumentError unless 0 < prob < 1 and dof >= 1.
double chi2_quantile(double prob, double dof);

/// Two-sided acceptance interval [lower(dof), upper(dof)] with `tail_mass`
/// probability in each tail, precomputed for dof = 1 .. max_dof.
class Chi2Bounds {
  public:
    Chi2Bounds(double tail_mass, std::size_t max_dof);

    [[nodiscard]] double tail_mass() const { return tail_mass_; }
    [[nodiscard]] std::size_t max_dof() const { return lower_.size(); }
    [[nodiscard]] double lower(std::size_t dof) const;
    [[nodiscard]] double upper(std::size_t dof) const;
    /// True when `stat` lies inside the acceptance interval for `dof`.
    [[nodiscard]] bool accepts(double stat, std::size_t dof) const;

  private:
    double tail_mass_;
    std::vector<double> lower_;
    std::vector<double> upper_;
};

} // namespace gtkf
