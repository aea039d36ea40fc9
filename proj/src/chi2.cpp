#include "gtkf/chi2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gtkf/errors.hpp"

namespace gtkf {
namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 100000;

double gamma_series(double a, double x) {
    // P(a, x) = x^a e^-x / Gamma(a+1) * sum_n x^n / ((a+1)...(a+n))
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < kMaxTerms; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw NumericError("incomplete gamma series did not converge");
}

double gamma_continued_fraction(double a, double x) {
    // Q(a, x) by modified Lentz.
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxTerms; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
        }
    }
    throw NumericError("incomplete gamma continued fraction did not converge");
}

double chi2_pdf(double x, double dof) {
    if (x <= 0.0) return 0.0;
    const double a = 0.5 * dof;
    return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) - std::lgamma(a));
}

} // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        throw ArgumentError("regularized_gamma_p: need a > 0 and x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_series(a, x);
    return 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) {
        throw ArgumentError("regularized_gamma_q: need a > 0 and x >= 0");
    }
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_series(a, x);
    return gamma_continued_fraction(a, x);
}

double chi2_cdf(double x, double dof) {
    if (x <= 0.0) return 0.0;
    return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_quantile(double prob, double dof) {
    if (!(prob > 0.0 && prob < 1.0)) {
        throw ArgumentError("chi2_quantile: probability must lie in (0, 1), got " + std::to_string(prob));
    }
    if (!(dof >= 1.0)) {
        throw ArgumentError("chi2_quantile: dof must be >= 1");
    }
    const double a = 0.5 * dof;
    // Work on whichever tail is small to keep relative accuracy.
    const bool upper_tail = prob > 0.5;
    const double target = upper_tail ? 1.0 - prob : prob;
    auto residual = [&](double x) {
        return upper_tail ? target - regularized_gamma_q(a, 0.5 * x) : regularized_gamma_p(a, 0.5 * x) - target;
    };

    double lo = 0.0;
    double hi = std::max(dof, 1.0);
    while (residual(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-6 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) < 0.0 ? lo : hi) = mid;
    }

    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 50; ++i) {
        const double r = residual(x);
        if (r == 0.0) break;
        (r < 0.0 ? lo : hi) = x;
        const double pdf = chi2_pdf(x, dof);
        double next = pdf > 0.0 ? x - r / pdf : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * x) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

Chi2Bounds::Chi2Bounds(double tail_mass, std::size_t max_dof) : tail_mass_(tail_mass) {
    if (!(tail_mass > 0.0 && tail_mass < 0.5)) {
        throw ConfigError("tail mass must lie in (0, 0.5)");
    }
    lower_.reserve(max_dof);
    upper_.reserve(max_dof);
    for (std::size_t dof = 1; dof <= max_dof; ++dof) {
        lower_.push_back(chi2_quantile(tail_mass, static_cast<double>(dof)));
        upper_.push_back(chi2_quantile(1.0 - tail_mass, static_cast<double>(dof)));
    }
}

double Chi2Bounds::lower(std::size_t dof) const {
    if (dof == 0 || dof > lower_.size()) {
        throw ArgumentError("Chi2Bounds: dof " + std::to_string(dof) + " outside precomputed range");
    }
    return lower_[dof - 1];
}

double Chi2Bounds::upper(std::size_t dof) const {
    if (dof == 0 || dof > upper_.size()) {
        throw ArgumentError("Chi2Bounds: dof " + std::to_string(dof) + " outside precomputed range");
    }
    return upper_[dof - 1];
}

bool Chi2Bounds::accepts(double stat, std::size_t dof) const { return stat >= lower(dof) && stat <= upper(dof); }

} // namespace gtkf
