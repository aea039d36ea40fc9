#include "gtkf/decoder.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "gtkf/errors.hpp"

namespace gtkf {

void DecoderConfig::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ConfigError("decoder lambda must be a finite value >= 0");
    }
    if (!(round_threshold >= 0.0 && round_threshold <= 1.0)) {
        throw ConfigError("decoder round_threshold must lie in [0, 1]");
    }
}

LinearProgram build_relaxation(const SamplingMatrix& phi, const OutcomeVector& g, const DecoderConfig& cfg) {
    cfg.validate();
    if (g.size() != phi.tests()) {
        throw ArgumentError("decode: outcome length " + std::to_string(g.size()) + " != tests " +
                            std::to_string(phi.tests()));
    }
    const auto cols = phi.cols();
    const auto tests = phi.tests();

    LinearProgram lp;
    for (std::size_t j = 0; j < cols; ++j) lp.add_variable(1.0, 1.0);
    for (std::size_t t = 0; t < tests; ++t) lp.add_variable(cfg.lambda);
    lp.secondary.assign(cols + tests, 0.0);
    for (std::size_t t = 0; t < tests; ++t) lp.secondary[cols + t] = 1.0;

    for (std::size_t t = 0; t < tests; ++t) {
        const auto members = phi.row(t).ones();
        const auto xi = cols + t;
        if (g.test(t)) {
            LinearConstraint c;
            c.sense = Sense::GreaterEqual;
            c.rhs = 1.0;
            c.terms.reserve(members.size() + 1);
            for (auto j : members) c.terms.emplace_back(j, 1.0);
            c.terms.emplace_back(xi, 1.0);
            lp.constraints.push_back(std::move(c));
        } else {
            // Most of these are slack at the optimum.
            for (auto j : members) lp.constraints.push_back({{{j, 1.0}, {xi, -1.0}}, Sense::LessEqual, 0.0, true});
        }
    }
    return lp;
}

LpSolution relax(const SamplingMatrix& phi, const OutcomeVector& g, const DecoderConfig& cfg) {
    const auto lp = build_relaxation(phi, g, cfg);
    const auto res = solve_lp(lp);
    const auto cols = phi.cols();
    LpSolution sol;
    sol.f_frac.assign(res.x.begin(), res.x.begin() + static_cast<long>(cols));
    sol.slack.assign(res.x.begin() + static_cast<long>(cols), res.x.end());
    sol.objective = res.objective;
    return sol;
}

FaultVector decode(const SamplingMatrix& phi, const OutcomeVector& g, const DecoderConfig& cfg) {
    const auto sol = relax(phi, g, cfg);
    FaultVector f(phi.cols());
    for (std::size_t j = 0; j < sol.f_frac.size(); ++j) {
        // Guard against round-off right at the threshold (e.g. 0.5 - 1e-15).
        if (sol.f_frac[j] >= cfg.round_threshold - 1e-9 && sol.f_frac[j] > 1e-9) f.set(j);
    }
    return f;
}

FaultVector brute_force_decode(const SamplingMatrix& phi, const OutcomeVector& g, std::size_t d_max,
                               double budget) {
    if (g.size() != phi.tests()) {
        throw ArgumentError("brute_force_decode: outcome length mismatch");
    }
    const auto n = phi.cols();
    double work = 0.0;
    for (std::size_t w = 0; w <= std::min(d_max, n); ++w) {
        work += std::exp(std::lgamma(n + 1.0) - std::lgamma(w + 1.0) - std::lgamma(n - w + 1.0));
    }
    if (work > budget) {
        throw BudgetExceeded("brute_force_decode: enumeration of " + std::to_string(work) + " candidates exceeds budget");
    }

    std::vector<BitVector> columns;
    columns.reserve(n);
    for (std::size_t j = 0; j < n; ++j) columns.push_back(phi.column(j));
    const auto nwords = g.words().size();

    auto mismatches = [&](const std::vector<std::uint64_t>& uni) {
        std::size_t m = 0;
        for (std::size_t w = 0; w < nwords; ++w) m += static_cast<std::size_t>(std::popcount(uni[w] ^ g.words()[w]));
        return m;
    };

    std::vector<std::size_t> best;
    std::size_t best_mis = mismatches(std::vector<std::uint64_t>(nwords, 0));
    std::vector<std::size_t> pick;

    // Weight ascending, index sets lexicographic: the first strict improvement wins ties.
    auto search = [&](auto&& self, std::size_t start, std::size_t remaining,
                      const std::vector<std::uint64_t>& uni) -> void {
        if (remaining == 0) {
            const auto m = mismatches(uni);
            if (m < best_mis) {
                best_mis = m;
                best = pick;
            }
            return;
        }
        for (std::size_t c = start; c + remaining <= n; ++c) {
            auto next = uni;
            const auto& cw = columns[c].words();
            for (std::size_t w = 0; w < nwords; ++w) next[w] |= cw[w];
            pick.push_back(c);
            self(self, c + 1, remaining - 1, next);
            pick.pop_back();
        }
    };
    for (std::size_t w = 1; w <= std::min(d_max, n) && best_mis > 0; ++w) {
        search(search, 0, w, std::vector<std::uint64_t>(nwords, 0));
    }

    FaultVector f(n);
    for (auto j : best) f.set(j);
    return f;
}

} // namespace gtkf
