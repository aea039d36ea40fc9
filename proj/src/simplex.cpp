#include "gtkf/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "gtkf/errors.hpp"

namespace gtkf {

std::size_t LinearProgram::add_variable(double cost, double ub) {
    if (upper.size() < objective.size()) upper.resize(objective.size(), kInf);
    objective.push_back(cost);
    upper.push_back(ub);
    return objective.size() - 1;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

struct Entry {
    std::size_t index;
    double value;
};

constexpr double kPivotTol = 1e-9;

// Revised bounded-variable simplex. Every active row i becomes
//   sum_j a_ij x_j + l_i = b_i
// with a logical l_i in [0, inf) for <= rows (>= rows are negated first) and
// in [0, 0] for equalities. The basis is kept as a sparse LU factorization
// plus product-form eta updates, refactored every `refactor_interval` pivots.
class RevisedSimplex {
  public:
    RevisedSimplex(const LinearProgram& lp, const SimplexOptions& opts) : opts_(opts) {
        n_ = lp.num_vars();
        ncol_ = n_;
        cols_.assign(n_, {});
        ub_.assign(n_, LinearProgram::kInf);
        for (std::size_t j = 0; j < n_ && j < lp.upper.size(); ++j) {
            if (lp.upper[j] < 0.0) throw ArgumentError("solve_lp: negative upper bound");
            ub_[j] = lp.upper[j];
        }
        pos_.assign(n_, -1);
        at_upper_.assign(n_, false);
        eligible_.assign(n_, true);
        cost_.assign(n_, 0.0);
        d_.assign(n_, 0.0);
        alpha_row_.assign(n_, 0.0);

        std::vector<double> acc(n_, 0.0);
        std::vector<char> seen(n_, 0);
        std::vector<std::size_t> touched;
        pending_.reserve(lp.constraints.size());
        for (const auto& c : lp.constraints) {
            const double sign = c.sense == Sense::GreaterEqual ? -1.0 : 1.0;
            touched.clear();
            for (auto [j, a] : c.terms) {
                if (j >= n_) throw ArgumentError("solve_lp: constraint references unknown variable");
                if (!seen[j]) {
                    seen[j] = 1;
                    touched.push_back(j);
                }
                acc[j] += sign * a;
            }
            std::sort(touched.begin(), touched.end());
            Row row{{}, sign * c.rhs, c.sense == Sense::Equal, c.lazy, false};
            for (auto j : touched) {
                if (acc[j] != 0.0) row.terms.push_back({j, acc[j]});
                acc[j] = 0.0;
                seen[j] = 0;
            }
            pending_.push_back(std::move(row));
        }
        for (auto& row : pending_) {
            if (!row.lazy) activate(row);
        }
    }

    void run(const LinearProgram& lp) {
        refactor();
        // Nonnegative costs (negative ones only on bounded variables) make the
        // slack basis dual feasible, and the dual simplex then sidesteps the
        // heavy primal degeneracy of covering problems. Otherwise the dual
        // simplex on a zero objective finds a feasible basis first.
        bool dual_start = true;
        for (std::size_t j = 0; j < n_; ++j) {
            if (lp.objective[j] < 0.0 && ub_[j] == LinearProgram::kInf) dual_start = false;
        }
        if (dual_start) {
            set_costs(lp.objective);
            for (std::size_t j = 0; j < n_; ++j) at_upper_[j] = d_[j] < 0.0;
            compute_xb();
            dual_simplex();
        } else {
            set_costs({});
            compute_xb();
            dual_simplex();
            set_costs(lp.objective);
            primal_simplex();
        }
        // New rows enter with their logical basic, which keeps the basis dual
        // feasible, so the dual simplex resumes where it stopped.
        while (activate_violated()) {
            restart();
            dual_simplex();
        }

        if (!lp.secondary.empty()) {
            if (lp.secondary.size() != n_) {
                throw ArgumentError("solve_lp: secondary objective has wrong length");
            }
            // The optimal face is only known for the full problem; every
            // remaining row is satisfied, so adding them keeps optimality.
            bool added = false;
            for (auto& row : pending_) {
                if (!row.active) {
                    activate(row);
                    added = true;
                }
            }
            if (added) restart();
            // Freeze every nonbasic with a nonzero reduced cost so the primary
            // objective stays at its optimum.
            for (std::size_t j = 0; j < ncol_; ++j) {
                if (pos_[j] < 0 && std::abs(d_[j]) > opts_.tolerance) eligible_[j] = false;
            }
            set_costs(lp.secondary);
            primal_simplex();
        }
    }

    [[nodiscard]] std::vector<double> solution() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            double v = value(j);
            if (v < 0.0 && v > -1e-7) v = 0.0;
            if (v > ub_[j] && v < ub_[j] + 1e-7) v = ub_[j];
            x[j] = v;
        }
        return x;
    }

    [[nodiscard]] std::size_t iterations() const { return iterations_; }

  private:
    struct Row {
        std::vector<Entry> terms; // normalized to <= or ==
        double rhs;
        bool equality;
        bool lazy;
        bool active;
    };

    void activate(Row& row) {
        const auto i = m_++;
        for (auto [j, a] : row.terms) cols_[j].push_back({i, a});
        rows_.push_back(&row);
        const auto logical = ncol_++;
        cols_.push_back({{i, 1.0}});
        ub_.push_back(row.equality ? 0.0 : LinearProgram::kInf);
        basis_.push_back(logical);
        pos_.push_back(static_cast<long>(i));
        at_upper_.push_back(false);
        eligible_.push_back(true);
        cost_.push_back(0.0);
        d_.push_back(0.0);
        alpha_row_.push_back(0.0);
        row.active = true;
    }

    [[nodiscard]] double value(std::size_t j) const {
        return pos_[j] >= 0 ? xb_(pos_[j]) : (at_upper_[j] ? ub_[j] : 0.0);
    }

    bool activate_violated() {
        const double tol = opts_.tolerance;
        std::vector<double> x(n_);
        for (std::size_t j = 0; j < n_; ++j) x[j] = value(j);
        bool any = false;
        for (auto& row : pending_) {
            if (row.active) continue;
            double lhs = 0.0;
            for (auto [j, a] : row.terms) lhs += a * x[j];
            if (lhs > row.rhs + tol || (row.equality && lhs < row.rhs - tol)) {
                activate(row);
                any = true;
            }
        }
        return any;
    }

    void restart() {
        refactor();
        compute_xb();
        compute_duals();
    }

    struct Eta {
        std::size_t row;
        double pivot;
        std::vector<Entry> others;
    };

    void refactor() {
        etas_.clear();
        if (m_ == 0) return;
        std::vector<Eigen::Triplet<double>> trip;
        for (std::size_t k = 0; k < m_; ++k) {
            for (auto [i, a] : cols_[basis_[k]]) {
                trip.emplace_back(static_cast<int>(i), static_cast<int>(k), a);
            }
        }
        SpMat B(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
        B.setFromTriplets(trip.begin(), trip.end());
        B.makeCompressed();
        lu_.analyzePattern(B);
        lu_.factorize(B);
        if (lu_.info() != Eigen::Success) throw NumericError("solve_lp: singular basis");
    }

    void ftran(Vec& v) const {
        if (m_ == 0) return;
        v = lu_.solve(v).eval();
        for (const auto& e : etas_) {
            const auto r = static_cast<Eigen::Index>(e.row);
            const double xr = v(r) / e.pivot;
            for (auto [i, a] : e.others) v(static_cast<Eigen::Index>(i)) -= a * xr;
            v(r) = xr;
        }
    }

    void btran(Vec& v) {
        if (m_ == 0) return;
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            const auto r = static_cast<Eigen::Index>(it->row);
            double s = v(r);
            for (auto [i, a] : it->others) s -= a * v(static_cast<Eigen::Index>(i));
            v(r) = s / it->pivot;
        }
        v = lu_.transpose().solve(v).eval();
    }

    Vec column(std::size_t j) const {
        Vec a = Vec::Zero(static_cast<Eigen::Index>(m_));
        for (auto [i, v] : cols_[j]) a(static_cast<Eigen::Index>(i)) = v;
        return a;
    }

    void compute_xb() {
        Vec rhs(static_cast<Eigen::Index>(m_));
        for (std::size_t i = 0; i < m_; ++i) rhs(static_cast<Eigen::Index>(i)) = rows_[i]->rhs;
        for (std::size_t j = 0; j < ncol_; ++j) {
            if (pos_[j] >= 0 || !at_upper_[j]) continue;
            for (auto [i, a] : cols_[j]) rhs(static_cast<Eigen::Index>(i)) -= a * ub_[j];
        }
        ftran(rhs);
        xb_ = rhs;
    }

    // c covers the structural columns (shorter means zero); logicals cost 0.
    void set_costs(const std::vector<double>& c) {
        std::fill(cost_.begin(), cost_.end(), 0.0);
        std::copy(c.begin(), c.begin() + static_cast<long>(std::min(c.size(), n_)), cost_.begin());
        compute_duals();
    }

    void compute_duals() {
        Vec y(static_cast<Eigen::Index>(m_));
        for (std::size_t k = 0; k < m_; ++k) y(static_cast<Eigen::Index>(k)) = cost_[basis_[k]];
        btran(y);
        for (std::size_t j = 0; j < ncol_; ++j) {
            if (pos_[j] >= 0) {
                d_[j] = 0.0;
                continue;
            }
            double s = cost_[j];
            for (auto [i, a] : cols_[j]) s -= y(static_cast<Eigen::Index>(i)) * a;
            d_[j] = s;
        }
    }

    // alpha_row_[j] = (B^-1 A)_{r j}; only nonbasic entries are used.
    void compute_pivot_row(std::size_t r) {
        Vec rho = Vec::Zero(static_cast<Eigen::Index>(m_));
        rho(static_cast<Eigen::Index>(r)) = 1.0;
        btran(rho);
        std::fill(alpha_row_.begin(), alpha_row_.end(), 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double p = rho(static_cast<Eigen::Index>(i));
            if (p == 0.0) continue;
            for (auto [j, a] : rows_[i]->terms) alpha_row_[j] += p * a;
            alpha_row_[n_ + i] += p;
        }
    }

    [[nodiscard]] bool movable(std::size_t j) const { return pos_[j] < 0 && eligible_[j] && ub_[j] > 0.0; }

    // Basis change: q enters at position r moving by `step`; the leaving
    // variable stays nonbasic at its upper bound iff `leaves_at_upper`.
    void exchange(std::size_t r, std::size_t q, double step, const Vec& aq, bool leaves_at_upper) {
        const double entering = (at_upper_[q] ? ub_[q] : 0.0) + step;
        xb_ -= step * aq;

        const double ratio = d_[q] / alpha_row_[q];
        for (std::size_t j = 0; j < ncol_; ++j) {
            if (pos_[j] < 0 && alpha_row_[j] != 0.0) d_[j] -= ratio * alpha_row_[j];
        }
        const auto out = basis_[r];
        d_[q] = 0.0;
        d_[out] = -ratio;

        Eta eta{r, aq(static_cast<Eigen::Index>(r)), {}};
        for (std::size_t i = 0; i < m_; ++i) {
            const double a = aq(static_cast<Eigen::Index>(i));
            if (i != r && a != 0.0) eta.others.push_back({i, a});
        }
        etas_.push_back(std::move(eta));

        pos_[out] = -1;
        at_upper_[out] = leaves_at_upper;
        basis_[r] = q;
        pos_[q] = static_cast<long>(r);
        at_upper_[q] = false;
        xb_(static_cast<Eigen::Index>(r)) = entering;

        if (etas_.size() >= opts_.refactor_interval) restart();
    }

    void count_iteration() {
        if (++iterations_ > opts_.max_iterations) throw NumericError("solve_lp: iteration limit reached");
    }

    // Restores primal feasibility while keeping the basis dual feasible.
    void dual_simplex() {
        const double tol = opts_.tolerance;
        std::size_t stalled = 0;
        for (;;) {
            const bool bland = stalled > opts_.degenerate_limit;
            std::size_t r = m_;
            double worst = tol;
            for (std::size_t i = 0; i < m_; ++i) {
                const double x = xb_(static_cast<Eigen::Index>(i));
                const double v = std::max(-x, x - ub_[basis_[i]]);
                if (v <= tol) continue;
                if (bland ? (r == m_ || basis_[i] < basis_[r]) : v > worst) {
                    worst = v;
                    r = i;
                }
            }
            if (r == m_) return;
            count_iteration();

            const double xr = xb_(static_cast<Eigen::Index>(r));
            const bool to_lower = xr < 0.0;
            const double target = to_lower ? 0.0 : ub_[basis_[r]];
            compute_pivot_row(r);

            // x_B(r) = beta_r - sum alpha_rj x_j: raising it needs alpha_rj < 0
            // on a variable at its lower bound or alpha_rj > 0 at its upper bound.
            std::size_t q = ncol_;
            double best = LinearProgram::kInf;
            double best_alpha = 0.0;
            for (std::size_t j = 0; j < ncol_; ++j) {
                const double a = alpha_row_[j];
                if (std::abs(a) <= kPivotTol || !movable(j)) continue;
                const double s = to_lower ? a : -a;
                if (at_upper_[j] ? s <= 0.0 : s >= 0.0) continue;
                const double ratio = std::abs(d_[j]) / std::abs(a);
                bool take = ratio < best - tol;
                if (!take && ratio <= best + tol) take = bland ? j < q : std::abs(a) > std::abs(best_alpha);
                if (take) {
                    best = std::min(best, ratio);
                    best_alpha = a;
                    q = j;
                }
            }
            if (q == ncol_) throw NumericError("solve_lp: problem is infeasible");
            stalled = best <= tol ? stalled + 1 : 0;

            Vec aq = column(q);
            ftran(aq);
            const double pivot = aq(static_cast<Eigen::Index>(r));
            if (std::abs(pivot) <= kPivotTol) throw NumericError("solve_lp: numerically unstable pivot");
            exchange(r, q, (xr - target) / pivot, aq, !to_lower);
        }
    }

    // Primal simplex from a feasible basis over the eligible columns.
    void primal_simplex() {
        const double tol = opts_.tolerance;
        std::size_t stalled = 0;
        for (;;) {
            const bool bland = stalled > opts_.degenerate_limit;
            std::size_t q = ncol_;
            double best_score = tol;
            for (std::size_t j = 0; j < ncol_; ++j) {
                if (!movable(j)) continue;
                const double score = at_upper_[j] ? d_[j] : -d_[j];
                if (score <= tol) continue;
                if (bland) {
                    q = j;
                    break;
                }
                if (score > best_score) {
                    best_score = score;
                    q = j;
                }
            }
            if (q == ncol_) return;
            count_iteration();

            const double dir = at_upper_[q] ? -1.0 : 1.0;
            Vec aq = column(q);
            ftran(aq);

            double theta = ub_[q];
            std::size_t r = m_;
            bool to_upper = false;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = aq(static_cast<Eigen::Index>(i));
                if (std::abs(a) <= kPivotTol) continue;
                const double rate = -dir * a;
                const double x = xb_(static_cast<Eigen::Index>(i));
                const auto bi = basis_[i];
                double limit;
                bool hits_upper = false;
                if (rate < 0.0) {
                    limit = std::max(x, 0.0) / -rate;
                } else if (ub_[bi] < LinearProgram::kInf) {
                    limit = std::max(ub_[bi] - x, 0.0) / rate;
                    hits_upper = true;
                } else {
                    continue;
                }
                bool take = limit < theta - tol;
                if (!take && r < m_ && limit <= theta + tol) {
                    take = bland ? bi < basis_[r] : std::abs(a) > std::abs(aq(static_cast<Eigen::Index>(r)));
                }
                if (take) {
                    theta = std::min(theta, limit);
                    r = i;
                    to_upper = hits_upper;
                }
            }
            if (theta == LinearProgram::kInf) throw NumericError("solve_lp: objective is unbounded");
            stalled = theta <= tol ? stalled + 1 : 0;

            if (r == m_) {
                xb_ -= (dir * theta) * aq;
                at_upper_[q] = !at_upper_[q];
                continue;
            }
            compute_pivot_row(r);
            exchange(r, q, dir * theta, aq, to_upper);
        }
    }

    SimplexOptions opts_;
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::size_t ncol_ = 0;
    std::vector<Row> pending_;             // every constraint, active or not
    std::vector<const Row*> rows_;         // active rows in basis order
    std::vector<std::vector<Entry>> cols_; // active part of every column, logicals included
    std::vector<double> ub_;
    std::vector<double> cost_;
    std::vector<double> d_;
    std::vector<double> alpha_row_;
    std::vector<std::size_t> basis_;
    std::vector<long> pos_;
    std::vector<bool> at_upper_;
    std::vector<bool> eligible_;
    Vec xb_;
    Eigen::SparseLU<SpMat> lu_;
    std::vector<Eta> etas_;
    std::size_t iterations_ = 0;
};

} // namespace

LpResult solve_lp(const LinearProgram& lp, const SimplexOptions& opts) {
    if (!lp.upper.empty() && lp.upper.size() != lp.num_vars()) {
        throw ArgumentError("solve_lp: upper bound vector has wrong length");
    }
    RevisedSimplex simplex(lp, opts);
    simplex.run(lp);
    LpResult res;
    res.x = simplex.solution();
    res.iterations = simplex.iterations();
    for (std::size_t j = 0; j < lp.num_vars(); ++j) res.objective += lp.objective[j] * res.x[j];
    return res;
}

} // namespace gtkf
