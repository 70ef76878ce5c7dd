#include "imlab/simplex.hpp"

#include <cmath>

namespace imlab::lp {

const char* to_string(Status status) {
    switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration limit";
    }
    return "unknown";
}

namespace {

class Tableau {
public:
    Tableau(const LinearProgram& program, double tol) : tol_(tol) {
        n_orig_ = program.n_vars();
        const int m = static_cast<int>(program.constraints.size());
        int n_slack = 0;
        int n_art = 0;
        for (const auto& c : program.constraints) {
            if (c.coefficients.size() != n_orig_) throw ShapeError("lp::solve: constraint width mismatch");
            const Sense sense = normalized_sense(c);
            if (sense != Sense::Equal) ++n_slack;
            if (sense != Sense::LessEqual) ++n_art;
        }
        art_begin_ = n_orig_ + n_slack;
        n_cols_ = art_begin_ + n_art;
        table_ = Matrix::Zero(m, n_cols_ + 1);
        basis_.assign(static_cast<std::size_t>(m), -1);
        int slack = n_orig_;
        int art = art_begin_;
        for (int i = 0; i < m; ++i) {
            const auto& c = program.constraints[static_cast<std::size_t>(i)];
            const double flip = c.rhs < 0.0 ? -1.0 : 1.0;
            table_.row(i).head(n_orig_) = flip * c.coefficients.transpose();
            table_(i, n_cols_) = flip * c.rhs;
            const Sense sense = normalized_sense(c);
            if (sense == Sense::LessEqual) {
                table_(i, slack) = 1.0;
                basis_[static_cast<std::size_t>(i)] = slack++;
            } else {
                if (sense == Sense::GreaterEqual) table_(i, slack++) = -1.0;
                table_(i, art) = 1.0;
                basis_[static_cast<std::size_t>(i)] = art++;
            }
        }
    }

    int rows() const { return static_cast<int>(table_.rows()); }
    bool is_artificial(int col) const { return col >= art_begin_; }
    bool has_artificials() const { return art_begin_ < n_cols_; }

    /// Loads cost vector over all columns and computes reduced costs.
    void set_objective(const Vector& costs) {
        costs_ = costs;
        reduced_ = costs;
        for (int i = 0; i < rows(); ++i) {
            const double cb = costs_[basis_[static_cast<std::size_t>(i)]];
            if (cb != 0.0) reduced_ -= cb * table_.row(i).head(n_cols_).transpose();
        }
    }

    double objective_value() const {
        double v = 0.0;
        for (int i = 0; i < rows(); ++i) v += costs_[basis_[static_cast<std::size_t>(i)]] * table_(i, n_cols_);
        return v;
    }

    /// Runs Bland-rule pivots until optimal. `allow_artificial` false bars
    /// artificial columns from entering.
    Status optimize(bool allow_artificial, long& iterations, long max_iterations) {
        const int limit = allow_artificial ? n_cols_ : art_begin_;
        while (true) {
            int enter = -1;
            for (int j = 0; j < limit; ++j) {
                if (reduced_[j] < -tol_) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return Status::Optimal;
            int leave = -1;
            double best_ratio = 0.0;
            for (int i = 0; i < rows(); ++i) {
                const double coef = table_(i, enter);
                if (coef <= tol_) continue;
                const double ratio = table_(i, n_cols_) / coef;
                if (leave < 0 || ratio < best_ratio - 1e-12 ||
                    (std::abs(ratio - best_ratio) <= 1e-12 &&
                     basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return Status::Unbounded;
            pivot(leave, enter);
            if (++iterations >= max_iterations) return Status::IterationLimit;
        }
    }

    /// Pivots zero-level artificials out of the basis; drops rows that are
    /// linear combinations of the others.
    void purge_artificials() {
        for (int i = 0; i < rows();) {
            if (!is_artificial(basis_[static_cast<std::size_t>(i)])) {
                ++i;
                continue;
            }
            int col = -1;
            for (int j = 0; j < art_begin_; ++j) {
                if (std::abs(table_(i, j)) > tol_) {
                    col = j;
                    break;
                }
            }
            if (col >= 0) {
                pivot(i, col);
                ++i;
            } else {
                remove_row(i);
            }
        }
    }

    Vector primal() const {
        Vector x = Vector::Zero(n_orig_);
        for (int i = 0; i < rows(); ++i) {
            const int b = basis_[static_cast<std::size_t>(i)];
            if (b < n_orig_) x[b] = std::max(0.0, table_(i, n_cols_));
        }
        return x;
    }

    int n_cols() const { return n_cols_; }
    int n_orig() const { return n_orig_; }

private:
    static Sense normalized_sense(const Constraint& c) {
        if (c.rhs >= 0.0 || c.sense == Sense::Equal) return c.sense;
        return c.sense == Sense::LessEqual ? Sense::GreaterEqual : Sense::LessEqual;
    }

    void pivot(int row, int col) {
        table_.row(row) /= table_(row, col);
        for (int i = 0; i < rows(); ++i) {
            if (i == row) continue;
            const double f = table_(i, col);
            if (f != 0.0) table_.row(i) -= f * table_.row(row);
        }
        const double rf = reduced_[col];
        if (rf != 0.0) reduced_ -= rf * table_.row(row).head(n_cols_).transpose();
        basis_[static_cast<std::size_t>(row)] = col;
    }

    void remove_row(int row) {
        const int m = rows();
        Matrix next(m - 1, table_.cols());
        next.topRows(row) = table_.topRows(row);
        next.bottomRows(m - 1 - row) = table_.bottomRows(m - 1 - row);
        table_ = std::move(next);
        basis_.erase(basis_.begin() + row);
    }

    double tol_;
    int n_orig_ = 0;
    int art_begin_ = 0;
    int n_cols_ = 0;
    Matrix table_;
    std::vector<int> basis_;
    Vector costs_;
    Vector reduced_;
};

} // namespace

Solution solve(const LinearProgram& program, const Options& options) {
    Tableau tableau(program, options.tolerance);
    Solution sol;
    if (tableau.has_artificials()) {
        Vector phase_one = Vector::Zero(tableau.n_cols());
        for (int j = 0; j < tableau.n_cols(); ++j)
            if (tableau.is_artificial(j)) phase_one[j] = 1.0;
        tableau.set_objective(phase_one);
        sol.status = tableau.optimize(true, sol.iterations, options.max_iterations);
        if (sol.status == Status::IterationLimit) return sol;
        double scale = 1.0;
        for (const auto& c : program.constraints) scale = std::max(scale, std::abs(c.rhs));
        if (tableau.objective_value() > options.tolerance * scale * 10.0) {
            sol.status = Status::Infeasible;
            return sol;
        }
        tableau.purge_artificials();
    }
    Vector costs = Vector::Zero(tableau.n_cols());
    costs.head(tableau.n_orig()) = program.objective;
    tableau.set_objective(costs);
    sol.status = tableau.optimize(false, sol.iterations, options.max_iterations);
    sol.x = tableau.primal();
    sol.objective = program.objective.dot(sol.x);
    return sol;
}

} // namespace imlab::lp
