#pragma once

#include "imlab/types.hpp"

#include <vector>

namespace imlab::lp {

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Constraint {
    Vector coefficients;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

/// minimize objective . x  subject to the constraints and x >= 0.
struct LinearProgram {
    Vector objective;
    std::vector<Constraint> constraints;

    int n_vars() const noexcept { return static_cast<int>(objective.size()); }
    void add(Vector coefficients, Sense sense, double rhs) {
        constraints.push_back({std::move(coefficients), sense, rhs});
    }
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(Status status);

struct Solution {
    Status status = Status::IterationLimit;
    Vector x;
    double objective = 0.0;
    long iterations = 0;
};

struct Options {
    double tolerance = 1e-9;
    long max_iterations = 200000;
};

/// Dense two-phase tableau simplex with Bland's anti-cycling rule.
/// Redundant equality rows are detected after phase one and dropped.
Solution solve(const LinearProgram& program, const Options& options = {});

} // namespace imlab::lp
