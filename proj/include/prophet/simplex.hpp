#pragma once

#include <limits>
#include <string>
#include <vector>

namespace prophet {

enum class ObjectiveSense { Maximize, Minimize };
enum class RowSense { LessEqual, GreaterEqual, Equal };

// Dense LP in the form  opt c'x  s.t.  Ax {<=,>=,=} b,  x >= 0.
// All variables are implicitly lower-bounded at zero.
struct LinearProgramSpec {
    ObjectiveSense sense = ObjectiveSense::Maximize;
    std::vector<double> objective;
    std::vector<std::string> variable_names;
    std::vector<std::vector<double>> rows;
    std::vector<RowSense> row_senses;
    std::vector<double> rhs;

    std::size_t num_vars() const { return objective.size(); }
    std::size_t num_rows() const { return rows.size(); }

    // throws std::invalid_argument on dimension mismatch or non-finite data
    void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, Failed };

std::string to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::Failed;
    double objective = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> values;  // one per spec variable
    // worst residual of the returned point against the original rows; a
    // solution is reported Optimal only if this passes the solver tolerance
    double max_violation = std::numeric_limits<double>::quiet_NaN();
    long iterations = 0;
    std::string message;
};

// Two-phase dense-tableau simplex with Bland's anti-cycling rule. Degenerate
// pivots are expected (many constraints are tight at the optimum); Bland
// guarantees termination anyway. Numerical trouble is reported as Failed,
// never as a bogus Optimal.
LpSolution solve_lp(const LinearProgramSpec& spec);

// Human-readable LP text format (CPLEX dialect) for cross-checking against
// external solvers.
std::string write_lp_format(const LinearProgramSpec& spec);

}  // namespace prophet
