#include "prophet/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace prophet {

void LinearProgramSpec::validate() const
{
    const std::size_t n = num_vars();
    if (!variable_names.empty() && variable_names.size() != n)
        throw std::invalid_argument("LinearProgramSpec: variable name count mismatch");
    if (row_senses.size() != rows.size() || rhs.size() != rows.size())
        throw std::invalid_argument("LinearProgramSpec: row metadata count mismatch");
    for (const auto& row : rows)
        if (row.size() != n)
            throw std::invalid_argument("LinearProgramSpec: row width mismatch");
    auto finite = [](double x) { return std::isfinite(x); };
    if (!std::all_of(objective.begin(), objective.end(), finite) ||
        !std::all_of(rhs.begin(), rhs.end(), finite))
        throw std::invalid_argument("LinearProgramSpec: non-finite data");
    for (const auto& row : rows)
        if (!std::all_of(row.begin(), row.end(), finite))
            throw std::invalid_argument("LinearProgramSpec: non-finite data");
}

std::string to_string(LpStatus status)
{
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::Failed: return "failed";
    }
    return "unknown";
}

namespace {

constexpr double kPivotEps = 1e-9;

// Dense simplex tableau over the working columns. Maintains the reduced-cost
// row of the current phase by elimination.
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : cols_(cols)
    {
        a_.assign(rows, std::vector<double>(cols, 0.0));
        b_.assign(rows, 0.0);
        basis_.assign(rows, 0);
    }

    std::size_t rows() const { return a_.size(); }
    std::size_t cols() const { return cols_; }
    std::vector<double>& row(std::size_t i) { return a_[i]; }
    double& rhs(std::size_t i) { return b_[i]; }
    double rhs(std::size_t i) const { return b_[i]; }
    std::size_t basis(std::size_t i) const { return basis_[i]; }
    void set_basis(std::size_t i, std::size_t col) { basis_[i] = col; }

    void price_out(const std::vector<double>& cost)
    {
        rc_ = cost;
        for (std::size_t i = 0; i < rows(); ++i) {
            const double cb = cost[basis_[i]];
            if (cb == 0.0) continue;
            const auto& ai = a_[i];
            for (std::size_t j = 0; j < cols_; ++j) rc_[j] -= cb * ai[j];
        }
    }

    double reduced_cost(std::size_t j) const { return rc_[j]; }

    void pivot(std::size_t r, std::size_t c)
    {
        auto& pr = a_[r];
        const double piv = pr[c];
        for (double& x : pr) x /= piv;
        b_[r] /= piv;
        pr[c] = 1.0;  // exact

        for (std::size_t i = 0; i < rows(); ++i) {
            if (i == r) continue;
            const double factor = a_[i][c];
            if (factor == 0.0) continue;
            auto& ai = a_[i];
            for (std::size_t j = 0; j < cols_; ++j) ai[j] -= factor * pr[j];
            ai[c] = 0.0;  // exact
            b_[i] -= factor * b_[r];
        }
        const double factor = rc_[c];
        if (factor != 0.0) {
            for (std::size_t j = 0; j < cols_; ++j) rc_[j] -= factor * pr[j];
            rc_[c] = 0.0;
        }
        basis_[r] = c;
    }

    void drop_row(std::size_t r)
    {
        a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
        b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    }

private:
    std::size_t cols_;
    std::vector<std::vector<double>> a_;
    std::vector<double> b_;
    std::vector<std::size_t> basis_;
    std::vector<double> rc_;
};

enum class IterateResult { Optimal, Unbounded, IterationLimit };

// Minimizes the priced-out cost row. Bland's rule: entering = lowest-index
// column with negative reduced cost; leaving = lowest basis index among the
// minimum-ratio rows.
IterateResult iterate(Tableau& t, const std::vector<bool>& banned, long& iterations,
                      long iteration_cap)
{
    while (true) {
        std::size_t entering = t.cols();
        for (std::size_t j = 0; j < t.cols(); ++j) {
            if (banned[j]) continue;
            if (t.reduced_cost(j) < -kPivotEps) {
                entering = j;
                break;
            }
        }
        if (entering == t.cols()) return IterateResult::Optimal;

        std::size_t leaving = t.rows();
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < t.rows(); ++i) {
            const double aij = t.row(i)[entering];
            if (aij <= kPivotEps) continue;
            const double ratio = t.rhs(i) / aij;
            if (leaving == t.rows() || ratio < best_ratio ||
                (ratio == best_ratio && t.basis(i) < t.basis(leaving))) {
                leaving = i;
                best_ratio = ratio;
            }
        }
        if (leaving == t.rows()) return IterateResult::Unbounded;

        t.pivot(leaving, entering);
        if (++iterations > iteration_cap) return IterateResult::IterationLimit;
    }
}

double residual_against(const LinearProgramSpec& spec, const std::vector<double>& x)
{
    double worst = 0.0;
    for (double v : x) worst = std::max(worst, -v);
    for (std::size_t i = 0; i < spec.num_rows(); ++i) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < spec.num_vars(); ++j) lhs += spec.rows[i][j] * x[j];
        const double gap = lhs - spec.rhs[i];
        switch (spec.row_senses[i]) {
            case RowSense::LessEqual: worst = std::max(worst, gap); break;
            case RowSense::GreaterEqual: worst = std::max(worst, -gap); break;
            case RowSense::Equal: worst = std::max(worst, std::abs(gap)); break;
        }
    }
    return worst;
}

}  // namespace

LpSolution solve_lp(const LinearProgramSpec& spec)
{
    spec.validate();
    const std::size_t n = spec.num_vars();
    const std::size_t m = spec.num_rows();

    // Normalized working rows: b >= 0, and >=-rows with zero rhs flipped to
    // <= so they start with a basic slack instead of an artificial.
    std::vector<std::vector<double>> work(m);
    std::vector<double> b(m);
    std::vector<RowSense> sense(m);
    for (std::size_t i = 0; i < m; ++i) {
        work[i] = spec.rows[i];
        b[i] = spec.rhs[i];
        sense[i] = spec.row_senses[i];
        const bool flip = b[i] < 0.0 || (b[i] == 0.0 && sense[i] == RowSense::GreaterEqual);
        if (flip) {
            for (double& x : work[i]) x = -x;
            b[i] = -b[i];
            if (sense[i] == RowSense::LessEqual)
                sense[i] = RowSense::GreaterEqual;
            else if (sense[i] == RowSense::GreaterEqual)
                sense[i] = RowSense::LessEqual;
        }
    }

    std::size_t extras = 0;  // slack + surplus columns
    std::size_t num_artificials = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (sense[i] != RowSense::Equal) ++extras;
        if (sense[i] != RowSense::LessEqual) ++num_artificials;
    }
    const std::size_t art_begin = n + extras;
    const std::size_t total = art_begin + num_artificials;

    Tableau t(m, total);
    {
        std::size_t next_extra = n;
        std::size_t next_art = art_begin;
        for (std::size_t i = 0; i < m; ++i) {
            auto& row = t.row(i);
            std::copy(work[i].begin(), work[i].end(), row.begin());
            t.rhs(i) = b[i];
            switch (sense[i]) {
                case RowSense::LessEqual:
                    row[next_extra] = 1.0;
                    t.set_basis(i, next_extra++);
                    break;
                case RowSense::GreaterEqual:
                    row[next_extra++] = -1.0;
                    row[next_art] = 1.0;
                    t.set_basis(i, next_art++);
                    break;
                case RowSense::Equal:
                    row[next_art] = 1.0;
                    t.set_basis(i, next_art++);
                    break;
            }
        }
    }

    double scale = 1.0;
    for (double v : spec.rhs) scale = std::max(scale, std::abs(v));
    const double feas_tol = 1e-9 * scale;
    const long iteration_cap = 20000 + 50L * static_cast<long>(m + total);

    LpSolution sol;
    auto fail = [&](std::string message) {
        sol.status = LpStatus::Failed;
        sol.message = std::move(message);
        return sol;
    };

    // Phase 1: minimize the artificial total.
    if (num_artificials > 0) {
        std::vector<double> phase1_cost(total, 0.0);
        for (std::size_t j = art_begin; j < total; ++j) phase1_cost[j] = 1.0;
        t.price_out(phase1_cost);
        std::vector<bool> banned(total, false);
        const IterateResult r = iterate(t, banned, sol.iterations, iteration_cap);
        if (r == IterateResult::IterationLimit) return fail("phase 1 hit the iteration cap");
        if (r == IterateResult::Unbounded) return fail("phase 1 reported unbounded");

        double infeasibility = 0.0;
        for (std::size_t i = 0; i < t.rows(); ++i)
            if (t.basis(i) >= art_begin) infeasibility += std::abs(t.rhs(i));
        if (infeasibility > feas_tol) {
            sol.status = LpStatus::Infeasible;
            sol.message = "phase 1 optimum " + std::to_string(infeasibility);
            return sol;
        }

        // Drive leftover zero-valued artificials out of the basis; a row with
        // no real pivot candidate is redundant and gets dropped.
        for (std::size_t i = t.rows(); i-- > 0;) {
            if (t.basis(i) < art_begin) continue;
            std::size_t c = art_begin;
            for (std::size_t j = 0; j < art_begin; ++j) {
                if (std::abs(t.row(i)[j]) > kPivotEps) {
                    c = j;
                    break;
                }
            }
            if (c == art_begin)
                t.drop_row(i);
            else
                t.pivot(i, c);
        }
    }

    // Phase 2: the real objective, artificial columns banned.
    std::vector<double> phase2_cost(total, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        phase2_cost[j] =
            spec.sense == ObjectiveSense::Maximize ? -spec.objective[j] : spec.objective[j];
    t.price_out(phase2_cost);
    std::vector<bool> banned(total, false);
    for (std::size_t j = art_begin; j < total; ++j) banned[j] = true;
    const IterateResult r = iterate(t, banned, sol.iterations, iteration_cap);
    if (r == IterateResult::IterationLimit) return fail("phase 2 hit the iteration cap");
    if (r == IterateResult::Unbounded) {
        sol.status = LpStatus::Unbounded;
        sol.message = "objective improves along a feasible ray";
        return sol;
    }

    sol.values.assign(n, 0.0);
    for (std::size_t i = 0; i < t.rows(); ++i)
        if (t.basis(i) < n) sol.values[t.basis(i)] = t.rhs(i);
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.objective += spec.objective[j] * sol.values[j];
    sol.max_violation = residual_against(spec, sol.values);
    if (sol.max_violation > feas_tol)
        return fail("residual " + std::to_string(sol.max_violation) + " exceeds tolerance");
    sol.status = LpStatus::Optimal;
    return sol;
}

namespace {

void append_number(std::string& out, double x)
{
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    out += buffer;
}

void append_terms(std::string& out, const std::vector<double>& coefs,
                  const std::vector<std::string>& names)
{
    bool first = true;
    for (std::size_t j = 0; j < coefs.size(); ++j) {
        const double c = coefs[j];
        if (c == 0.0) continue;
        if (first) {
            if (c < 0.0) out += "- ";
            first = false;
        } else {
            out += c < 0.0 ? " - " : " + ";
        }
        append_number(out, std::abs(c));
        out += " " + names[j];
    }
    if (first) out += "0 " + names.front();
}

}  // namespace

std::string write_lp_format(const LinearProgramSpec& spec)
{
    spec.validate();
    std::vector<std::string> names = spec.variable_names;
    if (names.empty()) {
        names.reserve(spec.num_vars());
        for (std::size_t j = 0; j < spec.num_vars(); ++j) names.push_back("x" + std::to_string(j));
    }

    std::string out = spec.sense == ObjectiveSense::Maximize ? "Maximize\n" : "Minimize\n";
    out += " obj: ";
    append_terms(out, spec.objective, names);
    out += "\nSubject To\n";
    for (std::size_t i = 0; i < spec.num_rows(); ++i) {
        out += " c" + std::to_string(i) + ": ";
        append_terms(out, spec.rows[i], names);
        switch (spec.row_senses[i]) {
            case RowSense::LessEqual: out += " <= "; break;
            case RowSense::GreaterEqual: out += " >= "; break;
            case RowSense::Equal: out += " = "; break;
        }
        append_number(out, spec.rhs[i]);
        out += "\n";
    }
    out += "End\n";
    return out;
}

}  // namespace prophet
