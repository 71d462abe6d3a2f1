#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "pcnap/rational.hpp"

namespace pcnap {

struct LinearTerm {
    int var;
    Rational coef;
};

// Row reads sum(coef * x[var]) >= rhs.
struct Constraint {
    std::string name;
    std::vector<LinearTerm> terms;
    Rational rhs;
};

enum class Sense { minimize, maximize };

// All variables are bounded below by 0.
class LPProblem {
public:
    std::string name = "LP";
    Sense sense = Sense::minimize;

    int add_variable(std::string var_name, Rational cost = 0);
    // Merges repeated variables and drops zero coefficients.
    void add_constraint(std::string row_name, std::vector<LinearTerm> terms, Rational rhs);

    int num_variables() const { return static_cast<int>(names_.size()); }
    int num_constraints() const { return static_cast<int>(rows_.size()); }
    const std::string& variable_name(int v) const { return names_[static_cast<size_t>(v)]; }
    const Rational& cost(int v) const { return costs_[static_cast<size_t>(v)]; }
    const std::vector<Rational>& costs() const { return costs_; }
    const std::vector<Constraint>& constraints() const { return rows_; }
    std::optional<int> find_variable(const std::string& var_name) const;
    int count_rows_with_prefix(const std::string& prefix) const;

private:
    std::vector<std::string> names_;
    std::vector<Rational> costs_;
    std::vector<Constraint> rows_;
    std::unordered_map<std::string, int> index_;
};

enum class LPStatus { optimal, infeasible, unbounded };
std::string to_string(LPStatus s);

struct LPSolution {
    LPStatus status = LPStatus::infeasible;
    Rational objective_value = 0;
    std::vector<Rational> values;
    bool exact = true;
    std::string method;

    const Rational& value(int var) const { return values[static_cast<size_t>(var)]; }
};

struct SolveOptions {
    bool float_mode = false;
    double eps = 1e-9;
    // Skip presolve and the floating point phase; exact Bland simplex only.
    bool reference = false;
};

LPSolution solve(const LPProblem& p, const SolveOptions& opts = {});
LPSolution solve_reference(const LPProblem& p);

Rational evaluate_objective(const LPProblem& p, const std::vector<Rational>& x);
bool is_feasible(const LPProblem& p, const std::vector<Rational>& x);

// Sparse text form with NAME, ROWS, COLUMNS, RHS and ENDATA sections.
void write_lp_dump(const LPProblem& p, std::ostream& os);

}  // namespace pcnap
