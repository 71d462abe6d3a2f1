#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "pcnap/lp.hpp"

namespace pcnap {

int LPProblem::add_variable(std::string var_name, Rational cost) {
    if (index_.count(var_name)) fail(ErrorKind::invariant, "duplicate LP variable " + var_name);
    int id = num_variables();
    index_.emplace(var_name, id);
    names_.push_back(std::move(var_name));
    costs_.push_back(std::move(cost));
    return id;
}

void LPProblem::add_constraint(std::string row_name, std::vector<LinearTerm> terms, Rational rhs) {
    std::sort(terms.begin(), terms.end(), [](const LinearTerm& a, const LinearTerm& b) { return a.var < b.var; });
    std::vector<LinearTerm> merged;
    for (auto& t : terms) {
        if (t.var < 0 || t.var >= num_variables()) fail(ErrorKind::invariant, "constraint uses unknown variable");
        if (!merged.empty() && merged.back().var == t.var)
            merged.back().coef += t.coef;
        else
            merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const LinearTerm& t) { return t.coef == 0; });
    rows_.push_back(Constraint{std::move(row_name), std::move(merged), std::move(rhs)});
}

std::optional<int> LPProblem::find_variable(const std::string& var_name) const {
    auto it = index_.find(var_name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int LPProblem::count_rows_with_prefix(const std::string& prefix) const {
    int c = 0;
    for (const auto& r : rows_)
        if (r.name.rfind(prefix, 0) == 0) ++c;
    return c;
}

std::string to_string(LPStatus s) {
    switch (s) {
        case LPStatus::optimal: return "optimal";
        case LPStatus::infeasible: return "infeasible";
        case LPStatus::unbounded: return "unbounded";
    }
    return "unknown";
}

Rational evaluate_objective(const LPProblem& p, const std::vector<Rational>& x) {
    Rational v = 0;
    for (int j = 0; j < p.num_variables(); ++j)
        if (p.cost(j) != 0) v += p.cost(j) * x[static_cast<size_t>(j)];
    return v;
}

bool is_feasible(const LPProblem& p, const std::vector<Rational>& x) {
    for (const auto& xi : x)
        if (xi < 0) return false;
    for (const auto& row : p.constraints()) {
        Rational lhs = 0;
        for (const auto& t : row.terms) lhs += t.coef * x[static_cast<size_t>(t.var)];
        if (lhs < row.rhs) return false;
    }
    return true;
}

void write_lp_dump(const LPProblem& p, std::ostream& os) {
    os << "NAME " << p.name << '\n';
    os << "OBJSENSE " << (p.sense == Sense::minimize ? "MIN" : "MAX") << '\n';
    os << "ROWS\n N obj\n";
    for (const auto& r : p.constraints()) os << " G " << r.name << '\n';
    std::vector<std::vector<std::pair<std::string, Rational>>> cols(static_cast<size_t>(p.num_variables()));
    for (const auto& r : p.constraints())
        for (const auto& t : r.terms) cols[static_cast<size_t>(t.var)].emplace_back(r.name, t.coef);
    os << "COLUMNS\n";
    for (int j = 0; j < p.num_variables(); ++j) {
        const auto& nm = p.variable_name(j);
        if (p.cost(j) != 0 || cols[static_cast<size_t>(j)].empty())
            os << "    " << nm << " obj " << to_string(p.cost(j)) << '\n';
        for (const auto& [row, c] : cols[static_cast<size_t>(j)]) os << "    " << nm << ' ' << row << ' ' << to_string(c) << '\n';
    }
    os << "RHS\n";
    for (const auto& r : p.constraints())
        if (r.rhs != 0) os << "    rhs " << r.name << ' ' << to_string(r.rhs) << '\n';
    os << "ENDATA\n";
}

namespace {

using Terms = std::vector<std::pair<int, Rational>>;

struct Row {
    Terms terms;
    Rational rhs;
};

// minimize cost.x subject to rows, x >= 0.
struct StdLP {
    int n = 0;
    std::vector<Rational> cost;
    std::vector<Row> rows;
};

struct Presolved {
    StdLP lp;
    std::vector<int> column;  // reduced index -> original variable
    struct Freed {
        int var;
        std::vector<Row> rows;
    };
    std::vector<Freed> freed;
    bool infeasible = false;
    bool maybe_unbounded = false;
};

StdLP standard_form(const LPProblem& p) {
    StdLP s;
    s.n = p.num_variables();
    s.cost = p.costs();
    if (p.sense == Sense::maximize)
        for (auto& c : s.cost) c = -c;
    for (const auto& r : p.constraints()) {
        Row row;
        for (const auto& t : r.terms) row.terms.emplace_back(t.var, t.coef);
        row.rhs = r.rhs;
        s.rows.push_back(std::move(row));
    }
    return s;
}

struct Bits {
    std::vector<std::uint64_t> w;
    explicit Bits(int n = 0) : w(static_cast<size_t>((n + 63) / 64), 0) {}
    void set(int i) { w[static_cast<size_t>(i >> 6)] |= std::uint64_t{1} << (i & 63); }
    bool subset_of(const Bits& o) const {
        for (size_t i = 0; i < w.size(); ++i)
            if (w[i] & ~o.w[i]) return false;
        return true;
    }
};

// Coefficient of var in a sorted row, zero when absent.
const Rational* find_coef(const Terms& t, int var) {
    auto it = std::lower_bound(t.begin(), t.end(), var, [](const auto& e, int v) { return e.first < v; });
    return it != t.end() && it->first == var ? &it->second : nullptr;
}

// Rows implied by another row under x >= 0 are dropped.
void drop_dominated(std::vector<Row>& rows, std::vector<bool>& alive, int n) {
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
        if (alive[static_cast<size_t>(i)]) ids.push_back(i);
    if (ids.size() > 8000) return;
    std::vector<Bits> pos(rows.size(), Bits(0)), neg(rows.size(), Bits(0));
    std::vector<int> npos(rows.size(), 0), nneg(rows.size(), 0);
    for (int i : ids) {
        pos[static_cast<size_t>(i)] = Bits(n);
        neg[static_cast<size_t>(i)] = Bits(n);
        for (const auto& [v, c] : rows[static_cast<size_t>(i)].terms) {
            if (c > 0) {
                pos[static_cast<size_t>(i)].set(v);
                ++npos[static_cast<size_t>(i)];
            } else {
                neg[static_cast<size_t>(i)].set(v);
                ++nneg[static_cast<size_t>(i)];
            }
        }
    }
    std::vector<bool> dominated(rows.size(), false);
    for (int r : ids) {
        const auto& rr = rows[static_cast<size_t>(r)];
        for (int s : ids) {
            if (s == r) continue;
            const auto& rs = rows[static_cast<size_t>(s)];
            if (npos[static_cast<size_t>(s)] > npos[static_cast<size_t>(r)] ||
                nneg[static_cast<size_t>(s)] < nneg[static_cast<size_t>(r)])
                continue;
            if (rs.rhs < rr.rhs) continue;
            if (!pos[static_cast<size_t>(s)].subset_of(pos[static_cast<size_t>(r)])) continue;
            if (!neg[static_cast<size_t>(r)].subset_of(neg[static_cast<size_t>(s)])) continue;
            bool ok = true;
            for (const auto& [v, c] : rs.terms) {
                if (c <= 0) continue;
                if (*find_coef(rr.terms, v) < c) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                for (const auto& [v, c] : rr.terms) {
                    if (c >= 0) continue;
                    if (*find_coef(rs.terms, v) > c) {
                        ok = false;
                        break;
                    }
                }
            if (ok) {
                dominated[static_cast<size_t>(r)] = true;
                break;
            }
        }
    }
    for (int r : ids)
        if (dominated[static_cast<size_t>(r)]) alive[static_cast<size_t>(r)] = false;
}

Presolved presolve(const StdLP& src) {
    Presolved out;
    int n = src.n;
    std::vector<Row> rows = src.rows;
    std::vector<bool> alive(rows.size(), true);
    std::vector<bool> removed(static_cast<size_t>(n), false);

    bool changed = true;
    while (changed && !out.infeasible) {
        changed = false;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (!alive[i]) continue;
            bool nonneg = std::all_of(rows[i].terms.begin(), rows[i].terms.end(),
                                      [](const auto& t) { return t.second > 0; });
            if (nonneg && rows[i].rhs <= 0) {
                alive[i] = false;
                changed = true;
            } else if (rows[i].terms.empty()) {
                out.infeasible = true;
            }
        }
        if (out.infeasible) break;

        // A zero-cost column with no negative entry satisfies all its rows.
        std::vector<std::vector<int>> pos_rows(static_cast<size_t>(n));
        std::vector<bool> has_neg(static_cast<size_t>(n), false);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (!alive[i]) continue;
            for (const auto& [v, c] : rows[i].terms) {
                if (c > 0)
                    pos_rows[static_cast<size_t>(v)].push_back(static_cast<int>(i));
                else
                    has_neg[static_cast<size_t>(v)] = true;
            }
        }
        for (int v = 0; v < n; ++v) {
            if (removed[static_cast<size_t>(v)] || has_neg[static_cast<size_t>(v)] ||
                src.cost[static_cast<size_t>(v)] != 0)
                continue;
            Presolved::Freed fr{v, {}};
            for (int r : pos_rows[static_cast<size_t>(v)])
                if (alive[static_cast<size_t>(r)]) {
                    fr.rows.push_back(rows[static_cast<size_t>(r)]);
                    alive[static_cast<size_t>(r)] = false;
                }
            if (fr.rows.empty()) continue;
            removed[static_cast<size_t>(v)] = true;
            out.freed.push_back(std::move(fr));
            changed = true;
        }

        std::map<Terms, size_t> seen;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (!alive[i]) continue;
            auto [it, fresh] = seen.emplace(rows[i].terms, i);
            if (!fresh) {
                size_t keep = it->second;
                if (rows[i].rhs > rows[keep].rhs) rows[keep].rhs = rows[i].rhs;
                alive[i] = false;
                changed = true;
            }
        }

        size_t before = static_cast<size_t>(std::count(alive.begin(), alive.end(), true));
        drop_dominated(rows, alive, n);
        if (static_cast<size_t>(std::count(alive.begin(), alive.end(), true)) != before) changed = true;
    }

    std::vector<int> reduced(static_cast<size_t>(n), -1);
    std::vector<bool> used(static_cast<size_t>(n), false), negative(static_cast<size_t>(n), false);
    for (size_t i = 0; i < rows.size(); ++i)
        if (alive[i])
            for (const auto& t : rows[i].terms) {
                used[static_cast<size_t>(t.first)] = true;
                if (t.second < 0) negative[static_cast<size_t>(t.first)] = true;
            }
    for (int v = 0; v < n; ++v) {
        if (removed[static_cast<size_t>(v)]) continue;
        // Raising such a column never breaks feasibility.
        if (src.cost[static_cast<size_t>(v)] < 0 && !negative[static_cast<size_t>(v)]) out.maybe_unbounded = true;
        if (!used[static_cast<size_t>(v)]) continue;
        reduced[static_cast<size_t>(v)] = static_cast<int>(out.column.size());
        out.column.push_back(v);
        out.lp.cost.push_back(src.cost[static_cast<size_t>(v)]);
    }
    out.lp.n = static_cast<int>(out.column.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        if (!alive[i]) continue;
        Row r;
        r.rhs = rows[i].rhs;
        for (const auto& [v, c] : rows[i].terms) r.terms.emplace_back(reduced[static_cast<size_t>(v)], c);
        out.lp.rows.push_back(std::move(r));
    }
    return out;
}

std::vector<Rational> postsolve(const Presolved& pre, int n, const std::vector<Rational>& reduced_x) {
    std::vector<Rational> x(static_cast<size_t>(n), Rational(0));
    for (size_t j = 0; j < pre.column.size(); ++j) x[static_cast<size_t>(pre.column[j])] = reduced_x[j];
    for (auto it = pre.freed.rbegin(); it != pre.freed.rend(); ++it) {
        Rational best = 0;
        for (const auto& row : it->rows) {
            Rational rest = row.rhs;
            const Rational* own = nullptr;
            for (const auto& [v, c] : row.terms) {
                if (v == it->var)
                    own = &c;
                else
                    rest -= c * x[static_cast<size_t>(v)];
            }
            Rational need = rest / *own;
            if (need > best) best = need;
        }
        x[static_cast<size_t>(it->var)] = best;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Tableau shared by the float and exact solvers.

template <typename T>
struct Tableau {
    int m = 0;
    int n = 0;       // structural columns
    int total = 0;   // structural + surplus + artificial
    std::vector<std::vector<T>> a;  // m rows, total + 1 entries (last is rhs)
    std::vector<int> basis;
    std::vector<bool> artificial;
};

template <typename T, typename Conv>
Tableau<T> make_tableau(const StdLP& lp, Conv conv) {
    Tableau<T> tab;
    tab.m = static_cast<int>(lp.rows.size());
    tab.n = lp.n;
    int arts = 0;
    for (const auto& r : lp.rows)
        if (r.rhs > 0) ++arts;
    tab.total = tab.n + tab.m + arts;
    tab.artificial.assign(static_cast<size_t>(tab.total), false);
    tab.a.assign(static_cast<size_t>(tab.m), std::vector<T>(static_cast<size_t>(tab.total + 1), conv(Rational(0))));
    tab.basis.assign(static_cast<size_t>(tab.m), -1);
    int next_art = tab.n + tab.m;
    for (int i = 0; i < tab.m; ++i) {
        const auto& r = lp.rows[static_cast<size_t>(i)];
        auto& row = tab.a[static_cast<size_t>(i)];
        bool flip = !(r.rhs > 0);
        for (const auto& [v, c] : r.terms) row[static_cast<size_t>(v)] = conv(flip ? Rational(-c) : c);
        row[static_cast<size_t>(tab.n + i)] = conv(Rational(flip ? 1 : -1));
        row[static_cast<size_t>(tab.total)] = conv(flip ? Rational(-r.rhs) : r.rhs);
        if (flip) {
            tab.basis[static_cast<size_t>(i)] = tab.n + i;
        } else {
            row[static_cast<size_t>(next_art)] = conv(Rational(1));
            tab.artificial[static_cast<size_t>(next_art)] = true;
            tab.basis[static_cast<size_t>(i)] = next_art++;
        }
    }
    return tab;
}

// ---------------------------------------------------------------------------
// Floating point two-phase simplex.

struct FloatOutcome {
    LPStatus status = LPStatus::infeasible;
    bool ok = false;  // false when the iteration limit or a numerical failure stopped it
    std::vector<double> x;
    std::vector<double> y;
    std::vector<int> basis;
    int n = 0;
    int m = 0;
};

class FloatSimplex {
public:
    FloatSimplex(const StdLP& lp, double tol) : lp_(lp), tol_(tol) {
        tab_ = make_tableau<double>(lp, [](const Rational& q) { return q.get_d(); });
    }

    FloatOutcome run() {
        FloatOutcome out;
        out.n = tab_.n;
        out.m = tab_.m;
        std::vector<double> phase1(static_cast<size_t>(tab_.total), 0.0);
        for (int j = 0; j < tab_.total; ++j)
            if (tab_.artificial[static_cast<size_t>(j)]) phase1[static_cast<size_t>(j)] = 1.0;
        auto r1 = optimize(phase1, true);
        if (r1 != Result::optimal) return out;
        double infeas = 0;
        for (int i = 0; i < tab_.m; ++i)
            if (tab_.artificial[static_cast<size_t>(tab_.basis[static_cast<size_t>(i)])])
                infeas += tab_.a[static_cast<size_t>(i)][static_cast<size_t>(tab_.total)];
        if (infeas > 1e-7) {
            out.ok = true;
            out.status = LPStatus::infeasible;
            return out;
        }
        for (int i = 0; i < tab_.m; ++i) {
            if (!tab_.artificial[static_cast<size_t>(tab_.basis[static_cast<size_t>(i)])]) continue;
            for (int j = 0; j < tab_.n + tab_.m; ++j)
                if (std::fabs(tab_.a[static_cast<size_t>(i)][static_cast<size_t>(j)]) > 1e-7) {
                    pivot(i, j);
                    break;
                }
        }
        std::vector<double> phase2(static_cast<size_t>(tab_.total), 0.0);
        for (int j = 0; j < tab_.n; ++j) phase2[static_cast<size_t>(j)] = lp_.cost[static_cast<size_t>(j)].get_d();
        auto r2 = optimize(phase2, false);
        if (r2 == Result::unbounded) {
            out.ok = true;
            out.status = LPStatus::unbounded;
            return out;
        }
        if (r2 != Result::optimal) return out;
        out.ok = true;
        out.status = LPStatus::optimal;
        out.x.assign(static_cast<size_t>(tab_.n), 0.0);
        for (int i = 0; i < tab_.m; ++i) {
            int b = tab_.basis[static_cast<size_t>(i)];
            if (b < tab_.n) out.x[static_cast<size_t>(b)] = tab_.a[static_cast<size_t>(i)][static_cast<size_t>(tab_.total)];
        }
        out.y.assign(static_cast<size_t>(tab_.m), 0.0);
        for (int i = 0; i < tab_.m; ++i) out.y[static_cast<size_t>(i)] = reduced_[static_cast<size_t>(tab_.n + i)];
        out.basis = tab_.basis;
        return out;
    }

private:
    enum class Result { optimal, unbounded, stalled };

    void pivot(int r, int c) {
        auto& prow = tab_.a[static_cast<size_t>(r)];
        double pv = prow[static_cast<size_t>(c)];
        for (auto& v : prow) v /= pv;
        prow[static_cast<size_t>(c)] = 1.0;
        std::vector<int> nz;
        for (int j = 0; j <= tab_.total; ++j)
            if (prow[static_cast<size_t>(j)] != 0.0) nz.push_back(j);
        for (int i = 0; i < tab_.m; ++i) {
            if (i == r) continue;
            auto& row = tab_.a[static_cast<size_t>(i)];
            double f = row[static_cast<size_t>(c)];
            if (f == 0.0) continue;
            for (int j : nz) {
                double v = row[static_cast<size_t>(j)] - f * prow[static_cast<size_t>(j)];
                row[static_cast<size_t>(j)] = std::fabs(v) < 1e-13 ? 0.0 : v;
            }
            row[static_cast<size_t>(c)] = 0.0;
        }
        if (!reduced_.empty()) {
            double f = reduced_[static_cast<size_t>(c)];
            if (f != 0.0)
                for (int j : nz) reduced_[static_cast<size_t>(j)] -= f * prow[static_cast<size_t>(j)];
            reduced_[static_cast<size_t>(c)] = 0.0;
        }
        tab_.basis[static_cast<size_t>(r)] = c;
    }

    Result optimize(const std::vector<double>& cost, bool allow_artificial) {
        reduced_.assign(static_cast<size_t>(tab_.total + 1), 0.0);
        for (int j = 0; j < tab_.total; ++j) reduced_[static_cast<size_t>(j)] = cost[static_cast<size_t>(j)];
        for (int i = 0; i < tab_.m; ++i) {
            double cb = cost[static_cast<size_t>(tab_.basis[static_cast<size_t>(i)])];
            if (cb == 0.0) continue;
            const auto& row = tab_.a[static_cast<size_t>(i)];
            for (int j = 0; j <= tab_.total; ++j) reduced_[static_cast<size_t>(j)] -= cb * row[static_cast<size_t>(j)];
        }
        int degenerate = 0;
        long limit = 50L * (tab_.m + tab_.total) + 1000;
        for (long iter = 0; iter < limit; ++iter) {
            bool bland = degenerate > 50;
            int enter = -1;
            double best = -tol_;
            for (int j = 0; j < tab_.total; ++j) {
                if (!allow_artificial && tab_.artificial[static_cast<size_t>(j)]) continue;
                double d = reduced_[static_cast<size_t>(j)];
                if (d < best) {
                    enter = j;
                    if (bland) break;
                    best = d;
                }
            }
            if (enter < 0) return Result::optimal;
            int leave = -1;
            double ratio = 0, piv = 0;
            for (int i = 0; i < tab_.m; ++i) {
                double aij = tab_.a[static_cast<size_t>(i)][static_cast<size_t>(enter)];
                if (aij <= 1e-9) continue;
                double r = tab_.a[static_cast<size_t>(i)][static_cast<size_t>(tab_.total)] / aij;
                if (leave < 0 || r < ratio - 1e-12) {
                    leave = i;
                    ratio = r;
                    piv = aij;
                } else if (r <= ratio + 1e-12) {
                    bool take = bland ? tab_.basis[static_cast<size_t>(i)] < tab_.basis[static_cast<size_t>(leave)]
                                      : aij > piv;
                    if (take) {
                        leave = i;
                        ratio = std::min(ratio, r);
                        piv = aij;
                    }
                }
            }
            if (leave < 0) return Result::unbounded;
            degenerate = ratio < 1e-12 ? degenerate + 1 : 0;
            pivot(leave, enter);
        }
        return Result::stalled;
    }

    const StdLP& lp_;
    double tol_;
    Tableau<double> tab_;
    std::vector<double> reduced_;
};

// ---------------------------------------------------------------------------
// Exact helpers.

bool primal_ok(const StdLP& lp, const std::vector<Rational>& x) {
    for (const auto& v : x)
        if (v < 0) return false;
    for (const auto& r : lp.rows) {
        Rational lhs = 0;
        for (const auto& [v, c] : r.terms) lhs += c * x[static_cast<size_t>(v)];
        if (lhs < r.rhs) return false;
    }
    return true;
}

bool dual_ok(const StdLP& lp, const std::vector<Rational>& y) {
    for (const auto& v : y)
        if (v < 0) return false;
    std::vector<Rational> col(static_cast<size_t>(lp.n), Rational(0));
    for (size_t i = 0; i < lp.rows.size(); ++i) {
        if (y[i] == 0) continue;
        for (const auto& [v, c] : lp.rows[i].terms) col[static_cast<size_t>(v)] += c * y[i];
    }
    for (int j = 0; j < lp.n; ++j)
        if (col[static_cast<size_t>(j)] > lp.cost[static_cast<size_t>(j)]) return false;
    return true;
}

bool certify(const StdLP& lp, const std::vector<Rational>& x, const std::vector<Rational>& y) {
    if (!primal_ok(lp, x) || !dual_ok(lp, y)) return false;
    Rational px = 0, dy = 0;
    for (int j = 0; j < lp.n; ++j) px += lp.cost[static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
    for (size_t i = 0; i < lp.rows.size(); ++i) dy += lp.rows[i].rhs * y[i];
    return px == dy;
}

// Any solution of M z = r, free variables at zero.
std::optional<std::vector<Rational>> solve_linear(std::vector<std::vector<Rational>> M, std::vector<Rational> r,
                                                  int cols) {
    int rows = static_cast<int>(M.size());
    std::vector<int> pivot_col;
    int row = 0;
    for (int c = 0; c < cols && row < rows; ++c) {
        int p = -1;
        for (int i = row; i < rows; ++i)
            if (M[static_cast<size_t>(i)][static_cast<size_t>(c)] != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(M[static_cast<size_t>(p)], M[static_cast<size_t>(row)]);
        std::swap(r[static_cast<size_t>(p)], r[static_cast<size_t>(row)]);
        Rational inv = 1 / M[static_cast<size_t>(row)][static_cast<size_t>(c)];
        for (int j = c; j < cols; ++j) M[static_cast<size_t>(row)][static_cast<size_t>(j)] *= inv;
        r[static_cast<size_t>(row)] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == row || M[static_cast<size_t>(i)][static_cast<size_t>(c)] == 0) continue;
            Rational f = M[static_cast<size_t>(i)][static_cast<size_t>(c)];
            for (int j = c; j < cols; ++j)
                if (M[static_cast<size_t>(row)][static_cast<size_t>(j)] != 0)
                    M[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * M[static_cast<size_t>(row)][static_cast<size_t>(j)];
            r[static_cast<size_t>(i)] -= f * r[static_cast<size_t>(row)];
        }
        pivot_col.push_back(c);
        ++row;
    }
    for (int i = row; i < rows; ++i)
        if (r[static_cast<size_t>(i)] != 0) return std::nullopt;
    std::vector<Rational> z(static_cast<size_t>(cols), Rational(0));
    for (int i = 0; i < row; ++i) z[static_cast<size_t>(pivot_col[static_cast<size_t>(i)])] = r[static_cast<size_t>(i)];
    return z;
}

// Exact primal and dual from the final float basis.
bool certify_from_basis(const StdLP& lp, const FloatOutcome& fo, std::vector<Rational>& x) {
    int n = lp.n;
    int m = static_cast<int>(lp.rows.size());
    std::vector<bool> surplus_basic(static_cast<size_t>(m), false);
    std::vector<int> S;
    for (int b : fo.basis) {
        if (b < n)
            S.push_back(b);
        else if (b < n + m)
            surplus_basic[static_cast<size_t>(b - n)] = true;
    }
    std::sort(S.begin(), S.end());
    std::vector<int> T;
    for (int i = 0; i < m; ++i)
        if (!surplus_basic[static_cast<size_t>(i)]) T.push_back(i);
    std::vector<int> col_pos(static_cast<size_t>(n), -1);
    for (size_t k = 0; k < S.size(); ++k) col_pos[static_cast<size_t>(S[k])] = static_cast<int>(k);

    std::vector<std::vector<Rational>> M(T.size(), std::vector<Rational>(S.size(), Rational(0)));
    std::vector<Rational> rhs(T.size());
    for (size_t t = 0; t < T.size(); ++t) {
        const auto& row = lp.rows[static_cast<size_t>(T[t])];
        for (const auto& [v, c] : row.terms)
            if (col_pos[static_cast<size_t>(v)] >= 0) M[t][static_cast<size_t>(col_pos[static_cast<size_t>(v)])] = c;
        rhs[t] = row.rhs;
    }
    auto xs = solve_linear(M, rhs, static_cast<int>(S.size()));
    if (!xs) return false;
    std::vector<std::vector<Rational>> Mt(S.size(), std::vector<Rational>(T.size(), Rational(0)));
    for (size_t t = 0; t < T.size(); ++t)
        for (size_t k = 0; k < S.size(); ++k) Mt[k][t] = M[t][k];
    std::vector<Rational> cs(S.size());
    for (size_t k = 0; k < S.size(); ++k) cs[k] = lp.cost[static_cast<size_t>(S[k])];
    auto yt = solve_linear(Mt, cs, static_cast<int>(T.size()));
    if (!yt) return false;
    std::vector<Rational> xx(static_cast<size_t>(n), Rational(0));
    for (size_t k = 0; k < S.size(); ++k) xx[static_cast<size_t>(S[k])] = (*xs)[k];
    std::vector<Rational> yy(static_cast<size_t>(m), Rational(0));
    for (size_t t = 0; t < T.size(); ++t) yy[static_cast<size_t>(T[t])] = (*yt)[t];
    if (!certify(lp, xx, yy)) return false;
    x = std::move(xx);
    return true;
}

bool certify_by_rounding(const StdLP& lp, const FloatOutcome& fo, std::vector<Rational>& x) {
    for (long den : {1000L, 1000000L, 1000000000L}) {
        std::vector<Rational> xx(static_cast<size_t>(lp.n)), yy(lp.rows.size());
        for (int j = 0; j < lp.n; ++j) xx[static_cast<size_t>(j)] = approximate(fo.x[static_cast<size_t>(j)], den);
        for (size_t i = 0; i < lp.rows.size(); ++i) yy[i] = approximate(fo.y[i], den);
        if (certify(lp, xx, yy)) {
            x = std::move(xx);
            return true;
        }
    }
    return false;
}

// Exact two-phase simplex with Bland's rule.
struct ExactOutcome {
    LPStatus status;
    std::vector<Rational> x;
};

ExactOutcome exact_simplex(const StdLP& lp) {
    auto tab = make_tableau<Rational>(lp, [](const Rational& q) { return q; });
    int total = tab.total;
    std::vector<Rational> d;

    auto pivot = [&](int r, int c) {
        auto& prow = tab.a[static_cast<size_t>(r)];
        Rational inv = 1 / prow[static_cast<size_t>(c)];
        std::vector<int> nz;
        for (int j = 0; j <= total; ++j)
            if (prow[static_cast<size_t>(j)] != 0) {
                prow[static_cast<size_t>(j)] *= inv;
                nz.push_back(j);
            }
        for (int i = 0; i < tab.m; ++i) {
            if (i == r) continue;
            auto& row = tab.a[static_cast<size_t>(i)];
            if (row[static_cast<size_t>(c)] == 0) continue;
            Rational f = row[static_cast<size_t>(c)];
            for (int j : nz) row[static_cast<size_t>(j)] -= f * prow[static_cast<size_t>(j)];
        }
        if (d[static_cast<size_t>(c)] != 0) {
            Rational f = d[static_cast<size_t>(c)];
            for (int j : nz) d[static_cast<size_t>(j)] -= f * prow[static_cast<size_t>(j)];
        }
        tab.basis[static_cast<size_t>(r)] = c;
    };

    auto optimize = [&](const std::vector<Rational>& cost, bool allow_art) -> LPStatus {
        d.assign(static_cast<size_t>(total + 1), Rational(0));
        for (int j = 0; j < total; ++j) d[static_cast<size_t>(j)] = cost[static_cast<size_t>(j)];
        for (int i = 0; i < tab.m; ++i) {
            const Rational& cb = cost[static_cast<size_t>(tab.basis[static_cast<size_t>(i)])];
            if (cb == 0) continue;
            for (int j = 0; j <= total; ++j)
                if (tab.a[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0)
                    d[static_cast<size_t>(j)] -= cb * tab.a[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
        while (true) {
            int enter = -1;
            for (int j = 0; j < total; ++j) {
                if (!allow_art && tab.artificial[static_cast<size_t>(j)]) continue;
                if (d[static_cast<size_t>(j)] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return LPStatus::optimal;
            int leave = -1;
            Rational ratio;
            for (int i = 0; i < tab.m; ++i) {
                const Rational& aij = tab.a[static_cast<size_t>(i)][static_cast<size_t>(enter)];
                if (aij <= 0) continue;
                Rational r = tab.a[static_cast<size_t>(i)][static_cast<size_t>(total)] / aij;
                if (leave < 0 || r < ratio ||
                    (r == ratio && tab.basis[static_cast<size_t>(i)] < tab.basis[static_cast<size_t>(leave)])) {
                    leave = i;
                    ratio = r;
                }
            }
            if (leave < 0) return LPStatus::unbounded;
            pivot(leave, enter);
        }
    };

    std::vector<Rational> phase1(static_cast<size_t>(total), Rational(0));
    for (int j = 0; j < total; ++j)
        if (tab.artificial[static_cast<size_t>(j)]) phase1[static_cast<size_t>(j)] = 1;
    optimize(phase1, true);
    for (int i = 0; i < tab.m; ++i)
        if (tab.artificial[static_cast<size_t>(tab.basis[static_cast<size_t>(i)])] &&
            tab.a[static_cast<size_t>(i)][static_cast<size_t>(total)] != 0)
            return ExactOutcome{LPStatus::infeasible, {}};
    for (int i = 0; i < tab.m; ++i) {
        if (!tab.artificial[static_cast<size_t>(tab.basis[static_cast<size_t>(i)])]) continue;
        for (int j = 0; j < tab.n + tab.m; ++j)
            if (tab.a[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0) {
                pivot(i, j);
                break;
            }
    }
    std::vector<Rational> phase2(static_cast<size_t>(total), Rational(0));
    for (int j = 0; j < tab.n; ++j) phase2[static_cast<size_t>(j)] = lp.cost[static_cast<size_t>(j)];
    LPStatus st = optimize(phase2, false);
    if (st != LPStatus::optimal) return ExactOutcome{st, {}};
    std::vector<Rational> x(static_cast<size_t>(tab.n), Rational(0));
    for (int i = 0; i < tab.m; ++i) {
        int b = tab.basis[static_cast<size_t>(i)];
        if (b < tab.n) x[static_cast<size_t>(b)] = tab.a[static_cast<size_t>(i)][static_cast<size_t>(total)];
    }
    return ExactOutcome{LPStatus::optimal, std::move(x)};
}

LPSolution finish(const LPProblem& p, LPStatus status, std::vector<Rational> x, bool exact, std::string method) {
    LPSolution sol;
    sol.status = status;
    sol.exact = exact;
    sol.method = std::move(method);
    if (status == LPStatus::optimal) {
        if (exact && !is_feasible(p, x)) fail(ErrorKind::invariant, "LP solution failed the exact feasibility check");
        sol.objective_value = evaluate_objective(p, x);
        sol.values = std::move(x);
    }
    return sol;
}

}  // namespace

LPSolution solve_reference(const LPProblem& p) {
    StdLP lp = standard_form(p);
    auto out = exact_simplex(lp);
    return finish(p, out.status, std::move(out.x), true, "exact-bland");
}

LPSolution solve(const LPProblem& p, const SolveOptions& opts) {
    if (opts.reference) return solve_reference(p);
    StdLP lp = standard_form(p);
    Presolved pre = presolve(lp);
    int n = p.num_variables();
    if (pre.infeasible) return finish(p, LPStatus::infeasible, {}, true, "presolve");
    if (pre.lp.rows.empty()) {
        if (pre.maybe_unbounded) return finish(p, LPStatus::unbounded, {}, true, "presolve");
        return finish(p, LPStatus::optimal, postsolve(pre, n, std::vector<Rational>(pre.column.size(), Rational(0))),
                      true, "presolve");
    }

    FloatSimplex fs(pre.lp, opts.float_mode ? std::max(opts.eps, 1e-12) : 1e-9);
    FloatOutcome fo = fs.run();

    if (opts.float_mode && fo.ok) {
        if (fo.status != LPStatus::optimal) return finish(p, fo.status, {}, false, "float");
        if (pre.maybe_unbounded) return finish(p, LPStatus::unbounded, {}, false, "float");
        std::vector<Rational> xr(fo.x.size());
        for (size_t j = 0; j < fo.x.size(); ++j) xr[j] = rational_from_double(std::max(0.0, fo.x[j]));
        return finish(p, LPStatus::optimal, postsolve(pre, n, xr), false, "float");
    }

    if (fo.ok && fo.status == LPStatus::optimal && !pre.maybe_unbounded) {
        std::vector<Rational> xr;
        if (certify_from_basis(pre.lp, fo, xr))
            return finish(p, LPStatus::optimal, postsolve(pre, n, xr), true, "certified-basis");
        if (certify_by_rounding(pre.lp, fo, xr))
            return finish(p, LPStatus::optimal, postsolve(pre, n, xr), true, "certified-rounding");
    }

    auto ex = exact_simplex(pre.lp);
    if (ex.status == LPStatus::optimal && pre.maybe_unbounded)
        return finish(p, LPStatus::unbounded, {}, true, "exact-bland");
    if (ex.status != LPStatus::optimal) return finish(p, ex.status, {}, true, "exact-bland");
    return finish(p, LPStatus::optimal, postsolve(pre, n, ex.x), true, "exact-bland");
}

}  // namespace pcnap
