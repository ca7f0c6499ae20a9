#include "zerocert/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

namespace zerocert {

namespace {

constexpr double kFeasTol = 1e-8;
constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-10;
constexpr int kStallThreshold = 64;

enum VarState : unsigned char { NB_LOWER, NB_UPPER, NB_FREE, BASIC };

// Bounded-variable primal simplex on the full tableau. Columns are the
// structural variables, then one slack per <= row, then one artificial per
// row (phase one only). The tableau stores B^-1 A; beta stores the current
// VALUE of each basic variable, not B^-1 b, so nonbasic shifts and pivots
// update it directly.
class Simplex {
public:
    explicit Simplex(const LinearProgram& lp) : lp_(lp) { build(); }

    LpSolution run() {
        LpSolution sol;
        if (!phase_one()) {
            sol.status = LpStatus::infeasible;
            sol.iterations = iterations_;
            return sol;
        }
        freeze_artificials();
        const bool bounded = phase_two();
        sol.iterations = iterations_;
        if (!bounded) {
            sol.status = LpStatus::unbounded;
            return sol;
        }
        sol.status = LpStatus::optimal;
        sol.x.assign(lp_.num_vars, 0.0);
        for (int j = 0; j < lp_.num_vars; ++j) sol.x[j] = value_of(j);
        sol.objective = dot(lp_.objective, sol.x);
        validate(sol);
        return sol;
    }

private:
    const LinearProgram& lp_;
    int m_ = 0;         // rows
    int n_ = 0;         // columns (structural + slack + artificial)
    int n_struct_ = 0;  // structural + slack columns
    int stride_ = 0;
    std::vector<double> t_;     // m_ x stride_; column n_ holds beta
    std::vector<double> zrow_;  // reduced costs
    std::vector<double> lo_, hi_, nbval_;
    std::vector<VarState> state_;
    std::vector<int> basis_;
    std::vector<double> cost_;
    int iterations_ = 0;
    bool bland_ = false;
    int stall_ = 0;
    double last_obj_ = kInf;
    double input_scale_ = 1.0;

    double& T(int r, int j) { return t_[static_cast<size_t>(r) * stride_ + j]; }
    double Tc(int r, int j) const { return t_[static_cast<size_t>(r) * stride_ + j]; }
    double beta(int r) const { return t_[static_cast<size_t>(r) * stride_ + n_]; }
    double& beta_ref(int r) { return t_[static_cast<size_t>(r) * stride_ + n_]; }

    // snapshot of the initial (sign-normalized) system for refinement
    std::vector<double> orig_rows_;  // m_ x n_
    Vec orig_rhs_;
    std::vector<int> init_basis_;

    double value_of(int j) const {
        if (state_[j] == BASIC) {
            for (int r = 0; r < m_; ++r)
                if (basis_[r] == j) return beta(r);
            return 0.0;
        }
        return nbval_[j];
    }

    void build() {
        const int nv = lp_.num_vars;
        const int n_eq = static_cast<int>(lp_.eq_rows.size());
        const int n_le = static_cast<int>(lp_.le_rows.size());
        if (static_cast<int>(lp_.objective.size()) != nv)
            throw std::invalid_argument("solve_lp: objective size mismatch");
        if (!lp_.bounds.empty() && static_cast<int>(lp_.bounds.size()) != nv)
            throw std::invalid_argument("solve_lp: bounds size mismatch");
        if (static_cast<int>(lp_.eq_rhs.size()) != n_eq || static_cast<int>(lp_.le_rhs.size()) != n_le)
            throw std::invalid_argument("solve_lp: rhs size mismatch");
        m_ = n_eq + n_le;
        n_struct_ = nv + n_le;

        lo_.assign(n_struct_, 0.0);
        hi_.assign(n_struct_, kInf);
        nbval_.assign(n_struct_, 0.0);
        state_.assign(n_struct_, NB_LOWER);
        for (int j = 0; j < nv; ++j) {
            const VarBound b = lp_.bounds.empty() ? VarBound{} : lp_.bounds[j];
            if (!(b.lo <= b.hi)) throw std::invalid_argument("solve_lp: empty variable bound");
            lo_[j] = b.lo;
            hi_[j] = b.hi;
            if (std::isfinite(b.lo)) {
                state_[j] = NB_LOWER;
                nbval_[j] = b.lo;
            } else if (std::isfinite(b.hi)) {
                state_[j] = NB_UPPER;
                nbval_[j] = b.hi;
            } else {
                state_[j] = NB_FREE;
                nbval_[j] = 0.0;
            }
        }

        // stage rows densely, compute residuals at the nonbasic point, and
        // decide which rows need an artificial column. A <= row whose slack
        // is already nonnegative starts with that slack basic instead.
        std::vector<double> rows(static_cast<size_t>(m_) * n_struct_, 0.0);
        Vec rhs_v(m_, 0.0);
        auto fill_row = [&](int r, const Vec& row, double rhs) {
            if (static_cast<int>(row.size()) != nv)
                throw std::invalid_argument("solve_lp: constraint row size mismatch");
            for (int j = 0; j < nv; ++j) {
                if (!std::isfinite(row[j])) throw std::invalid_argument("solve_lp: non-finite coefficient");
                rows[static_cast<size_t>(r) * n_struct_ + j] = row[j];
            }
            if (!std::isfinite(rhs)) throw std::invalid_argument("solve_lp: non-finite rhs");
            rhs_v[r] = rhs;
        };
        for (int i = 0; i < n_eq; ++i) fill_row(i, lp_.eq_rows[i], lp_.eq_rhs[i]);
        for (int i = 0; i < n_le; ++i) {
            fill_row(n_eq + i, lp_.le_rows[i], lp_.le_rhs[i]);
            rows[static_cast<size_t>(n_eq + i) * n_struct_ + nv + i] = 1.0;
        }
        Vec residual(m_, 0.0);
        std::vector<int> art_col(m_, -1);
        int n_art = 0;
        for (int r = 0; r < m_; ++r) {
            double res = rhs_v[r];
            for (int j = 0; j < n_struct_; ++j)
                res -= rows[static_cast<size_t>(r) * n_struct_ + j] * nbval_[j];
            residual[r] = res;
            if (r < n_eq || res < 0.0) art_col[r] = n_struct_ + n_art++;
        }

        for (double v : rows) input_scale_ = std::max(input_scale_, std::abs(v));
        for (double v : rhs_v) input_scale_ = std::max(input_scale_, std::abs(v));

        n_ = n_struct_ + n_art;
        stride_ = n_ + 1;
        lo_.resize(n_, 0.0);
        hi_.resize(n_, kInf);
        nbval_.resize(n_, 0.0);
        state_.resize(n_, NB_LOWER);
        t_.assign(static_cast<size_t>(m_) * stride_, 0.0);
        basis_.assign(m_, -1);
        for (int r = 0; r < m_; ++r) {
            const double sign = residual[r] < 0.0 ? -1.0 : 1.0;
            for (int j = 0; j < n_struct_; ++j)
                T(r, j) = sign * rows[static_cast<size_t>(r) * n_struct_ + j];
            if (art_col[r] >= 0) {
                T(r, art_col[r]) = 1.0;
                basis_[r] = art_col[r];
                state_[art_col[r]] = BASIC;
                beta_ref(r) = std::abs(residual[r]);
            } else {
                const int sj = nv + (r - n_eq);
                basis_[r] = sj;
                state_[sj] = BASIC;
                beta_ref(r) = residual[r];
            }
        }

        // snapshot for iterative refinement: the initial basis columns are
        // identity columns, so T[:, init_basis] always reads as B^-1
        init_basis_ = basis_;
        orig_rows_.assign(static_cast<size_t>(m_) * n_, 0.0);
        orig_rhs_.assign(m_, 0.0);
        Vec x0(n_, 0.0);
        for (int j = 0; j < n_; ++j) x0[j] = nbval_[j];
        for (int r = 0; r < m_; ++r) x0[basis_[r]] = beta(r);
        for (int r = 0; r < m_; ++r) {
            double rhs = 0.0;
            for (int j = 0; j < n_; ++j) {
                orig_rows_[static_cast<size_t>(r) * n_ + j] = Tc(r, j);
                rhs += Tc(r, j) * x0[j];
            }
            orig_rhs_[r] = rhs;
        }
    }

    // recompute the basic values from the original system; counters the
    // drift the full-tableau updates accumulate on long runs
    void refine_beta() {
        Vec x(n_, 0.0);
        for (int j = 0; j < n_; ++j) x[j] = nbval_[j];
        for (int r = 0; r < m_; ++r) x[basis_[r]] = beta(r);
        Vec res(m_, 0.0);
        for (int r = 0; r < m_; ++r) {
            double s = orig_rhs_[r];
            const double* row = &orig_rows_[static_cast<size_t>(r) * n_];
            for (int j = 0; j < n_; ++j) s -= row[j] * x[j];
            res[r] = s;
        }
        for (int i = 0; i < m_; ++i) {
            double dx = 0.0;
            for (int r = 0; r < m_; ++r) dx += Tc(i, init_basis_[r]) * res[r];
            beta_ref(i) += dx;
        }
    }

    void set_costs_phase1() {
        cost_.assign(n_, 0.0);
        for (int j = n_struct_; j < n_; ++j) cost_[j] = 1.0;
        rebuild_zrow();
    }

    void set_costs_phase2() {
        cost_.assign(n_, 0.0);
        for (int j = 0; j < lp_.num_vars; ++j) cost_[j] = lp_.objective[j];
        rebuild_zrow();
    }

    void rebuild_zrow() {
        zrow_.assign(cost_.begin(), cost_.end());
        for (int r = 0; r < m_; ++r) {
            const double cb = cost_[basis_[r]];
            if (cb == 0.0) continue;
            const double* row = &t_[static_cast<size_t>(r) * stride_];
            for (int j = 0; j < n_; ++j) zrow_[j] -= cb * row[j];
        }
        for (int r = 0; r < m_; ++r) zrow_[basis_[r]] = 0.0;
    }

    double current_objective() const {
        double s = 0.0;
        for (int r = 0; r < m_; ++r) s += cost_[basis_[r]] * beta(r);
        for (int j = 0; j < n_; ++j)
            if (state_[j] != BASIC) s += cost_[j] * nbval_[j];
        return s;
    }

    int pick_entering(int& dir, const std::vector<char>& banned) const {
        int best = -1;
        double best_score = kCostTol;
        for (int j = 0; j < n_; ++j) {
            if (state_[j] == BASIC || lo_[j] == hi_[j] || banned[j]) continue;
            const double z = zrow_[j];
            double score;
            int d;
            if ((state_[j] == NB_LOWER || state_[j] == NB_FREE) && z < -kCostTol) {
                score = -z;
                d = +1;
            } else if ((state_[j] == NB_UPPER || state_[j] == NB_FREE) && z > kCostTol) {
                score = z;
                d = -1;
            } else {
                continue;
            }
            if (bland_) {
                dir = d;
                return j;
            }
            if (score > best_score) {
                best_score = score;
                best = j;
                dir = d;
            }
        }
        return best;
    }

    enum class StepResult { optimal, moved, unbounded, retry };

    double exact_ratio(int r, int q, int dir) const {
        const double y = Tc(r, q) * dir;
        const int bi = basis_[r];
        const double lim = y > 0.0 ? (beta(r) - lo_[bi]) / y : (beta(r) - hi_[bi]) / y;
        return std::max(0.0, lim);
    }

    StepResult step() {
        std::vector<char> banned(n_, 0);
        int bans = 0;
        for (;;) {
            const StepResult s = try_step(banned);
            if (s == StepResult::retry) {
                if (++bans > 200)
                    throw LpNumericalError(
                        "solve_lp: no usable pivot among improving columns after " +
                        std::to_string(bans) + " rejections");
                continue;
            }
            if (s == StepResult::optimal && bans > 0) {
                // a banned column still priced as improving: this is a
                // breakdown, not optimality
                int dummy = 0;
                std::vector<char> none(n_, 0);
                const int q = pick_entering(dummy, none);
                if (q >= 0)
                    throw LpNumericalError("solve_lp: improving column has no usable pivot");
            }
            return s;
        }
    }

    // One attempt with the given exclusion set; retry means the chosen
    // entering column only offered an unusably small pivot.
    StepResult try_step(std::vector<char>& banned) {
        int dir = 0;
        const int q = pick_entering(dir, banned);
        if (q < 0) return StepResult::optimal;

        double tmax = kInf;
        int leave_row = -1;
        double own_limit = hi_[q] - lo_[q];

        if (bland_) {
            // strict min-ratio with lowest-index tie-break
            for (int r = 0; r < m_; ++r) {
                const double y = Tc(r, q) * dir;
                if (std::abs(y) <= kPivotTol) continue;
                const int bi = basis_[r];
                if (y > 0.0 ? !std::isfinite(lo_[bi]) : !std::isfinite(hi_[bi])) continue;
                const double lim = exact_ratio(r, q, dir);
                if (lim < tmax - 1e-12 ||
                    (lim < tmax + 1e-12 && (leave_row < 0 || basis_[r] < basis_[leave_row]))) {
                    tmax = lim;
                    leave_row = r;
                }
            }
        } else {
            // two-pass Harris: relax bounds by the feasibility tolerance to
            // find the limiting step, then take the largest pivot among the
            // rows inside that step
            double t_bar = kInf;
            for (int r = 0; r < m_; ++r) {
                const double y = Tc(r, q) * dir;
                if (std::abs(y) <= kPivotTol) continue;
                const int bi = basis_[r];
                double lim;
                if (y > 0.0) {
                    if (!std::isfinite(lo_[bi])) continue;
                    lim = (beta(r) - lo_[bi] + 1e-9) / y;
                } else {
                    if (!std::isfinite(hi_[bi])) continue;
                    lim = (beta(r) - hi_[bi] - 1e-9) / y;
                }
                t_bar = std::min(t_bar, std::max(0.0, lim));
            }
            if (std::isfinite(t_bar)) {
                double best_y = 0.0;
                for (int r = 0; r < m_; ++r) {
                    const double y = Tc(r, q) * dir;
                    if (std::abs(y) <= kPivotTol) continue;
                    const int bi = basis_[r];
                    if (y > 0.0 ? !std::isfinite(lo_[bi]) : !std::isfinite(hi_[bi])) continue;
                    if (exact_ratio(r, q, dir) <= t_bar && std::abs(y) > best_y) {
                        best_y = std::abs(y);
                        leave_row = r;
                    }
                }
                if (leave_row >= 0) tmax = exact_ratio(leave_row, q, dir);
            }
        }

        if (!std::isfinite(tmax) && !std::isfinite(own_limit)) return StepResult::unbounded;

        if (own_limit <= tmax) {
            ++iterations_;
            apply_shift(q, dir, own_limit);
            state_[q] = state_[q] == NB_LOWER ? NB_UPPER : NB_LOWER;
            nbval_[q] = state_[q] == NB_LOWER ? lo_[q] : hi_[q];
            return StepResult::moved;
        }

        // a pivot far below the column scale would poison the tableau; ban
        // the column for this step and let another candidate move instead
        double col_scale = 0.0;
        for (int r = 0; r < m_; ++r) col_scale = std::max(col_scale, std::abs(Tc(r, q)));
        if (std::abs(Tc(leave_row, q)) < std::max(1e-10, 1e-12 * col_scale)) {
            banned[q] = 1;
            return StepResult::retry;
        }
        ++iterations_;

        const int p = basis_[leave_row];
        apply_shift(q, dir, tmax);
        const double entering_value = nbval_[q];
        const double yl = Tc(leave_row, q) * dir;
        state_[p] = yl > 0.0 ? NB_LOWER : NB_UPPER;
        nbval_[p] = yl > 0.0 ? lo_[p] : hi_[p];
        pivot(leave_row, q);
        basis_[leave_row] = q;
        state_[q] = BASIC;
        beta_ref(leave_row) = entering_value;
        return StepResult::moved;
    }

    // move x_q by dir*t; basic values absorb the change
    void apply_shift(int q, int dir, double t) {
        if (t == 0.0) return;
        const double step = dir * t;
        for (int r = 0; r < m_; ++r) beta_ref(r) -= Tc(r, q) * step;
        nbval_[q] += step;
    }

    // row elimination on the coefficient columns only; beta is managed by
    // the caller under value semantics
    void pivot(int r, int q) {
        double* prow = &t_[static_cast<size_t>(r) * stride_];
        const double piv = prow[q];
        if (std::abs(piv) < kPivotTol)
            throw LpNumericalError("solve_lp: pivot breakdown, |pivot|=" + std::to_string(std::abs(piv)) +
                                   " at iteration " + std::to_string(iterations_));
        const double inv = 1.0 / piv;
        for (int j = 0; j < n_; ++j) prow[j] *= inv;
        prow[q] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            double* row = &t_[static_cast<size_t>(i) * stride_];
            const double f = row[q];
            if (f == 0.0) continue;
            for (int j = 0; j < n_; ++j) row[j] -= f * prow[j];
            row[q] = 0.0;
        }
        const double zf = zrow_[q];
        if (zf != 0.0) {
            for (int j = 0; j < n_; ++j) zrow_[j] -= zf * prow[j];
            zrow_[q] = 0.0;
        }
    }

    bool iterate(bool phase_two_mode) {
        const int cap = 50 * (m_ + n_) + 10000;
        for (;;) {
            if (iterations_ > cap) {
                double tmax_abs = 0.0;
                for (double v : t_) tmax_abs = std::max(tmax_abs, std::abs(v));
                throw LpNumericalError("solve_lp: iteration cap " + std::to_string(cap) +
                                       " exceeded, max |tableau| " + std::to_string(tmax_abs));
            }
            if (iterations_ > 0 && iterations_ % 256 == 0) {
                refine_beta();
                rebuild_zrow();
                double tmax_abs = 0.0;
                for (double v : t_) tmax_abs = std::max(tmax_abs, std::abs(v));
                if (tmax_abs > 1e8 * (1.0 + input_scale_))
                    throw LpNumericalError("solve_lp: tableau growth to " + std::to_string(tmax_abs) +
                                           ", basis numerically unusable");
            }
            const double obj = current_objective();
            if (obj < last_obj_ - 1e-12) {
                stall_ = 0;
            } else if (++stall_ > kStallThreshold) {
                bland_ = true;
            }
            last_obj_ = obj;
            const StepResult s = step();
            if (s == StepResult::optimal) return true;
            if (s == StepResult::unbounded) {
                if (phase_two_mode) return false;
                throw LpNumericalError("solve_lp: unbounded ray in phase one");
            }
        }
    }

    bool phase_one() {
        set_costs_phase1();
        bland_ = false;
        stall_ = 0;
        last_obj_ = kInf;
        iterate(false);
        if (current_objective() > kFeasTol) {
            // reduced costs may have drifted over a long degenerate run;
            // refresh once and resume before declaring infeasibility
            rebuild_zrow();
            stall_ = 0;
            last_obj_ = kInf;
            iterate(false);
            if (current_objective() > kFeasTol) return false;
        }

        // Drive remaining basic artificials out with a forced degenerate
        // pivot; freeze redundant rows.
        for (int r = 0; r < m_; ++r) {
            if (basis_[r] < n_struct_) continue;
            int q = -1;
            double best = 1e-9;
            for (int j = 0; j < n_struct_; ++j) {
                if (state_[j] == BASIC || lo_[j] == hi_[j]) continue;
                if (std::abs(Tc(r, j)) > best) {
                    best = std::abs(Tc(r, j));
                    q = j;
                }
            }
            const int p = basis_[r];
            if (q < 0) {
                lo_[p] = hi_[p] = 0.0;  // redundant row, artificial pinned
                continue;
            }
            // move x_q so the artificial lands exactly on zero
            const double y = Tc(r, q);
            const int dir = (beta(r) / y) >= 0.0 ? 1 : -1;
            const double t = std::abs(beta(r) / y);
            apply_shift(q, dir, t);
            const double entering_value = nbval_[q];
            state_[p] = NB_LOWER;
            nbval_[p] = 0.0;
            pivot(r, q);
            basis_[r] = q;
            state_[q] = BASIC;
            beta_ref(r) = entering_value;
        }
        return true;
    }

    void freeze_artificials() {
        for (int aj = n_struct_; aj < n_; ++aj) {
            if (state_[aj] != BASIC) {
                lo_[aj] = hi_[aj] = 0.0;
                nbval_[aj] = 0.0;
                state_[aj] = NB_LOWER;
            }
        }
    }

    bool phase_two() {
        refine_beta();
        set_costs_phase2();
        bland_ = false;
        stall_ = 0;
        last_obj_ = kInf;
        const bool bounded = iterate(true);
        if (bounded)
            for (int pass = 0; pass < 3; ++pass) refine_beta();
        return bounded;
    }

    void validate(LpSolution& sol) const {
        double feas = 0.0;
        for (size_t i = 0; i < lp_.eq_rows.size(); ++i)
            feas = std::max(feas, std::abs(dot(lp_.eq_rows[i], sol.x) - lp_.eq_rhs[i]));
        double cs = 0.0;
        for (size_t i = 0; i < lp_.le_rows.size(); ++i) {
            const double slack = lp_.le_rhs[i] - dot(lp_.le_rows[i], sol.x);
            feas = std::max(feas, -slack);
            const int sj = lp_.num_vars + static_cast<int>(i);
            const double dual = -zrow_[sj];
            cs = std::max(cs, std::abs(dual * std::max(0.0, slack)));
        }
        if (!lp_.bounds.empty()) {
            for (int j = 0; j < lp_.num_vars; ++j) {
                if (std::isfinite(lp_.bounds[j].lo)) feas = std::max(feas, lp_.bounds[j].lo - sol.x[j]);
                if (std::isfinite(lp_.bounds[j].hi)) feas = std::max(feas, sol.x[j] - lp_.bounds[j].hi);
            }
        }
        sol.feasibility_residual = std::max(0.0, feas);
        sol.comp_slackness_residual = cs;
        if (feas > 10 * kFeasTol)
            throw LpNumericalError("solve_lp: optimal basis violates feasibility by " + std::to_string(feas));
    }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    Simplex s(lp);
    return s.run();
}

}  // namespace zerocert
