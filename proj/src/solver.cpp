#include "sosreg/solver.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace sosreg {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::MaxIterations: return "MaxIterations";
        case SolveStatus::Diverged: return "Diverged";
    }
    return "Unknown";
}

void SolverConfig::validate() const {
    if (eps_in <= 0 || eps_out <= 0 || eps_shift <= 0) throw std::invalid_argument("tolerances must be positive");
    if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta must lie in (0,1)");
    if (armijo <= 0 || armijo >= 1) throw std::invalid_argument("armijo must lie in (0,1)");
    if (rho <= 1) throw std::invalid_argument("rho must exceed 1");
    if (sigma0 <= 0 || sigma_max <= 0) throw std::invalid_argument("sigma parameters must be positive");
    if (cg_cap < 1 || max_inner < 1 || max_outer < 1) throw std::invalid_argument("iteration caps must be positive");
}

PhiEval phi_value_and_grad(const ConicSdpProblem& P, const BlockSymMatrix& Y,
                           const Eigen::VectorXd& y, double sigma) {
    if (sigma <= 0) throw std::invalid_argument("phi: sigma must be positive");
    BlockSymMatrix W = apply_A_adjoint(P, y) - P.cost + Y * (1.0 / sigma);
    ProjectionSplit split = project_split(W);

    PhiEval out;
    double wpos2 = inner(split.pos, split.pos);
    out.value = P.rhs.dot(y) - 0.5 * sigma * wpos2 + 0.5 / sigma * inner(Y, Y);
    out.X = split.pos * sigma;
    out.Z = split.neg * (-1.0);
    out.grad = P.rhs - apply_A(P, out.X);

    out.ctx.Q = std::move(split.eigvecs);
    out.ctx.lambda = std::move(split.eigvals);
    out.ctx.omega.reserve(out.ctx.Q.size());
    for (size_t k = 0; k < out.ctx.Q.size(); ++k) {
        const Eigen::VectorXd& lam = out.ctx.lambda[k];
        const int N = static_cast<int>(lam.size());
        int p = 0;  // eigenvalues are descending; lam(i) >= 0 for i < p
        while (p < N && lam(p) >= 0.0) ++p;
        Eigen::MatrixXd Om = Eigen::MatrixXd::Zero(N, N);
        Om.topLeftCorner(p, p).setOnes();
        for (int i = 0; i < p; ++i)
            for (int j = p; j < N; ++j) {
                double w = lam(i) / (lam(i) - lam(j));
                Om(i, j) = w;
                Om(j, i) = w;
            }
        out.ctx.omega.push_back(std::move(Om));
    }
    return out;
}

Eigen::VectorXd hessian_apply(const HessianContext& ctx, const ConicSdpProblem& P,
                              const Eigen::VectorXd& z, double sigma) {
    if (z.size() != P.m()) throw std::invalid_argument("hessian_apply: length mismatch");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(P.m());
    for (int k = 0; k < P.cone.blocks(); ++k) {
        const Eigen::MatrixXd& Q = ctx.Q[static_cast<size_t>(k)];
        Eigen::MatrixXd B = apply_A_adjoint_block(P, z, k);
        Eigen::MatrixXd M = Q.transpose() * B * Q;
        M.array() *= ctx.omega[static_cast<size_t>(k)].array();
        Eigen::MatrixXd R = Q * M * Q.transpose();
        R = 0.5 * (R + R.transpose()).eval();
        accumulate_A_block(P, R, k, out);
    }
    return out * sigma;
}

PcgResult pcg(const LinearMap& op, const Eigen::VectorXd& rhs, const LinearMap& precond,
              int cap, double tol) {
    PcgResult res;
    const auto n = rhs.size();
    res.dir = Eigen::VectorXd::Zero(n);
    double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0) return res;

    Eigen::VectorXd r = rhs;
    Eigen::VectorXd z = precond(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    for (int it = 0; it < cap; ++it) {
        Eigen::VectorXd Ap = op(p);
        double pAp = p.dot(Ap);
        if (!std::isfinite(pAp) || pAp <= 0.0) {
            res.breakdown = true;
            return res;
        }
        double alpha = rz / pAp;
        res.dir += alpha * p;
        r -= alpha * Ap;
        res.iters = it + 1;
        if (!r.allFinite()) {
            res.breakdown = true;
            return res;
        }
        if (r.norm() <= tol * rhs_norm) break;
        z = precond(r);
        double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    return res;
}

namespace {

struct ResidualScales {
    double primal;
    double dual;
    double kkt_bound;
};

ResidualScales residual_scales(const ConicSdpProblem& P, const SolverConfig& cfg) {
    double bn = P.rhs.norm();
    double cn = norm(P.cost);
    return {cfg.eps_out * (1.0 + bn), cfg.eps_out * (1.0 + cn),
            10.0 * cfg.eps_out * (1.0 + bn + cn)};
}

bool kkt_within(const KktResiduals& r, double bound) {
    return r.primal <= bound && r.dual <= bound && r.gap <= bound && r.compl_ <= bound;
}

void finalize(Solution& sol, const ConicSdpProblem& P) {
    sol.residuals = kkt(P, sol.X, sol.y, sol.Z);
    sol.objective_primal = inner(P.cost, sol.X);
    sol.objective_dual = P.rhs.dot(sol.y);
}

}  // namespace

Solution solve_bpm(const ConicSdpProblem& P, const SolverConfig& cfg,
                   const LinearMap& gram_inverse_apply) {
    cfg.validate();
    P.validate();
    Solution sol;
    sol.X = BlockSymMatrix::zero(P.cone);
    sol.Z = BlockSymMatrix::zero(P.cone);
    sol.y = Eigen::VectorXd::Zero(P.m());
    BlockSymMatrix Y = BlockSymMatrix::zero(P.cone);

    const ResidualScales scale = residual_scales(P, cfg);
    double sigma = cfg.sigma0;
    double initial_res = -1.0;

    for (int outer = 0; outer < cfg.max_outer; ++outer) {
        IterationRecord rec;
        rec.outer = outer;
        rec.sigma = sigma;
        for (int step = 0; step < cfg.max_inner; ++step) {
            Eigen::VectorXd w =
                apply_A(P, P.cost - sol.Z) + (P.rhs - apply_A(P, Y)) / sigma;
            sol.y = gram_inverse_apply(w);
            BlockSymMatrix W = Y * (1.0 / sigma) + apply_A_adjoint(P, sol.y) - P.cost;
            ProjectionSplit split = project_split(W);
            sol.X = split.pos * sigma;
            sol.Z = split.neg * (-1.0);
            Y = sol.X;
            ++sol.inner_iterations;
            ++rec.inner_steps;

            rec.primal = (P.rhs - apply_A(P, sol.X)).norm();
            rec.dual = norm(P.cost - sol.Z - apply_A_adjoint(P, sol.y));
            if (initial_res < 0) initial_res = rec.primal + rec.dual;
            if (!std::isfinite(rec.primal) || !std::isfinite(rec.dual) ||
                rec.primal + rec.dual > 1e8 * (initial_res + 1.0)) {
                sol.status = SolveStatus::Diverged;
                sol.history.push_back(rec);
                sol.outer_iterations = outer + 1;
                finalize(sol, P);
                return sol;
            }
            if (rec.primal <= scale.primal && rec.dual <= scale.dual) {
                KktResiduals full = kkt(P, sol.X, sol.y, sol.Z);
                if (kkt_within(full, scale.kkt_bound)) {
                    sol.status = SolveStatus::Converged;
                    sol.history.push_back(rec);
                    sol.outer_iterations = outer + 1;
                    finalize(sol, P);
                    return sol;
                }
            }
        }
        sol.history.push_back(rec);
        sol.outer_iterations = outer + 1;
        if (sigma <= cfg.sigma_max) sigma *= cfg.rho;
    }
    sol.status = SolveStatus::MaxIterations;
    finalize(sol, P);
    return sol;
}

Solution solve_newton_cg(const ConicSdpProblem& P, const SolverConfig& cfg,
                         const LinearMap& precond_apply) {
    cfg.validate();
    P.validate();
    Solution sol;
    sol.X = BlockSymMatrix::zero(P.cone);
    sol.Z = BlockSymMatrix::zero(P.cone);
    sol.y = Eigen::VectorXd::Zero(P.m());

    const ResidualScales scale = residual_scales(P, cfg);
    double sigma = cfg.sigma0;
    double initial_primal = -1.0;

    for (int outer = 0; outer < cfg.max_outer; ++outer) {
        BlockSymMatrix Y = sol.X;
        IterationRecord rec;
        rec.outer = outer;
        rec.sigma = sigma;

        PhiEval eval = phi_value_and_grad(P, Y, sol.y, sigma);
        for (int j = 0; j < cfg.max_inner; ++j) {
            double gnorm = eval.grad.norm();
            if (gnorm <= cfg.eps_in) break;

            // approximate semismooth Newton direction
            double shift = cfg.eps_shift * (1.0 + sigma);
            PcgResult dir;
            for (int attempt = 0; attempt < 4; ++attempt) {
                double sh = shift;
                LinearMap op = [&, sh](const Eigen::VectorXd& z) {
                    return (hessian_apply(eval.ctx, P, z, sigma) + sh * z).eval();
                };
                dir = pcg(op, eval.grad, precond_apply, cfg.cg_cap,
                          std::min(0.1, std::sqrt(gnorm)));
                if (!dir.breakdown) break;
                shift *= 100.0;
            }
            sol.cg_iterations += dir.iters;
            rec.cg_steps += dir.iters;
            if (dir.breakdown) {
                sol.status = SolveStatus::Diverged;
                sol.history.push_back(rec);
                sol.outer_iterations = outer + 1;
                finalize(sol, P);
                return sol;
            }

            double slope = eval.grad.dot(dir.dir);
            if (!(slope > 0.0)) {
                dir.dir = precond_apply(eval.grad);
                slope = eval.grad.dot(dir.dir);
                if (!(slope > 0.0)) {
                    dir.dir = eval.grad;
                    slope = gnorm * gnorm;
                }
            }

            // smallest alpha > 0 with phi(y + delta^alpha d) >= phi(y) +
            // armijo * delta^alpha * g'd
            double t = cfg.delta;
            PhiEval trial;
            bool accepted = false;
            for (int a = 1; a <= 40; ++a) {
                trial = phi_value_and_grad(P, Y, sol.y + t * dir.dir, sigma);
                if (trial.value >= eval.value + cfg.armijo * t * slope) {
                    accepted = true;
                    break;
                }
                t *= cfg.delta;
            }
            if (!accepted) {
                sol.status = SolveStatus::Diverged;
                sol.history.push_back(rec);
                sol.outer_iterations = outer + 1;
                finalize(sol, P);
                return sol;
            }
            sol.y += t * dir.dir;
            eval = std::move(trial);
            ++sol.inner_iterations;
            ++rec.inner_steps;
        }
        sol.X = eval.X;
        sol.Z = eval.Z;
        rec.phi = eval.value;
        rec.primal = eval.grad.norm();  // b - A(X) equals the phi gradient
        rec.dual = norm(sol.Z + apply_A_adjoint(P, sol.y) - P.cost);
        sol.history.push_back(rec);
        sol.outer_iterations = outer + 1;
        if (initial_primal < 0) initial_primal = rec.primal;

        if (rec.primal <= scale.primal && rec.dual <= scale.dual) {
            KktResiduals full = kkt(P, sol.X, sol.y, sol.Z);
            if (kkt_within(full, scale.kkt_bound)) {
                sol.status = SolveStatus::Converged;
                finalize(sol, P);
                return sol;
            }
        }
        if (sol.y.norm() > 1e12) {
            sol.status = SolveStatus::Diverged;
            finalize(sol, P);
            return sol;
        }
        // unbounded dual objective with a stalled primal residual signals an
        // infeasible primal problem
        if (P.rhs.dot(sol.y) > 1e10 && rec.primal > 0.5 * initial_primal) {
            sol.status = SolveStatus::Diverged;
            finalize(sol, P);
            return sol;
        }
        if (sigma <= cfg.sigma_max) sigma *= cfg.rho;
    }
    sol.status = SolveStatus::MaxIterations;
    finalize(sol, P);
    return sol;
}

LinearMap make_gram_solver(const ConicSdpProblem& P, int dense_limit) {
    if (P.m() <= dense_limit) {
        Eigen::MatrixXd G = dense_gram(P);
        // tiny ridge keeps the factorization well defined when AA* is singular
        double ridge = 1e-12 * (G.trace() / G.rows() + 1.0);
        Eigen::LDLT<Eigen::MatrixXd> fac(G + ridge * Eigen::MatrixXd::Identity(G.rows(), G.cols()));
        if (fac.info() != Eigen::Success) throw std::runtime_error("Gram factorization failed");
        return [fac](const Eigen::VectorXd& w) { return fac.solve(w).eval(); };
    }
    Eigen::VectorXd d = gram_diag(P).cwiseMax(1e-300);
    LinearMap jacobi = diagonal_map(d.cwiseInverse());
    int cap = 10 * P.m();
    return [&P, jacobi, cap](const Eigen::VectorXd& w) {
        LinearMap gram = [&P](const Eigen::VectorXd& z) {
            return apply_A(P, apply_A_adjoint(P, z));
        };
        return pcg(gram, w, jacobi, cap, 1e-12).dir;
    };
}

LinearMap identity_map() {
    return [](const Eigen::VectorXd& w) { return w; };
}

LinearMap diagonal_map(const Eigen::VectorXd& d) {
    return [d](const Eigen::VectorXd& w) { return (d.array() * w.array()).matrix().eval(); };
}

}  // namespace sosreg
