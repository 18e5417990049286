#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sosreg/conic_problem.hpp"

namespace sosreg {

enum class SolveStatus { Converged, MaxIterations, Diverged };

std::string to_string(SolveStatus s);

enum class PrecondKind { Exact, Diag, None };

struct SolverConfig {
    double eps_in = 1e-6;      // inner gradient tolerance
    double eps_out = 1e-6;     // outer residual tolerance
    double eps_shift = 1e-9;   // Newton system shift, scaled by (1 + sigma)
    double delta = 0.5;        // backtracking base
    double armijo = 1e-4;      // slope fraction in the line-search test
    double rho = 5.0;          // sigma growth factor
    double sigma0 = 1.0;
    double sigma_max = 1e6;
    int cg_cap = 500;          // cap on CG iterations per Newton system
    int max_inner = 25;
    int max_outer = 20;
    PrecondKind precond = PrecondKind::Diag;

    void validate() const;
};

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Spectral data of A*(y) - C + Y/sigma needed to apply the generalized
/// Hessian: per block the eigenvectors, eigenvalues (descending) and the
/// Omega weight matrix built from the eigenvalue signs.
struct HessianContext {
    std::vector<Eigen::MatrixXd> Q;
    std::vector<Eigen::VectorXd> lambda;
    std::vector<Eigen::MatrixXd> omega;
};

struct PhiEval {
    double value = 0.0;
    Eigen::VectorXd grad;
    HessianContext ctx;
    BlockSymMatrix X;  // sigma * (A*(y) - C + Y/sigma)_K
    BlockSymMatrix Z;  // -(A*(y) - C + Y/sigma)_{-K}
};

/// Value and y-gradient of the regularized dual function
///   phi_sigma(Y, y) = b'y - (sigma/2) ||(A*(y) - C + Y/sigma)_K||^2
///                     + (1/2 sigma) ||Y||^2.
PhiEval phi_value_and_grad(const ConicSdpProblem& P, const BlockSymMatrix& Y,
                           const Eigen::VectorXd& y, double sigma);

/// Applies the generalized Hessian z -> sigma * sum_k A_k(Q_k (Omega_k o
/// (Q_k' A_k*(z) Q_k)) Q_k'). Always positive semidefinite.
Eigen::VectorXd hessian_apply(const HessianContext& ctx, const ConicSdpProblem& P,
                              const Eigen::VectorXd& z, double sigma);

struct PcgResult {
    Eigen::VectorXd dir;
    int iters = 0;
    bool breakdown = false;  // non-finite values; caller should enlarge the shift
};

/// Preconditioned conjugate gradients on a symmetric PSD operator.
/// Stops when ||op(d) - rhs|| <= tol * ||rhs|| or after cap iterations.
PcgResult pcg(const LinearMap& op, const Eigen::VectorXd& rhs, const LinearMap& precond,
              int cap, double tol);

struct IterationRecord {
    int outer = 0;
    double sigma = 0.0;
    double primal = 0.0;
    double dual = 0.0;
    double phi = 0.0;
    int inner_steps = 0;
    int cg_steps = 0;
};

struct Solution {
    SolveStatus status = SolveStatus::MaxIterations;
    BlockSymMatrix X;
    BlockSymMatrix Z;
    Eigen::VectorXd y;
    KktResiduals residuals;
    double objective_primal = 0.0;  // C.X
    double objective_dual = 0.0;    // b'y
    std::vector<IterationRecord> history;
    int outer_iterations = 0;
    int inner_iterations = 0;
    int cg_iterations = 0;
};

/// Boundary point iteration: solve AA* y = A(C - Z) + (b - A(Y))/sigma,
/// project, set Y := X, grow sigma once per sweep of max_inner steps.
/// gram_inverse_apply must solve AA* y = w.
Solution solve_bpm(const ConicSdpProblem& P, const SolverConfig& cfg,
                   const LinearMap& gram_inverse_apply);

/// Newton-CG augmented Lagrangian method: inner semismooth Newton ascent on
/// phi_sigma with line search, outer sigma updates.
/// precond_apply approximates (AA*)^{-1}; pass identity for none.
Solution solve_newton_cg(const ConicSdpProblem& P, const SolverConfig& cfg,
                         const LinearMap& precond_apply);

/// Exact Gram solver: dense Cholesky of AA* (suitable for small m), else a
/// CG fallback on the Gram operator with Jacobi preconditioning.
LinearMap make_gram_solver(const ConicSdpProblem& P, int dense_limit = 4000);

LinearMap identity_map();
LinearMap diagonal_map(const Eigen::VectorXd& d);

}  // namespace sosreg
