#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sosreg/block_matrix.hpp"
#include "sosreg/multiindex.hpp"

namespace sosreg {

/// One stored entry of a sparse symmetric constraint block; row <= col and
/// off-diagonal entries are implicitly mirrored.
struct SparseEntry {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Sparse symmetric block-diagonal constraint matrix A_alpha.
struct ConstraintMatrix {
    std::vector<std::vector<SparseEntry>> blocks;

    explicit ConstraintMatrix(int nblocks = 0) : blocks(static_cast<size_t>(nblocks)) {}

    void add(int block, int row, int col, double value);
    /// 1^T A 1 with symmetric off-diagonals counted twice.
    double ones_quadratic_form() const;
    /// A . A with symmetric off-diagonals counted twice.
    double self_inner() const;
    Eigen::MatrixXd densify_block(int k, int size) const;
};

/// Conic semidefinite program
///   min C.X  s.t.  A(X) = b,  X in K
/// with K a product of PSD cones and A(X)_alpha = A_alpha . X.
struct ConicSdpProblem {
    ConeSpec cone;
    BlockSymMatrix cost;
    std::vector<ConstraintMatrix> constraints;
    Eigen::VectorXd rhs;
    std::vector<MultiIndex> labels;  // which monomial each row encodes

    int m() const { return static_cast<int>(constraints.size()); }
    void validate() const;
};

struct KktResiduals {
    double primal = 0.0;  // ||b - A(X)||
    double dual = 0.0;    // ||A*(y) + Z - C||
    double gap = 0.0;     // |C.X - b'y|
    double compl_ = 0.0;  // |X.Z|

    double total() const { return primal + dual + gap + compl_; }
};

Eigen::VectorXd apply_A(const ConicSdpProblem& P, const BlockSymMatrix& X);
BlockSymMatrix apply_A_adjoint(const ConicSdpProblem& P, const Eigen::VectorXd& y);
/// Block k of A*(y) only.
Eigen::MatrixXd apply_A_adjoint_block(const ConicSdpProblem& P, const Eigen::VectorXd& y, int k);
/// Adds (A_alpha^{(k)} . M) to out for every constraint row alpha.
void accumulate_A_block(const ConicSdpProblem& P, const Eigen::MatrixXd& M, int k,
                        Eigen::VectorXd& out);

/// Diagonal of the Gram matrix AA*, entries A_alpha . A_alpha.
Eigen::VectorXd gram_diag(const ConicSdpProblem& P);
/// Dense Gram matrix AA*; for diagnostics and small problems only.
Eigen::MatrixXd dense_gram(const ConicSdpProblem& P);

KktResiduals kkt(const ConicSdpProblem& P, const BlockSymMatrix& X, const Eigen::VectorXd& y,
                 const BlockSymMatrix& Z);

/// Plain-text serialization; the exact grammar is documented in
/// docs/formats.md. Values round-trip through "%.17g".
void write_problem(std::ostream& out, const ConicSdpProblem& P);
void write_problem_file(const std::string& path, const ConicSdpProblem& P);
ConicSdpProblem read_problem(std::istream& in);
ConicSdpProblem read_problem_file(const std::string& path);

}  // namespace sosreg
