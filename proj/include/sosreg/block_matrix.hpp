#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sosreg {

/// Sizes of the blocks of the cone S^{N1}_+ x ... x S^{Nl}_+.
struct ConeSpec {
    std::vector<int> block_sizes;

    ConeSpec() = default;
    explicit ConeSpec(std::vector<int> sizes);

    int blocks() const { return static_cast<int>(block_sizes.size()); }
    bool operator==(const ConeSpec& o) const { return block_sizes == o.block_sizes; }
};

/// Tuple of dense symmetric matrices matching a ConeSpec. Blocks are
/// symmetrized on construction.
class BlockSymMatrix {
  public:
    BlockSymMatrix() = default;
    explicit BlockSymMatrix(std::vector<Eigen::MatrixXd> blocks);

    static BlockSymMatrix zero(const ConeSpec& spec);

    int blocks() const { return static_cast<int>(blocks_.size()); }
    const Eigen::MatrixXd& block(int k) const { return blocks_[static_cast<size_t>(k)]; }
    Eigen::MatrixXd& block(int k) { return blocks_[static_cast<size_t>(k)]; }
    ConeSpec spec() const;
    bool conforms(const ConeSpec& s) const { return spec() == s; }

    BlockSymMatrix operator+(const BlockSymMatrix& o) const;
    BlockSymMatrix operator-(const BlockSymMatrix& o) const;
    BlockSymMatrix operator*(double s) const;
    BlockSymMatrix& operator+=(const BlockSymMatrix& o);

  private:
    std::vector<Eigen::MatrixXd> blocks_;
};

/// Blockwise Frobenius inner product X1.Y1 + ... + Xl.Yl.
double inner(const BlockSymMatrix& X, const BlockSymMatrix& Y);

/// Norm induced by inner().
double norm(const BlockSymMatrix& X);

/// Result of the spectral projection of X onto the cone and its negative:
/// pos + neg == X, pos in K, neg in -K, inner(pos, neg) == 0. The per-block
/// eigendecompositions are kept for reuse (eigenvalues sorted descending).
struct ProjectionSplit {
    BlockSymMatrix pos;
    BlockSymMatrix neg;
    std::vector<Eigen::MatrixXd> eigvecs;
    std::vector<Eigen::VectorXd> eigvals;
};

/// Per-block spectral split; eigenvalues >= 0 (including zero) go to the
/// positive part. Throws std::runtime_error on non-finite input.
ProjectionSplit project_split(const BlockSymMatrix& X);

}  // namespace sosreg
