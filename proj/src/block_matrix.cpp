#include "sosreg/block_matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace sosreg {

ConeSpec::ConeSpec(std::vector<int> sizes) : block_sizes(std::move(sizes)) {
    if (block_sizes.empty()) throw std::invalid_argument("cone needs at least one block");
    for (int s : block_sizes)
        if (s < 1) throw std::invalid_argument("cone block sizes must be positive");
}

BlockSymMatrix::BlockSymMatrix(std::vector<Eigen::MatrixXd> blocks) : blocks_(std::move(blocks)) {
    for (auto& B : blocks_) {
        if (B.rows() != B.cols()) throw std::invalid_argument("blocks must be square");
        B = 0.5 * (B + B.transpose()).eval();
    }
}

BlockSymMatrix BlockSymMatrix::zero(const ConeSpec& spec) {
    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(spec.block_sizes.size());
    for (int s : spec.block_sizes) blocks.push_back(Eigen::MatrixXd::Zero(s, s));
    return BlockSymMatrix(std::move(blocks));
}

ConeSpec BlockSymMatrix::spec() const {
    std::vector<int> sizes;
    sizes.reserve(blocks_.size());
    for (const auto& B : blocks_) sizes.push_back(static_cast<int>(B.rows()));
    return ConeSpec(std::move(sizes));
}

BlockSymMatrix BlockSymMatrix::operator+(const BlockSymMatrix& o) const {
    BlockSymMatrix r = *this;
    r += o;
    return r;
}

BlockSymMatrix BlockSymMatrix::operator-(const BlockSymMatrix& o) const {
    BlockSymMatrix r = *this;
    if (blocks() != o.blocks()) throw std::invalid_argument("block count mismatch");
    for (int k = 0; k < blocks(); ++k) r.blocks_[static_cast<size_t>(k)] -= o.block(k);
    return r;
}

BlockSymMatrix BlockSymMatrix::operator*(double s) const {
    BlockSymMatrix r = *this;
    for (auto& B : r.blocks_) B *= s;
    return r;
}

BlockSymMatrix& BlockSymMatrix::operator+=(const BlockSymMatrix& o) {
    if (blocks() != o.blocks()) throw std::invalid_argument("block count mismatch");
    for (int k = 0; k < blocks(); ++k) blocks_[static_cast<size_t>(k)] += o.block(k);
    return *this;
}

double inner(const BlockSymMatrix& X, const BlockSymMatrix& Y) {
    if (!(X.spec() == Y.spec())) throw std::invalid_argument("cone spec mismatch");
    double s = 0.0;
    for (int k = 0; k < X.blocks(); ++k)
        s += X.block(k).cwiseProduct(Y.block(k)).sum();
    return s;
}

double norm(const BlockSymMatrix& X) { return std::sqrt(inner(X, X)); }

ProjectionSplit project_split(const BlockSymMatrix& X) {
    ProjectionSplit out;
    std::vector<Eigen::MatrixXd> pos, neg;
    for (int k = 0; k < X.blocks(); ++k) {
        const Eigen::MatrixXd& B = X.block(k);
        if (!B.allFinite()) throw std::runtime_error("project_split: non-finite entries");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("project_split: eigendecomposition failed");
        const int N = static_cast<int>(B.rows());
        // reverse into descending eigenvalue order
        Eigen::VectorXd lam(N);
        Eigen::MatrixXd Q(N, N);
        for (int i = 0; i < N; ++i) {
            lam(i) = es.eigenvalues()(N - 1 - i);
            Q.col(i) = es.eigenvectors().col(N - 1 - i);
        }
        Eigen::VectorXd lp = lam.cwiseMax(0.0);
        Eigen::VectorXd lm = lam.cwiseMin(0.0);
        pos.push_back(Q * lp.asDiagonal() * Q.transpose());
        neg.push_back(Q * lm.asDiagonal() * Q.transpose());
        out.eigvecs.push_back(std::move(Q));
        out.eigvals.push_back(std::move(lam));
    }
    out.pos = BlockSymMatrix(std::move(pos));
    out.neg = BlockSymMatrix(std::move(neg));
    return out;
}

}  // namespace sosreg
