#include "sosreg/conic_problem.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sosreg {

void ConstraintMatrix::add(int block, int row, int col, double value) {
    if (block < 0 || block >= static_cast<int>(blocks.size()))
        throw std::out_of_range("constraint block index");
    if (row > col) std::swap(row, col);
    blocks[static_cast<size_t>(block)].push_back({row, col, value});
}

double ConstraintMatrix::ones_quadratic_form() const {
    double s = 0.0;
    for (const auto& blk : blocks)
        for (const auto& e : blk) s += (e.row == e.col) ? e.value : 2.0 * e.value;
    return s;
}

double ConstraintMatrix::self_inner() const {
    double s = 0.0;
    for (const auto& blk : blocks)
        for (const auto& e : blk)
            s += (e.row == e.col) ? e.value * e.value : 2.0 * e.value * e.value;
    return s;
}

Eigen::MatrixXd ConstraintMatrix::densify_block(int k, int size) const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(size, size);
    for (const auto& e : blocks[static_cast<size_t>(k)]) {
        M(e.row, e.col) += e.value;
        if (e.row != e.col) M(e.col, e.row) += e.value;
    }
    return M;
}

void ConicSdpProblem::validate() const {
    if (constraints.empty()) throw std::invalid_argument("problem needs m >= 1 constraints");
    if (rhs.size() != m()) throw std::invalid_argument("rhs length != m");
    if (!labels.empty() && static_cast<int>(labels.size()) != m())
        throw std::invalid_argument("labels length != m");
    if (!cost.conforms(cone)) throw std::invalid_argument("cost does not conform to cone");
    for (const auto& A : constraints) {
        if (static_cast<int>(A.blocks.size()) != cone.blocks())
            throw std::invalid_argument("constraint block count mismatch");
        for (int k = 0; k < cone.blocks(); ++k)
            for (const auto& e : A.blocks[static_cast<size_t>(k)]) {
                int N = cone.block_sizes[static_cast<size_t>(k)];
                if (e.row < 0 || e.col < 0 || e.row >= N || e.col >= N)
                    throw std::invalid_argument("constraint entry out of block bounds");
            }
    }
}

Eigen::VectorXd apply_A(const ConicSdpProblem& P, const BlockSymMatrix& X) {
    if (!X.conforms(P.cone)) throw std::invalid_argument("apply_A: shape mismatch");
    Eigen::VectorXd out(P.m());
    for (int a = 0; a < P.m(); ++a) {
        double s = 0.0;
        const auto& A = P.constraints[static_cast<size_t>(a)];
        for (int k = 0; k < P.cone.blocks(); ++k) {
            const Eigen::MatrixXd& B = X.block(k);
            for (const auto& e : A.blocks[static_cast<size_t>(k)])
                s += (e.row == e.col) ? e.value * B(e.row, e.col)
                                      : 2.0 * e.value * B(e.row, e.col);
        }
        out(a) = s;
    }
    return out;
}

BlockSymMatrix apply_A_adjoint(const ConicSdpProblem& P, const Eigen::VectorXd& y) {
    if (y.size() != P.m()) throw std::invalid_argument("apply_A_adjoint: length mismatch");
    BlockSymMatrix out = BlockSymMatrix::zero(P.cone);
    for (int a = 0; a < P.m(); ++a) {
        double w = y(a);
        if (w == 0.0) continue;
        const auto& A = P.constraints[static_cast<size_t>(a)];
        for (int k = 0; k < P.cone.blocks(); ++k) {
            Eigen::MatrixXd& B = out.block(k);
            for (const auto& e : A.blocks[static_cast<size_t>(k)]) {
                B(e.row, e.col) += w * e.value;
                if (e.row != e.col) B(e.col, e.row) += w * e.value;
            }
        }
    }
    return out;
}

Eigen::MatrixXd apply_A_adjoint_block(const ConicSdpProblem& P, const Eigen::VectorXd& y, int k) {
    if (y.size() != P.m()) throw std::invalid_argument("apply_A_adjoint_block: length mismatch");
    int N = P.cone.block_sizes[static_cast<size_t>(k)];
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N, N);
    for (int a = 0; a < P.m(); ++a) {
        double w = y(a);
        if (w == 0.0) continue;
        for (const auto& e : P.constraints[static_cast<size_t>(a)].blocks[static_cast<size_t>(k)]) {
            B(e.row, e.col) += w * e.value;
            if (e.row != e.col) B(e.col, e.row) += w * e.value;
        }
    }
    return B;
}

void accumulate_A_block(const ConicSdpProblem& P, const Eigen::MatrixXd& M, int k,
                        Eigen::VectorXd& out) {
    for (int a = 0; a < P.m(); ++a) {
        double s = 0.0;
        for (const auto& e : P.constraints[static_cast<size_t>(a)].blocks[static_cast<size_t>(k)])
            s += (e.row == e.col) ? e.value * M(e.row, e.col) : 2.0 * e.value * M(e.row, e.col);
        out(a) += s;
    }
}

Eigen::VectorXd gram_diag(const ConicSdpProblem& P) {
    Eigen::VectorXd d(P.m());
    for (int a = 0; a < P.m(); ++a) d(a) = P.constraints[static_cast<size_t>(a)].self_inner();
    return d;
}

Eigen::MatrixXd dense_gram(const ConicSdpProblem& P) {
    const int m = P.m();
    Eigen::MatrixXd G(m, m);
    std::vector<BlockSymMatrix> dense;
    dense.reserve(static_cast<size_t>(m));
    for (int a = 0; a < m; ++a) {
        std::vector<Eigen::MatrixXd> blocks;
        for (int k = 0; k < P.cone.blocks(); ++k)
            blocks.push_back(P.constraints[static_cast<size_t>(a)].densify_block(
                k, P.cone.block_sizes[static_cast<size_t>(k)]));
        dense.emplace_back(std::move(blocks));
    }
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            double v = inner(dense[static_cast<size_t>(a)], dense[static_cast<size_t>(b)]);
            G(a, b) = v;
            G(b, a) = v;
        }
    return G;
}

KktResiduals kkt(const ConicSdpProblem& P, const BlockSymMatrix& X, const Eigen::VectorXd& y,
                 const BlockSymMatrix& Z) {
    KktResiduals r;
    r.primal = (P.rhs - apply_A(P, X)).norm();
    r.dual = norm(apply_A_adjoint(P, y) + Z - P.cost);
    r.gap = std::abs(inner(P.cost, X) - P.rhs.dot(y));
    r.compl_ = std::abs(inner(X, Z));
    return r;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_entries(std::ostream& out, const ConstraintMatrix& A) {
    for (size_t k = 0; k < A.blocks.size(); ++k)
        for (const auto& e : A.blocks[k])
            out << k << " " << e.row << " " << e.col << " " << fmt_double(e.value) << "\n";
}

size_t count_entries(const ConstraintMatrix& A) {
    size_t n = 0;
    for (const auto& blk : A.blocks) n += blk.size();
    return n;
}

}  // namespace

void write_problem(std::ostream& out, const ConicSdpProblem& P) {
    P.validate();
    const int n = P.labels.empty() ? 0 : P.labels.front().size();
    out << "sdp 1\n";
    out << "vars " << n << "\n";
    out << "blocks " << P.cone.blocks() << "\n";
    out << "sizes";
    for (int s : P.cone.block_sizes) out << " " << s;
    out << "\n";

    ConstraintMatrix costA(P.cone.blocks());
    for (int k = 0; k < P.cone.blocks(); ++k) {
        const Eigen::MatrixXd& B = P.cost.block(k);
        for (int i = 0; i < B.rows(); ++i)
            for (int j = i; j < B.cols(); ++j)
                if (B(i, j) != 0.0) costA.add(k, i, j, B(i, j));
    }
    out << "cost " << count_entries(costA) << "\n";
    write_entries(out, costA);

    out << "constraints " << P.m() << "\n";
    for (int a = 0; a < P.m(); ++a) {
        const auto& A = P.constraints[static_cast<size_t>(a)];
        out << "row";
        if (!P.labels.empty())
            for (int i = 0; i < n; ++i) out << " " << P.labels[static_cast<size_t>(a)][i];
        out << " nnz " << count_entries(A) << " rhs " << fmt_double(P.rhs(a)) << "\n";
        write_entries(out, A);
    }
}

void write_problem_file(const std::string& path, const ConicSdpProblem& P) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    write_problem(f, P);
}

namespace {

std::string next_data_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i < line.size() && line[i] != '#') return line;
    }
    throw std::runtime_error("sdp text: unexpected end of input");
}

}  // namespace

ConicSdpProblem read_problem(std::istream& in) {
    ConicSdpProblem P;
    std::istringstream h(next_data_line(in));
    std::string kw;
    int version = 0;
    if (!(h >> kw >> version) || kw != "sdp" || version != 1)
        throw std::runtime_error("sdp text: bad magic line");

    int n = 0, nblocks = 0;
    {
        std::istringstream s(next_data_line(in));
        if (!(s >> kw >> n) || kw != "vars") throw std::runtime_error("sdp text: expected vars");
    }
    {
        std::istringstream s(next_data_line(in));
        if (!(s >> kw >> nblocks) || kw != "blocks" || nblocks < 1)
            throw std::runtime_error("sdp text: expected blocks");
    }
    std::vector<int> sizes(static_cast<size_t>(nblocks));
    {
        std::istringstream s(next_data_line(in));
        if (!(s >> kw) || kw != "sizes") throw std::runtime_error("sdp text: expected sizes");
        for (auto& v : sizes)
            if (!(s >> v)) throw std::runtime_error("sdp text: bad sizes line");
    }
    P.cone = ConeSpec(sizes);

    long cost_nnz = 0;
    {
        std::istringstream s(next_data_line(in));
        if (!(s >> kw >> cost_nnz) || kw != "cost") throw std::runtime_error("sdp text: expected cost");
    }
    BlockSymMatrix C = BlockSymMatrix::zero(P.cone);
    for (long t = 0; t < cost_nnz; ++t) {
        std::istringstream s(next_data_line(in));
        int k, i, j;
        double v;
        if (!(s >> k >> i >> j >> v)) throw std::runtime_error("sdp text: bad cost entry");
        C.block(k)(i, j) += v;
        if (i != j) C.block(k)(j, i) += v;
    }
    P.cost = std::move(C);

    int m = 0;
    {
        std::istringstream s(next_data_line(in));
        if (!(s >> kw >> m) || kw != "constraints" || m < 1)
            throw std::runtime_error("sdp text: expected constraints");
    }
    P.rhs.resize(m);
    P.constraints.reserve(static_cast<size_t>(m));
    for (int a = 0; a < m; ++a) {
        std::istringstream s(next_data_line(in));
        if (!(s >> kw) || kw != "row") throw std::runtime_error("sdp text: expected row");
        std::vector<int> e(static_cast<size_t>(n));
        for (auto& v : e)
            if (!(s >> v)) throw std::runtime_error("sdp text: bad row label");
        long nnz = 0;
        double rhs = 0.0;
        if (!(s >> kw >> nnz) || kw != "nnz") throw std::runtime_error("sdp text: expected nnz");
        if (!(s >> kw >> rhs) || kw != "rhs") throw std::runtime_error("sdp text: expected rhs");
        ConstraintMatrix A(P.cone.blocks());
        for (long t = 0; t < nnz; ++t) {
            std::istringstream es(next_data_line(in));
            int k, i, j;
            double v;
            if (!(es >> k >> i >> j >> v)) throw std::runtime_error("sdp text: bad constraint entry");
            A.add(k, i, j, v);
        }
        P.constraints.push_back(std::move(A));
        P.rhs(a) = rhs;
        if (n > 0) P.labels.emplace_back(e);
    }
    P.validate();
    return P;
}

ConicSdpProblem read_problem_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open problem file: " + path);
    return read_problem(f);
}

}  // namespace sosreg
