#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sosreg/conic_problem.hpp"
#include "sosreg/polynomial.hpp"
#include "sosreg/solver.hpp"

namespace sosreg {

enum class Family { Unconstrained, Homogeneous, Lasserre, SparseLasserre };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

/// Closed-form or diagonal payload for the (AA*)^{-1} preconditioner.
struct PrecondPayload {
    enum class Kind { ExactDiagonal, DiagMinusRankOne, DiagonalOfGram };
    Kind kind = Kind::DiagonalOfGram;
    Eigen::VectorXd diag;  // a (exact), h (rank-one case) or diag(AA*)
    Eigen::VectorXd p;     // only for DiagMinusRankOne

    /// The linear map w -> (AA*)^{-1} w (or its diagonal approximation).
    LinearMap apply() const;
    /// Densified payload, for diagnostics and equivalence tests.
    Eigen::MatrixXd densify() const;
};

std::string to_string(PrecondPayload::Kind k);

/// Where extraction should look for the moment structure.
struct ExtractionSchema {
    int moment_block = 0;
    int vars = 0;
    int degree = 0;
    bool homogeneous = false;                // block basis is [x^d] instead of [x]_d
    std::vector<std::vector<int>> cliques;   // sparse family: 0-based clique variables
    std::vector<std::vector<int>> block_vars;  // sparse family: variables of every block
};

/// A compiled relaxation: the conic SDP plus everything needed afterwards
/// (bound recovery, preconditioning, extraction).
struct RelaxationArtifact {
    ConicSdpProblem problem;
    Family family = Family::Unconstrained;
    double bound_offset = 0.0;            // f_0, or f_{2d e1} for the homogeneous family
    std::optional<double> odd_scale;      // odd-form pipelines only
    PrecondPayload precond;
    ExtractionSchema schema;
};

/// SOS relaxation of min f(x) over R^n: single moment block of size
/// C(n+d, d), one constraint per monomial 0 < |alpha| <= 2d.
RelaxationArtifact build_unconstrained(const Polynomial& f);

/// SOS relaxation of min f(x) over the unit sphere for an even form of
/// degree 2d: block [x^d], constraints indexed by N_{2d} minus 2d*e1, and a
/// diagonal-minus-rank-one closed form for (AA*)^{-1}.
RelaxationArtifact build_homogeneous(const Polynomial& f);

/// Transform an odd form of degree 2d-1 into the even form f(x)*t in n+1
/// variables; returns the bound scaling sqrt(2d-1) * (1 - 1/(2d))^{-d}.
std::pair<Polynomial, double> odd_to_even(const Polynomial& f);

/// Lasserre relaxation of order d for min f s.t. g_i >= 0: blocks
/// g_0 = 1, g_1, ..., g_l with sizes C(n+d-d_i, d-d_i).
RelaxationArtifact build_lasserre(const Polynomial& f, const std::vector<Polynomial>& g, int d);

/// One inequality constraint of a sparse problem: the polynomial and the
/// 0-based variables it involves.
struct SparseConstraint {
    Polynomial g;
    std::vector<int> support;
};

/// Sparse Lasserre relaxation of order d. When cliques is empty, maximal
/// cliques of a greedy (minimum-degree) chordal extension of the
/// correlative sparsity graph are used.
RelaxationArtifact build_sparse_lasserre(const Polynomial& f,
                                         const std::vector<SparseConstraint>& g,
                                         std::vector<std::vector<int>> cliques, int d);

/// The quartic form sum x_i^4 + 2 sum_{(i,j) in E} x_i^2 x_j^2 whose sphere
/// minimum is 1/alpha(G). Edges are 0-based vertex pairs.
Polynomial stability_polynomial(const std::vector<std::pair<int, int>>& edges, int n);

/// f_sos from a solved relaxation: -objective + offset, times the odd-form
/// scale when present.
double recover_bound(const RelaxationArtifact& art, double sdp_primal_objective);

/// The preconditioner map selected by kind, falling back to the payload.
LinearMap preconditioner_map(const RelaxationArtifact& art, PrecondKind kind);

}  // namespace sosreg
