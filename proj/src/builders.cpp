#include "sosreg/builders.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace sosreg {

std::string to_string(Family f) {
    switch (f) {
        case Family::Unconstrained: return "unconstrained";
        case Family::Homogeneous: return "homogeneous";
        case Family::Lasserre: return "lasserre";
        case Family::SparseLasserre: return "sparse-lasserre";
    }
    return "unknown";
}

Family family_from_string(const std::string& s) {
    if (s == "unconstrained") return Family::Unconstrained;
    if (s == "homogeneous") return Family::Homogeneous;
    if (s == "lasserre" || s == "constrained") return Family::Lasserre;
    if (s == "sparse-lasserre" || s == "sparse") return Family::SparseLasserre;
    throw std::invalid_argument("unknown relaxation family: " + s);
}

std::string to_string(PrecondPayload::Kind k) {
    switch (k) {
        case PrecondPayload::Kind::ExactDiagonal: return "exact-diagonal";
        case PrecondPayload::Kind::DiagMinusRankOne: return "diag-minus-rank-one";
        case PrecondPayload::Kind::DiagonalOfGram: return "diagonal-of-gram";
    }
    return "unknown";
}

LinearMap PrecondPayload::apply() const {
    if (kind == Kind::DiagMinusRankOne) {
        Eigen::VectorXd h = diag, q = p;
        return [h, q](const Eigen::VectorXd& w) {
            return ((h.array() * w.array()).matrix() - q * q.dot(w)).eval();
        };
    }
    Eigen::VectorXd inv = (kind == Kind::DiagonalOfGram) ? diag.cwiseInverse().eval() : diag;
    return diagonal_map(inv);
}

Eigen::MatrixXd PrecondPayload::densify() const {
    Eigen::VectorXd d = (kind == Kind::DiagonalOfGram) ? diag.cwiseInverse().eval() : diag;
    Eigen::MatrixXd M = d.asDiagonal();
    if (kind == Kind::DiagMinusRankOne) M -= p * p.transpose();
    return M;
}

namespace {

double multinomial(const MultiIndex& a) {
    // |a|! / (a1! ... an!), accumulated as product of binomials
    double r = 1.0;
    int s = 0;
    for (int i = 0; i < a.size(); ++i) {
        s += a[i];
        r *= static_cast<double>(binomial(s, a[i]));
    }
    return r;
}

MultiIndex zero_index(int n) { return MultiIndex(std::vector<int>(static_cast<size_t>(n), 0)); }

}  // namespace

RelaxationArtifact build_unconstrained(const Polynomial& f) {
    if (f.empty()) throw std::invalid_argument("build_unconstrained: zero polynomial");
    const int n = f.vars();
    const int deg = f.degree();
    if (deg < 2 || deg % 2 != 0)
        throw std::invalid_argument("build_unconstrained: degree must be even and >= 2");
    const int d = deg / 2;

    MonomialBasis half = basis_up_to(n, d);
    MonomialBasis full = basis_up_to(n, 2 * d);
    MonomialIndexer lookup(full);
    const int N = half.size();
    const int m = full.size() - 1;  // constant row is absorbed by gamma

    RelaxationArtifact art;
    art.family = Family::Unconstrained;
    art.problem.cone = ConeSpec({N});
    art.problem.constraints.assign(static_cast<size_t>(m), ConstraintMatrix(1));
    art.problem.labels.assign(full.entries.begin() + 1, full.entries.end());

    // [x]_d [x]_d' = C + sum_alpha A_alpha x^alpha, all entries 0/1
    BlockSymMatrix C = BlockSymMatrix::zero(art.problem.cone);
    C.block(0)(0, 0) = 1.0;
    art.problem.cost = C;
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) {
            int row = lookup.find(half[i] + half[j]);
            if (row > 0) art.problem.constraints[static_cast<size_t>(row - 1)].add(0, i, j, 1.0);
        }

    art.problem.rhs.resize(m);
    for (int a = 0; a < m; ++a)
        art.problem.rhs(a) = f.coeff(art.problem.labels[static_cast<size_t>(a)]);
    art.bound_offset = f.coeff(zero_index(n));

    art.precond.kind = PrecondPayload::Kind::ExactDiagonal;
    art.precond.diag.resize(m);
    for (int a = 0; a < m; ++a)
        art.precond.diag(a) = 1.0 / art.problem.constraints[static_cast<size_t>(a)].ones_quadratic_form();

    art.schema.moment_block = 0;
    art.schema.vars = n;
    art.schema.degree = d;
    art.schema.homogeneous = false;
    art.problem.validate();
    return art;
}

RelaxationArtifact build_homogeneous(const Polynomial& f) {
    if (f.empty()) throw std::invalid_argument("build_homogeneous: zero polynomial");
    if (!f.is_homogeneous())
        throw std::invalid_argument("build_homogeneous: polynomial is not homogeneous");
    const int n = f.vars();
    const int deg = f.degree();
    if (deg < 2 || deg % 2 != 0)
        throw std::invalid_argument("build_homogeneous: degree must be even (use odd_to_even first)");
    const int d = deg / 2;

    MonomialBasis half = basis_exact(n, d);
    MonomialBasis full = basis_exact(n, 2 * d);
    MonomialIndexer lookup(full);
    const int N = half.size();
    const int m = full.size() - 1;  // 2d*e1 row fixes gamma

    // 2d*e1 is the first entry of the graded basis, so constraint row k
    // corresponds to full[k + 1]
    RelaxationArtifact art;
    art.family = Family::Homogeneous;
    art.problem.cone = ConeSpec({N});
    art.problem.constraints.assign(static_cast<size_t>(m), ConstraintMatrix(1));
    art.problem.labels.assign(full.entries.begin() + 1, full.entries.end());

    BlockSymMatrix C = BlockSymMatrix::zero(art.problem.cone);
    C.block(0)(0, 0) = 1.0;  // H_{2d e1}: basis starts at d*e1
    art.problem.cost = C;

    // H_alpha from [x^d][x^d]'; A_alpha = H_alpha - r_alpha H_{2d e1}
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) {
            int row = lookup.find(half[i] + half[j]);
            if (row > 0) art.problem.constraints[static_cast<size_t>(row - 1)].add(0, i, j, 1.0);
        }
    Eigen::VectorXd r(m), hdiag(m);
    for (int a = 0; a < m; ++a) {
        const MultiIndex& alpha = art.problem.labels[static_cast<size_t>(a)];
        hdiag(a) = art.problem.constraints[static_cast<size_t>(a)].ones_quadratic_form();
        r(a) = alpha.all_even() ? multinomial(alpha.half()) : 0.0;
        if (r(a) != 0.0) art.problem.constraints[static_cast<size_t>(a)].add(0, 0, 0, -r(a));
    }

    const double f_top = f.coeff(art.problem.labels.empty() ? zero_index(n) : full[0]);
    art.problem.rhs.resize(m);
    for (int a = 0; a < m; ++a)
        art.problem.rhs(a) = f.coeff(art.problem.labels[static_cast<size_t>(a)]) - r(a) * f_top;
    art.bound_offset = f_top;

    // (AA*)^{-1} = diag(h) - pp' by Sherman-Morrison on AA* = HH* + rr'
    art.precond.kind = PrecondPayload::Kind::DiagMinusRankOne;
    art.precond.diag = hdiag.cwiseInverse();
    Eigen::VectorXd hr = (art.precond.diag.array() * r.array()).matrix();
    art.precond.p = hr / std::sqrt(1.0 + r.dot(hr));

    art.schema.moment_block = 0;
    art.schema.vars = n;
    art.schema.degree = d;
    art.schema.homogeneous = true;
    art.problem.validate();
    return art;
}

std::pair<Polynomial, double> odd_to_even(const Polynomial& f) {
    if (f.empty()) throw std::invalid_argument("odd_to_even: zero polynomial");
    if (!f.is_homogeneous()) throw std::invalid_argument("odd_to_even: polynomial is not homogeneous");
    const int deg = f.degree();
    if (deg % 2 == 0) throw std::invalid_argument("odd_to_even: degree is even");
    const int n = f.vars();
    const int d = (deg + 1) / 2;  // deg = 2d - 1

    Polynomial fhat(n + 1);
    for (const auto& [a, c] : f.terms()) {
        std::vector<int> e = a.exps;
        e.push_back(1);  // multiply by the slack variable t
        fhat.add_term(MultiIndex(e), c);
    }
    double scale = std::sqrt(2.0 * d - 1.0) * std::pow(1.0 - 1.0 / (2.0 * d), -d);
    return {fhat, scale};
}

RelaxationArtifact build_lasserre(const Polynomial& f, const std::vector<Polynomial>& g, int d) {
    if (f.empty()) throw std::invalid_argument("build_lasserre: zero objective");
    const int n = f.vars();
    if (2 * d < f.degree())
        throw std::invalid_argument("build_lasserre: relaxation order too small for f");
    std::vector<int> block_deg{d};  // g_0 = 1
    for (const auto& gi : g) {
        if (gi.vars() != n) throw std::invalid_argument("build_lasserre: variable count mismatch");
        if (gi.empty()) throw std::invalid_argument("build_lasserre: zero constraint polynomial");
        if (gi.degree() == 0 && gi.coeff(zero_index(n)) <= 0)
            throw std::invalid_argument("build_lasserre: nonpositive constant constraint");
        int di = (gi.degree() + 1) / 2;
        if (d - di < 0) throw std::invalid_argument("build_lasserre: relaxation order too small for g");
        block_deg.push_back(d - di);
    }
    const int nblocks = static_cast<int>(block_deg.size());

    std::vector<MonomialBasis> bases;
    std::vector<int> sizes;
    for (int k = 0; k < nblocks; ++k) {
        bases.push_back(basis_up_to(n, block_deg[static_cast<size_t>(k)]));
        sizes.push_back(bases.back().size());
    }

    MonomialBasis full = basis_up_to(n, 2 * d);
    MonomialIndexer lookup(full);
    const int m = full.size() - 1;

    RelaxationArtifact art;
    art.family = Family::Lasserre;
    art.problem.cone = ConeSpec(sizes);
    art.problem.constraints.assign(static_cast<size_t>(m), ConstraintMatrix(nblocks));
    art.problem.labels.assign(full.entries.begin() + 1, full.entries.end());
    BlockSymMatrix C = BlockSymMatrix::zero(art.problem.cone);

    Polynomial one = Polynomial::constant(n, 1.0);
    for (int k = 0; k < nblocks; ++k) {
        const Polynomial& gk = (k == 0) ? one : g[static_cast<size_t>(k - 1)];
        const MonomialBasis& bk = bases[static_cast<size_t>(k)];
        for (int i = 0; i < bk.size(); ++i)
            for (int j = i; j < bk.size(); ++j) {
                MultiIndex pair = bk[i] + bk[j];
                for (const auto& [mu, c] : gk.terms()) {
                    int row = lookup.find(pair + mu);
                    if (row < 0)
                        throw std::logic_error("build_lasserre: monomial outside degree bound");
                    if (row == 0) {
                        C.block(k)(i, j) += c;
                        if (i != j) C.block(k)(j, i) += c;
                    } else {
                        art.problem.constraints[static_cast<size_t>(row - 1)].add(k, i, j, c);
                    }
                }
            }
    }
    art.problem.cost = C;
    art.problem.rhs.resize(m);
    for (int a = 0; a < m; ++a)
        art.problem.rhs(a) = f.coeff(art.problem.labels[static_cast<size_t>(a)]);
    art.bound_offset = f.coeff(zero_index(n));

    art.precond.kind = PrecondPayload::Kind::DiagonalOfGram;
    art.precond.diag = gram_diag(art.problem).cwiseMax(1e-300);

    art.schema.moment_block = 0;
    art.schema.vars = n;
    art.schema.degree = d;
    art.schema.homogeneous = false;
    art.problem.validate();
    return art;
}

namespace {

// restriction of a global monomial to clique variables; nullopt when the
// monomial involves variables outside the clique
std::optional<MultiIndex> restrict_to(const MultiIndex& a, const std::vector<int>& vars) {
    std::vector<int> e(vars.size(), 0);
    int covered = 0;
    for (size_t i = 0; i < vars.size(); ++i) {
        e[i] = a[vars[i]];
        covered += e[i];
    }
    return covered == a.degree() ? std::optional<MultiIndex>(MultiIndex(e)) : std::nullopt;
}

MultiIndex lift_to_global(const MultiIndex& local, const std::vector<int>& vars, int n) {
    std::vector<int> e(static_cast<size_t>(n), 0);
    for (size_t i = 0; i < vars.size(); ++i) e[static_cast<size_t>(vars[i])] = local[static_cast<int>(i)];
    return MultiIndex(e);
}

std::vector<std::vector<int>> chordal_cliques(int n, const std::vector<std::set<int>>& adj0) {
    // greedy minimum-degree elimination; cliques are v plus its not-yet
    // eliminated neighbours, with dominated cliques dropped
    std::vector<std::set<int>> adj = adj0;
    std::vector<bool> gone(static_cast<size_t>(n), false);
    std::vector<std::set<int>> cliques;
    for (int round = 0; round < n; ++round) {
        int best = -1;
        size_t best_deg = 0;
        for (int v = 0; v < n; ++v) {
            if (gone[static_cast<size_t>(v)]) continue;
            size_t deg = adj[static_cast<size_t>(v)].size();
            if (best < 0 || deg < best_deg) {
                best = v;
                best_deg = deg;
            }
        }
        std::set<int> clique = adj[static_cast<size_t>(best)];
        clique.insert(best);
        cliques.push_back(clique);
        // eliminate: connect the remaining neighbours pairwise
        for (int u : adj[static_cast<size_t>(best)])
            for (int w : adj[static_cast<size_t>(best)])
                if (u != w) adj[static_cast<size_t>(u)].insert(w);
        for (int u : adj[static_cast<size_t>(best)]) adj[static_cast<size_t>(u)].erase(best);
        gone[static_cast<size_t>(best)] = true;
        adj[static_cast<size_t>(best)].clear();
    }
    std::vector<std::vector<int>> out;
    for (size_t i = 0; i < cliques.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < cliques.size() && !dominated; ++j)
            if (i != j &&
                std::includes(cliques[j].begin(), cliques[j].end(), cliques[i].begin(),
                              cliques[i].end()) &&
                (cliques[j].size() > cliques[i].size() || j < i))
            dominated = true;
        if (!dominated) out.emplace_back(cliques[i].begin(), cliques[i].end());
    }
    return out;
}

}  // namespace

RelaxationArtifact build_sparse_lasserre(const Polynomial& f,
                                         const std::vector<SparseConstraint>& g,
                                         std::vector<std::vector<int>> cliques, int d) {
    if (f.empty()) throw std::invalid_argument("build_sparse_lasserre: zero objective");
    const int n = f.vars();
    if (2 * d < f.degree())
        throw std::invalid_argument("build_sparse_lasserre: relaxation order too small for f");

    for (const auto& sc : g) {
        if (sc.g.vars() != n) throw std::invalid_argument("build_sparse_lasserre: variable count mismatch");
        for (int v : sc.support)
            if (v < 0 || v >= n) throw std::invalid_argument("build_sparse_lasserre: support out of range");
        for (const auto& [a, c] : sc.g.terms())
            if (!restrict_to(a, sc.support))
                throw std::invalid_argument("build_sparse_lasserre: g_j not supported on I_j");
        int dj = (sc.g.degree() + 1) / 2;
        if (d - dj < 0) throw std::invalid_argument("build_sparse_lasserre: order too small for g_j");
    }

    if (cliques.empty()) {
        std::vector<std::set<int>> adj(static_cast<size_t>(n));
        auto connect = [&](const std::vector<int>& vs) {
            for (size_t i = 0; i < vs.size(); ++i)
                for (size_t j = i + 1; j < vs.size(); ++j) {
                    adj[static_cast<size_t>(vs[i])].insert(vs[j]);
                    adj[static_cast<size_t>(vs[j])].insert(vs[i]);
                }
        };
        for (const auto& [a, c] : f.terms()) {
            std::vector<int> vs;
            for (int i = 0; i < n; ++i)
                if (a[i] > 0) vs.push_back(i);
            connect(vs);
        }
        for (const auto& sc : g) connect(sc.support);
        cliques = chordal_cliques(n, adj);
    }
    for (auto& cl : cliques) {
        std::sort(cl.begin(), cl.end());
        cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
        if (cl.empty()) throw std::invalid_argument("build_sparse_lasserre: empty clique");
        for (int v : cl)
            if (v < 0 || v >= n) throw std::invalid_argument("build_sparse_lasserre: clique out of range");
    }

    const int r = static_cast<int>(cliques.size());
    const int nblocks = r + static_cast<int>(g.size());
    std::vector<MonomialBasis> bases;
    std::vector<std::vector<int>> block_vars;
    std::vector<int> sizes;
    for (int k = 0; k < r; ++k) {
        bases.push_back(basis_up_to(static_cast<int>(cliques[static_cast<size_t>(k)].size()), d));
        block_vars.push_back(cliques[static_cast<size_t>(k)]);
        sizes.push_back(bases.back().size());
    }
    for (const auto& sc : g) {
        int dj = (sc.g.degree() + 1) / 2;
        std::vector<int> vars = sc.support;
        std::sort(vars.begin(), vars.end());
        vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
        bases.push_back(basis_up_to(static_cast<int>(vars.size()), d - dj));
        block_vars.push_back(vars);
        sizes.push_back(bases.back().size());
    }

    // W: every nonconstant monomial reachable by the blocks, plus supp(f)
    std::map<MultiIndex, int, GradedLess> wset;
    Polynomial one = Polynomial::constant(n, 1.0);
    auto visit_block = [&](int k, auto&& fn) {
        const MonomialBasis& bk = bases[static_cast<size_t>(k)];
        const std::vector<int>& vars = block_vars[static_cast<size_t>(k)];
        const Polynomial& gk = (k < r) ? one : g[static_cast<size_t>(k - r)].g;
        for (int i = 0; i < bk.size(); ++i)
            for (int j = i; j < bk.size(); ++j) {
                MultiIndex pair = lift_to_global(bk[i] + bk[j], vars, n);
                for (const auto& [mu, c] : gk.terms()) fn(pair + mu, k, i, j, c);
            }
    };
    for (int k = 0; k < nblocks; ++k)
        visit_block(k, [&](const MultiIndex& a, int, int, int, double) {
            if (a.degree() > 0) wset.emplace(a, 0);
        });
    for (const auto& [a, c] : f.terms())
        if (a.degree() > 0 && !wset.count(a))
            throw std::invalid_argument("build_sparse_lasserre: clique cover misses a monomial of f");

    const int m = static_cast<int>(wset.size());
    if (m == 0) throw std::invalid_argument("build_sparse_lasserre: no constraints");
    RelaxationArtifact art;
    art.family = Family::SparseLasserre;
    art.problem.cone = ConeSpec(sizes);
    art.problem.constraints.assign(static_cast<size_t>(m), ConstraintMatrix(nblocks));
    {
        int idx = 0;
        for (auto& [a, pos] : wset) {
            pos = idx++;
            art.problem.labels.push_back(a);
        }
    }

    BlockSymMatrix C = BlockSymMatrix::zero(art.problem.cone);
    for (int k = 0; k < nblocks; ++k)
        visit_block(k, [&](const MultiIndex& a, int blk, int i, int j, double c) {
            if (a.degree() == 0) {
                C.block(blk)(i, j) += c;
                if (i != j) C.block(blk)(j, i) += c;
            } else {
                art.problem.constraints[static_cast<size_t>(wset.at(a))].add(blk, i, j, c);
            }
        });
    art.problem.cost = C;

    art.problem.rhs.resize(m);
    for (int a = 0; a < m; ++a)
        art.problem.rhs(a) = f.coeff(art.problem.labels[static_cast<size_t>(a)]);
    art.bound_offset = f.coeff(zero_index(n));

    art.precond.kind = PrecondPayload::Kind::DiagonalOfGram;
    art.precond.diag = gram_diag(art.problem).cwiseMax(1e-300);

    art.schema.moment_block = 0;
    art.schema.vars = n;
    art.schema.degree = d;
    art.schema.homogeneous = false;
    art.schema.cliques = cliques;
    art.schema.block_vars = block_vars;
    art.problem.validate();
    return art;
}

Polynomial stability_polynomial(const std::vector<std::pair<int, int>>& edges, int n) {
    if (n < 1) throw std::invalid_argument("stability_polynomial: need n >= 1");
    Polynomial f(n);
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("edge out of range");
        if (u == v) throw std::invalid_argument("self-loop not allowed");
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second) throw std::invalid_argument("duplicate edge");
    }
    for (int i = 0; i < n; ++i) {
        std::vector<int> e(static_cast<size_t>(n), 0);
        e[static_cast<size_t>(i)] = 4;
        f.add_term(MultiIndex(e), 1.0);
    }
    for (auto [u, v] : seen) {
        std::vector<int> e(static_cast<size_t>(n), 0);
        e[static_cast<size_t>(u)] = 2;
        e[static_cast<size_t>(v)] = 2;
        f.add_term(MultiIndex(e), 2.0);
    }
    return f;
}

double recover_bound(const RelaxationArtifact& art, double sdp_primal_objective) {
    double f_sos = -sdp_primal_objective + art.bound_offset;
    if (art.odd_scale) f_sos *= *art.odd_scale;
    return f_sos;
}

LinearMap preconditioner_map(const RelaxationArtifact& art, PrecondKind kind) {
    switch (kind) {
        case PrecondKind::None: return identity_map();
        case PrecondKind::Diag: {
            Eigen::VectorXd d = gram_diag(art.problem).cwiseMax(1e-300);
            return diagonal_map(d.cwiseInverse());
        }
        case PrecondKind::Exact: return art.precond.apply();
    }
    return identity_map();
}

}  // namespace sosreg
