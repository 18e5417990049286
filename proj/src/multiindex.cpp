#include "sosreg/multiindex.hpp"

#include <algorithm>
#include <limits>

namespace sosreg {

std::string MultiIndex::to_string() const {
    std::string s = "(";
    for (int i = 0; i < size(); ++i) {
        if (i) s += ",";
        s += std::to_string(exps[static_cast<size_t>(i)]);
    }
    s += ")";
    return s;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) throw std::invalid_argument("multi-index dimension mismatch");
    MultiIndex c = a;
    for (int i = 0; i < b.size(); ++i) c[i] += b[i];
    return c;
}

bool graded_less(const MultiIndex& a, const MultiIndex& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    // within a grade, larger leading exponents come first
    return std::lexicographical_compare(b.exps.begin(), b.exps.end(), a.exps.begin(), a.exps.end());
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        std::int64_t num = n - k + i;
        if (r > std::numeric_limits<std::int64_t>::max() / num)
            throw std::overflow_error("binomial overflow");
        r = r * num / i;
    }
    return r;
}

namespace {

void enumerate_exact(int n, int d, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
    if (static_cast<int>(prefix.size()) == n - 1) {
        prefix.push_back(d);
        out.emplace_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int e = d; e >= 0; --e) {
        prefix.push_back(e);
        enumerate_exact(n, d - e, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

MonomialBasis basis_up_to(int n, int d) {
    if (n < 1 || d < 0) throw std::invalid_argument("basis_up_to: need n >= 1, d >= 0");
    MonomialBasis b;
    b.n = n;
    b.d = d;
    b.exact = false;
    b.entries.reserve(static_cast<size_t>(binomial(n + d, d)));
    std::vector<int> prefix;
    for (int k = 0; k <= d; ++k) enumerate_exact(n, k, prefix, b.entries);
    return b;
}

MonomialBasis basis_exact(int n, int d) {
    if (n < 1 || d < 0) throw std::invalid_argument("basis_exact: need n >= 1, d >= 0");
    MonomialBasis b;
    b.n = n;
    b.d = d;
    b.exact = true;
    b.entries.reserve(static_cast<size_t>(binomial(n + d - 1, d)));
    std::vector<int> prefix;
    enumerate_exact(n, d, prefix, b.entries);
    return b;
}

int index_of(const MonomialBasis& basis, const MultiIndex& alpha) {
    auto it = std::lower_bound(basis.entries.begin(), basis.entries.end(), alpha, GradedLess{});
    if (it == basis.entries.end() || !(*it == alpha))
        throw std::out_of_range("monomial not in basis: " + alpha.to_string());
    return static_cast<int>(it - basis.entries.begin());
}

MonomialIndexer::MonomialIndexer(const MonomialBasis& basis) {
    table_.reserve(basis.entries.size() * 2);
    for (int i = 0; i < basis.size(); ++i) table_.emplace(key(basis[i]), i);
}

int MonomialIndexer::find(const MultiIndex& alpha) const {
    auto it = table_.find(key(alpha));
    return it == table_.end() ? -1 : it->second;
}

std::string MonomialIndexer::key(const MultiIndex& alpha) {
    std::string k(static_cast<size_t>(alpha.size()), '\0');
    for (int i = 0; i < alpha.size(); ++i) {
        int e = alpha[i];
        if (e < 0 || e > 255) throw std::out_of_range("exponent out of key range");
        k[static_cast<size_t>(i)] = static_cast<char>(static_cast<unsigned char>(e));
    }
    return k;
}

}  // namespace sosreg
