#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace sosreg {

/// Exponent vector of a monomial x1^e1 ... xn^en.
struct MultiIndex {
    std::vector<int> exps;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> e) : exps(std::move(e)) {}
    MultiIndex(std::initializer_list<int> e) : exps(e) {}

    int size() const { return static_cast<int>(exps.size()); }
    int operator[](int i) const { return exps[static_cast<size_t>(i)]; }
    int& operator[](int i) { return exps[static_cast<size_t>(i)]; }

    int degree() const {
        int s = 0;
        for (int e : exps) s += e;
        return s;
    }

    bool all_even() const {
        for (int e : exps)
            if (e % 2 != 0) return false;
        return true;
    }

    MultiIndex half() const {
        MultiIndex h = *this;
        for (int& e : h.exps) e /= 2;
        return h;
    }

    bool operator==(const MultiIndex& o) const { return exps == o.exps; }
    bool operator!=(const MultiIndex& o) const { return exps != o.exps; }

    std::string to_string() const;
};

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);

/// Graded order: lower total degree first; within a grade, x1-heaviest
/// lexicographic (so x1^d precedes x1^{d-1}x2, matching the monomial
/// vector convention used throughout).
bool graded_less(const MultiIndex& a, const MultiIndex& b);

struct GradedLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        return graded_less(a, b);
    }
};

/// Binomial coefficient as a 64-bit integer; throws on overflow.
std::int64_t binomial(int n, int k);

/// Ordered list of monomials, either all degrees up to d or exactly d.
struct MonomialBasis {
    int n = 0;
    int d = 0;
    bool exact = false;  // true: degree == d only; false: degrees 0..d
    std::vector<MultiIndex> entries;

    int size() const { return static_cast<int>(entries.size()); }
    const MultiIndex& operator[](int i) const { return entries[static_cast<size_t>(i)]; }
};

/// All monomials of degree <= d in n variables; length C(n+d, d).
MonomialBasis basis_up_to(int n, int d);

/// All monomials of degree exactly d in n variables; length C(n+d-1, d).
MonomialBasis basis_exact(int n, int d);

/// Position of a monomial in the basis (binary search on the graded order).
/// Throws std::out_of_range if the monomial is not an entry.
int index_of(const MonomialBasis& basis, const MultiIndex& alpha);

/// Hash-based exponent -> index lookup used by the relaxation assemblers.
class MonomialIndexer {
  public:
    explicit MonomialIndexer(const MonomialBasis& basis);
    /// Returns the basis position of alpha, or -1 when absent.
    int find(const MultiIndex& alpha) const;

  private:
    static std::string key(const MultiIndex& alpha);
    std::unordered_map<std::string, int> table_;
};

}  // namespace sosreg
