#ifndef GEVREYLAB_MULTI_INDEX_HPP
#define GEVREYLAB_MULTI_INDEX_HPP

#include <functional>
#include <numeric>
#include <sstream>

#include "gevreylab/common.hpp"

namespace gevreylab {

// Exponent tuple Q = (q_1,...,q_n), q_i >= 0.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> q) : q_(std::move(q)) {
        for (int v : q_)
            if (v < 0) throw structural_error("MultiIndex: negative exponent");
    }
    static MultiIndex zero(int n) { return MultiIndex(std::vector<int>(n, 0)); }
    static MultiIndex unit(int n, int l) {
        std::vector<int> q(n, 0);
        q[l] = 1;
        return MultiIndex(std::move(q));
    }

    int dim() const { return static_cast<int>(q_.size()); }
    int degree() const { return std::accumulate(q_.begin(), q_.end(), 0); }
    int operator[](int i) const { return q_[i]; }
    const std::vector<int>& entries() const { return q_; }

    bool operator==(const MultiIndex& o) const { return q_ == o.q_; }
    bool operator!=(const MultiIndex& o) const { return q_ != o.q_; }

    MultiIndex operator+(const MultiIndex& o) const {
        check_dim(o);
        std::vector<int> r(q_);
        for (int i = 0; i < dim(); ++i) r[i] += o.q_[i];
        return MultiIndex(std::move(r));
    }
    // Componentwise subtraction; requires the result to stay nonnegative.
    MultiIndex operator-(const MultiIndex& o) const {
        check_dim(o);
        std::vector<int> r(q_);
        for (int i = 0; i < dim(); ++i) {
            r[i] -= o.q_[i];
            if (r[i] < 0) throw structural_error("MultiIndex: subtraction below zero");
        }
        return MultiIndex(std::move(r));
    }
    bool dominates(const MultiIndex& o) const {  // componentwise >=
        check_dim(o);
        for (int i = 0; i < dim(); ++i)
            if (q_[i] < o.q_[i]) return false;
        return true;
    }

    int gcd() const {
        int g = 0;
        for (int v : q_) g = std::gcd(g, v);
        return g;
    }
    // q == l*r for a nonnegative integer l? (exact integer arithmetic)
    bool is_multiple_of(const MultiIndex& r, int* l_out = nullptr) const {
        check_dim(r);
        long l = -1;
        for (int i = 0; i < dim(); ++i) {
            if (r.q_[i] == 0) {
                if (q_[i] != 0) return false;
            } else {
                if (q_[i] % r.q_[i] != 0) return false;
                long li = q_[i] / r.q_[i];
                if (l < 0) l = li;
                else if (l != li) return false;
            }
        }
        if (l < 0) l = 0;  // r has a zero in every position q does; q == 0
        if (l_out) *l_out = static_cast<int>(l);
        return true;
    }

    std::string str() const {
        std::ostringstream os;
        os << '(';
        for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << q_[i];
        os << ')';
        return os.str();
    }

private:
    void check_dim(const MultiIndex& o) const {
        if (o.dim() != dim()) throw structural_error("MultiIndex: dimension mismatch");
    }
    std::vector<int> q_;
};

// Graded lexicographic order: by degree, then lex with earlier variables
// dominant (x1^2 precedes x1 x2 precedes x2^2).
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.entries() > b.entries();
    }
};

namespace detail {
template <typename Fn>
void enum_degree_rec(std::vector<int>& q, int pos, int rem, Fn& fn) {
    if (pos == static_cast<int>(q.size()) - 1) {
        q[pos] = rem;
        fn(q);
        return;
    }
    for (int v = rem; v >= 0; --v) {
        q[pos] = v;
        enum_degree_rec(q, pos + 1, rem - v, fn);
    }
}
}  // namespace detail

// Visit all Q with |Q| = m (dim n) in graded-lex order (see GradedLexLess).
template <typename Fn>
void for_each_degree(int n, int m, Fn fn) {
    if (n <= 0) return;
    std::vector<int> q(n, 0);
    auto wrap = [&fn](std::vector<int>& e) { fn(MultiIndex(e)); };
    detail::enum_degree_rec(q, 0, m, wrap);
}

// Visit all Q with lo <= |Q| <= hi in graded-lex order.
template <typename Fn>
void for_each_degree_range(int n, int lo, int hi, Fn fn) {
    for (int m = lo; m <= hi; ++m) for_each_degree(n, m, fn);
}

// #{Q : |Q| = m} = C(n+m-1, n-1)
inline double count_degree(int n, int m) {
    double c = 1.0;
    for (int i = 1; i <= n - 1; ++i) c = c * (m + i) / i;
    return std::round(c);
}

}  // namespace gevreylab

#endif
