#pragma once

// Real symmetric eigenvalue solvers (banded and dense storage) and
// numerically stable log-domain reductions.
//
// Banded matrices are reduced to tridiagonal form by Givens bulge chasing,
// dense ones by Householder reflections; both finish with implicit-shift QL
// on the tridiagonal. Eigenvectors are never formed.

#include "symtherm/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace symtherm {

/// Symmetric matrix with half-bandwidth b. Only the diagonal and the b lower
/// sub-diagonals are stored; band(k)[j] holds entry (j + k, j).
class SymBandMatrix {
public:
    SymBandMatrix(std::size_t n, std::size_t bandwidth) : n_(n), b_(bandwidth), bands_(bandwidth + 1) {
        for (std::size_t k = 0; k <= b_; ++k) bands_[k].assign(k < n ? n - k : 0, 0.0);
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t bandwidth() const noexcept { return b_; }

    double operator()(std::size_t i, std::size_t j) const {
        if (i < j) std::swap(i, j);
        const std::size_t k = i - j;
        return k <= b_ ? bands_[k][j] : 0.0;
    }

    void set(std::size_t i, std::size_t j, double value) {
        if (i < j) std::swap(i, j);
        if (i >= n_) throw DomainError("band matrix index out of range");
        if (i - j > b_) throw DomainError("entry lies outside the band");
        bands_[i - j][j] = value;
    }

    std::span<const double> band(std::size_t k) const { return bands_.at(k); }

    double trace() const {
        double t = 0.0;
        for (double v : bands_[0]) t += v;
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (std::size_t k = 0; k <= b_; ++k)
            for (double v : bands_[k]) s += (k == 0 ? 1.0 : 2.0) * v * v;
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& band : bands_)
            for (double v : band) m = std::max(m, std::abs(v));
        return m;
    }

    /// Short stable identifier for error messages.
    std::string fingerprint() const {
        std::uint64_t h = 1469598103934665603ull;
        for (const auto& band : bands_)
            for (double v : band) {
                h ^= std::bit_cast<std::uint64_t>(v);
                h *= 1099511628211ull;
            }
        std::ostringstream os;
        os << "n=" << n_ << " b=" << b_ << " fnv=" << std::hex << h;
        return os.str();
    }

private:
    std::size_t n_;
    std::size_t b_;
    std::vector<std::vector<double>> bands_;
};

struct SpectrumResult {
    std::vector<double> eigenvalues; // ascending
    double residual_bound = 0.0;
};

/// Symmetric tridiagonal matrix: diagonal d and off-diagonal e (e[i] couples i, i+1).
struct Tridiagonal {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;
};

/// Reduces a band matrix to tridiagonal form by an orthogonal similarity.
inline Tridiagonal reduce_band_to_tridiagonal(const SymBandMatrix& m) {
    const std::size_t n = m.size();
    const std::size_t b = m.bandwidth();
    Tridiagonal out;
    if (n == 0) return out;
    if (b <= 1) {
        out.diagonal.assign(m.band(0).begin(), m.band(0).end());
        if (b == 1)
            out.off_diagonal.assign(m.band(1).begin(), m.band(1).end());
        else
            out.off_diagonal.assign(n - 1, 0.0);
        return out;
    }

    // Working storage with one extra sub-diagonal for the transient bulge.
    const std::size_t w = b + 2;
    std::vector<double> a(n * w, 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& {
        // i >= j, i - j <= b + 1
        return a[i * w + (i - j)];
    };
    for (std::size_t k = 0; k <= b; ++k)
        for (std::size_t j = 0; j + k < n; ++j) at(j + k, j) = m.band(k)[j];

    auto get = [&](std::size_t i, std::size_t j) -> double {
        if (i < j) std::swap(i, j);
        return i - j <= b + 1 ? a[i * w + (i - j)] : 0.0;
    };
    auto put = [&](std::size_t i, std::size_t j, double v) {
        if (i < j) std::swap(i, j);
        if (i - j <= b + 1) a[i * w + (i - j)] = v;
    };

    // Similarity by the rotation [c s; -s c] acting on rows/columns p, p + 1.
    auto rotate = [&](std::size_t p, double c, double s) {
        const std::size_t q = p + 1;
        const std::size_t lo = p >= b + 1 ? p - (b + 1) : 0;
        const std::size_t hi = std::min(n - 1, q + b + 1);
        for (std::size_t t = lo; t <= hi; ++t) {
            if (t == p || t == q) continue;
            const double u = get(p, t), v = get(q, t);
            put(p, t, c * u + s * v);
            put(q, t, -s * u + c * v);
        }
        const double app = get(p, p), aqq = get(q, q), apq = get(q, p);
        put(p, p, c * c * app + 2.0 * c * s * apq + s * s * aqq);
        put(q, q, s * s * app - 2.0 * c * s * apq + c * c * aqq);
        put(q, p, (c * c - s * s) * apq + c * s * (aqq - app));
    };

    // Zero entry (r, col) against (r - 1, col); r - 1 > col.
    auto annihilate = [&](std::size_t r, std::size_t col) {
        const double x = get(r - 1, col), y = get(r, col);
        if (y == 0.0) return false;
        const double rho = std::hypot(x, y);
        rotate(r - 1, x / rho, y / rho);
        put(r, col, 0.0);
        put(r - 1, col, rho);
        return true;
    };

    for (std::size_t j = 0; j + 2 < n; ++j) {
        for (std::size_t k = std::min(b, n - 1 - j); k >= 2; --k) {
            std::size_t r = j + k;
            if (!annihilate(r, j)) continue;
            // the rotation on (r - 1, r) fills (r + b, r - 1); chase it down
            while (r + b < n) {
                const std::size_t bulge_row = r + b;
                const std::size_t bulge_col = r - 1;
                if (!annihilate(bulge_row, bulge_col)) break;
                r = bulge_row;
            }
        }
    }

    out.diagonal.resize(n);
    out.off_diagonal.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) out.diagonal[i] = at(i, i);
    for (std::size_t i = 0; i + 1 < n; ++i) out.off_diagonal[i] = at(i + 1, i);
    return out;
}

/// Householder reduction of a dense symmetric matrix (row-major, n x n).
inline Tridiagonal reduce_dense_to_tridiagonal(std::span<const double> entries, std::size_t n) {
    if (entries.size() != n * n) throw DomainError("dense matrix storage size mismatch");
    std::vector<double> a(entries.begin(), entries.end());
    auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

    std::vector<double> v(n), p(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double alpha = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) alpha += A(i, k) * A(i, k);
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) continue;
        if (A(k + 1, k) > 0.0) alpha = -alpha;
        // v = x - alpha e1, H = I - 2 v v^T / (v^T v)
        std::fill(v.begin(), v.end(), 0.0);
        v[k + 1] = A(k + 1, k) - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = A(i, k);
        double vv = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vv += v[i] * v[i];
        if (vv == 0.0) continue;
        const double tau = 2.0 / vv;

        // p = tau A v, w = p - (tau/2)(p.v) v, A <- A - v w^T - w v^T
        double pv = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += A(i, j) * v[j];
            p[i] = tau * s;
            pv += p[i] * v[i];
        }
        const double half = 0.5 * tau * pv;
        for (std::size_t i = k + 1; i < n; ++i) p[i] -= half * v[i];
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= v[i] * p[j] + p[i] * v[j];
        A(k + 1, k) = alpha;
        A(k, k + 1) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) A(i, k) = A(k, i) = 0.0;
    }

    Tridiagonal out;
    out.diagonal.resize(n);
    out.off_diagonal.resize(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) out.diagonal[i] = A(i, i);
    for (std::size_t i = 0; i + 1 < n; ++i) out.off_diagonal[i] = A(i + 1, i);
    return out;
}

/// All eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL,
/// ascending. Throws NumericalError once `max_iterations` QL steps are spent.
inline std::vector<double> eig_sym_tridiagonal(Tridiagonal t, std::size_t max_iterations,
                                               const std::string& fingerprint = {}) {
    auto& d = t.diagonal;
    const std::size_t n = d.size();
    std::vector<double> e(n, 0.0);
    std::copy(t.off_diagonal.begin(), t.off_diagonal.end(), e.begin());
    constexpr double eps = std::numeric_limits<double>::epsilon();

    std::size_t iterations = 0;
    for (std::size_t l = 0; l < n; ++l) {
        for (;;) {
            std::size_t m = l;
            for (; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++iterations > max_iterations) {
                std::ostringstream os;
                os << "tridiagonal QL did not converge within " << max_iterations << " iterations ("
                   << (fingerprint.empty() ? "n=" + std::to_string(n) : fingerprint) << ")";
                throw NumericalError(os.str());
            }
            // Wilkinson-type shift from the leading 2x2 block
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool deflated = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double bb = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;
            }
            if (deflated) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

namespace detail {

inline double residual_estimate(std::size_t n, double norm) {
    return static_cast<double>(n) * std::numeric_limits<double>::epsilon() * norm;
}

} // namespace detail

/// All eigenvalues of a symmetric band matrix, ascending.
inline SpectrumResult eig_sym_banded(const SymBandMatrix& m) {
    if (m.size() == 0) throw DomainError("eigenvalues of an empty matrix");
    SpectrumResult out;
    out.eigenvalues = eig_sym_tridiagonal(reduce_band_to_tridiagonal(m), 30 * m.size(), m.fingerprint());
    out.residual_bound = detail::residual_estimate(m.size(), m.frobenius_norm());
    return out;
}

/// All eigenvalues of a dense symmetric matrix (row-major), ascending.
inline SpectrumResult eig_sym_dense(std::span<const double> entries, std::size_t n) {
    if (n == 0) throw DomainError("eigenvalues of an empty matrix");
    double norm = 0.0;
    for (double v : entries) norm += v * v;
    norm = std::sqrt(norm);
    SpectrumResult out;
    out.eigenvalues = eig_sym_tridiagonal(reduce_dense_to_tridiagonal(entries, n), 30 * n,
                                          "dense n=" + std::to_string(n));
    out.residual_bound = detail::residual_estimate(n, norm);
    return out;
}

/// Number of eigenvalues of t strictly below x (Sturm sequence / LDL^T inertia).
inline std::size_t count_eigenvalues_below(const Tridiagonal& t, double x) {
    const auto& d = t.diagonal;
    const auto& e = t.off_diagonal;
    constexpr double tiny = std::numeric_limits<double>::min();
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        q = d[i] - x - (i > 0 ? e[i - 1] * e[i - 1] / q : 0.0);
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++count;
    }
    return count;
}

/// Smallest eigenvalue by bisection on the tridiagonal reduction.
inline double ground_state_energy(const SymBandMatrix& m) {
    if (m.size() == 0) throw DomainError("eigenvalues of an empty matrix");
    const Tridiagonal t = reduce_band_to_tridiagonal(m);
    const std::size_t n = t.diagonal.size();
    if (n == 1) return t.diagonal[0];
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        const double radius = (i > 0 ? std::abs(t.off_diagonal[i - 1]) : 0.0) +
                              (i + 1 < n ? std::abs(t.off_diagonal[i]) : 0.0);
        lo = std::min(lo, t.diagonal[i] - radius);
        hi = std::max(hi, t.diagonal[i] + radius);
    }
    const double scale = std::max(std::abs(lo), std::abs(hi));
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
    // invariant: count(lo) == 0, count(hi) >= 1
    hi += tol;
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (count_eigenvalues_below(t, mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// ln sum_i exp(values_i), evaluated with max subtraction. -inf for all -inf input.
inline double log_sum_exp(std::span<const double> values) {
    if (values.empty()) throw DomainError("log_sum_exp of an empty sequence");
    const double top = *std::max_element(values.begin(), values.end());
    if (values.size() == 1) return top;
    if (std::isinf(top)) return top;
    double sum = 0.0;
    for (double v : values) sum += std::exp(v - top);
    return top + std::log(sum);
}

/// ln sum_i exp(log_weights_i + log_terms_i).
inline double log_sum_exp(std::span<const double> log_weights, std::span<const double> log_terms) {
    if (log_weights.size() != log_terms.size())
        throw DomainError("log_sum_exp: weights and terms differ in length");
    if (log_weights.empty()) throw DomainError("log_sum_exp of an empty sequence");
    std::vector<double> combined(log_weights.size());
    for (std::size_t i = 0; i < combined.size(); ++i) combined[i] = log_weights[i] + log_terms[i];
    return log_sum_exp(combined);
}

} // namespace symtherm
