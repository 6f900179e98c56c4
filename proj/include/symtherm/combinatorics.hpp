#pragma once

// Representation combinatorics of the symmetric group S_N: partitions,
// irrep dimensions (hook lengths), Kostka numbers, Weyl dimensions and the
// Shannon rate function that governs ln(dim)/N for large N.

#include "symtherm/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace symtherm {

using BigInt = boost::multiprecision::cpp_int;

/// Natural logarithm of a non-negative arbitrary-precision integer.
/// Returns -inf for zero.
inline double log_bigint(const BigInt& value) {
    if (value < 0) throw DomainError("log of negative integer");
    if (value == 0) return -INFINITY;
    const std::size_t bits = boost::multiprecision::msb(value) + 1;
    if (bits <= 1000) return std::log(value.convert_to<double>());
    // keep the top 64 bits, account for the rest as a power of two
    const std::size_t shift = bits - 64;
    const BigInt top = value >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

inline BigInt factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// C(n, k); zero outside 0 <= k <= n.
inline BigInt binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// A weakly decreasing sequence of positive integers. Labels both S_N irreps
/// (lambda) and occupation sectors (mu).
class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] < 1) throw DomainError("partition parts must be positive");
            if (i > 0 && parts_[i] > parts_[i - 1])
                throw DomainError("partition parts must be weakly decreasing");
        }
        total_ = std::accumulate(parts_.begin(), parts_.end(), 0);
    }

    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    /// Builds a partition from non-negative parts, dropping trailing zeros.
    static Partition from_padded(std::vector<int> parts) {
        while (!parts.empty() && parts.back() == 0) parts.pop_back();
        return Partition(std::move(parts));
    }

    /// Parses "3,2,1".
    static Partition parse(const std::string& text) {
        std::vector<int> parts;
        std::stringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(item, &used);
            } catch (const std::exception&) {
                throw DomainError("invalid partition '" + text + "'");
            }
            if (used != item.size()) throw DomainError("invalid partition '" + text + "'");
            parts.push_back(v);
        }
        if (parts.empty()) throw DomainError("empty partition");
        return Partition(std::move(parts));
    }

    const std::vector<int>& parts() const noexcept { return parts_; }
    int size() const noexcept { return total_; }
    std::size_t length() const noexcept { return parts_.size(); }
    bool empty() const noexcept { return parts_.empty(); }

    /// Part i, or zero past the end (implicit zero padding).
    int operator[](std::size_t i) const noexcept { return i < parts_.size() ? parts_[i] : 0; }

    Partition conjugate() const {
        std::vector<int> t(parts_.empty() ? 0 : parts_.front(), 0);
        for (int row : parts_)
            for (int j = 0; j < row; ++j) ++t[j];
        return Partition(std::move(t));
    }

    /// Dominance order: every prefix sum of *this is >= that of other.
    bool dominates(const Partition& other) const {
        if (total_ != other.total_) return false;
        const std::size_t len = std::max(length(), other.length());
        int a = 0, b = 0;
        for (std::size_t i = 0; i < len; ++i) {
            a += (*this)[i];
            b += other[i];
            if (a < b) return false;
        }
        return true;
    }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(parts_[i]);
        }
        return s + ")";
    }

    friend bool operator==(const Partition&, const Partition&) = default;
    friend auto operator<=>(const Partition& a, const Partition& b) { return a.parts_ <=> b.parts_; }

private:
    std::vector<int> parts_;
    int total_ = 0;
};

/// A point of the probability simplex, weakly decreasing: x = lambda / N.
class RescaledShape {
public:
    explicit RescaledShape(std::vector<double> x) : x_(std::move(x)) {
        if (x_.empty()) throw DomainError("rescaled shape must be non-empty");
        double sum = 0.0;
        for (std::size_t i = 0; i < x_.size(); ++i) {
            if (!(x_[i] >= 0.0)) throw DomainError("rescaled shape entries must be non-negative");
            if (i > 0 && x_[i] > x_[i - 1]) throw DomainError("rescaled shape must be weakly decreasing");
            sum += x_[i];
        }
        if (std::abs(sum - 1.0) > 1e-12) throw DomainError("rescaled shape must sum to 1");
    }

    /// Two-row shape (1/2 + l, 1/2 - l) for l in [0, 1/2].
    static RescaledShape two_row(double l) {
        if (!(l >= 0.0 && l <= 0.5)) throw DomainError("two-row coordinate l must lie in [0, 1/2]");
        return RescaledShape({0.5 + l, 0.5 - l});
    }

    static RescaledShape of(const Partition& lambda) {
        std::vector<double> x;
        for (int p : lambda.parts()) x.push_back(static_cast<double>(p) / lambda.size());
        return RescaledShape(std::move(x));
    }

    const std::vector<double>& values() const noexcept { return x_; }

private:
    std::vector<double> x_;
};

namespace detail {

inline void enumerate_into(int remaining, int max_part, int slots, std::vector<int>& prefix,
                           std::vector<Partition>& out) {
    if (remaining == 0) {
        out.emplace_back(prefix);
        return;
    }
    if (slots == 0) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        // the rest must fit in slots - 1 parts no larger than p
        if (static_cast<long long>(p) * slots < remaining) break;
        prefix.push_back(p);
        enumerate_into(remaining - p, p, slots - 1, prefix, out);
        prefix.pop_back();
    }
}

} // namespace detail

/// All partitions of n with at most d parts, in reverse-lexicographic order.
inline std::vector<Partition> enumerate_partitions(int n, int d) {
    if (n < 1 || d < 1) throw DomainError("enumerate_partitions requires n >= 1 and d >= 1");
    std::vector<Partition> out;
    std::vector<int> prefix;
    detail::enumerate_into(n, n, d, prefix, out);
    return out;
}

/// Number of partitions of n into at most d parts.
inline BigInt count_irreps(int n, int d) {
    if (n < 1 || d < 1) throw DomainError("count_irreps requires n >= 1 and d >= 1");
    // conjugation: at most d parts <=> all parts <= d
    std::vector<BigInt> ways(static_cast<std::size_t>(n) + 1, 0);
    ways[0] = 1;
    for (int part = 1; part <= std::min(d, n); ++part)
        for (int total = part; total <= n; ++total) ways[total] += ways[total - part];
    return ways[n];
}

/// Hook length of box (i, j), zero-based.
inline int hook_length(const Partition& lambda, const Partition& conj, std::size_t i, std::size_t j) {
    return lambda[i] - static_cast<int>(j) + conj[j] - static_cast<int>(i) - 1;
}

/// Dimension of the S_N irrep lambda via the hook-length formula.
inline BigInt dim_irrep(const Partition& lambda) {
    const Partition conj = lambda.conjugate();
    BigInt hooks = 1;
    for (std::size_t i = 0; i < lambda.length(); ++i)
        for (std::size_t j = 0; j < static_cast<std::size_t>(lambda[i]); ++j)
            hooks *= hook_length(lambda, conj, i, j);
    return factorial(lambda.size()) / hooks;
}

/// ln dim_irrep(lambda) through log-gamma. Two-row shapes use
/// dim(a, b) = C(a+b, b) (a - b + 1) / (a + 1).
inline double log_dim_irrep(const Partition& lambda) {
    const int n = lambda.size();
    if (lambda.length() <= 1 || lambda[0] == 1) return 0.0;
    if (lambda.length() == 2) {
        const int a = lambda[0], b = lambda[1];
        return log_binomial(n, b) + std::log(static_cast<double>(a - b + 1)) -
               std::log(static_cast<double>(a + 1));
    }
    const Partition conj = lambda.conjugate();
    double log_hooks = 0.0;
    for (std::size_t i = 0; i < lambda.length(); ++i)
        for (std::size_t j = 0; j < static_cast<std::size_t>(lambda[i]); ++j)
            log_hooks += std::log(static_cast<double>(hook_length(lambda, conj, i, j)));
    return std::lgamma(n + 1.0) - log_hooks;
}

/// Multinomial N! / (mu_1! ... mu_k!): dimension of the occupation sector M_mu.
inline BigInt sector_dim(const Partition& mu) {
    BigInt denom = 1;
    for (int p : mu.parts()) denom *= factorial(p);
    return factorial(mu.size()) / denom;
}

/// Weyl dimension s_lambda(1, ..., 1) with d arguments: the multiplicity
/// deg(lambda) of irrep lambda in (C^d)^{(x)N}.
inline BigInt schur_at_ones(const Partition& lambda, int d) {
    if (d < 1) throw DomainError("schur_at_ones requires d >= 1");
    if (lambda.length() > static_cast<std::size_t>(d)) throw DomainError("shape exceeds d");
    BigInt num = 1, den = 1;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            num *= lambda[static_cast<std::size_t>(i)] - lambda[static_cast<std::size_t>(j)] + j - i;
            den *= j - i;
        }
    return num / den;
}

namespace detail {

// Kostka recursion: strip the boxes holding the largest label (a horizontal
// strip of size content.back()) and recurse on the remaining content.
class KostkaRecursion {
public:
    explicit KostkaRecursion(std::vector<int> content) : content_(std::move(content)) {}

    BigInt count(const std::vector<int>& shape, std::size_t labels) {
        if (labels == 0) return shape.empty() ? BigInt(1) : BigInt(0);
        if (shape.size() > labels) return 0;
        auto key = std::make_pair(shape, labels);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        BigInt total = 0;
        std::vector<int> inner(shape);
        strips(shape, inner, 0, content_[labels - 1], labels, total);
        memo_.emplace(std::move(key), total);
        return total;
    }

private:
    // choose inner[row] in [shape[row+1], shape[row]] removing `left` boxes total
    void strips(const std::vector<int>& shape, std::vector<int>& inner, std::size_t row, int left,
                std::size_t labels, BigInt& total) {
        if (row == shape.size()) {
            if (left != 0) return;
            std::vector<int> trimmed(inner);
            while (!trimmed.empty() && trimmed.back() == 0) trimmed.pop_back();
            total += count(trimmed, labels - 1);
            return;
        }
        const int below = row + 1 < shape.size() ? shape[row + 1] : 0;
        const int max_take = shape[row] - below;
        for (int take = 0; take <= std::min(max_take, left); ++take) {
            inner[row] = shape[row] - take;
            strips(shape, inner, row + 1, left - take, labels, total);
        }
        inner[row] = shape[row];
    }

    std::vector<int> content_;
    std::map<std::pair<std::vector<int>, std::size_t>, BigInt> memo_;
};

} // namespace detail

/// Number of semistandard Young tableaux of shape lambda and content mu.
inline BigInt kostka(const Partition& lambda, const Partition& mu) {
    if (lambda.size() != mu.size()) throw DomainError("partition size mismatch");
    if (!lambda.dominates(mu)) return 0;
    detail::KostkaRecursion rec(mu.parts());
    return rec.count(lambda.parts(), mu.length());
}

/// Shannon entropy -sum x ln x of a rescaled shape, with 0 ln 0 = 0.
inline double rate_entropy(const RescaledShape& x) {
    double s = 0.0;
    for (double v : x.values())
        if (v > 0.0) s -= v * std::log(v);
    return s;
}

/// Two-row rate function s(l) for x = (1/2 + l, 1/2 - l).
inline double rate_entropy_two_row(double l) { return rate_entropy(RescaledShape::two_row(l)); }

} // namespace symtherm
