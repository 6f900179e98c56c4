#pragma once

// Von Neumann entropy of a permutation-invariant state split over irrep
// blocks: S = sum p ln(dim) + sum p S(coarse) + H(p).

#include "symtherm/combinatorics.hpp"
#include "symtherm/error.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace symtherm {

/// One lambda-block of an invariant state.
struct BlockSpectrum {
    Partition lambda;
    double p = 0.0;                      // block weight
    BigInt dim = 1;                      // irrep dimension dim(lambda)
    BigInt deg = 1;                      // multiplicity deg(lambda)
    std::vector<double> coarse_spectrum; // eigenvalues of the coarse-grained state

    void validate() const {
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("block weight outside [0, 1]");
        if (dim < 1 || deg < 1) throw DomainError("block dimensions must be positive");
        if (coarse_spectrum.empty()) throw DomainError("coarse spectrum must be non-empty");
        if (BigInt(coarse_spectrum.size()) > deg) throw DomainError("coarse spectrum longer than deg");
        double sum = 0.0;
        for (double q : coarse_spectrum) {
            if (!(q >= 0.0)) throw DomainError("coarse spectrum entries must be non-negative");
            sum += q;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw DomainError("coarse spectrum must sum to 1");
    }
};

struct EntropyBreakdown {
    double dim_term = 0.0;     // sum p ln dim
    double coarse_term = 0.0;  // sum p S(coarse)
    double shannon_term = 0.0; // H(p)
    double total = 0.0;
};

namespace detail {

inline double entropy_of(std::span<const double> q) {
    double s = 0.0;
    for (double v : q)
        if (v > 0.0) s -= v * std::log(v);
    return s;
}

} // namespace detail

/// -sum p ln p with 0 ln 0 = 0.
inline double shannon(std::span<const double> p) {
    double sum = 0.0;
    for (double v : p) {
        if (v < 0.0 || std::isnan(v)) throw DomainError("probabilities must be non-negative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-10) throw DomainError("probabilities must sum to 1");
    return detail::entropy_of(p);
}

inline EntropyBreakdown block_entropy(std::span<const BlockSpectrum> blocks) {
    double weight = 0.0;
    for (const auto& b : blocks) {
        b.validate();
        weight += b.p;
    }
    if (std::abs(weight - 1.0) > 1e-10) throw DomainError("block weights not normalized");

    EntropyBreakdown out;
    std::vector<double> p;
    p.reserve(blocks.size());
    for (const auto& b : blocks) {
        p.push_back(b.p);
        if (b.p == 0.0) continue;
        out.dim_term += b.p * log_bigint(b.dim);
        out.coarse_term += b.p * detail::entropy_of(b.coarse_spectrum);
    }
    out.shannon_term = detail::entropy_of(p);
    out.total = out.dim_term + out.coarse_term + out.shannon_term;
    return out;
}

/// Slack of S(coarse) <= ln deg per block and H(p) <= ln(num_irreps).
struct BoundReport {
    std::vector<double> block_slack;
    double shannon_slack = 0.0;
    std::vector<std::size_t> violated_blocks;
    bool shannon_violated = false;

    bool ok() const noexcept { return violated_blocks.empty() && !shannon_violated; }
};

inline constexpr double kBoundTolerance = 1e-12;

/// Reports, never throws on, a violated bound.
inline BoundReport verify_bounds(std::span<const BlockSpectrum> blocks, const BigInt& num_irreps) {
    if (BigInt(blocks.size()) > num_irreps) throw DomainError("more blocks than irreps");
    BoundReport report;
    std::vector<double> p;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        b.validate();
        const double slack = log_bigint(b.deg) - detail::entropy_of(b.coarse_spectrum);
        report.block_slack.push_back(slack);
        if (slack < -kBoundTolerance) report.violated_blocks.push_back(i);
        p.push_back(b.p);
    }
    report.shannon_slack = log_bigint(num_irreps) - detail::entropy_of(p);
    report.shannon_violated = report.shannon_slack < -kBoundTolerance;
    return report;
}

/// A sampled density p(x) over rescaled shapes. `coordinate` is the caller's
/// one-dimensional parametrization of the grid (for two rows, l) and sets the
/// quadrature measure.
struct DensitySample {
    double coordinate = 0.0;
    RescaledShape shape;
    double density = 0.0;
};

/// Trapezoid estimate of the integral of p(x) s(x). A single sample is a point
/// mass and must carry density 1.
inline double intensive_entropy(std::span<const DensitySample> samples) {
    if (samples.empty()) throw DomainError("intensive_entropy needs at least one sample");
    for (const auto& smp : samples)
        if (!(smp.density >= 0.0)) throw DomainError("density must be non-negative");
    if (samples.size() == 1) {
        if (std::abs(samples[0].density - 1.0) > 1e-6) throw DomainError("density not normalized");
        return rate_entropy(samples[0].shape);
    }
    double mass = 0.0, integral = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double h = samples[i].coordinate - samples[i - 1].coordinate;
        if (!(h > 0.0)) throw DomainError("sample coordinates must be strictly increasing");
        mass += 0.5 * h * (samples[i].density + samples[i - 1].density);
        integral += 0.5 * h *
                    (samples[i].density * rate_entropy(samples[i].shape) +
                     samples[i - 1].density * rate_entropy(samples[i - 1].shape));
    }
    if (std::abs(mass - 1.0) > 1e-6) throw DomainError("density not normalized");
    return integral;
}

} // namespace symtherm
