#include "support/oracles.hpp"
#include "symtherm/entropy.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace symtherm;
using symtherm::testing::jacobi_eigenvalues;

namespace {

BlockSpectrum block(double p, int dim, int deg, std::vector<double> spectrum) {
    BlockSpectrum b;
    b.lambda = Partition({1});
    b.p = p;
    b.dim = dim;
    b.deg = deg;
    b.coarse_spectrum = std::move(spectrum);
    return b;
}

// Random symmetric positive matrix with unit trace, size k.
std::vector<double> random_density(std::size_t k, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> g(k * k), r(k * k, 0.0);
    for (double& v : g) v = u(rng);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t m = 0; m < k; ++m) r[i * k + j] += g[i * k + m] * g[j * k + m];
    double tr = 0.0;
    for (std::size_t i = 0; i < k; ++i) tr += r[i * k + i];
    for (double& v : r) v /= tr;
    return r;
}

// -Tr rho ln rho of the explicit matrix (p/dim) rho~ (x) I_dim, summed over blocks.
double explicit_entropy(const std::vector<std::pair<BlockSpectrum, std::vector<double>>>& blocks) {
    std::size_t total = 0;
    for (const auto& [b, m] : blocks) total += b.coarse_spectrum.size() * static_cast<std::size_t>(b.dim);
    std::vector<double> rho(total * total, 0.0);
    std::size_t offset = 0;
    for (const auto& [b, m] : blocks) {
        const std::size_t k = b.coarse_spectrum.size(), d = static_cast<std::size_t>(b.dim);
        // kron(rho~, I_d)
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t a = 0; a < d; ++a)
                    rho[(offset + i * d + a) * total + offset + j * d + a] = b.p / static_cast<double>(d) * m[i * k + j];
        offset += k * d;
    }
    double s = 0.0;
    for (double v : jacobi_eigenvalues(rho, total))
        if (v > 1e-300) s -= v * std::log(v);
    return s;
}

} // namespace

TEST(Shannon, Examples) {
    EXPECT_EQ(shannon(std::vector<double>{1.0}), 0.0);
    EXPECT_NEAR(shannon(std::vector<double>{0.5, 0.5}), std::log(2.0), 1e-15);
    EXPECT_NEAR(shannon(std::vector<double>{0.9, 0.1}), 0.325083, 5e-7);
    EXPECT_NEAR(shannon(std::vector<double>{0.0, 1.0}), 0.0, 0.0);
    EXPECT_THROW(shannon(std::vector<double>{1.2, -0.2}), DomainError);
    EXPECT_THROW(shannon(std::vector<double>{0.3, 0.3}), DomainError);
}

TEST(BlockEntropy, Examples) {
    const std::vector<BlockSpectrum> one{block(1.0, 2, 1, {1.0})};
    const auto r = block_entropy(one);
    EXPECT_NEAR(r.total, std::log(2.0), 1e-15);
    EXPECT_NEAR(r.dim_term, std::log(2.0), 1e-15);
    EXPECT_EQ(r.coarse_term, 0.0);
    EXPECT_EQ(r.shannon_term, 0.0);

    const std::vector<BlockSpectrum> two{block(0.5, 2, 1, {1.0}), block(0.5, 1, 2, {0.5, 0.5})};
    EXPECT_NEAR(block_entropy(two).total, 2.0 * std::log(2.0), 1e-15);
    EXPECT_NEAR(block_entropy(two).total, 1.386294, 5e-7);

    const std::vector<BlockSpectrum> uniform{block(1.0, 7, 1, {1.0})};
    EXPECT_NEAR(block_entropy(uniform).total, std::log(7.0), 1e-15);
}

TEST(BlockEntropy, RejectsInvalidBlocks) {
    const std::vector<BlockSpectrum> light{block(0.5, 2, 1, {1.0})};
    try {
        block_entropy(light);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_STREQ(e.what(), "block weights not normalized");
    }
    const std::vector<BlockSpectrum> long_spectrum{block(1.0, 1, 1, {0.5, 0.5})};
    EXPECT_THROW(block_entropy(long_spectrum), DomainError);
    const std::vector<BlockSpectrum> unnormalized{block(1.0, 1, 2, {0.5, 0.6})};
    EXPECT_THROW(block_entropy(unnormalized), DomainError);
}

TEST(BlockEntropy, ExplicitMatrixReconstruction) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int count = 1 + trial % 4;
        std::vector<double> weights(static_cast<std::size_t>(count));
        double sum = 0.0;
        for (double& w : weights) sum += (w = u(rng));
        std::vector<std::pair<BlockSpectrum, std::vector<double>>> explicit_blocks;
        std::vector<BlockSpectrum> blocks;
        for (int i = 0; i < count; ++i) {
            const std::size_t k = 1 + (trial + i) % 3;
            const int dim = 1 + (trial * 3 + i) % 4;
            const auto m = random_density(k, rng);
            auto spectrum = jacobi_eigenvalues(m, k);
            double norm = 0.0;
            for (double& q : spectrum) norm += (q = std::max(q, 0.0));
            for (double& q : spectrum) q /= norm;
            auto b = block(weights[static_cast<std::size_t>(i)] / sum, dim, static_cast<int>(k), spectrum);
            blocks.push_back(b);
            explicit_blocks.emplace_back(b, m);
        }
        EXPECT_NEAR(block_entropy(blocks).total, explicit_entropy(explicit_blocks), 1e-10) << trial;
    }
}

TEST(BlockEntropy, TermsNonNegativeAndSumToTotal) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<BlockSpectrum> blocks;
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) {
            std::vector<double> q(static_cast<std::size_t>(1 + i));
            double qs = 0.0;
            for (double& v : q) qs += (v = u(rng));
            for (double& v : q) v /= qs;
            const double p = u(rng);
            sum += p;
            blocks.push_back(block(p, 1 + i, 1 + i, q));
        }
        for (auto& b : blocks) b.p /= sum;
        const auto r = block_entropy(blocks);
        EXPECT_GE(r.dim_term, 0.0);
        EXPECT_GE(r.coarse_term, 0.0);
        EXPECT_GE(r.shannon_term, 0.0);
        EXPECT_NEAR(r.total, r.dim_term + r.coarse_term + r.shannon_term, 1e-12);
        double cap = std::log(3.0);
        for (const auto& b : blocks) cap += b.p * log_bigint(b.dim * b.deg);
        EXPECT_LE(r.total, cap + 1e-12);
    }
}

TEST(BlockEntropy, UniformCoarseSpectrumNeverDecreasesCoarseTerm) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int deg = 1 + trial % 6;
        std::vector<double> q(static_cast<std::size_t>(deg));
        double qs = 0.0;
        for (double& v : q) qs += (v = u(rng));
        for (double& v : q) v /= qs;
        const std::vector<BlockSpectrum> before{block(0.4, 2, deg, q), block(0.6, 1, 1, {1.0})};
        const std::vector<BlockSpectrum> after{block(0.4, 2, deg, std::vector<double>(q.size(), 1.0 / deg)),
                                               block(0.6, 1, 1, {1.0})};
        EXPECT_GE(block_entropy(after).coarse_term, block_entropy(before).coarse_term - 1e-15);
    }
}

TEST(VerifyBounds, Examples) {
    const std::vector<BlockSpectrum> pure{block(0.5, 2, 3, {1.0}), block(0.5, 1, 5, {1.0})};
    const auto r = verify_bounds(pure, 2);
    EXPECT_TRUE(r.ok());
    EXPECT_NEAR(r.block_slack[0], std::log(3.0), 1e-15);
    EXPECT_NEAR(r.block_slack[1], std::log(5.0), 1e-15);
    EXPECT_NEAR(r.shannon_slack, 0.0, 1e-15);

    const std::vector<BlockSpectrum> mixed{block(1.0, 2, 4, {0.25, 0.25, 0.25, 0.25})};
    EXPECT_NEAR(verify_bounds(mixed, 1).block_slack[0], 0.0, 1e-15);
}

TEST(VerifyBounds, ReportsViolationsWithoutThrowing) {
    const std::vector<BlockSpectrum> blocks{block(0.5, 1, 1, {1.0}), block(0.5, 1, 1, {1.0})};
    EXPECT_THROW(verify_bounds(blocks, 1), DomainError);
    BoundReport r;
    EXPECT_NO_THROW(r = verify_bounds(blocks, 2));
    EXPECT_TRUE(r.ok());
}

TEST(IntensiveEntropy, PointMasses) {
    const std::vector<DensitySample> balanced{{0.0, RescaledShape({0.5, 0.5}), 1.0}};
    EXPECT_NEAR(intensive_entropy(balanced), std::log(2.0), 1e-15);
    const std::vector<DensitySample> polarized{{0.5, RescaledShape({1.0, 0.0}), 1.0}};
    EXPECT_EQ(intensive_entropy(polarized), 0.0);
}

TEST(IntensiveEntropy, NarrowGaussianApproachesCenterValue) {
    double previous = INFINITY;
    for (double width : {0.02, 0.005, 0.001}) {
        std::vector<DensitySample> samples;
        const int count = 4001;
        double mass = 0.0;
        for (int i = 0; i < count; ++i) {
            const double l = 0.5 * i / (count - 1);
            const double density = std::exp(-0.5 * std::pow((l - 0.25) / width, 2));
            samples.push_back({l, RescaledShape::two_row(l), density});
        }
        for (std::size_t i = 1; i < samples.size(); ++i)
            mass += 0.5 * (samples[i].coordinate - samples[i - 1].coordinate) *
                    (samples[i].density + samples[i - 1].density);
        for (auto& s : samples) s.density /= mass;
        const double err = std::abs(intensive_entropy(samples) - 0.562335);
        EXPECT_LT(err, previous);
        previous = err;
    }
    EXPECT_LT(previous, 1e-5);
}

TEST(IntensiveEntropy, RejectsUnnormalizedDensity) {
    const std::vector<DensitySample> flat{{0.0, RescaledShape({0.5, 0.5}), 1.0}, {1.0, RescaledShape({1.0, 0.0}), 1.0}};
    EXPECT_NO_THROW(intensive_entropy(flat));
    const std::vector<DensitySample> heavy{{0.0, RescaledShape({0.5, 0.5}), 1.0}, {1.0, RescaledShape({1.0, 0.0}), 1.5}};
    EXPECT_THROW(intensive_entropy(heavy), DomainError);
    const std::vector<DensitySample> single{{0.0, RescaledShape({0.5, 0.5}), 0.7}};
    EXPECT_THROW(intensive_entropy(single), DomainError);
}
