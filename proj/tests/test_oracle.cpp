#include "symtherm/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace symtherm;
using namespace symtherm::oracle;

namespace {

std::vector<double> sorted(const Eigen::VectorXd& v) {
    std::vector<double> out(v.data(), v.data() + v.size());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(FullHamiltonian, SingleSpin) {
    const auto h = build_full_hamiltonian(1, 0.6, 1.2);
    ASSERT_EQ(h.entries.rows(), 2);
    EXPECT_NEAR(h.entries(0, 0), -0.3 - 0.3, 1e-15);
    EXPECT_NEAR(h.entries(1, 1), 0.3 - 0.3, 1e-15);
    EXPECT_EQ(h.entries(0, 1), 0.0);
}

TEST(FullHamiltonian, ZeroCouplings) {
    EXPECT_EQ(build_full_hamiltonian(5, 0.0, 0.0).entries.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_THROW(build_full_hamiltonian(0, 0.5, 1.0), DomainError);
    EXPECT_THROW(build_full_hamiltonian(kMaxQubits + 1, 0.5, 1.0), DomainError);
}

TEST(FullHamiltonian, TwoSpinSpectrum) {
    const auto ev = sorted(diagonalize(build_full_hamiltonian(2, 0.5, 1.0)).energies);
    const double r = std::sqrt(0.3125);
    const std::vector<double> expected{-0.25 - r, -0.5, 0.0, -0.25 + r};
    std::vector<double> exp_sorted = expected;
    std::sort(exp_sorted.begin(), exp_sorted.end());
    ASSERT_EQ(ev.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(ev[i], exp_sorted[i], 1e-13);
    EXPECT_NEAR(ev[0], -0.809017, 5e-7);
    EXPECT_NEAR(ev[3], 0.309017, 5e-7);
}

TEST(FullHamiltonian, SymmetricEntries) {
    const auto h = build_full_hamiltonian(6, 0.7, -1.3);
    EXPECT_LE((h.entries - h.entries.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(TotalSpinBlocks, TripletAndSinglet) {
    const auto blocks = total_spin_blocks(2);
    ASSERT_EQ(blocks.size(), 2u);
    std::map<int, std::pair<Eigen::Index, int>> by_l;
    for (const auto& b : blocks) by_l[b.two_l] = {b.columns.cols(), b.copy_count};
    EXPECT_EQ(by_l.at(2), std::make_pair(Eigen::Index{3}, 1));
    EXPECT_EQ(by_l.at(0), std::make_pair(Eigen::Index{1}, 1));
}

TEST(TotalSpinBlocks, FourSpins) {
    std::map<int, std::pair<Eigen::Index, int>> by_l;
    for (const auto& b : total_spin_blocks(4)) by_l[b.two_l] = {b.columns.cols(), b.copy_count};
    EXPECT_EQ(by_l.at(4), std::make_pair(Eigen::Index{5}, 1));
    EXPECT_EQ(by_l.at(2), std::make_pair(Eigen::Index{9}, 3));
    EXPECT_EQ(by_l.at(0), std::make_pair(Eigen::Index{2}, 2));
}

TEST(TotalSpinBlocks, CompleteOrthonormalAndMatchingMultiplicities) {
    for (int n = 1; n <= 9; ++n) {
        const auto blocks = total_spin_blocks(n);
        Eigen::Index total = 0;
        for (const auto& b : blocks) {
            total += b.columns.cols();
            const Eigen::MatrixXd gram = b.columns.transpose() * b.columns;
            EXPECT_LE((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-10);
            EXPECT_EQ(b.copy_count * (b.two_l + 1), b.columns.cols());
            EXPECT_EQ(BigInt(b.copy_count), sector_multiplicity(n, b.two_l));
        }
        EXPECT_EQ(total, Eigen::Index{1} << n);
    }
}

TEST(DecomposeGibbs, InfiniteTemperatureWeights) {
    const int n = 6;
    const auto blocks = decompose_gibbs({n, 0.5, 1.0, 1e-9});
    for (const auto& b : blocks) {
        const double expected = (b.dim * b.deg).convert_to<double>() / 64.0;
        EXPECT_NEAR(b.p, expected, 1e-8);
    }
}

TEST(DecomposeGibbs, TwoSpinSingletWeight) {
    const auto blocks = decompose_gibbs({2, 0.5, 1.0, 2.0});
    const double r = std::sqrt(0.3125);
    double z_triplet = 0.0;
    for (double e : {-0.25 - r, -0.5, -0.25 + r}) z_triplet += std::exp(-2.0 * e);
    for (const auto& b : blocks)
        if (b.deg == 1) {
            EXPECT_NEAR(b.p, 1.0 / (1.0 + z_triplet), 1e-13);
        }
}

TEST(DecomposeGibbs, WeightsMatchSectorFreeEnergy) {
    for (int n : {3, 6, 8}) {
        const ModelParams p{n, 0.5, 1.0, 1.7};
        const auto spectra = compute_sector_spectra(n, p.omega, p.alpha);
        const double f = n * free_energy_per_particle(spectra, p.beta);
        double total = 0.0;
        for (const auto& b : decompose_gibbs(p)) {
            const int two_l = (b.deg - 1).convert_to<int>();
            const double expected =
                std::exp(log_bigint(b.dim) + log_trace_exp(spectra.sector(two_l).eigenvalues, p.beta) + p.beta * f);
            EXPECT_NEAR(b.p, expected, 1e-10);
            total += b.p;
            EXPECT_NO_THROW(b.validate());
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(DecomposeGibbs, LowTemperatureConcentratesOnGroundSector) {
    const auto blocks = decompose_gibbs({6, 0.5, 1.0, 60.0});
    double top = 0.0;
    for (const auto& b : blocks) top = std::max(top, b.p);
    EXPECT_GT(top, 0.999);
}

TEST(PermutationInvariance, Examples) {
    EXPECT_TRUE(check_permutation_invariance(build_full_hamiltonian(4, 0.5, 1.0)));
    auto broken = build_full_hamiltonian(4, 0.5, 1.0);
    // eps S_z on the first spin (bit 0)
    for (Eigen::Index s = 0; s < 16; ++s) broken.entries(s, s) += 1e-3 * ((s & 1) ? -0.5 : 0.5);
    EXPECT_FALSE(check_permutation_invariance(broken));
    EXPECT_TRUE(check_permutation_invariance({3, Eigen::MatrixXd::Zero(8, 8)}));
}

TEST(Dense, FreeEnergyAndEntropyOfSingleSpin) {
    const auto s = diagonalize(build_full_hamiltonian(1, 0.8, 0.0));
    const double beta = 1.5;
    EXPECT_NEAR(dense_free_energy(s.energies, beta), -std::log(2.0 * std::cosh(0.6)) / beta, 1e-14);
    const double p = 1.0 / (1.0 + std::exp(-1.2));
    EXPECT_NEAR(dense_gibbs_entropy(s.energies, beta), -(p * std::log(p) + (1 - p) * std::log(1 - p)), 1e-14);
}

TEST(RunChecks, AllPassAcrossParameters) {
    for (int n : {1, 2, 5, 8})
        for (double beta : {0.5, 2.0, 5.0})
            for (double alpha : {-1.0, 0.0, 1.0}) {
                const auto report = run_checks({n, 0.5, alpha, beta});
                ASSERT_EQ(report.checks.size(), 5u);
                for (const auto& c : report.checks) EXPECT_TRUE(c.pass) << c.name << " n=" << n << " dev=" << c.deviation;
            }
}

TEST(RunChecks, DetectsWrongSectorSpectra) {
    const ModelParams p{4, 0.5, 1.0, 1.0};
    const auto h = build_full_hamiltonian(p.n, p.omega, p.alpha);
    auto spectra = compute_sector_spectra(p.n, p.omega, 1.1);
    const auto report = run_checks(p, h, diagonalize(h), total_spin_blocks(p.n), spectra);
    EXPECT_FALSE(report.ok());
    EXPECT_FALSE(report.checks[0].pass);
    EXPECT_FALSE(report.checks[1].pass);
}
