#pragma once

// Brute-force reference for small N: the Curie-Weiss Hamiltonian as an
// explicit 2^N x 2^N matrix, total-spin sectors found by diagonalizing L^2,
// and the Gibbs state split into blocks. Dense linear algebra goes through
// Eigen so this path shares no solver code with the sector route.

#include "symtherm/combinatorics.hpp"
#include "symtherm/curie_weiss.hpp"
#include "symtherm/entropy.hpp"
#include "symtherm/error.hpp"
#include "symtherm/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace symtherm::oracle {

inline constexpr int kMaxQubits = 12;
inline constexpr double kClusterTolerance = 1e-8;

struct DenseOperator {
    int n_qubits = 0;
    Eigen::MatrixXd entries;
};

/// Orthonormal basis of the L(L+1) eigenspace of L^2.
struct SectorBasis {
    int two_l = 0;
    Eigen::MatrixXd columns;
    int copy_count = 0;
};

namespace detail {

inline void check_qubits(int n) {
    if (n < 1 || n > kMaxQubits) throw DomainError("oracle supports 1 <= n <= " + std::to_string(kMaxQubits));
}

// bit i of a basis index is spin i; 0 = up (S_z = +1/2)
inline double total_sz(std::size_t state, int n) {
    return 0.5 * n - static_cast<double>(std::popcount(state));
}

inline std::size_t swap_bits(std::size_t s, int i, int j) {
    const std::size_t bi = (s >> i) & 1u, bj = (s >> j) & 1u;
    if (bi == bj) return s;
    return s ^ ((std::size_t{1} << i) | (std::size_t{1} << j));
}

} // namespace detail

/// H = -omega sum S_z^(i) - (alpha/n) sum_{i,j} S_x^(i) S_x^(j), the double
/// sum including i = j (a constant -alpha/4).
inline DenseOperator build_full_hamiltonian(int n, double omega, double alpha) {
    detail::check_qubits(n);
    const std::size_t dim = std::size_t{1} << n;
    DenseOperator h{n, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))};
    const double c = alpha / n;
    for (std::size_t s = 0; s < dim; ++s) {
        const auto si = static_cast<Eigen::Index>(s);
        h.entries(si, si) += -omega * detail::total_sz(s, n) - c * 0.25 * n;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                // S_x^(i) S_x^(j) + S_x^(j) S_x^(i) flips both spins with amplitude 1/2
                const std::size_t t = s ^ ((std::size_t{1} << i) | (std::size_t{1} << j));
                h.entries(static_cast<Eigen::Index>(t), si) += -c * 0.5;
            }
    }
    return h;
}

/// L^2 = 3n/4 - n(n-1)/4 + sum_{i<j} P_ij with P_ij the swap of spins i, j.
inline DenseOperator build_total_spin_squared(int n) {
    detail::check_qubits(n);
    const std::size_t dim = std::size_t{1} << n;
    DenseOperator op{n, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))};
    const double shift = 0.75 * n - 0.25 * n * (n - 1);
    for (std::size_t s = 0; s < dim; ++s) {
        const auto si = static_cast<Eigen::Index>(s);
        op.entries(si, si) += shift;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) op.entries(static_cast<Eigen::Index>(detail::swap_bits(s, i, j)), si) += 1.0;
    }
    return op;
}

/// Eigenspaces of L^2 grouped by L, ascending L.
inline std::vector<SectorBasis> total_spin_blocks(int n) {
    const DenseOperator l2 = build_total_spin_squared(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l2.entries);
    if (solver.info() != Eigen::Success) throw NumericalError("L^2 diagonalization failed");
    const auto& values = solver.eigenvalues();
    std::map<int, std::vector<Eigen::Index>> groups;
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        const double v = values(k);
        const double l = 0.5 * (std::sqrt(1.0 + 4.0 * std::max(v, 0.0)) - 1.0);
        const int two_l = static_cast<int>(std::lround(2.0 * l));
        const double expected = 0.25 * two_l * (two_l + 2);
        if (std::abs(v - expected) > kClusterTolerance)
            throw NumericalError("ambiguous L^2 eigenvalue clustering at " + std::to_string(v));
        groups[two_l].push_back(k);
    }
    std::vector<SectorBasis> out;
    for (const auto& [two_l, idx] : groups) {
        SectorBasis b;
        b.two_l = two_l;
        b.columns.resize(solver.eigenvectors().rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t c = 0; c < idx.size(); ++c)
            b.columns.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(idx[c]);
        if (idx.size() % static_cast<std::size_t>(two_l + 1) != 0)
            throw NumericalError("eigenspace dimension not divisible by 2L+1");
        b.copy_count = static_cast<int>(idx.size() / static_cast<std::size_t>(two_l + 1));
        out.push_back(std::move(b));
    }
    return out;
}

/// Full eigendecomposition of the dense Hamiltonian.
struct DenseSpectrum {
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
};

inline DenseSpectrum diagonalize(const DenseOperator& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.entries);
    if (solver.info() != Eigen::Success) throw NumericalError("dense diagonalization failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// -beta^-1 ln Tr exp(-beta H) from the dense spectrum.
inline double dense_free_energy(const Eigen::VectorXd& energies, double beta) {
    std::vector<double> x(static_cast<std::size_t>(energies.size()));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = -beta * energies(static_cast<Eigen::Index>(i));
    return -log_sum_exp(x) / beta;
}

/// -Tr rho ln rho for rho = exp(-beta H) / Z.
inline double dense_gibbs_entropy(const Eigen::VectorXd& energies, double beta) {
    const double e0 = energies.minCoeff();
    Eigen::ArrayXd w = (-beta * (energies.array() - e0)).exp();
    w /= w.sum();
    double s = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w(i) > 0.0) s -= w(i) * std::log(w(i));
    return s;
}

/// Block spectra of the Gibbs state: p_lambda = Tr(P rho P), dim = copy count
/// of the sector, deg = 2L+1, coarse spectrum from the (2L+1)-fold structure.
/// Throws if the projected block does not show copy_count-fold degeneracy.
inline std::vector<BlockSpectrum> decompose_gibbs(const DenseSpectrum& spectrum, const std::vector<SectorBasis>& bases,
                                                  int n, double beta) {
    const Eigen::VectorXd& e = spectrum.energies;
    const double e0 = e.minCoeff();
    Eigen::VectorXd w = (-beta * (e.array() - e0)).exp();
    w /= w.sum();

    std::vector<BlockSpectrum> blocks;
    for (const auto& basis : bases) {
        // rho restricted to the sector: (V^T B)^T diag(w) (V^T B)
        const Eigen::MatrixXd proj = spectrum.vectors.transpose() * basis.columns;
        const Eigen::MatrixXd block = proj.transpose() * w.asDiagonal() * proj;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block, Eigen::EigenvaluesOnly);
        std::vector<double> vals(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
        std::sort(vals.begin(), vals.end(), std::greater<>());

        const auto copies = static_cast<std::size_t>(basis.copy_count);
        const auto deg = static_cast<std::size_t>(basis.two_l + 1);
        const double top = vals.empty() ? 0.0 : std::max(vals.front(), 0.0);
        std::vector<double> coarse(deg, 0.0);
        double p = 0.0;
        for (std::size_t g = 0; g < deg; ++g) {
            const auto first = vals.begin() + static_cast<std::ptrdiff_t>(g * copies);
            const auto last = first + static_cast<std::ptrdiff_t>(copies);
            const auto [lo, hi] = std::minmax_element(first, last);
            if (*hi - *lo > 1e-9 * std::max(top, 1e-300) + 1e-15)
                throw NumericalError("projected Gibbs block lacks the expected copy degeneracy (2L=" +
                                     std::to_string(basis.two_l) + ")");
            double sum = 0.0;
            for (auto it = first; it != last; ++it) sum += std::max(*it, 0.0);
            coarse[g] = sum;
            p += sum;
        }
        BlockSpectrum b;
        b.lambda = sector_shape(n, basis.two_l);
        b.p = p;
        b.dim = basis.copy_count;
        b.deg = basis.two_l + 1;
        if (p > 0.0) {
            double total = 0.0;
            for (double& q : coarse) total += (q /= p);
            for (double& q : coarse) q /= total;
        } else {
            std::fill(coarse.begin(), coarse.end(), 0.0);
            coarse.front() = 1.0;
        }
        b.coarse_spectrum = std::move(coarse);
        blocks.push_back(std::move(b));
    }
    double total = 0.0;
    for (const auto& b : blocks) total += b.p;
    for (auto& b : blocks) b.p /= total;
    return blocks;
}

inline std::vector<BlockSpectrum> decompose_gibbs(const ModelParams& params) {
    params.validate();
    detail::check_qubits(params.n);
    const auto spectrum = diagonalize(build_full_hamiltonian(params.n, params.omega, params.alpha));
    return decompose_gibbs(spectrum, total_spin_blocks(params.n), params.n, params.beta);
}

/// True iff h commutes (entrywise within 1e-13) with every adjacent transposition.
inline bool check_permutation_invariance(const DenseOperator& h) {
    const int n = h.n_qubits;
    const auto dim = static_cast<std::size_t>(h.entries.rows());
    if (dim != (std::size_t{1} << n) || h.entries.cols() != h.entries.rows())
        throw DomainError("operator dimension does not match qubit count");
    for (int i = 0; i + 1 < n; ++i)
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) {
                const double permuted = h.entries(static_cast<Eigen::Index>(detail::swap_bits(r, i, i + 1)),
                                                  static_cast<Eigen::Index>(detail::swap_bits(c, i, i + 1)));
                if (std::abs(permuted - h.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))) > 1e-13)
                    return false;
            }
    return true;
}

// ---------------------------------------------------------------------------
// Cross-checks against the sector route

struct CheckResult {
    std::string name;
    bool pass = false;
    double deviation = 0.0; // worst observed deviation
    double tolerance = 0.0;
};

struct OracleReport {
    std::vector<CheckResult> checks;
    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
    }
};

/// Sector eigenvalues repeated by multiplicity, sorted.
inline std::vector<double> sector_spectrum_multiset(const SectorSpectra& spectra) {
    std::vector<double> all;
    for (const auto& s : spectra.sectors) {
        const auto copies = sector_multiplicity(spectra.n, s.two_l).convert_to<std::size_t>();
        for (std::size_t c = 0; c < copies; ++c) all.insert(all.end(), s.eigenvalues.begin(), s.eigenvalues.end());
    }
    std::sort(all.begin(), all.end());
    return all;
}

/// Runs the four equivalence properties for one parameter point.
/// `bases` and `spectrum` may be shared across beta values.
inline OracleReport run_checks(const ModelParams& params, const DenseOperator& h, const DenseSpectrum& spectrum,
                               const std::vector<SectorBasis>& bases, const SectorSpectra& spectra) {
    OracleReport report;
    const int n = params.n;

    {   // spectrum multiset
        const auto sector = sector_spectrum_multiset(spectra);
        CheckResult c{"spectrum-equivalence", false, 0.0, 1e-9};
        if (sector.size() == static_cast<std::size_t>(spectrum.energies.size())) {
            for (std::size_t i = 0; i < sector.size(); ++i)
                c.deviation = std::max(c.deviation, std::abs(sector[i] - spectrum.energies(static_cast<Eigen::Index>(i))));
            c.pass = c.deviation <= c.tolerance;
        } else {
            c.deviation = INFINITY;
        }
        report.checks.push_back(c);
    }
    {   // free energy, relative
        const double dense = dense_free_energy(spectrum.energies, params.beta);
        const double blocks = n * free_energy_per_particle(spectra, params.beta);
        CheckResult c{"free-energy-equivalence", false, 0.0, 1e-10};
        c.deviation = std::abs(dense - blocks) / std::max(std::abs(dense), 1e-300);
        if (dense == 0.0 && blocks == 0.0) c.deviation = 0.0;
        c.pass = c.deviation <= c.tolerance;
        report.checks.push_back(c);
    }
    const auto blocks = decompose_gibbs(spectrum, bases, n, params.beta);
    {   // entropy decomposition
        const double dense = dense_gibbs_entropy(spectrum.energies, params.beta);
        const double split = block_entropy(blocks).total;
        CheckResult c{"entropy-equivalence", false, std::abs(dense - split), 1e-10};
        c.pass = c.deviation <= c.tolerance;
        report.checks.push_back(c);
    }
    {   // bounds
        const auto bounds = verify_bounds(blocks, count_irreps(n, 2));
        double worst = bounds.shannon_slack;
        for (double s : bounds.block_slack) worst = std::min(worst, s);
        CheckResult c{"bound-satisfaction", bounds.ok(), worst, -kBoundTolerance};
        report.checks.push_back(c);
    }
    {   // permutation symmetry
        CheckResult c{"permutation-invariance", check_permutation_invariance(h), 0.0, 1e-13};
        report.checks.push_back(c);
    }
    return report;
}

inline OracleReport run_checks(const ModelParams& params) {
    params.validate();
    detail::check_qubits(params.n);
    const auto h = build_full_hamiltonian(params.n, params.omega, params.alpha);
    const auto spectrum = diagonalize(h);
    const auto bases = total_spin_blocks(params.n);
    const auto spectra = compute_sector_spectra(params.n, params.omega, params.alpha);
    return run_checks(params, h, spectrum, bases, spectra);
}

} // namespace symtherm::oracle
