#pragma once

// Transverse-field Curie-Weiss model
//
//     H = -omega sum_i S_z^(i) - (alpha / N) sum_{i,j} S_x^(i) S_x^(j)
//
// resolved into total-spin sectors L. Each sector contributes dim(lambda)
// identical copies of the spin-L operator
//
//     H_L = -omega L_z - (alpha / N) L_x^2,
//
// with lambda = (N/2 + L, N/2 - L). Sector solves are independent and run in
// parallel; every reduction across sectors runs in ascending L on one thread.

#include "symtherm/combinatorics.hpp"
#include "symtherm/error.hpp"
#include "symtherm/format.hpp"
#include "symtherm/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace symtherm {

struct ModelParams {
    int n = 1;
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 1.0;

    void validate() const {
        if (n < 1) throw DomainError("particle count n must be >= 1");
        if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive and finite");
        if (!(omega >= 0.0) || !std::isfinite(omega)) throw DomainError("omega must be non-negative and finite");
        if (!std::isfinite(alpha)) throw DomainError("alpha must be finite");
    }
};

enum class CurveMethod { exact, asymptotic, analytic };

/// Which constant the ordered branch of the analytic energy uses:
/// `derived` is -omega^2/(4 alpha) (minimum of the classical energy),
/// `printed` is the -omega^2/(2 alpha) variant kept for side-by-side output.
enum class AnalyticConstant { derived, printed };

inline const char* to_string(CurveMethod m) {
    switch (m) {
    case CurveMethod::exact: return "exact";
    case CurveMethod::asymptotic: return "asymptotic";
    case CurveMethod::analytic: return "analytic";
    }
    return "?";
}

inline CurveMethod parse_method(const std::string& s) {
    if (s == "exact") return CurveMethod::exact;
    if (s == "asymptotic") return CurveMethod::asymptotic;
    if (s == "analytic") return CurveMethod::analytic;
    throw DomainError("unknown method '" + s + "'");
}

// ---------------------------------------------------------------------------
// Sectors

/// Checks that 2L is a valid sector label for n spins.
inline void check_sector(int n, int two_l) {
    if (n < 1) throw DomainError("particle count n must be >= 1");
    if (two_l < 0 || two_l > n) throw DomainError("sector requires 0 <= L <= n/2");
    if ((n - two_l) % 2 != 0) throw DomainError("sector parity violation: n - 2L must be even");
}

/// Two-row shape (n/2 + L, n/2 - L) of sector 2L.
inline Partition sector_shape(int n, int two_l) {
    check_sector(n, two_l);
    return Partition::from_padded({(n + two_l) / 2, (n - two_l) / 2});
}

/// Maps l = L/n to 2L, rejecting values that are not attainable.
inline int resolve_two_l(int n, double l) {
    if (n < 1) throw DomainError("particle count n must be >= 1");
    const double x = 2.0 * l * n;
    const long long r = std::llround(x);
    const bool integral = std::isfinite(x) && std::abs(x - static_cast<double>(r)) <= 1e-9 * std::max(1.0, std::abs(x));
    if (integral && r >= 0 && r <= n && (n - r) % 2 == 0) return static_cast<int>(r);

    const int base = n % 2;
    const double steps = std::isfinite(x) ? std::round((x - base) / 2.0) : 0.0;
    const long long nearest = base + 2 * static_cast<long long>(std::clamp(steps, 0.0, (n - base) / 2.0));
    throw DomainError("l=" + format_double(l) + " is not attainable for n=" + std::to_string(n) +
                      "; nearest attainable value is " + format_double(static_cast<double>(nearest) / (2.0 * n)));
}

/// Attainable l = L/n values, ascending.
inline std::vector<double> attainable_l_grid(int n) {
    if (n < 1) throw DomainError("particle count n must be >= 1");
    std::vector<double> grid;
    for (int two_l = n % 2; two_l <= n; two_l += 2) grid.push_back(two_l / (2.0 * n));
    return grid;
}

/// H_L = -omega L_z - (alpha/n) L_x^2 in the basis |m>, m = L, L-1, ..., -L.
inline SymBandMatrix build_sector_hamiltonian(int n, int two_l, double omega, double alpha) {
    check_sector(n, two_l);
    const std::size_t dim = static_cast<std::size_t>(two_l) + 1;
    SymBandMatrix h(dim, 2);
    // work in doubled units: tm = 2m, and 4 L(L+1) = two_l (two_l + 2)
    const double four_ll = static_cast<double>(two_l) * (two_l + 2);
    const double coupling = alpha / n;
    for (std::size_t i = 0; i < dim; ++i) {
        const double tm = two_l - 2.0 * static_cast<double>(i);
        const double m = 0.5 * tm;
        // <m|L_x^2|m> = (L(L+1) - m^2) / 2
        h.set(i, i, -omega * m - coupling * (four_ll - tm * tm) / 8.0);
    }
    for (std::size_t i = 0; i + 2 < dim; ++i) {
        // couples m' = m_{i+2} with m' + 2 = m_i through L_+^2 / 4
        const double tm = two_l - 2.0 * static_cast<double>(i + 2);
        const double a = (four_ll - tm * (tm + 2.0)) / 4.0;
        const double b = (four_ll - (tm + 2.0) * (tm + 4.0)) / 4.0;
        h.set(i + 2, i, -coupling / 4.0 * std::sqrt(a * b));
    }
    return h;
}

inline SymBandMatrix build_sector_hamiltonian(int n, double l, double omega, double alpha) {
    return build_sector_hamiltonian(n, resolve_two_l(n, l), omega, alpha);
}

/// Number of copies of the spin-L sector: dim of the S_N irrep (n/2+L, n/2-L).
inline BigInt sector_multiplicity(int n, int two_l) {
    check_sector(n, two_l);
    const int k = (n - two_l) / 2;
    return binomial(n, k) - binomial(n, k - 1);
}

inline double log_sector_multiplicity(int n, int two_l) { return log_dim_irrep(sector_shape(n, two_l)); }

// ---------------------------------------------------------------------------
// Energy rates

/// E0_L / n from the sector ground state.
inline double energy_rate_numeric(int n, double l, double omega, double alpha) {
    return ground_state_energy(build_sector_hamiltonian(n, l, omega, alpha)) / n;
}

/// min over l_z in [-l, l] of -omega l_z - alpha (l^2 - l_z^2).
inline double energy_rate_analytic(double l, double omega, double alpha,
                                   AnalyticConstant constant = AnalyticConstant::derived) {
    if (!(l >= 0.0 && l <= 0.5)) throw DomainError("l must lie in [0, 1/2]");
    if (alpha <= 0.0 || 2.0 * alpha * l <= omega) return -omega * l;
    const double shift = constant == AnalyticConstant::derived ? 4.0 : 2.0;
    return -alpha * l * l - omega * omega / (shift * alpha);
}

// ---------------------------------------------------------------------------
// Sector spectra

struct SectorSpectrum {
    int two_l = 0;
    double log_multiplicity = 0.0;
    std::vector<double> eigenvalues; // ascending
};

struct SectorSpectra {
    int n = 0;
    double omega = 0.0;
    double alpha = 0.0;
    std::vector<SectorSpectrum> sectors; // ascending two_l

    const SectorSpectrum& sector(int two_l) const {
        check_sector(n, two_l);
        return sectors.at(static_cast<std::size_t>((two_l - n % 2) / 2));
    }
};

/// Persistent storage for sector eigenvalues, keyed by (n, 2L, omega, alpha).
/// Implementations must tolerate concurrent calls.
class SpectraStore {
public:
    virtual ~SpectraStore() = default;
    virtual std::optional<std::vector<double>> load(int n, int two_l, double omega, double alpha) = 0;
    virtual void save(int n, int two_l, double omega, double alpha, std::span<const double> eigenvalues) = 0;
};

struct SolveOptions {
    unsigned threads = 1;
    SpectraStore* store = nullptr;
    /// Called with (completed, total) after each sector; serialized.
    std::function<void(std::size_t, std::size_t)> progress;
};

namespace detail {

/// Runs job(i) for i in [0, count) on up to `threads` workers, largest index first.
template <class Job>
void parallel_for_descending(std::size_t count, unsigned threads, Job&& job) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= count) return;
            try {
                job(count - 1 - k);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
}

} // namespace detail

/// Full spectra for every sector of the model (n, omega, alpha).
inline SectorSpectra compute_sector_spectra(int n, double omega, double alpha, const SolveOptions& options = {}) {
    if (n < 1) throw DomainError("particle count n must be >= 1");
    SectorSpectra out{n, omega, alpha, {}};
    for (int two_l = n % 2; two_l <= n; two_l += 2)
        out.sectors.push_back({two_l, log_sector_multiplicity(n, two_l), {}});

    std::mutex progress_mutex;
    std::size_t done = 0;
    detail::parallel_for_descending(out.sectors.size(), options.threads, [&](std::size_t i) {
        auto& sector = out.sectors[i];
        std::optional<std::vector<double>> cached;
        if (options.store) cached = options.store->load(n, sector.two_l, omega, alpha);
        if (cached && cached->size() == static_cast<std::size_t>(sector.two_l) + 1) {
            sector.eigenvalues = std::move(*cached);
        } else {
            sector.eigenvalues = eig_sym_banded(build_sector_hamiltonian(n, sector.two_l, omega, alpha)).eigenvalues;
            if (options.store) options.store->save(n, sector.two_l, omega, alpha, sector.eigenvalues);
        }
        if (options.progress) {
            std::lock_guard lock(progress_mutex);
            options.progress(++done, out.sectors.size());
        }
    });
    return out;
}

/// ln Tr exp(-beta H_L) from the sector eigenvalues.
inline double log_trace_exp(std::span<const double> eigenvalues, double beta) {
    std::vector<double> x(eigenvalues.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = -beta * eigenvalues[i];
    return log_sum_exp(x);
}

/// F / n = -(beta n)^-1 ln sum_L dim(lambda_L) Tr exp(-beta H_L).
inline double free_energy_per_particle(const SectorSpectra& spectra, double beta) {
    std::vector<double> log_weights, log_terms;
    for (const auto& s : spectra.sectors) {
        log_weights.push_back(s.log_multiplicity);
        log_terms.push_back(log_trace_exp(s.eigenvalues, beta));
    }
    return -log_sum_exp(log_weights, log_terms) / (beta * spectra.n);
}

inline double free_energy_exact(const ModelParams& params, const SolveOptions& options = {}) {
    params.validate();
    return free_energy_per_particle(compute_sector_spectra(params.n, params.omega, params.alpha, options), params.beta);
}

// ---------------------------------------------------------------------------
// Free-energy potential f(l) = e(l) - s(l) / beta

struct CurvePoint {
    double l = 0.0;
    double f = 0.0;
    double s = 0.0;
    double e = 0.0;
};

struct ThermoCurve {
    CurveMethod method = CurveMethod::exact;
    ModelParams params;
    std::vector<CurvePoint> points;
};

struct PhasePoint {
    double beta = 0.0;
    double alpha = 0.0;
    double omega = 0.0;
    int n = 0;
    double l_star = 0.0;
    double f_star = 0.0;
    double s_star = 0.0;
    double e_star = 0.0;
};

namespace detail {

inline CurvePoint make_point(double l, double s, double e, double beta) { return {l, e - s / beta, s, e}; }

inline void check_grid(std::span<const double> l_grid) {
    for (std::size_t i = 1; i < l_grid.size(); ++i)
        if (!(l_grid[i] > l_grid[i - 1])) throw DomainError("l grid must be strictly increasing");
}

} // namespace detail

/// Potential curve from precomputed sector spectra. For the exact method the
/// point carries s = ln dim(lambda) / n and e = -ln Tr exp(-beta H_L) / (beta n).
inline ThermoCurve potential_curve(const SectorSpectra& spectra, double beta, CurveMethod method,
                                   std::span<const double> l_grid,
                                   AnalyticConstant constant = AnalyticConstant::derived) {
    ModelParams params{spectra.n, spectra.omega, spectra.alpha, beta};
    params.validate();
    detail::check_grid(l_grid);
    ThermoCurve curve{method, params, {}};
    curve.points.reserve(l_grid.size());
    const int n = spectra.n;
    for (double l : l_grid) {
        const int two_l = resolve_two_l(n, l);
        const double l_exact = two_l / (2.0 * n);
        switch (method) {
        case CurveMethod::exact: {
            const auto& sector = spectra.sector(two_l);
            const double s = sector.log_multiplicity / n;
            const double e = -log_trace_exp(sector.eigenvalues, beta) / (beta * n);
            curve.points.push_back(detail::make_point(l_exact, s, e, beta));
            break;
        }
        case CurveMethod::asymptotic: {
            const double e = spectra.sector(two_l).eigenvalues.front() / n;
            curve.points.push_back(detail::make_point(l_exact, rate_entropy_two_row(l_exact), e, beta));
            break;
        }
        case CurveMethod::analytic: {
            const double e = energy_rate_analytic(l_exact, spectra.omega, spectra.alpha, constant);
            curve.points.push_back(detail::make_point(l_exact, rate_entropy_two_row(l_exact), e, beta));
            break;
        }
        }
    }
    return curve;
}

struct CurveOptions {
    SolveOptions solve;
    AnalyticConstant constant = AnalyticConstant::derived;
};

/// Potential curve computed from scratch; only the sectors on the grid are solved.
inline ThermoCurve potential_curve(const ModelParams& params, CurveMethod method, std::span<const double> l_grid,
                                   const CurveOptions& options = {}) {
    params.validate();
    detail::check_grid(l_grid);
    const int n = params.n;
    std::vector<int> two_ls;
    for (double l : l_grid) two_ls.push_back(resolve_two_l(n, l));

    ThermoCurve curve{method, params, std::vector<CurvePoint>(l_grid.size())};
    if (method == CurveMethod::analytic) {
        for (std::size_t i = 0; i < two_ls.size(); ++i) {
            const double l = two_ls[i] / (2.0 * n);
            curve.points[i] = detail::make_point(
                l, rate_entropy_two_row(l), energy_rate_analytic(l, params.omega, params.alpha, options.constant),
                params.beta);
        }
        return curve;
    }
    // per-sector values first (parallel), then assemble in order
    std::vector<double> sector_e(two_ls.size()), sector_s(two_ls.size());
    detail::parallel_for_descending(two_ls.size(), options.solve.threads, [&](std::size_t i) {
        const int two_l = two_ls[i];
        const auto h = build_sector_hamiltonian(n, two_l, params.omega, params.alpha);
        const double l = two_l / (2.0 * n);
        if (method == CurveMethod::asymptotic) {
            sector_e[i] = ground_state_energy(h) / n;
            sector_s[i] = rate_entropy_two_row(l);
        } else {
            std::optional<std::vector<double>> eig;
            if (options.solve.store) eig = options.solve.store->load(n, two_l, params.omega, params.alpha);
            if (!eig || eig->size() != static_cast<std::size_t>(two_l) + 1) {
                eig = eig_sym_banded(h).eigenvalues;
                if (options.solve.store) options.solve.store->save(n, two_l, params.omega, params.alpha, *eig);
            }
            sector_e[i] = -log_trace_exp(*eig, params.beta) / (params.beta * n);
            sector_s[i] = log_sector_multiplicity(n, two_l) / n;
        }
    });
    for (std::size_t i = 0; i < two_ls.size(); ++i)
        curve.points[i] = detail::make_point(two_ls[i] / (2.0 * n), sector_s[i], sector_e[i], params.beta);
    return curve;
}

/// Grid argmin (ties toward smaller l) refined by a three-point parabola.
/// f, s and e are reported at the grid minimizer; l* is the refined vertex.
inline PhasePoint minimize_potential(const ThermoCurve& curve) {
    const auto& pts = curve.points;
    if (pts.empty()) throw DomainError("cannot minimize an empty curve");
    std::size_t best = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].f < pts[best].f) best = i;

    double l_star = pts[best].l;
    if (best > 0 && best + 1 < pts.size()) {
        const double x0 = pts[best - 1].l, x1 = pts[best].l, x2 = pts[best + 1].l;
        const double f0 = pts[best - 1].f, f1 = pts[best].f, f2 = pts[best + 1].f;
        const double num = (x1 - x0) * (x1 - x0) * (f1 - f2) - (x1 - x2) * (x1 - x2) * (f1 - f0);
        const double den = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0);
        // den < 0 exactly when the parabola opens upward
        if (den < 0.0) l_star = std::clamp(x1 - 0.5 * num / den, x0, x2);
    }
    const auto& p = curve.params;
    return {p.beta, p.alpha, p.omega, p.n, l_star, pts[best].f, pts[best].s, pts[best].e};
}

/// l*(beta, alpha) on the Cartesian grid, row-major in (beta, alpha).
inline std::vector<PhasePoint> phase_diagram(std::span<const double> beta_grid, std::span<const double> alpha_grid,
                                             double omega, int n, CurveMethod method,
                                             const CurveOptions& options = {}) {
    if (beta_grid.empty() || alpha_grid.empty()) throw DomainError("phase grids must be non-empty");
    for (double b : beta_grid) ModelParams{n, omega, 0.0, b}.validate();
    const auto l_grid = attainable_l_grid(n);
    std::vector<PhasePoint> out(beta_grid.size() * alpha_grid.size());
    for (std::size_t ia = 0; ia < alpha_grid.size(); ++ia) {
        const double alpha = alpha_grid[ia];
        std::optional<SectorSpectra> spectra;
        if (method != CurveMethod::analytic) spectra = compute_sector_spectra(n, omega, alpha, options.solve);
        for (std::size_t ib = 0; ib < beta_grid.size(); ++ib) {
            const double beta = beta_grid[ib];
            const ThermoCurve curve =
                spectra ? potential_curve(*spectra, beta, method, l_grid, options.constant)
                        : potential_curve(ModelParams{n, omega, alpha, beta}, method, l_grid, options);
            out[ib * alpha_grid.size() + ia] = minimize_potential(curve);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Closed forms

/// beta_c = 2 artanh(omega/alpha) / omega; nullopt when no ordered phase exists
/// (alpha <= omega or alpha <= 0). omega = 0 gives the limit 2/alpha.
inline std::optional<double> beta_critical(double omega, double alpha) {
    if (!(alpha > 0.0) || omega < 0.0 || omega >= alpha) return std::nullopt;
    const double r = omega / alpha;
    if (r < 1e-6) return 2.0 / alpha * (1.0 + r * r / 3.0 + r * r * r * r / 5.0);
    return 2.0 * std::atanh(r) / omega;
}

/// l* = tanh(omega beta / 2) / 2, the field-induced magnetization of the paramagnet.
inline double paramagnetic_lstar(double omega, double beta) { return 0.5 * std::tanh(0.5 * omega * beta); }

} // namespace symtherm
