// Prints f(l) for the three methods at a modest size and the minimizer of each.

#include "symtherm/curie_weiss.hpp"

#include <cstdio>

int main() {
    using namespace symtherm;
    const int n = 200;
    const double omega = 0.5, alpha = 1.0, beta = 2.0;

    const auto spectra = compute_sector_spectra(n, omega, alpha);
    const auto grid = attainable_l_grid(n);

    for (auto method : {CurveMethod::exact, CurveMethod::asymptotic, CurveMethod::analytic}) {
        const auto curve = potential_curve(spectra, beta, method, grid);
        const auto best = minimize_potential(curve);
        std::printf("%-10s l* = %.4f  f* = %.6f\n", to_string(method), best.l_star, best.f_star);
    }
    std::printf("paramagnetic prediction l* = %.4f\n", paramagnetic_lstar(omega, beta));
}
