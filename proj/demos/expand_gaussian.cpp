// Expand a gaussian in the eigenbasis and watch the truncation error fall.

#include <cmath>
#include <cstdio>

#include "lfdyn/lfdyn.hpp"

int main() {
    const lfdyn::MapParams params(1.2);
    const auto gauss = [](double x) { return std::exp(-x * x); };

    std::printf("%6s  %-14s\n", "n_max", "L1 error");
    for (int n_max : {4, 8, 16, 32, 64})
        std::printf("%6d  %.6e\n", n_max, lfdyn::expansion_error(params, gauss, n_max));

    const lfdyn::QuadratureGrid grid(params);
    const auto coeffs = lfdyn::compute_coefficients(params, gauss, 8, grid);
    std::printf("\nleading coefficients:\n");
    for (int n = -4; n <= 4; ++n)
        std::printf("  C_%-3d = %+.6f %+.6fi\n", n, coeffs.at(n).real(), coeffs.at(n).imag());
    return 0;
}
