#include "ndlimit/potentials.hpp"

#include <cmath>
#include <stdexcept>

namespace ndlimit {

std::vector<double> dealias_mask(const GridSpec& grid) {
    const int n = grid.n();
    std::vector<double> mask(grid.num_points());
    const double cut = n / 3.0;
    std::size_t idx = 0;
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x, ++idx) {
                bool keep = std::abs(grid.freq_index(x)) < cut &&
                            std::abs(grid.freq_index(y)) < cut &&
                            std::abs(grid.freq_index(z)) < cut;
                mask[idx] = keep ? 1.0 : 0.0;
            }
    return mask;
}

std::vector<double> gamma_multiplier_power_law(const GridSpec& grid, double tau) {
    if (!(tau > 0.0 && tau < 3.0))
        throw ParamWindowError("gamma multiplier: tau outside (0, 3)");
    const double c_tau = std::pow(M_PI, 1.5) * std::pow(2.0, 3.0 - tau) *
                         std::tgamma((3.0 - tau) / 2.0) / std::tgamma(tau / 2.0);
    const double L = grid.half_width();
    FrequencyTable freq(grid);
    std::vector<double> mult(grid.num_points());
    for (std::size_t i = 0; i < mult.size(); ++i) {
        if (freq.xi_sq[i] > 0.0)
            mult[i] = c_tau * std::pow(std::sqrt(freq.xi_sq[i]), tau - 3.0);
        else
            mult[i] = 4.0 * M_PI * std::pow(L, 3.0 - tau) / (3.0 - tau);
    }
    return mult;
}

std::vector<double> sampled_gamma_kernel(const GridSpec& grid, double tau) {
    if (!(tau > 0.0 && tau < 3.0))
        throw ParamWindowError("gamma kernel: tau outside (0, 3)");
    const int n = grid.n();
    const double L = grid.half_width();
    // Regularize the origin by the mean of |x|^-tau over a ball with the
    // volume of one grid cell.
    const double r_cell = grid.spacing() * std::cbrt(3.0 / (4.0 * M_PI));
    const double origin_value = 3.0 / (3.0 - tau) * std::pow(r_cell, -tau);
    std::vector<double> ker(grid.num_points());
    std::size_t idx = 0;
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x, ++idx) {
                double r = grid.radius(x, y, z);
                if (r < 1e-14)
                    ker[idx] = origin_value;
                else if (r <= L)
                    ker[idx] = std::pow(r, -tau);
                else
                    ker[idx] = 0.0;
            }
    return ker;
}

std::vector<double> gamma_multiplier_from_kernel(const GridSpec& grid, double tau) {
    std::vector<double> ker = sampled_gamma_kernel(grid, tau);
    const int n = grid.n();
    // Reindex by displacement: the convolution kernel must have its origin at
    // bin 0, so shift the centered samples by n/2 on each axis.
    ScalarField shifted(grid);
    cplx* s = shifted.component(0);
    std::size_t idx = 0;
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x, ++idx) {
                std::size_t src = grid.index((x + n / 2) % n, (y + n / 2) % n,
                                             (z + n / 2) % n);
                s[idx] = cplx(ker[src], 0.0);
            }
    const Transform& tr = transform_for(grid);
    ScalarField hat = tr.forward_field(shifted);
    // Multiplier = h^3 * raw DFT = box_volume * series coefficient; the
    // centered-phase factors cancel against the displacement reindexing.
    std::vector<double> mult(grid.num_points());
    const cplx* h = hat.component(0);
    const double scale = grid.box_volume();
    idx = 0;
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x, ++idx) {
                double ph = ((grid.freq_index(x) + grid.freq_index(y) +
                              grid.freq_index(z)) % 2 == 0)
                                ? 1.0
                                : -1.0;
                mult[idx] = scale * ph * h[idx].real();
            }
    return mult;
}

PotentialSet build_potentials(const GridSpec& grid, const PhysParams& p) {
    p.validate();
    PotentialSet pot(grid);
    const int n = grid.n();
    std::size_t idx = 0;
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x, ++idx) {
                double r = grid.radius(x, y, z);
                pot.K[idx] = std::exp(-p.a * r);
                pot.P[idx] = 1.0 / (1.0 + std::pow(r, p.mu));
            }
    pot.gamma_mult = gamma_multiplier_power_law(grid, p.tau);
    pot.dealias = dealias_mask(grid);
    return pot;
}

std::vector<double> convolve_gamma(const PotentialSet& pot,
                                   const std::vector<double>& rho) {
    const GridSpec& g = pot.grid;
    if (rho.size() != g.num_points())
        throw std::invalid_argument("convolve_gamma: density size mismatch");
    ScalarField tmp(g);
    cplx* t = tmp.component(0);
    for (std::size_t i = 0; i < rho.size(); ++i) t[i] = cplx(rho[i], 0.0);
    const Transform& tr = transform_for(g);
    ScalarField hat = tr.forward_field(tmp);
    cplx* h = hat.component(0);
    for (std::size_t i = 0; i < rho.size(); ++i)
        h[i] *= pot.gamma_mult[i] * pot.dealias[i];
    ScalarField back = tr.inverse_field(hat);
    std::vector<double> out(rho.size());
    const cplx* b = back.component(0);
    for (std::size_t i = 0; i < rho.size(); ++i) out[i] = b[i].real();
    return out;
}

}  // namespace ndlimit
