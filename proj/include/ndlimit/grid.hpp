#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ndlimit {

/// Periodic computational box [-L, L)^3 sampled with n points per axis.
///
/// Owns every index/frequency convention used elsewhere:
///   - grid points      x_j = -L + j*h,          h = 2L/n,  j = 0..n-1
///   - frequency lattice xi_k = (pi/L)*k,        k = -n/2..n/2-1
///   - storage order    idx = x + n*(y + n*z)    (x fastest)
/// The lattice is symmetric except for the single unmatched Nyquist
/// index k = -n/2 per axis, which keeps its standard signed value.
class GridSpec {
public:
    GridSpec(int n, double half_width) : n_(n), half_width_(half_width) {
        if (n < 8 || n % 2 != 0)
            throw std::invalid_argument("GridSpec: n must be even and >= 8");
        if (!(half_width > 0.0))
            throw std::invalid_argument("GridSpec: half_width must be positive");
    }

    int n() const { return n_; }
    std::size_t num_points() const {
        return static_cast<std::size_t>(n_) * n_ * n_;
    }
    double half_width() const { return half_width_; }
    double spacing() const { return 2.0 * half_width_ / n_; }
    /// Quadrature weight of one grid cell.
    double cell_volume() const { double h = spacing(); return h * h * h; }
    double box_volume() const { double w = 2.0 * half_width_; return w * w * w; }

    /// Signed integer frequency for DFT bin m (m in [0, n)).
    int freq_index(int m) const { return m < n_ / 2 ? m : m - n_; }
    /// Angular frequency of DFT bin m.
    double xi(int m) const { return M_PI / half_width_ * freq_index(m); }
    /// Coordinate of grid point j along one axis.
    double coord(int j) const { return -half_width_ + spacing() * j; }

    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(z) * n_ * n_ +
               static_cast<std::size_t>(y) * n_ + x;
    }

    bool operator==(const GridSpec& o) const {
        return n_ == o.n_ && half_width_ == o.half_width_;
    }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }

    /// Distance from grid point (x,y,z) to the origin. Coordinates live in
    /// [-L, L) so this is already the minimum-image distance.
    double radius(int x, int y, int z) const {
        double px = coord(x), py = coord(y), pz = coord(z);
        return std::sqrt(px * px + py * py + pz * pz);
    }

private:
    int n_;
    double half_width_;
};

/// Per-mode frequency tables laid out in field storage order. Shared by all
/// Fourier-multiplier operations on one grid.
struct FrequencyTable {
    explicit FrequencyTable(const GridSpec& g) : grid(g) {
        const int n = g.n();
        const std::size_t np = g.num_points();
        xi_x.resize(np);
        xi_y.resize(np);
        xi_z.resize(np);
        xi_sq.resize(np);
        std::vector<double> ax(n);
        for (int m = 0; m < n; ++m) ax[m] = g.xi(m);
        std::size_t idx = 0;
        for (int z = 0; z < n; ++z)
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x, ++idx) {
                    xi_x[idx] = ax[x];
                    xi_y[idx] = ax[y];
                    xi_z[idx] = ax[z];
                    xi_sq[idx] = ax[x] * ax[x] + ax[y] * ax[y] + ax[z] * ax[z];
                }
    }

    GridSpec grid;
    std::vector<double> xi_x, xi_y, xi_z, xi_sq;
};

}  // namespace ndlimit
