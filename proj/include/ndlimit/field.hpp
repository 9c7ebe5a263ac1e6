#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ndlimit/grid.hpp"

namespace ndlimit {

using cplx = std::complex<double>;

/// NC-component complex field on a periodic grid. Components are stored as
/// contiguous n^3 blocks in row-major order with x fastest, matching the
/// snapshot file layout. Fields are plain values; operations never mutate
/// their inputs.
template <int NC>
class Field {
public:
    static_assert(NC == 1 || NC == 2 || NC == 4);
    static constexpr int num_components = NC;

    explicit Field(const GridSpec& g)
        : grid_(g), data_(g.num_points() * NC, cplx{0.0, 0.0}) {}

    const GridSpec& grid() const { return grid_; }
    std::size_t points() const { return grid_.num_points(); }

    cplx* component(int c) { return data_.data() + c * points(); }
    const cplx* component(int c) const { return data_.data() + c * points(); }

    cplx& at(int c, std::size_t idx) { return data_[c * points() + idx]; }
    const cplx& at(int c, std::size_t idx) const { return data_[c * points() + idx]; }

    std::vector<cplx>& raw() { return data_; }
    const std::vector<cplx>& raw() const { return data_; }

    bool finite() const {
        for (const cplx& v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    Field& operator+=(const Field& o) {
        check_same_grid(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Field& operator-=(const Field& o) {
        check_same_grid(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Field& operator*=(cplx s) {
        for (cplx& v : data_) v *= s;
        return *this;
    }
    Field& operator*=(double s) {
        for (cplx& v : data_) v *= s;
        return *this;
    }

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(Field a, cplx s) { return a *= s; }
    friend Field operator*(cplx s, Field a) { return a *= s; }
    friend Field operator*(Field a, double s) { return a *= s; }
    friend Field operator*(double s, Field a) { return a *= s; }

    void check_same_grid(const Field& o) const {
        if (grid_ != o.grid_) throw std::invalid_argument("field grid mismatch");
    }

private:
    GridSpec grid_;
    std::vector<cplx> data_;
};

using ScalarField = Field<1>;
using TwoSpinorField = Field<2>;
using SpinorField = Field<4>;

/// axpy on all components: y += a*x.
template <int NC>
inline void add_scaled(Field<NC>& y, cplx a, const Field<NC>& x) {
    y.check_same_grid(x);
    auto& yd = y.raw();
    const auto& xd = x.raw();
    for (std::size_t i = 0; i < yd.size(); ++i) yd[i] += a * xd[i];
}

/// Complex L2 inner product <u, v> = h^3 sum conj(u).v over all components.
template <int NC>
inline cplx inner_l2(const Field<NC>& u, const Field<NC>& v) {
    u.check_same_grid(v);
    cplx acc{0.0, 0.0};
    const auto& a = u.raw();
    const auto& b = v.raw();
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc * u.grid().cell_volume();
}

template <int NC>
inline double real_inner_l2(const Field<NC>& u, const Field<NC>& v) {
    u.check_same_grid(v);
    double acc = 0.0;
    const auto& a = u.raw();
    const auto& b = v.raw();
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    }
    return acc * u.grid().cell_volume();
}

template <int NC>
inline double norm_l2_sq(const Field<NC>& u) {
    double acc = 0.0;
    for (const cplx& v : u.raw()) acc += std::norm(v);
    return acc * u.grid().cell_volume();
}

template <int NC>
inline double norm_l2(const Field<NC>& u) {
    return std::sqrt(norm_l2_sq(u));
}

/// Pointwise modulus |u(x)| across components.
template <int NC>
inline std::vector<double> modulus(const Field<NC>& u) {
    std::vector<double> out(u.points());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (int c = 0; c < NC; ++c) s += std::norm(u.at(c, i));
        out[i] = std::sqrt(s);
    }
    return out;
}

template <int NC>
inline std::vector<double> modulus_sq(const Field<NC>& u) {
    std::vector<double> out(u.points());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (int c = 0; c < NC; ++c) s += std::norm(u.at(c, i));
        out[i] = s;
    }
    return out;
}

/// Upper two components of a Dirac spinor (f in the paper's (f,g)^T split).
inline TwoSpinorField upper_spinor(const SpinorField& u) {
    TwoSpinorField out(u.grid());
    const std::size_t np = u.points();
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < np; ++i) out.at(c, i) = u.at(c, i);
    return out;
}

/// Lower two components (g).
inline TwoSpinorField lower_spinor(const SpinorField& u) {
    TwoSpinorField out(u.grid());
    const std::size_t np = u.points();
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < np; ++i) out.at(c, i) = u.at(c + 2, i);
    return out;
}

/// Embed a two-spinor as the upper block of a Dirac spinor, lower block zero.
inline SpinorField embed_upper(const TwoSpinorField& v) {
    SpinorField out(v.grid());
    const std::size_t np = v.points();
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < np; ++i) out.at(c, i) = v.at(c, i);
    return out;
}

}  // namespace ndlimit
