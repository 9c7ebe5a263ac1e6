#include "ndlimit/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>

namespace ndlimit {

namespace {
// FFTW's planner is not thread-safe; serialize plan creation/destruction.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct Transform::Impl {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::vector<double> scale_fwd;  // (-1)^(kx+ky+kz) / n^3 per bin
    std::vector<double> phase;      // (-1)^(kx+ky+kz) per bin
};

Transform::Transform(const GridSpec& grid)
    : grid_(grid), impl_(std::make_unique<Impl>()) {
    const int n = grid.n();
    const std::size_t np = grid.num_points();
    impl_->buf = fftw_alloc_complex(np);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        impl_->fwd = fftw_plan_dft_3d(n, n, n, impl_->buf, impl_->buf,
                                      FFTW_FORWARD, FFTW_ESTIMATE);
        impl_->bwd = fftw_plan_dft_3d(n, n, n, impl_->buf, impl_->buf,
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    impl_->scale_fwd.resize(np);
    impl_->phase.resize(np);
    const double inv_n3 = 1.0 / static_cast<double>(np);
    std::size_t idx = 0;
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x, ++idx) {
                double ph = ((x + y + z) % 2 == 0) ? 1.0 : -1.0;
                impl_->phase[idx] = ph;
                impl_->scale_fwd[idx] = ph * inv_n3;
            }
}

Transform::~Transform() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
    if (impl_->buf) fftw_free(impl_->buf);
}

void Transform::forward(const cplx* in, cplx* out) const {
    const std::size_t np = grid_.num_points();
    cplx* b = reinterpret_cast<cplx*>(impl_->buf);
    std::copy(in, in + np, b);
    fftw_execute(impl_->fwd);
    for (std::size_t i = 0; i < np; ++i) out[i] = b[i] * impl_->scale_fwd[i];
}

void Transform::inverse(const cplx* in, cplx* out) const {
    const std::size_t np = grid_.num_points();
    cplx* b = reinterpret_cast<cplx*>(impl_->buf);
    for (std::size_t i = 0; i < np; ++i) b[i] = in[i] * impl_->phase[i];
    fftw_execute(impl_->bwd);
    std::copy(b, b + np, out);
}

const Transform& transform_for(const GridSpec& grid) {
    thread_local std::map<std::pair<int, double>, std::unique_ptr<Transform>> cache;
    auto key = std::make_pair(grid.n(), grid.half_width());
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::make_unique<Transform>(grid)).first;
    }
    return *it->second;
}

}  // namespace ndlimit
