#include "spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace zlab::detail {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is.  Plans are created once per (kind, size, batch) and kept for the
// lifetime of the process.  FFTW_ESTIMATE keeps the plans, and therefore the
// floating-point results, identical from run to run.
class PlanCache {
public:
    fftw_plan get(fftw_r2r_kind kind, int size, int batch) {
        std::lock_guard lock(mutex_);
        auto key = std::make_tuple(static_cast<int>(kind), size, batch);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        std::vector<double> scratch(static_cast<std::size_t>(size) * batch);
        fftw_r2r_kind kinds[1] = {kind};
        int dims[1] = {size};
        // Interleaved layout: stride = batch, distance = 1.
        fftw_plan plan = fftw_plan_many_r2r(1, dims, batch, scratch.data(), nullptr, batch, 1,
                                            scratch.data(), nullptr, batch, 1, kinds,
                                            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) throw std::runtime_error("fftw: failed to create r2r plan");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

}  // namespace

void sine_transform(std::span<cplx> data) {
    const int n = static_cast<int>(data.size());
    auto* raw = reinterpret_cast<double*>(data.data());
    fftw_execute_r2r(plan_cache().get(FFTW_RODFT00, n, 2), raw, raw);
    const double scale = 1.0 / std::sqrt(2.0 * (n + 1));
    for (auto& v : data) v *= scale;
}

void sine_transform(std::span<double> data) {
    const int n = static_cast<int>(data.size());
    fftw_execute_r2r(plan_cache().get(FFTW_RODFT00, n, 1), data.data(), data.data());
    const double scale = 1.0 / std::sqrt(2.0 * (n + 1));
    for (auto& v : data) v *= scale;
}

void cosine_synthesis(std::span<const cplx> coeffs, std::span<cplx> out) {
    const int n = static_cast<int>(coeffs.size());
    if (out.size() != coeffs.size() + 2) throw std::logic_error("cosine_synthesis: size mismatch");
    out[0] = 0.0;
    out[n + 1] = 0.0;
    for (int m = 0; m < n; ++m) out[m + 1] = coeffs[m];
    auto* raw = reinterpret_cast<double*>(out.data());
    // REDFT00 of size n+2: Y_j = X_0 + (-1)^j X_{n+1} + 2 sum_{m=1..n} X_m cos(pi m j/(n+1)).
    fftw_execute_r2r(plan_cache().get(FFTW_REDFT00, n + 2, 2), raw, raw);
    const double scale = 1.0 / std::sqrt(2.0 * (n + 1));
    for (auto& v : out) v *= scale;
}

std::vector<cplx> w_spectrum(const RadialField& f) {
    const auto& grid = f.grid();
    std::vector<cplx> w(f.size());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = grid.node(j) * f[j];
    sine_transform(std::span<cplx>(w));
    return w;
}

RadialField from_w_spectrum(const RadialGrid& grid, std::vector<cplx> spectrum) {
    sine_transform(std::span<cplx>(spectrum));
    for (std::size_t j = 0; j < spectrum.size(); ++j) spectrum[j] /= grid.node(j);
    return RadialField(grid, std::move(spectrum), Representation::Physical);
}

std::vector<cplx> w_derivative(const RadialGrid& grid, std::span<const cplx> spectrum) {
    const std::size_t n = spectrum.size();
    std::vector<cplx> scaled(n);
    for (std::size_t m = 0; m < n; ++m) scaled[m] = spectrum[m] * grid.wavenumber(m);
    std::vector<cplx> full(n + 2);
    cosine_synthesis(scaled, full);
    return {full.begin() + 1, full.end() - 1};
}

}  // namespace zlab::detail
