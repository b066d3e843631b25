#include "zlab/diagnostics_norms.hpp"

#include <cmath>
#include <stdexcept>

#include "spectral.hpp"
#include "zlab/functionals.hpp"
#include "zlab/normal_form.hpp"

namespace zlab {

namespace {

// ||P_k f||_p for every dyadic index of the grid, plus the low block.
struct Blocks {
    int lo = 0;
    int hi = -1;
    std::vector<double> norms;  ///< index k - lo
    double low = 0.0;           ///< ||sum_{k<=0} P_k f||_p
};

Blocks blocks(const RadialField& f, double p) {
    const auto& g = f.grid();
    const auto [lo, hi] = lp_index_range(g);
    const auto spec = detail::w_spectrum(f);
    Blocks out;
    out.lo = lo;
    out.hi = hi;
    std::vector<cplx> low(spec.size(), cplx(0.0, 0.0));
    for (int k = lo; k <= hi; ++k) {
        std::vector<cplx> piece(spec.size());
        bool any = false;
        for (std::size_t m = 0; m < spec.size(); ++m) {
            const double phi = lp_bump(k, g.wavenumber(m));
            piece[m] = spec[m] * phi;
            if (k <= 0) low[m] += piece[m];
            any = any || phi != 0.0;
        }
        out.norms.push_back(any ? lp_norm(detail::from_w_spectrum(g, std::move(piece)), p) : 0.0);
    }
    out.low = lp_norm(detail::from_w_spectrum(g, std::move(low)), p);
    return out;
}

void require_p(double p, const char* who) {
    if (!(p >= 1.0)) throw std::invalid_argument(std::string(who) + ": p must lie in [1, inf]");
}

const State& state_of(const Sample& s, const char* who) {
    if (!s.state) throw std::invalid_argument(std::string(who) + ": trajectory was recorded without states");
    return *s.state;
}

double slope(const std::vector<double>& t, const std::vector<double>& y) {
    const double n = static_cast<double>(t.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
    }
    const double mt = st / n, my = sy / n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        num += (t[i] - mt) * (y[i] - my);
        den += (t[i] - mt) * (t[i] - mt);
    }
    return den > 0.0 ? num / den : 0.0;
}

double mean(const std::vector<double>& y) {
    double s = 0.0;
    for (double v : y) s += v;
    return y.empty() ? 0.0 : s / static_cast<double>(y.size());
}

}  // namespace

double besov_norm(const RadialField& f, double s, double p, bool homogeneous) {
    require_p(p, "besov_norm");
    const auto b = blocks(f, p);
    double sum = homogeneous ? 0.0 : b.low * b.low;
    for (int k = b.lo; k <= b.hi; ++k) {
        if (!homogeneous && k <= 0) continue;
        const double v = std::exp2(s * k) * b.norms[k - b.lo];
        sum += v * v;
    }
    return std::sqrt(sum);
}

double split_besov_norm(const RadialField& f, double s_low, double s_high, double p) {
    require_p(p, "split_besov_norm");
    const auto b = blocks(f, p);
    double low = 0.0, high = 0.0;
    for (int k = b.lo; k <= b.hi; ++k) {
        const double v = std::exp2((k <= 0 ? s_low : s_high) * k) * b.norms[k - b.lo];
        (k <= 0 ? low : high) += v * v;
    }
    return std::sqrt(low) + std::sqrt(high);
}

ZNorm z_norm(const Trajectory& traj, double delta, double t_min, double t_max) {
    if (traj.samples.empty()) throw std::invalid_argument("z_norm: empty trajectory");
    if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("z_norm: delta must lie in (0, 1/2)");
    const double inf = std::numeric_limits<double>::infinity();
    ZNorm out;
    bool any = false;
    for (const auto& smp : traj.samples) {
        if (smp.t < t_min || smp.t > t_max) continue;
        const auto& st = state_of(smp, "z_norm");
        out.x = std::max(out.x, besov_norm(st.u, -0.5 - delta, inf, false));
        out.y = std::max(out.y, split_besov_norm(real_part(st.n_field), -1.5 + delta, -1.5 - delta, inf));
        any = true;
    }
    if (!any) throw std::invalid_argument("z_norm: no samples in the time window");
    return out;
}

double spacetime_norm(const Trajectory& traj, const NormSpec& spec, Component component, double t_max) {
    if (!(spec.b >= 0.0 && spec.b <= 1.0)) throw std::invalid_argument("spacetime_norm: b must lie in [0, 1]");
    if (!(spec.d > 0.0 && spec.d <= 1.0)) throw std::invalid_argument("spacetime_norm: d must lie in (0, 1]");
    if (traj.samples.empty()) throw std::invalid_argument("spacetime_norm: empty trajectory");
    std::vector<double> t, v;
    for (const auto& smp : traj.samples) {
        if (smp.t > t_max) break;
        const auto& st = state_of(smp, "spacetime_norm");
        const auto& f = component == Component::U ? st.u : st.n_field;
        t.push_back(smp.t);
        v.push_back(besov_norm(f, spec.s, 1.0 / spec.d, spec.homogeneous));
    }
    if (t.empty()) throw std::invalid_argument("spacetime_norm: no samples in the time window");
    if (spec.b == 0.0) {
        double m = 0.0;
        for (double x : v) m = std::max(m, x);
        return m;
    }
    if (t.size() < 2) return 0.0;
    const double step = t[1] - t[0];
    for (std::size_t i = 2; i < t.size(); ++i) {
        // The final step may be shortened to land on t_final.
        const double h = t[i] - t[i - 1];
        if (std::abs(h - step) > 1e-9 * std::max(1.0, step) && i + 1 != t.size())
            throw std::invalid_argument("spacetime_norm: sampling is not uniform");
    }
    const double q = 1.0 / spec.b;
    double integral = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i)
        integral += 0.5 * (t[i] - t[i - 1]) * (std::pow(v[i], q) + std::pow(v[i - 1], q));
    return std::pow(integral, spec.b);
}

ScatteringIndicator scattering_indicator(const Trajectory& traj, std::size_t window, double delta) {
    const auto& smp = traj.samples;
    if (smp.size() < 4) throw std::invalid_argument("scattering_indicator: need at least 4 samples");
    if (window < 2) throw std::invalid_argument("scattering_indicator: window must be at least 2");
    ScatteringIndicator out;

    const double t_end = smp.back().t;
    const double t_half = smp.front().t + 0.5 * (t_end - smp.front().t);
    std::vector<double> t, y;
    for (const auto& s : smp)
        if (s.t >= t_half) {
            t.push_back(s.t);
            y.push_back(s.rec.u_l4);
        }
    out.u4_slope = slope(t, y);
    const double m = mean(y);
    out.u4_relative_change = m > 0.0 ? out.u4_slope * (t.back() - t.front()) / m : 0.0;
    out.u4_decreasing = out.u4_relative_change < -1e-3;

    const std::size_t k = std::min(window + 1, smp.size());
    std::vector<State> pulled;
    for (std::size_t i = smp.size() - k; i < smp.size(); ++i) {
        const auto& st = state_of(smp[i], "scattering_indicator");
        pulled.push_back(linear_flow(st, -st.time));
    }
    for (std::size_t i = 1; i < pulled.size(); ++i) out.cauchy_increments.push_back(h1l2_distance(pulled[i], pulled[i - 1]));
    out.cauchy_decreasing = true;
    const auto& inc = out.cauchy_increments;
    const double scale = std::max(1.0, h1l2_norm(pulled.back()));
    for (std::size_t i = 1; i < inc.size(); ++i)
        if (inc[i] > inc[i - 1] + 1e-12 * scale) out.cauchy_decreasing = false;

    out.trailing_x = z_norm(traj, delta, t_half).x;
    out.scattering_consistent = out.u4_decreasing && out.cauchy_decreasing;
    return out;
}

GrowupIndicator growup_indicator(const Trajectory& traj, double trend_threshold) {
    const auto& smp = traj.samples;
    if (smp.size() < 4) throw std::invalid_argument("growup_indicator: need at least 4 samples");
    GrowupIndicator out;
    const double t_half = smp.front().t + 0.5 * (smp.back().t - smp.front().t);
    std::vector<double> t, y;
    for (const auto& s : smp) {
        if (std::isfinite(s.h1l2)) out.max_h1l2 = std::max(out.max_h1l2, s.h1l2);
        if (s.t >= t_half && std::isfinite(s.h1l2)) {
            t.push_back(s.t);
            y.push_back(s.h1l2);
        }
    }
    const double m = mean(y);
    out.trailing_trend = m > 0.0 && t.size() >= 2 ? slope(t, y) / m : 0.0;
    out.blowup_suspected = traj.blowup_suspected;
    out.growup_consistent = out.blowup_suspected || out.trailing_trend > trend_threshold;
    return out;
}

}  // namespace zlab
