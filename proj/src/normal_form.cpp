#include "zlab/normal_form.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "spectral.hpp"
#include "zlab/evolution.hpp"

namespace zlab {

namespace {

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

// 0 for t <= -1/4, 1 for t >= 1/4.
double rho(double t) { return smooth_step(2.0 * t + 0.5); }

// Up to two (index, weight) pairs per wavenumber.
struct BumpPair {
    std::array<int, 2> index{0, 0};
    std::array<double, 2> weight{0.0, 0.0};
    int count = 0;
};

BumpPair bumps_at(double xi) {
    BumpPair p;
    if (!(xi > 0.0)) return p;
    const int k0 = dyadic_index(xi);
    for (int k = k0 - 1; k <= k0 + 1; ++k) {
        const double w = lp_bump(k, xi);
        if (w > 0.0 && p.count < 2) {
            p.index[p.count] = k;
            p.weight[p.count] = w;
            ++p.count;
        }
    }
    return p;
}

std::vector<BumpPair> grid_bumps(const RadialGrid& g) {
    std::vector<BumpPair> out(g.size());
    for (std::size_t m = 0; m < g.size(); ++m) out[m] = bumps_at(g.wavenumber(m));
    return out;
}

// Z(q) = sum_{j=1..n} sin(pi q j/(n+1)) / r_j for q = 0..3n+3, cached per grid.
std::shared_ptr<const std::vector<double>> z_table(const RadialGrid& g) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, double>, std::shared_ptr<const std::vector<double>>> cache;
    const auto key = std::make_pair(g.size(), g.r_max());
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const std::size_t n = g.size();
    auto z = std::make_shared<std::vector<double>>(3 * n + 4, 0.0);
    const double theta = std::numbers::pi / static_cast<double>(n + 1);
    for (std::size_t q = 1; q < z->size(); ++q) {
        long double s = 0.0L;
        for (std::size_t j = 1; j <= n; ++j)
            s += std::sin(theta * static_cast<double>((q * j) % (2 * (n + 1)))) / static_cast<double>(j);
        (*z)[q] = static_cast<double>(s) / g.spacing();
    }
    if (cache.size() > 8) cache.clear();
    cache.emplace(key, z);
    return z;
}

double z_signed(const std::vector<double>& z, long q) { return q >= 0 ? z[q] : -z[-q]; }

bool beta_ok(double beta, double alpha) { return beta >= minimal_beta(alpha) - 1e-12; }

void require_beta(double beta, double alpha, const char* who) {
    if (!(alpha > 0.0)) throw std::invalid_argument(std::string(who) + ": alpha must be positive");
    if (!beta_ok(beta, alpha))
        throw std::invalid_argument(std::string(who) + ": beta must be >= 5 + |log2 alpha|");
}

RadialField scaled(RadialField f, cplx c) {
    f *= c;
    return f;
}

}  // namespace

// ---------------------------------------------------------------------------

double lp_bump(int k, double xi) {
    if (!(xi > 0.0)) return 0.0;
    const double l = std::log2(xi);
    return rho(l - k + 0.5) - rho(l - k - 0.5);
}

int dyadic_index(double xi) {
    if (!(xi > 0.0)) throw std::invalid_argument("dyadic_index: wavenumber must be positive");
    return static_cast<int>(std::lround(std::log2(xi)));
}

std::pair<int, int> lp_index_range(const RadialGrid& grid) {
    const double l1 = std::log2(grid.wavenumber(0)), ln = std::log2(grid.k_max());
    return {static_cast<int>(std::floor(l1 - 0.75)) + 1, static_cast<int>(std::ceil(ln + 0.75)) - 1};
}

RadialField lp_project(const RadialField& f, int k) {
    auto spec = detail::w_spectrum(f);
    for (std::size_t m = 0; m < spec.size(); ++m) spec[m] *= lp_bump(k, f.grid().wavenumber(m));
    return detail::from_w_spectrum(f.grid(), std::move(spec));
}

std::string to_string(RegionKind k) {
    switch (k) {
        case RegionKind::XL: return "XL";
        case RegionKind::RL: return "RL";
        case RegionKind::LL: return "LL";
        case RegionKind::LH: return "LH";
        case RegionKind::HH: return "HH";
        case RegionKind::RR: return "RR";
        case RegionKind::LX: return "LX";
    }
    return "?";
}

bool region_contains(const FrequencyRegion& region, int j, int k) {
    const double beta = region.beta;
    const int mx = std::max(j, k);
    switch (region.kind) {
        case RegionKind::XL: return j >= k + 5 && j >= beta;
        case RegionKind::RL: return std::abs(j) < beta && j >= k + 5;
        case RegionKind::LL: return mx <= -beta;
        // Complement of XL u RL u LL; see the README for the reading of LH.
        case RegionKind::LH: return k > j - 5 && mx > -beta;
        case RegionKind::HH: return std::abs(j - k) < 5 && mx >= beta;
        case RegionKind::RR: return mx < beta;
        case RegionKind::LX: return k >= j + 5 && k >= beta;
    }
    return false;
}

bool RegionUnion::contains(int j, int k) const {
    for (auto kind : kinds)
        if (region_contains({kind, beta}, j, k)) return true;
    return false;
}

double minimal_beta(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("minimal_beta: alpha must be positive");
    return 5.0 + std::abs(std::log2(alpha));
}

double default_beta(double alpha) { return std::max(10.0, std::ceil(minimal_beta(alpha))); }

RadialField masked_product(const RadialField& f, const RadialField& g, const RegionUnion& region) {
    if (!(f.grid() == g.grid())) throw std::invalid_argument("masked_product: grids differ");
    const auto [lo, hi] = lp_index_range(f.grid());
    std::vector<RadialField> pf, pg;
    for (int k = lo; k <= hi; ++k) {
        pf.push_back(lp_project(f, k));
        pg.push_back(lp_project(g, k));
    }
    auto out = RadialField::zeros(f.grid());
    for (int j = lo; j <= hi; ++j) {
        auto acc = RadialField::zeros(f.grid());
        bool any = false;
        for (int k = lo; k <= hi; ++k) {
            if (!region.contains(j, k)) continue;
            acc += pg[k - lo];
            any = true;
        }
        if (!any) continue;
        const auto& a = pf[j - lo];
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += a[i] * acc[i];
    }
    return out;
}

RadialField masked_product(const RadialField& f, const RadialField& g, const FrequencyRegion& region) {
    return masked_product(f, g, RegionUnion{{region.kind}, region.beta});
}

double denominator_value(Denominator d, double s, double b, double a, double alpha) {
    switch (d) {
        case Denominator::SchrodingerPlus: return -s * s + alpha * b + a * a;
        case Denominator::SchrodingerMinus: return -s * s - alpha * b + a * a;
        case Denominator::Wave: return b * b - a * a - alpha * s;
        case Denominator::Unit: return 1.0;
    }
    return 1.0;
}

RadialField bilinear_multiplier(const RadialField& f, const RadialField& g, const RegionUnion& mask,
                                Denominator denom, double alpha, bool conjugate_second, DenominatorUse use) {
    if (!(f.grid() == g.grid())) throw std::invalid_argument("bilinear_multiplier: grids differ");
    const auto& grid = f.grid();
    const std::size_t n = grid.size();
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    {
        const auto [lo, hi] = lp_index_range(grid);
        bool any = false;
        for (int j = lo; j <= hi && !any; ++j)
            for (int k = lo; k <= hi && !any; ++k) any = mask.contains(j, k);
        if (!any) return detail::from_w_spectrum(grid, std::move(out));
    }
    const auto bumps = grid_bumps(grid);

    // Pair weights first: most masks are empty on a given grid.
    auto weight = [&](std::size_t b, std::size_t a) {
        double w = 0.0;
        const auto& pb = bumps[b];
        const auto& pa = bumps[a];
        for (int x = 0; x < pb.count; ++x)
            for (int y = 0; y < pa.count; ++y)
                if (mask.contains(pb.index[x], pa.index[y])) w += pb.weight[x] * pa.weight[y];
        return w;
    };
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<double> pair_w;
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t a = 0; a < n; ++a) {
            const double w = weight(b, a);
            if (w != 0.0) {
                pairs.emplace_back(b, a);
                pair_w.push_back(w);
            }
        }
    if (pairs.empty()) return detail::from_w_spectrum(grid, std::move(out));

    const auto F = detail::w_spectrum(f);
    auto G = detail::w_spectrum(g);
    if (conjugate_second)
        for (auto& v : G) v = std::conj(v);

    const auto zt = z_table(grid);
    const auto& z = *zt;
    const double c = std::sqrt(2.0 / static_cast<double>(n + 1));
    const double pre = 0.25 * c * c * c;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [b0, a0] = pairs[p];
        const cplx fg = F[b0] * G[a0] * pair_w[p];
        if (fg == cplx(0.0, 0.0)) continue;
        const long b = static_cast<long>(b0) + 1, a = static_cast<long>(a0) + 1;
        const double kb = grid.wavenumber(b0), ka = grid.wavenumber(a0);
        for (long m = 1; m <= static_cast<long>(n); ++m) {
            const double t = pre * (z_signed(z, m + b - a) + z_signed(z, b + a - m) + z_signed(z, a + m - b) -
                                    z_signed(z, m + a + b));
            const double ks = grid.wavenumber(static_cast<std::size_t>(m - 1));
            const double d = denominator_value(denom, ks, kb, ka, alpha);
            if (denom != Denominator::Unit && std::abs(d) < 1e-12 * alpha * kb * (1.0 + ks))
                throw std::runtime_error("bilinear_multiplier: resonant denominator inside the mask");
            cplx term = t * fg / d;
            if (use == DenominatorUse::RoundTrip) term *= d;
            out[static_cast<std::size_t>(m - 1)] += term;
        }
    }
    return detail::from_w_spectrum(grid, std::move(out));
}

RadialField omega(const RadialField& n_field, const RadialField& u, double beta, double alpha) {
    require_beta(beta, alpha, "omega");
    const RegionUnion mask{{RegionKind::XL, RegionKind::LL}, beta};
    auto plus = bilinear_multiplier(n_field, u, mask, Denominator::SchrodingerPlus, alpha);
    const auto minus = bilinear_multiplier(conj(n_field), u, mask, Denominator::SchrodingerMinus, alpha);
    plus += minus;
    plus *= 0.5;
    return plus;
}

RadialField omega_tilde(const RadialField& u, const RadialField& u2, double beta, double alpha) {
    require_beta(beta, alpha, "omega_tilde");
    const RegionUnion mask{{RegionKind::XL, RegionKind::LX}, beta};
    return bilinear_multiplier(u, u2, mask, Denominator::Wave, alpha, true);
}

// ---------------------------------------------------------------------------

ResonanceScan resonance_scan(double beta, double alpha, int samples) {
    if (!(alpha > 0.0)) throw std::invalid_argument("resonance_scan: alpha must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("resonance_scan: beta must be positive");
    if (samples < 2) throw std::invalid_argument("resonance_scan: need at least 2 samples per axis");
    ResonanceScan out;
    out.beta = beta;
    out.alpha = alpha;
    out.beta_admissible = beta_ok(beta, alpha);
    const double inf = std::numeric_limits<double>::infinity();
    out.min_ratio_schrodinger = out.min_ratio_ll = out.min_ratio_xl = out.min_ratio_wave = inf;
    out.max_ratio_ll = 0.0;

    // Interior points of the bump support (2^{k-3/4}, 2^{k+3/4}).
    auto support = [&](int k) {
        std::vector<double> v(samples);
        for (int i = 0; i < samples; ++i)
            v[i] = std::exp2(k - 0.75 + 1.5 * (i + 0.5) / samples);
        return v;
    };
    auto for_triangles = [&](int j, int k, auto&& visit) {
        const auto bs = support(j), as = support(k);
        for (double b : bs)
            for (double a : as) {
                const double lo = std::abs(a - b), hi = a + b;
                for (int i = 0; i < samples; ++i) {
                    const double s = lo + (hi - lo) * i / (samples - 1);
                    if (s > 0.0) visit(s, b, a);
                }
            }
    };

    const int bc = static_cast<int>(std::ceil(beta));
    const FrequencyRegion xl{RegionKind::XL, beta}, ll{RegionKind::LL, beta}, lx{RegionKind::LX, beta};
    // XL: j from the edge up, k from j - 5 down.
    for (int j = bc; j <= bc + 3; ++j)
        for (int k = j - 12; k <= j - 5; ++k) {
            if (!region_contains(xl, j, k)) continue;
            for_triangles(j, k, [&](double s, double b, double a) {
                for (auto d : {Denominator::SchrodingerPlus, Denominator::SchrodingerMinus}) {
                    const double r = std::abs(denominator_value(d, s, b, a, alpha)) / (b * (1.0 + s));
                    out.min_ratio_xl = std::min(out.min_ratio_xl, r);
                    ++out.evaluations;
                }
                const double w = std::abs(denominator_value(Denominator::Wave, s, b, a, alpha)) / (s * (1.0 + s));
                out.min_ratio_wave = std::min(out.min_ratio_wave, w);
            });
        }
    for (int j = -bc - 6; j <= -bc; ++j)
        for (int k = -bc - 6; k <= -bc; ++k) {
            if (!region_contains(ll, j, k)) continue;
            for_triangles(j, k, [&](double s, double b, double a) {
                for (auto d : {Denominator::SchrodingerPlus, Denominator::SchrodingerMinus}) {
                    const double om = std::abs(denominator_value(d, s, b, a, alpha));
                    out.min_ratio_ll = std::min(out.min_ratio_ll, om / (alpha * b));
                    out.max_ratio_ll = std::max(out.max_ratio_ll, om / (alpha * b));
                    out.min_ratio_schrodinger = std::min(out.min_ratio_schrodinger, om / (b * (1.0 + s)));
                    ++out.evaluations;
                }
            });
        }
    for (int k = bc; k <= bc + 3; ++k)
        for (int j = k - 12; j <= k - 5; ++j) {
            if (!region_contains(lx, j, k)) continue;
            for_triangles(j, k, [&](double s, double b, double a) {
                const double w = std::abs(denominator_value(Denominator::Wave, s, b, a, alpha)) / (s * (1.0 + s));
                out.min_ratio_wave = std::min(out.min_ratio_wave, w);
                ++out.evaluations;
            });
        }
    out.min_ratio_schrodinger = std::min(out.min_ratio_schrodinger, out.min_ratio_xl);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

struct SpectralPair {
    std::vector<cplx> u, n;
};

// Filon weights for int_0^1 e^{-i theta x} (1 - x) dx and int_0^1 e^{-i theta x} x dx.
std::pair<cplx, cplx> filon_weights(double theta) {
    const cplx c(0.0, -theta);
    cplx e0, w1;
    if (std::abs(theta) < 1e-2) {
        cplx ck(1.0, 0.0);
        double fact = 1.0;
        e0 = w1 = 0.0;
        for (int k = 0; k <= 7; ++k) {
            if (k > 0) {
                ck *= c;
                fact *= k;
            }
            e0 += ck / (fact * (k + 1));
            w1 += ck / (fact * (k + 2));
        }
    } else {
        const cplx e = std::exp(c);
        e0 = (e - 1.0) / c;
        w1 = e / c - (e - 1.0) / (c * c);
    }
    return {e0 - w1, w1};
}

double h1l2_of(const RadialGrid& g, const SpectralPair& p) {
    const auto u = detail::from_w_spectrum(g, p.u);
    const auto n = detail::from_w_spectrum(g, p.n);
    return std::sqrt(inner(u, u) + gradient_norm_sq(u) + inner(n, n));
}

SpectralPair spectra(const RadialField& u, const RadialField& n) {
    return {detail::w_spectrum(u), detail::w_spectrum(n)};
}

SpectralPair boundary_term(const State& s, double beta) {
    const double alpha = s.alpha;
    auto bu = omega(s.n_field, s.u, beta, alpha);
    bu *= -1.0;
    auto bn = apply_D_power(omega_tilde(s.u, s.u, beta, alpha), 1.0);
    bn *= -alpha;
    return spectra(bu, bn);
}

SpectralPair duhamel_integrand(const State& s, double beta) {
    const double alpha = s.alpha;
    const cplx mi(0.0, -1.0);
    const auto n = real_part(s.n_field);
    const auto u_nl = scaled(pointwise_product(n, s.u), mi);                          // -i n u
    const auto n_nl = scaled(apply_D_power(abs_squared(s.u), 1.0), mi * alpha);      // -i alpha D |u|^2

    auto qu = masked_product(n, s.u, RegionUnion{{RegionKind::RL, RegionKind::LH}, beta});
    qu *= mi;
    auto qn = apply_D_power(masked_product(s.u, conj(s.u), RegionUnion{{RegionKind::HH, RegionKind::RR}, beta}), 1.0);
    qn *= mi * alpha;

    auto tu = omega(n_nl, s.u, beta, alpha);
    tu += omega(s.n_field, u_nl, beta, alpha);
    auto tn_inner = omega_tilde(u_nl, s.u, beta, alpha);
    tn_inner += omega_tilde(s.u, u_nl, beta, alpha);
    auto tn = apply_D_power(tn_inner, 1.0);
    tn *= alpha;

    qu += tu;
    qn += tn;
    return spectra(qu, qn);
}

}  // namespace

NormalFormResidual normal_form_residual(const Trajectory& traj, double beta) {
    require_beta(beta, traj.alpha, "normal_form_residual");
    const auto& samples = traj.samples;
    if (samples.size() < 2) throw std::invalid_argument("normal_form_residual: need at least two samples");
    for (const auto& smp : samples)
        if (!smp.state) throw std::invalid_argument("normal_form_residual: trajectory was recorded without states");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (samples[i].t - samples[i - 1].t > 0.01 * (1.0 + 1e-9))
            throw std::invalid_argument("normal_form_residual: insufficient sampling density (spacing > 0.01)");

    const auto& grid = traj.grid;
    const std::size_t nn = grid.size();
    const double alpha = traj.alpha;
    std::vector<double> om_u(nn), om_n(nn);
    for (std::size_t m = 0; m < nn; ++m) {
        const double k = grid.wavenumber(m);
        om_u[m] = k * k;
        om_n[m] = alpha * k;
    }

    NormalFormResidual out;
    out.beta = beta;
    for (const auto& smp : samples) out.scale = std::max(out.scale, h1l2_norm(*smp.state));

    const State& s0 = *samples.front().state;
    const double t0 = samples.front().t;
    const auto init = spectra(s0.u, s0.n_field);
    const auto b0 = boundary_term(s0, beta);
    SpectralPair acc{std::vector<cplx>(nn), std::vector<cplx>(nn)};
    SpectralPair g_prev = duhamel_integrand(s0, beta);
    double tau_prev = 0.0;

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const State& s = *samples[i].state;
        const double tau = samples[i].t - t0;
        const auto bi = i == 0 ? b0 : boundary_term(s, beta);
        if (i > 0) {
            const auto g = duhamel_integrand(s, beta);
            const double dt = tau - tau_prev;
            for (std::size_t m = 0; m < nn; ++m) {
                const auto [wu0, wu1] = filon_weights(om_u[m] * dt);
                acc.u[m] += std::polar(dt, -om_u[m] * tau_prev) * (wu0 * g_prev.u[m] + wu1 * g.u[m]);
                const auto [wn0, wn1] = filon_weights(om_n[m] * dt);
                acc.n[m] += std::polar(dt, -om_n[m] * tau_prev) * (wn0 * g_prev.n[m] + wn1 * g.n[m]);
            }
            g_prev = g;
            tau_prev = tau;
        }

        SpectralPair duh{std::vector<cplx>(nn), std::vector<cplx>(nn)};
        SpectralPair diff = spectra(s.u, s.n_field);
        for (std::size_t m = 0; m < nn; ++m) {
            const cplx pu = std::polar(1.0, om_u[m] * tau), pn = std::polar(1.0, om_n[m] * tau);
            duh.u[m] = pu * acc.u[m];
            duh.n[m] = pn * acc.n[m];
            diff.u[m] -= pu * (init.u[m] - b0.u[m]) + bi.u[m] + duh.u[m];
            diff.n[m] -= pn * (init.n[m] - b0.n[m]) + bi.n[m] + duh.n[m];
        }
        const double r = h1l2_of(grid, diff) / out.scale;
        out.times.push_back(samples[i].t);
        out.residuals.push_back(r);
        out.max_residual = std::max(out.max_residual, r);
        out.max_boundary_norm = std::max(out.max_boundary_norm, h1l2_of(grid, bi));
        out.max_duhamel_norm = std::max(out.max_duhamel_norm, h1l2_of(grid, duh));
    }
    return out;
}

}  // namespace zlab
