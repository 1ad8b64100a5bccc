#include "rps/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rps/embedding.hpp"

namespace rps {

namespace {

constexpr cplx I{0.0, 1.0};

template <class F>
double trapezoid(std::size_t n, double h, F&& f)
{
    if (n < 2)
        return 0.0;
    double sum = 0.5 * (f(0) + f(n - 1));
    for (std::size_t i = 1; i + 1 < n; ++i)
        sum += f(i);
    return sum * h;
}

void require_beta(double beta)
{
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("beta must lie in [0, 1]");
}

std::size_t snapshot_index(const AmplitudeTrajectory& traj, double t)
{
    if (traj.size() < 2)
        throw std::invalid_argument("trajectory too short");
    const double t_end = traj.times.back();
    if (!(t > 0.0) || t > t_end * (1.0 + 1e-12))
        throw std::invalid_argument("snapshot time must lie in (0, t_end]");
    return traj.index_at(t);
}

// Linear interpolation of a uniformly sampled complex sequence starting at 0.
cplx sample(const std::vector<cplx>& v, double h, double t)
{
    if (t <= 0.0)
        return v.front();
    const double x = t / h;
    const auto i = static_cast<std::size_t>(x);
    if (i + 1 >= v.size())
        return v.back();
    const double f = x - static_cast<double>(i);
    return v[i] + f * (v[i + 1] - v[i]);
}

double l2_norm(const std::vector<cplx>& v, double h)
{
    return std::sqrt(trapezoid(v.size(), h, [&](std::size_t i) { return std::norm(v[i]); }));
}

}  // namespace

EfficiencyCurve efficiency(const AmplitudeTrajectory& traj, double beta)
{
    require_beta(beta);
    if (!traj.has_cavity() || traj.emitted.size() != traj.size())
        throw std::invalid_argument("trajectory carries no emission record");
    EfficiencyCurve curve;
    curve.times = traj.times;
    curve.eta.resize(traj.size());
    std::transform(traj.emitted.begin(), traj.emitted.end(), curve.eta.begin(),
                   [&](double e) { return beta * e; });
    return curve;
}

double asymptotic_efficiency(const AmplitudeTrajectory& traj, double beta)
{
    require_beta(beta);
    if (!traj.has_cavity() || traj.emitted.empty())
        throw std::invalid_argument("trajectory carries no emission record");
    return beta * (traj.emitted.back() + std::norm(traj.c_cav.back()));
}

ModeFunction mode_function(const AmplitudeTrajectory& traj, double beta, double t, const SpectrumOptions& opts)
{
    require_beta(beta);
    if (opts.points < 2)
        throw std::invalid_argument("spectrum needs at least two points");
    const std::size_t m = snapshot_index(traj, t);
    const std::vector<cplx> a_full = outgoing_amplitude(traj, beta);
    const std::vector<cplx> a(a_full.begin(), a_full.begin() + static_cast<std::ptrdiff_t>(m + 1));
    const double h = traj.dt;

    ModeFunction mode;
    mode.t = traj.times[m];
    mode.eta = beta * traj.emitted[m];
    const double energy = trapezoid(a.size(), h, [&](std::size_t i) { return std::norm(a[i]); });
    if (!(mode.eta > 0.0) || !(energy > 0.0))
        throw std::invalid_argument("no excitation to normalize");

    // RMS bandwidth of a_out sets the frequency span.
    double mean_num = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        const cplx mid = 0.5 * (a[i] + a[i + 1]);
        const cplx deriv = (a[i + 1] - a[i]) / h;
        mean_num += -std::imag(std::conj(mid) * deriv) * h;
        second += std::norm(deriv) * h;
    }
    const double centre = mean_num / energy;
    const double rms = std::sqrt(std::max(0.0, second / energy - centre * centre));
    const double half_span = opts.span_factor * std::max(1.0, 2.0 * std::sqrt(2.0 * std::log(2.0)) * rms);

    const std::size_t n = opts.points;
    const double dw = 2.0 * half_span / static_cast<double>(n - 1);
    mode.omegas.resize(n);
    std::vector<cplx> spec(n);
    const double prefactor = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    constexpr std::size_t resync = 512;

    for (std::size_t k = 0; k < n; ++k) {
        const double w = -half_span + dw * static_cast<double>(k);
        mode.omegas[k] = w;
        const cplx step = std::polar(1.0, w * h);
        cplx phasor{1.0, 0.0};
        cplx sum = 0.5 * a.front();
        for (std::size_t i = 1; i < a.size(); ++i) {
            phasor = (i % resync == 0) ? std::polar(1.0, w * h * static_cast<double>(i)) : phasor * step;
            sum += (i + 1 == a.size() ? 0.5 : 1.0) * a[i] * phasor;
        }
        spec[k] = prefactor * h * sum;
    }

    mode.spectral_norm = trapezoid(n, dw, [&](std::size_t k) { return std::norm(spec[k]); });
    const auto peak = std::max_element(spec.begin(), spec.end(),
                                       [](cplx x, cplx y) { return std::norm(x) < std::norm(y); });
    const cplx phase_fix = std::conj(*peak) / std::abs(*peak);
    const double scale = 1.0 / std::sqrt(mode.spectral_norm);
    mode.f1.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        mode.f1[k] = scale * phase_fix * spec[k];
    return mode;
}

double spectral_fwhm(const ModeFunction& mode)
{
    const auto& f = mode.f1;
    if (f.size() < 3)
        throw std::invalid_argument("spectrum too short");
    std::size_t peak = 0;
    for (std::size_t k = 1; k < f.size(); ++k)
        if (std::norm(f[k]) > std::norm(f[peak]))
            peak = k;
    const double half = 0.5 * std::norm(f[peak]);

    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double yi = std::norm(f[inside]);
        const double yo = std::norm(f[outside]);
        const double frac = (yi - half) / (yi - yo);
        return mode.omegas[inside] + frac * (mode.omegas[outside] - mode.omegas[inside]);
    };

    std::size_t lo = peak;
    while (lo > 0 && std::norm(f[lo - 1]) >= half)
        --lo;
    std::size_t hi = peak;
    while (hi + 1 < f.size() && std::norm(f[hi + 1]) >= half)
        ++hi;
    const double left = lo > 0 ? crossing(lo, lo - 1) : mode.omegas.front();
    const double right = hi + 1 < f.size() ? crossing(hi, hi + 1) : mode.omegas.back();
    return right - left;
}

cplx WavePacket::at(double zz) const
{
    if (z.size() < 2 || zz < z.front() || zz > z.back())
        return 0.0;
    const double h = z[1] - z[0];
    const double x = (zz - z.front()) / h;
    const auto i = std::min(static_cast<std::size_t>(x), z.size() - 2);
    const double f = x - static_cast<double>(i);
    return phi[i] + f * (phi[i + 1] - phi[i]);
}

WavePacket wavepacket(const AmplitudeTrajectory& traj, const Scenario& s, double t, std::size_t n_z,
                      const WavePacketOptions& opts)
{
    if (n_z < 2)
        throw std::invalid_argument("wave packet needs n_z >= 2");
    const std::size_t m = snapshot_index(traj, t);
    const double beta = s.params.beta;
    const double h = traj.dt;
    const std::vector<cplx> a_out = outgoing_amplitude(traj, beta);

    // Route (a): retarded convolution
    //   -(i/2) R_k sqrt(beta) e^{(i delta_c - 1/2) tau}
    //     * int_0^tau g_c(t') C2*(t') e^{-(i delta_c - 1/2) t'} dt'
    // evaluated as a running trapezoid over the trajectory grid.
    const cplx pole{-0.5, s.params.delta_c};
    std::vector<cplx> integrand(m + 1);
    for (std::size_t k = 0; k <= m; ++k)
        integrand[k] = s.coupling(traj.times[k]) * std::conj(traj.c2[k]) * std::exp(-pole * traj.times[k]);
    std::vector<cplx> prefix(m + 1);
    for (std::size_t k = 1; k <= m; ++k)
        prefix[k] = prefix[k - 1] + 0.5 * h * (integrand[k - 1] + integrand[k]);
    const cplx route_a_scale = -0.5 * I * s.params.rabi_vacuum * std::sqrt(beta);

    auto route_a = [&](double tau) -> cplx {
        if (tau <= 0.0)
            return 0.0;
        const double x = tau / h;
        auto i = std::min(static_cast<std::size_t>(x), m);
        const double rest = tau - h * static_cast<double>(i);
        cplx acc = prefix[i];
        if (i < m && rest > 0.0) {
            const cplx f_tau = integrand[i] + (rest / h) * (integrand[i + 1] - integrand[i]);
            acc += 0.5 * rest * (integrand[i] + f_tau);
        }
        return route_a_scale * std::exp(pole * tau) * acc;
    };

    const double t_snap = traj.times[m];
    WavePacket w;
    w.t_snapshot = t_snap;
    w.eta = beta * traj.emitted[m];
    w.z.resize(n_z);
    w.phi.resize(n_z);
    std::vector<cplx> alt(n_z);
    const double hz = t_snap / static_cast<double>(n_z - 1);
    for (std::size_t j = 0; j < n_z; ++j) {
        const double zz = hz * static_cast<double>(j);
        const double tau = std::max(0.0, t_snap - zz);
        w.z[j] = zz;
        w.phi[j] = std::conj(sample(a_out, h, tau));
        alt[j] = route_a(tau);
    }

    const double norm_b = l2_norm(w.phi, hz);
    if (!(norm_b > 0.0))
        throw std::invalid_argument("no excitation to normalize");
    double diff2 = trapezoid(n_z, hz, [&](std::size_t j) { return std::norm(w.phi[j] - alt[j]); });
    const double mismatch = std::sqrt(diff2) / norm_b;
    if (!(mismatch <= opts.route_tolerance)) {
        std::ostringstream msg;
        msg << "wave-packet routes disagree: relative L2 mismatch " << mismatch;
        throw ConsistencyError(msg.str());
    }

    const double escaped = trapezoid(m + 1, h, [&](std::size_t k) { return std::norm(a_out[k]); });
    const double inside = std::norm(a_out[m]) * (1.0 - std::exp(-opts.cavity_length));
    w.intracavity_fraction = inside / (inside + escaped);

    for (auto& v : w.phi)
        v /= norm_b;
    return w;
}

namespace {

// |<a, b shifted by s>|^2 / (|a|^2 |b|^2) on a's grid.
double shifted_overlap(const WavePacket& a, const WavePacket& b, double shift, double na2, double nb2)
{
    const double h = a.z[1] - a.z[0];
    const std::size_t n = a.z.size();
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        const double wgt = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
        acc += wgt * std::conj(a.phi[j]) * b.at(a.z[j] - shift);
    }
    acc *= h;
    return std::norm(acc) / (na2 * nb2);
}

double best_alignment(const WavePacket& a, const WavePacket& b, double na2, double nb2)
{
    const double range = std::max(a.z.back() - a.z.front(), b.z.back() - b.z.front());
    const double ha = a.z[1] - a.z[0];
    auto f = [&](double s) { return shifted_overlap(a, b, s, na2, nb2); };

    constexpr std::size_t coarse = 801;
    const double lo = -range;
    const double step = 2.0 * range / static_cast<double>(coarse - 1);
    double best_s = 0.0;
    double best = f(0.0);
    for (std::size_t i = 0; i < coarse; ++i) {
        const double s = lo + step * static_cast<double>(i);
        const double v = f(s);
        if (v > best) {
            best = v;
            best_s = s;
        }
    }

    // Golden-section refinement inside the bracketing coarse cell.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x0 = best_s - step;
    double x3 = best_s + step;
    double x1 = x3 - inv_phi * (x3 - x0);
    double x2 = x0 + inv_phi * (x3 - x0);
    double f1 = f(x1);
    double f2 = f(x2);
    while (x3 - x0 > 1e-3 * ha) {
        if (f1 > f2) {
            x3 = x2;
            x2 = x1;
            f2 = f1;
            x1 = x3 - inv_phi * (x3 - x0);
            f1 = f(x1);
        } else {
            x0 = x1;
            x1 = x2;
            f1 = f2;
            x2 = x0 + inv_phi * (x3 - x0);
            f2 = f(x2);
        }
    }
    double s_star = 0.5 * (x0 + x3);
    // Parabolic polish through three points around the bracket.
    const double d = std::max(x3 - x0, 1e-6 * ha);
    const double fm = f(s_star - d);
    const double fc = f(s_star);
    const double fp = f(s_star + d);
    const double denom = fm - 2.0 * fc + fp;
    if (denom < 0.0) {
        const double cand = s_star + 0.5 * d * (fm - fp) / denom;
        if (std::abs(cand - s_star) <= d && f(cand) > fc)
            s_star = cand;
    }
    return std::max({best, f(s_star), f1, f2});
}

}  // namespace

double packet_overlap(const WavePacket& a, const WavePacket& b)
{
    if (a.z.size() < 2 || b.z.size() < 2)
        throw std::invalid_argument("wave packets need at least two points");
    const double na2 = trapezoid(a.z.size(), a.z[1] - a.z[0], [&](std::size_t j) { return std::norm(a.phi[j]); });
    const double nb2 = trapezoid(b.z.size(), b.z[1] - b.z[0], [&](std::size_t j) { return std::norm(b.phi[j]); });
    if (!(na2 > 0.0) || !(nb2 > 0.0))
        throw std::invalid_argument("zero-norm wave packet");
    const double ab = best_alignment(a, b, na2, nb2);
    const double ba = best_alignment(b, a, nb2, na2);
    return std::clamp(0.5 * (ab + ba), 0.0, 1.0);
}

double packet_width(const WavePacket& w)
{
    if (w.z.size() < 2)
        return 0.0;
    const double h = w.z[1] - w.z[0];
    const std::size_t n = w.z.size();
    const double n0 = trapezoid(n, h, [&](std::size_t j) { return std::norm(w.phi[j]); });
    if (!(n0 > 0.0))
        return 0.0;
    const double m1 = trapezoid(n, h, [&](std::size_t j) { return w.z[j] * std::norm(w.phi[j]); }) / n0;
    const double m2 = trapezoid(n, h, [&](std::size_t j) { return w.z[j] * w.z[j] * std::norm(w.phi[j]); }) / n0;
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

std::vector<double> packet_peak_times(const WavePacket& w, double min_relative)
{
    std::vector<double> out;
    const std::size_t n = w.z.size();
    if (n < 3)
        return out;
    double top = 0.0;
    for (const auto& v : w.phi)
        top = std::max(top, std::norm(v));
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double y = std::norm(w.phi[j]);
        if (y >= min_relative * top && y > std::norm(w.phi[j - 1]) && y >= std::norm(w.phi[j + 1]))
            out.push_back(w.t_snapshot - w.z[j]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace rps
