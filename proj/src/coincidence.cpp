#include "homsim/coincidence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "homsim/parallel.hpp"
#include "homsim/quadrature.hpp"

namespace homsim {

namespace {

// |eps_a(t+tau) eps_b(t) -+ eps_b(t+tau) eps_a(t)|^2 with the dip (-) or
// peak (+) sign and prefactor.
double joint_prob(const WavePacket& ea, const WavePacket& eb, double t,
                  double tau, ScanKind kind) {
    const ComplexAmplitude x = evaluate(ea, t + tau) * evaluate(eb, t);
    const ComplexAmplitude y = evaluate(eb, t + tau) * evaluate(ea, t);
    if (kind == ScanKind::Dip) {
        return 0.25 * std::norm(x - y);
    }
    return std::norm(x + y) / 16.0;
}

struct TimeWindow {
    double lo, hi;
};

// Support of the t-integrand: eps_a is evaluated at t + tau (center
// t0a - tau), eps_b at t.
TimeWindow t_window(const WavePacket& ea, const WavePacket& eb, double tau) {
    const double smax = std::max(ea.sigma, eb.sigma);
    const double ca = ea.center_time - tau;
    const double cb = eb.center_time;
    return {std::min(ca, cb) - 8.0 * smax, std::max(ca, cb) + 8.0 * smax};
}

}  // namespace

double joint_prob_dip(const WavePacket& ea, const WavePacket& eb, double t,
                      double tau) {
    return joint_prob(ea, eb, t, tau, ScanKind::Dip);
}

double joint_prob_peak(const WavePacket& ea, const WavePacket& eb, double t,
                       double tau) {
    return joint_prob(ea, eb, t, tau, ScanKind::Peak);
}

double integrated_coincidence(const WavePacket& ea, const WavePacket& eb,
                              double tau, ScanKind kind) {
    const TimeWindow w = t_window(ea, eb, tau);
    // The carrier factors cancel inside |x -+ y|^2 up to tau-only phases, so
    // the t-integrand is a smooth envelope product; the default panel count
    // is plenty.
    const double span = w.hi - w.lo;
    const double tol = 1e-10 / std::max(span, 1.0);
    return integrate(
        [&](double t) { return joint_prob(ea, eb, t, tau, kind); }, w.lo, w.hi,
        tol);
}

double total_coincidence(const WavePacket& ea, const WavePacket& eb,
                         ScanKind kind) {
    const double smax = std::max(ea.sigma, eb.sigma);
    const double sep = std::abs(ea.center_time - eb.center_time);
    const double tmax = sep + 16.0 * smax;
    // Outer integral over the detection separation; the cross term
    // oscillates at the carrier difference, so scale the panel count.
    const double cycles =
        std::abs(ea.freq_displacement - eb.freq_displacement) * 2.0 * tmax /
        (2.0 * 3.14159265358979323846);
    const int panels =
        std::clamp(static_cast<int>(std::ceil(4.0 * cycles)), 32, 4096);
    const double inner_tol = 1e-10;
    return integrate(
        [&](double tau) { return integrated_coincidence(ea, eb, tau, kind); },
        -tmax, tmax, inner_tol * 2.0 * tmax, panels);
}

Interferogram scan(const WavePacket& ea, const WavePacket& eb,
                   const std::vector<double>& taus, ScanKind kind,
                   bool normalize) {
    if (taus.empty()) {
        throw std::invalid_argument("scan: tau grid is empty");
    }
    for (std::size_t i = 1; i < taus.size(); ++i) {
        if (!(taus[i - 1] < taus[i])) {
            throw std::invalid_argument("scan: taus must be strictly increasing");
        }
    }
    Interferogram ig;
    ig.kind = kind;
    ig.samples.resize(taus.size());
    parallel_for(taus.size(), [&](std::size_t i) {
        ig.samples[i] = {taus[i], integrated_coincidence(ea, eb, taus[i], kind),
                         0.0};
    });
    // Quadrature may round a vanishing value to a tiny negative number.
    for (auto& s : ig.samples) s.value = std::max(s.value, 0.0);
    if (normalize) ig = ig.normalized();
    ig.validate();
    return ig;
}

}  // namespace homsim
