#include "homsim/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "homsim/quadrature.hpp"

namespace homsim {

WavePacket WavePacket::gaussian(double center_time, double sigma,
                                double freq_displacement, double phase) {
    if (!std::isfinite(sigma) || sigma <= 0.0) {
        throw std::invalid_argument(
            "WavePacket::gaussian: sigma must be finite and > 0");
    }
    if (!std::isfinite(center_time) || !std::isfinite(freq_displacement) ||
        !std::isfinite(phase)) {
        throw std::invalid_argument(
            "WavePacket::gaussian: parameters must be finite");
    }
    return WavePacket{PacketShape::Gaussian, center_time, sigma,
                      freq_displacement, phase};
}

WavePacket WavePacket::delayed(double tau) const {
    WavePacket out = *this;
    out.center_time += tau;
    return out;
}

WavePacket WavePacket::envelope_only() const {
    WavePacket out = *this;
    out.freq_displacement = 0.0;
    out.phase = 0.0;
    return out;
}

ComplexAmplitude evaluate(const WavePacket& wp, double t) {
    const double u = t - wp.center_time;
    const double s2 = wp.sigma * wp.sigma;
    const double mag = std::pow(2.0 * std::numbers::pi * s2, -0.25) *
                       std::exp(-u * u / (4.0 * s2));
    const double ph = wp.freq_displacement * t + wp.phase;
    return {mag * std::cos(ph), -mag * std::sin(ph)};
}

ComplexAmplitude overlap(const WavePacket& a, const WavePacket& b) {
    const double smax = std::max(a.sigma, b.sigma);
    const double lo = std::min(a.center_time, b.center_time) - 8.0 * smax;
    const double hi = std::max(a.center_time, b.center_time) + 8.0 * smax;
    // Enough panels to resolve the carrier-difference oscillation.
    const double cycles = std::abs(a.freq_displacement - b.freq_displacement) *
                          (hi - lo) / (2.0 * std::numbers::pi);
    const int panels =
        std::clamp(static_cast<int>(std::ceil(4.0 * cycles)), 16, 4096);
    return integrate_complex(
        [&](double t) { return std::conj(evaluate(a, t)) * evaluate(b, t); },
        lo, hi, 1e-10, panels);
}

}  // namespace homsim
