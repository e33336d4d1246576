#pragma once

#include <complex>

namespace homsim {

using ComplexAmplitude = std::complex<double>;

/// Envelope shapes understood by the evaluator. Only Gaussian packets are
/// generated today; the enum leaves room for other transform-limited shapes.
enum class PacketShape { Gaussian };

/// Complex spatio-temporal envelope eps(t) of the field in one input arm.
///
/// Normalization convention: integral of |eps(t)|^2 dt equals 1 and `sigma`
/// is the standard deviation of |eps|^2. `freq_displacement` is the carrier
/// angular-frequency offset in rad/s (a "20 MHz"-style displacement must be
/// converted to rad/s by the caller; nothing in here guesses units).
struct WavePacket {
    PacketShape shape = PacketShape::Gaussian;
    double center_time = 0.0;        // t0 [s]
    double sigma = 1.0;              // std dev of |eps|^2 [s]
    double freq_displacement = 0.0;  // Delta [rad/s]
    double phase = 0.0;              // phi0 [rad]

    /// Validated factory; throws std::invalid_argument unless sigma is
    /// finite and positive and the remaining parameters are finite.
    static WavePacket gaussian(double center_time, double sigma,
                               double freq_displacement = 0.0,
                               double phase = 0.0);

    /// Copy with the arrival time delayed by tau.
    WavePacket delayed(double tau) const;

    /// Copy with carrier displacement and static phase removed (the bare
    /// envelope; used for mutual-coherence magnitudes).
    WavePacket envelope_only() const;
};

/// eps(t) = (2 pi sigma^2)^(-1/4) exp(-(t - t0)^2 / (4 sigma^2))
///          exp(-i (Delta t + phi0))
ComplexAmplitude evaluate(const WavePacket& wp, double t);

/// Mode overlap integral of eps_a*(t) eps_b(t) dt, adaptive quadrature over
/// [min(t0) - 8 sigma_max, max(t0) + 8 sigma_max] with absolute tolerance
/// 1e-10. For normalized packets |overlap| <= 1 (Cauchy-Schwarz).
ComplexAmplitude overlap(const WavePacket& a, const WavePacket& b);

}  // namespace homsim
