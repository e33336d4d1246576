#pragma once

#include <array>

#include "homsim/interferogram.hpp"

namespace homsim {

/// Gaussian-beat interferogram model
///   C(tau) = B (1 +- V exp(-(tau - c)^2 / (2 w^2)) cos(Delta tau + phi))
/// with - for a dip and + for a peak. The envelope center c absorbs the
/// delay origin of measured data; ideal scans sit at c = 0.
struct BeatFitModel {
    double baseline = 1.0;         // B, coincidence units, > 0
    double visibility = 0.5;       // V in [0, 1]
    double envelope_width = 1.0;   // w [s], > 0
    double beat_freq = 0.0;        // Delta [rad/s]
    double beat_phase = 0.0;       // phi [rad]
    double envelope_center = 0.0;  // c [s]
    ScanKind sign = ScanKind::Dip;

    double operator()(double tau) const;
};

/// Parameter order used for the error array: B, V, w, Delta, phi, c.
constexpr int kBeatFitParams = 6;

struct FitReport {
    BeatFitModel model;
    std::array<double, kBeatFitParams> std_errors{};
    double rms_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    /// True when no beat was detected and Delta, phi were held at zero.
    bool beat_fixed = false;
};

/// Heuristic starting point: baseline from the 10% of samples with the
/// largest |tau|, visibility from the extremal deviation, beat frequency
/// from the dominant discrete-Fourier component of the mean-subtracted
/// values, envelope width/center from the spread of absolute deviations,
/// phase 0. Throws std::invalid_argument for fewer than 8 samples.
BeatFitModel initial_guess(const Interferogram& data, ScanKind sign);

/// Weighted least squares (weights 1/stderr^2 where stderr > 0, uniform
/// otherwise) by damped Gauss-Newton with the analytic Jacobian, falling
/// back to Nelder-Mead when the normal equations go rank deficient. When
/// the data show no sign-alternating deviation the beat terms are frozen at
/// zero (beat_fixed). Non-convergence after the iteration cap is reported
/// via converged = false with the best parameters found.
FitReport fit(const Interferogram& data, ScanKind sign);
FitReport fit(const Interferogram& data, ScanKind sign,
              const BeatFitModel& start);

}  // namespace homsim
