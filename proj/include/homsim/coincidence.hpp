#pragma once

#include <vector>

#include "homsim/interferogram.hpp"
#include "homsim/wavepacket.hpp"

namespace homsim {

/// Joint photon-detection probability density for one detection at t and
/// the other at t + tau behind the first splitter (modes c, d):
///   P(t, tau) = 1/4 |eps_a(t+tau) eps_b(t) - eps_b(t+tau) eps_a(t)|^2
double joint_prob_dip(const WavePacket& ea, const WavePacket& eb, double t,
                      double tau);

/// Same quantity at the modified interferometer outputs f, g:
///   P(t, tau) = 1/16 |eps_a(t+tau) eps_b(t) + eps_b(t+tau) eps_a(t)|^2
double joint_prob_peak(const WavePacket& ea, const WavePacket& eb, double t,
                       double tau);

/// Time-resolved interferogram value: the joint probability density
/// integrated over the first detection time t at fixed detection
/// separation tau (adaptive quadrature, +-8 sigma around the supports).
double integrated_coincidence(const WavePacket& ea, const WavePacket& eb,
                              double tau, ScanKind kind);

/// Total coincidence probability: the joint density integrated over both
/// detection times. For unit-norm packets this equals (1 - |k|^2)/2 for the
/// dip and (1 + |k|^2)/8 for the peak, k = overlap(ea, eb); evaluated here
/// by nested quadrature so the closed forms stay an independent check.
double total_coincidence(const WavePacket& ea, const WavePacket& eb,
                         ScanKind kind);

/// Analytic interferogram over a strictly increasing tau grid (stderr 0).
/// With normalize the curve is rescaled to maximum 1. Throws
/// std::invalid_argument for an empty or non-increasing grid.
Interferogram scan(const WavePacket& ea, const WavePacket& eb,
                   const std::vector<double>& taus, ScanKind kind,
                   bool normalize = false);

}  // namespace homsim
