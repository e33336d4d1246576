#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "homsim/interferogram.hpp"
#include "homsim/network.hpp"
#include "homsim/wavepacket.hpp"

namespace homsim {

/// Pair of weak coherent states entering the first splitter: amplitudes
/// alpha = sqrt(mu) and beta = sqrt(mu) e^{i theta}, with theta drawn
/// uniformly per gate when phase_randomized (decorrelated arms) or held at
/// fixed_phase otherwise.
///
/// Gate separations enter through the complex cross-term scale
///   kappa(tau) = E(tau) exp(i delta_rel tau)
/// where E(tau) is the magnitude of the bare-envelope overlap at delay tau
/// (the mutual-coherence envelope, width set by sigma) and the phase is the
/// carrier-difference advance across the separation. A channel gated in
/// step with the reference carries kappa = 1; as E -> 0 its interference
/// term dies and the channel sees the phase-averaged intensity.
struct SourceModel {
    double mu = 0.05;               // mean photons per gate per input
    bool phase_randomized = true;
    double fixed_phase = 0.0;       // used when phase_randomized is false
    double relative_delay = 0.0;    // default gate separation tau [s]
    double freq_displacement = 0.0; // delta_rel between the carriers [rad/s]
    double sigma = 1.0;             // coherence-envelope width [s]

    void validate() const;  // throws std::invalid_argument
};

/// Gated SPAD: click probability 1 - (1 - dark_prob) exp(-eta I) for mean
/// photon number I in the gate.
struct DetectorModel {
    double efficiency = 0.15;
    double dark_prob = 1e-5;
    double gate_width = 4e-9;  // metadata, not used by the model

    void validate() const;
};

/// Tallies of a heralded run: herald clicks and the A/B clicks recorded in
/// the same (herald-conditioned) gates.
struct HeraldedCounts {
    std::uint64_t n_herald = 0;
    std::uint64_t n_A = 0;   // herald AND A
    std::uint64_t n_B = 0;   // herald AND B
    std::uint64_t n_AB = 0;  // herald AND A AND B
};

/// Deterministic stream handle: identical (seed, stream) reproduce the same
/// trial sequence bit for bit. Scan operations use stream + point index.
struct TrialRng {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

struct G2Estimate {
    double g2 = 0.0;
    double std_error = 0.0;
};

/// Thrown by g2_zero when a denominator count is zero.
class G2DomainError : public std::domain_error {
  public:
    G2DomainError(const std::string& what, HeraldedCounts counts)
        : std::domain_error(what), counts(counts) {}
    HeraldedCounts counts;
};

/// g2(0) = (n_AB n_herald) / (n_A n_B), i.e. P_AB / (P_A P_B) with
/// P_X = n_X / n_herald. Standard error by binomial propagation with
/// tally correlations neglected; degenerate (0, 0) when n_AB = 0.
G2Estimate g2_zero(const HeraldedCounts& counts);

/// One monitored output of the trial engine: transfer coefficients from the
/// two lit inputs, the gate's cross-term scale, and its detector.
struct Channel {
    ComplexAmplitude coeff_a{0.0, 0.0};
    ComplexAmplitude coeff_b{0.0, 0.0};
    ComplexAmplitude kappa{1.0, 0.0};
    DetectorModel detector;
};

/// Joint click-pattern histogram over up to 4 monitored channels; bit i of
/// the pattern index corresponds to channel i.
struct ClickTally {
    std::uint64_t trials = 0;
    std::array<std::uint64_t, 16> pattern{};

    std::uint64_t count_with(unsigned mask) const;  // all bits in mask set
    std::uint64_t singles(unsigned channel) const;
    std::uint64_t pair(unsigned ch1, unsigned ch2) const;

    ClickTally& operator+=(const ClickTally& other);
};

/// Mutual-coherence cross-term scale at gate separation tau (see
/// SourceModel). Envelope via wavepacket overlap, phase delta_rel * tau.
ComplexAmplitude coherence_kappa(double sigma, double delta_rel, double tau);

/// Mean photon number in each channel at relative phase theta.
std::vector<double> channel_intensities(const SourceModel& source,
                                        const std::vector<Channel>& channels,
                                        double theta);

/// Fully coherent per-output click probabilities: amplitudes alpha =
/// sqrt(mu), beta = sqrt(mu) e^{i theta} on inputs "a" and "b" (vacuum
/// elsewhere), I_o = |sum_j M_oj amp_j|^2 and
/// p_o = 1 - (1 - dark) exp(-eta I_o), ordered like matrix.outputs().
std::vector<double> gate_click_probabilities(const SourceModel& source,
                                             const TransferMatrix& matrix,
                                             const DetectorModel& det,
                                             double theta);

/// Core engine: simulate `trials` gates, drawing the relative phase per
/// gate and the channel clicks independently from their probabilities.
/// Trials are split into fixed-size blocks with one RNG substream each;
/// blocks run concurrently and merge by summation, so the result does not
/// depend on thread scheduling. Throws on zero trials or > 4 channels.
ClickTally run_gate_trials(const SourceModel& source,
                           const std::vector<Channel>& channels,
                           std::uint64_t trials, TrialRng rng);

/// Coincidence interferogram between the outputs of the last splitter of
/// `net` (c,d for the standard interferometer -> dip; f,g for the modified
/// one -> peak). Point i uses RNG stream rng.stream + i; values are
/// coincidences per gate with binomial standard errors.
Interferogram run_hom_scan(const SourceModel& source, const ModeNetwork& net,
                           const DetectorModel& det,
                           const std::vector<double>& taus,
                           std::uint64_t trials, TrialRng rng);

/// Heralded Hanbury Brown-Twiss run: herald on g, A/B behind the tap
/// splitter on f, with the A/B gates displaced by herald_delay relative to
/// the herald gate. Tallies are conditioned on the herald click.
HeraldedCounts run_hbt(const SourceModel& source,
                       const DetectorModel& det_herald,
                       const DetectorModel& det_ab, double herald_delay,
                       std::uint64_t trials, TrialRng rng);

struct HbtPoint {
    double delay = 0.0;
    HeraldedCounts counts;
    G2Estimate g2;
};

/// run_hbt + g2_zero per delay (stream = rng.stream + point index). The
/// conditioned n_A / n_B columns trace the herald-A and herald-B
/// coincidence interferograms.
std::vector<HbtPoint> hbt_scan(const SourceModel& source,
                               const DetectorModel& det_herald,
                               const DetectorModel& det_ab,
                               const std::vector<double>& delays,
                               std::uint64_t trials, TrialRng rng);

}  // namespace homsim
