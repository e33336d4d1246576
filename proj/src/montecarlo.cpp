#include "homsim/montecarlo.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "homsim/parallel.hpp"

namespace homsim {

namespace {

constexpr std::uint64_t kBlockSize = 1u << 16;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Portable per-block generator: mt19937_64 (output fixed by the standard)
/// seeded from a SplitMix64 hash of (seed, stream, block); uniform doubles
/// are built from the top 53 bits, not from std::uniform_real_distribution,
/// so sequences are identical across standard libraries.
class GateRandom {
  public:
    GateRandom(TrialRng rng, std::uint64_t block)
        : eng_(splitmix64(splitmix64(rng.seed ^ (0x9E3779B97F4A7C15ULL *
                                                 (rng.stream + 1))) ^
                          (0xBF58476D1CE4E5B9ULL * (block + 1)))) {}

    double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
    double angle() { return 2.0 * std::numbers::pi * uniform(); }

  private:
    std::mt19937_64 eng_;
};

struct ChannelPlan {
    double base = 0.0;      // mu (|c_a|^2 + |c_b|^2)
    double cross_re = 0.0;  // Re/Im of 2 mu conj(c_a) c_b kappa
    double cross_im = 0.0;
    double eta = 0.0;
    double one_minus_dark = 1.0;
};

ChannelPlan plan_channel(const SourceModel& source, const Channel& ch) {
    ch.detector.validate();
    const double mu = source.mu;
    const ComplexAmplitude cross =
        2.0 * mu * std::conj(ch.coeff_a) * ch.coeff_b * ch.kappa;
    return ChannelPlan{mu * (std::norm(ch.coeff_a) + std::norm(ch.coeff_b)),
                       cross.real(), cross.imag(), ch.detector.efficiency,
                       1.0 - ch.detector.dark_prob};
}

double click_probability(const ChannelPlan& p, double cos_t, double sin_t) {
    const double intensity = p.base + p.cross_re * cos_t - p.cross_im * sin_t;
    return 1.0 - p.one_minus_dark * std::exp(-p.eta * intensity);
}

std::vector<double> scan_grid_or_throw(const std::vector<double>& taus) {
    if (taus.empty()) {
        throw std::invalid_argument("run_hom_scan: tau grid is empty");
    }
    for (std::size_t i = 1; i < taus.size(); ++i) {
        if (!(taus[i - 1] < taus[i])) {
            throw std::invalid_argument(
                "run_hom_scan: taus must be strictly increasing");
        }
    }
    return taus;
}

}  // namespace

void SourceModel::validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw std::invalid_argument("SourceModel: mu must be > 0");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("SourceModel: sigma must be > 0");
    }
    if (!std::isfinite(fixed_phase) || !std::isfinite(relative_delay) ||
        !std::isfinite(freq_displacement)) {
        throw std::invalid_argument("SourceModel: parameters must be finite");
    }
}

void DetectorModel::validate() const {
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
        throw std::invalid_argument("DetectorModel: efficiency must be in [0,1]");
    }
    if (!(dark_prob >= 0.0 && dark_prob < 1.0)) {
        throw std::invalid_argument("DetectorModel: dark_prob must be in [0,1)");
    }
    if (!(gate_width >= 0.0)) {
        throw std::invalid_argument("DetectorModel: gate_width must be >= 0");
    }
}

G2Estimate g2_zero(const HeraldedCounts& c) {
    if (c.n_herald == 0 || c.n_A == 0 || c.n_B == 0) {
        throw G2DomainError("g2_zero: zero denominator count", c);
    }
    const double nh = static_cast<double>(c.n_herald);
    const double na = static_cast<double>(c.n_A);
    const double nb = static_cast<double>(c.n_B);
    const double nab = static_cast<double>(c.n_AB);
    const double g2 = nab * nh / (na * nb);
    if (c.n_AB == 0) return {0.0, 0.0};
    const double rel_var = (1.0 - nab / nh) / nab + (1.0 - na / nh) / na +
                           (1.0 - nb / nh) / nb;
    return {g2, g2 * std::sqrt(std::max(rel_var, 0.0))};
}

std::uint64_t ClickTally::count_with(unsigned mask) const {
    std::uint64_t acc = 0;
    for (unsigned p = 0; p < pattern.size(); ++p) {
        if ((p & mask) == mask) acc += pattern[p];
    }
    return acc;
}

std::uint64_t ClickTally::singles(unsigned channel) const {
    return count_with(1u << channel);
}

std::uint64_t ClickTally::pair(unsigned ch1, unsigned ch2) const {
    return count_with((1u << ch1) | (1u << ch2));
}

ClickTally& ClickTally::operator+=(const ClickTally& other) {
    trials += other.trials;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        pattern[i] += other.pattern[i];
    }
    return *this;
}

ComplexAmplitude coherence_kappa(double sigma, double delta_rel, double tau) {
    const WavePacket env = WavePacket::gaussian(0.0, sigma);
    const double e = std::abs(overlap(env, env.delayed(tau)));
    const double ph = delta_rel * tau;
    return {e * std::cos(ph), e * std::sin(ph)};
}

std::vector<double> channel_intensities(const SourceModel& source,
                                        const std::vector<Channel>& channels,
                                        double theta) {
    source.validate();
    std::vector<double> out;
    out.reserve(channels.size());
    const double c = std::cos(theta), s = std::sin(theta);
    for (const Channel& ch : channels) {
        const ChannelPlan p = plan_channel(source, ch);
        out.push_back(p.base + p.cross_re * c - p.cross_im * s);
    }
    return out;
}

std::vector<double> gate_click_probabilities(const SourceModel& source,
                                             const TransferMatrix& matrix,
                                             const DetectorModel& det,
                                             double theta) {
    source.validate();
    det.validate();
    const double amp = std::sqrt(source.mu);
    const ComplexAmplitude alpha{amp, 0.0};
    const ComplexAmplitude beta =
        amp * ComplexAmplitude{std::cos(theta), std::sin(theta)};
    std::vector<double> out;
    out.reserve(matrix.rows());
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        ComplexAmplitude field{0.0, 0.0};
        for (std::size_t c = 0; c < matrix.cols(); ++c) {
            const std::string& in = matrix.inputs()[c];
            if (in == "a") {
                field += matrix.coeff(r, c) * alpha;
            } else if (in == "b") {
                field += matrix.coeff(r, c) * beta;
            }
            // remaining inputs are vacuum
        }
        const double intensity = std::norm(field);
        out.push_back(1.0 -
                      (1.0 - det.dark_prob) * std::exp(-det.efficiency * intensity));
    }
    return out;
}

ClickTally run_gate_trials(const SourceModel& source,
                           const std::vector<Channel>& channels,
                           std::uint64_t trials, TrialRng rng) {
    source.validate();
    if (trials == 0) {
        throw std::invalid_argument("run_gate_trials: trials must be >= 1");
    }
    if (channels.empty() || channels.size() > 4) {
        throw std::invalid_argument(
            "run_gate_trials: between 1 and 4 channels supported");
    }
    std::vector<ChannelPlan> plans;
    plans.reserve(channels.size());
    for (const Channel& ch : channels) plans.push_back(plan_channel(source, ch));

    const std::uint64_t nblocks = (trials + kBlockSize - 1) / kBlockSize;
    std::vector<ClickTally> block_tallies(nblocks);
    parallel_for(nblocks, [&](std::size_t b) {
        GateRandom rnd(rng, b);
        const std::uint64_t lo = b * kBlockSize;
        const std::uint64_t hi = std::min(trials, lo + kBlockSize);
        const double fixed_cos = std::cos(source.fixed_phase);
        const double fixed_sin = std::sin(source.fixed_phase);
        ClickTally tally;
        tally.trials = hi - lo;
        for (std::uint64_t t = lo; t < hi; ++t) {
            double cos_t = fixed_cos;
            double sin_t = fixed_sin;
            if (source.phase_randomized) {
                const double theta = rnd.angle();
                cos_t = std::cos(theta);
                sin_t = std::sin(theta);
            }
            unsigned patt = 0;
            for (std::size_t i = 0; i < plans.size(); ++i) {
                const double p = click_probability(plans[i], cos_t, sin_t);
                if (rnd.uniform() < p) patt |= 1u << i;
            }
            ++tally.pattern[patt];
        }
        block_tallies[b] = tally;
    });
    ClickTally total;
    for (const ClickTally& t : block_tallies) total += t;
    return total;
}

Interferogram run_hom_scan(const SourceModel& source, const ModeNetwork& net,
                           const DetectorModel& det,
                           const std::vector<double>& taus,
                           std::uint64_t trials, TrialRng rng) {
    source.validate();
    det.validate();
    if (trials == 0) {
        throw std::invalid_argument("run_hom_scan: trials must be >= 1");
    }
    scan_grid_or_throw(taus);
    if (net.splitters().empty()) {
        throw std::invalid_argument("run_hom_scan: network has no splitter");
    }
    const Splitter& last = net.splitters().back();
    const TransferMatrix tm = transfer(net, {last.out1, last.out2});
    const ScanKind kind =
        net.splitters().size() == 1 ? ScanKind::Dip : ScanKind::Peak;

    Interferogram ig;
    ig.kind = kind;
    ig.samples.resize(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double tau = taus[i];
        std::vector<Channel> channels(2);
        for (int ch = 0; ch < 2; ++ch) {
            channels[ch].coeff_a = tm.coeff(ch, 0);
            channels[ch].coeff_b = tm.coeff(ch, 1);
            channels[ch].detector = det;
        }
        // Channel 0 is gated in step with the reference; channel 1 is the
        // swept detector at separation tau.
        channels[1].kappa =
            coherence_kappa(source.sigma, source.freq_displacement, tau);
        const ClickTally tally = run_gate_trials(
            source, channels, trials, TrialRng{rng.seed, rng.stream + i});
        const double p =
            static_cast<double>(tally.pair(0, 1)) / static_cast<double>(trials);
        const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) /
                                    static_cast<double>(trials));
        ig.samples[i] = {tau, p, se};
    }
    ig.validate();
    return ig;
}

HeraldedCounts run_hbt(const SourceModel& source,
                       const DetectorModel& det_herald,
                       const DetectorModel& det_ab, double herald_delay,
                       std::uint64_t trials, TrialRng rng) {
    source.validate();
    det_herald.validate();
    det_ab.validate();
    const TransferMatrix tm = transfer(hbt_network(), {"g", "A", "B"});
    const ComplexAmplitude kappa =
        coherence_kappa(source.sigma, source.freq_displacement, herald_delay);
    std::vector<Channel> channels(3);
    for (int ch = 0; ch < 3; ++ch) {
        channels[ch].coeff_a = tm.coeff(ch, 0);
        channels[ch].coeff_b = tm.coeff(ch, 1);
    }
    channels[0].detector = det_herald;  // g, reference gate
    channels[1].detector = det_ab;      // A, displaced gate
    channels[2].detector = det_ab;      // B, displaced gate
    channels[1].kappa = kappa;
    channels[2].kappa = kappa;
    const ClickTally tally = run_gate_trials(source, channels, trials, rng);
    HeraldedCounts counts;
    counts.n_herald = tally.singles(0);
    counts.n_A = tally.count_with(0b011);
    counts.n_B = tally.count_with(0b101);
    counts.n_AB = tally.count_with(0b111);
    return counts;
}

std::vector<HbtPoint> hbt_scan(const SourceModel& source,
                               const DetectorModel& det_herald,
                               const DetectorModel& det_ab,
                               const std::vector<double>& delays,
                               std::uint64_t trials, TrialRng rng) {
    if (delays.empty()) {
        throw std::invalid_argument("hbt_scan: delay list is empty");
    }
    std::vector<HbtPoint> out;
    out.reserve(delays.size());
    for (std::size_t i = 0; i < delays.size(); ++i) {
        HbtPoint pt;
        pt.delay = delays[i];
        pt.counts = run_hbt(source, det_herald, det_ab, delays[i], trials,
                            TrialRng{rng.seed, rng.stream + i});
        pt.g2 = g2_zero(pt.counts);
        out.push_back(pt);
    }
    return out;
}

}  // namespace homsim
