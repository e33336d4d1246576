#include "homsim/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace homsim {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kRelTol = 1e-10;

double model_sign(ScanKind sign) { return sign == ScanKind::Dip ? -1.0 : 1.0; }

// Active-parameter indexing: the full vector is (B, V, w, Delta, phi, c);
// with the beat frozen only (B, V, w, c) vary.
std::vector<int> active_indices(bool beat_fixed) {
    if (beat_fixed) return {0, 1, 2, 5};
    return {0, 1, 2, 3, 4, 5};
}

std::array<double, kBeatFitParams> pack(const BeatFitModel& m) {
    return {m.baseline,  m.visibility, m.envelope_width,
            m.beat_freq, m.beat_phase, m.envelope_center};
}

BeatFitModel unpack(const std::array<double, kBeatFitParams>& p, ScanKind sign) {
    BeatFitModel m;
    m.baseline = p[0];
    m.visibility = p[1];
    m.envelope_width = p[2];
    m.beat_freq = p[3];
    m.beat_phase = p[4];
    m.envelope_center = p[5];
    m.sign = sign;
    return m;
}

double eval_model(const std::array<double, kBeatFitParams>& p, double s,
                  double tau) {
    const double u = (tau - p[5]) / p[2];
    const double env = std::exp(-0.5 * u * u);
    return p[0] * (1.0 + s * p[1] * env * std::cos(p[3] * tau + p[4]));
}

// Row of partial derivatives d model / d p in the full 6-parameter space.
void eval_jacobian(const std::array<double, kBeatFitParams>& p, double s,
                   double tau, std::array<double, kBeatFitParams>& row) {
    const double u = (tau - p[5]) / p[2];
    const double env = std::exp(-0.5 * u * u);
    const double psi = p[3] * tau + p[4];
    const double cosp = std::cos(psi);
    const double sinp = std::sin(psi);
    const double common = p[0] * s * env;
    row[0] = 1.0 + s * p[1] * env * cosp;
    row[1] = common * cosp;
    row[2] = common * p[1] * cosp * u * u / p[2];
    row[3] = -common * p[1] * sinp * tau;
    row[4] = -common * p[1] * sinp;
    row[5] = common * p[1] * cosp * u / p[2];
}

// Gauss-Jordan solve with partial pivoting; a is n x n (row-major), b the
// right-hand side. Returns false on a vanishing pivot.
bool solve_linear(std::vector<double> a, std::vector<double> b, int n,
                  std::vector<double>& x) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        }
        if (std::abs(a[piv * n + col]) < 1e-300) return false;
        for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
        std::swap(b[col], b[piv]);
        const double d = a[col * n + col];
        for (int c = 0; c < n; ++c) a[col * n + c] /= d;
        b[col] /= d;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r * n + col];
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    x = b;
    return true;
}

bool invert_matrix(std::vector<double> a, int n, std::vector<double>& inv) {
    inv.assign(n * n, 0.0);
    for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        }
        if (std::abs(a[piv * n + col]) < 1e-300) return false;
        for (int c = 0; c < n; ++c) {
            std::swap(a[col * n + c], a[piv * n + c]);
            std::swap(inv[col * n + c], inv[piv * n + c]);
        }
        const double d = a[col * n + col];
        for (int c = 0; c < n; ++c) {
            a[col * n + c] /= d;
            inv[col * n + c] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r * n + col];
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a[r * n + c] -= f * a[col * n + c];
                inv[r * n + c] -= f * inv[col * n + c];
            }
        }
    }
    return true;
}

struct Problem {
    std::vector<double> tau;
    std::vector<double> y;
    std::vector<double> sqrt_w;
    bool weighted = false;
    double s = -1.0;  // model sign
};

Problem make_problem(const Interferogram& data, ScanKind sign) {
    Problem pr;
    pr.s = model_sign(sign);
    bool all_positive = true;
    for (const auto& smp : data.samples) {
        if (!(smp.std_error > 0.0)) all_positive = false;
    }
    pr.weighted = all_positive && !data.samples.empty();
    for (const auto& smp : data.samples) {
        pr.tau.push_back(smp.tau);
        pr.y.push_back(smp.value);
        pr.sqrt_w.push_back(pr.weighted ? 1.0 / smp.std_error : 1.0);
    }
    return pr;
}

double chi_square(const Problem& pr, const std::array<double, kBeatFitParams>& p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pr.tau.size(); ++i) {
        const double r = pr.sqrt_w[i] * (eval_model(p, pr.s, pr.tau[i]) - pr.y[i]);
        acc += r * r;
    }
    return acc;
}

// Nelder-Mead on the active parameters; used when the normal equations go
// rank deficient.
void simplex_minimize(const Problem& pr, const std::vector<int>& act,
                      std::array<double, kBeatFitParams>& p, int max_evals) {
    const int n = static_cast<int>(act.size());
    const int m = n + 1;
    std::vector<std::array<double, kBeatFitParams>> pts(m, p);
    std::vector<double> cost(m);
    for (int i = 0; i < n; ++i) {
        double step = 0.05 * std::abs(pts[i + 1][act[i]]);
        if (step == 0.0) step = 1e-8;
        pts[i + 1][act[i]] += step;
    }
    for (int i = 0; i < m; ++i) cost[i] = chi_square(pr, pts[i]);
    int evals = m;
    while (evals < max_evals) {
        std::vector<int> order(m);
        for (int i = 0; i < m; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return cost[a] < cost[b]; });
        const int best = order[0], worst = order[m - 1], second = order[m - 2];
        if (std::abs(cost[worst] - cost[best]) <=
            1e-14 * (std::abs(cost[best]) + 1e-300)) {
            break;
        }
        std::array<double, kBeatFitParams> centroid = pts[best];
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < m; ++i) {
                if (i != worst) acc += pts[i][act[j]];
            }
            centroid[act[j]] = acc / n;
        }
        auto blend = [&](double coef) {
            std::array<double, kBeatFitParams> out = centroid;
            for (int j = 0; j < n; ++j) {
                out[act[j]] =
                    centroid[act[j]] + coef * (pts[worst][act[j]] - centroid[act[j]]);
            }
            return out;
        };
        const auto refl = blend(-1.0);
        const double cr = chi_square(pr, refl);
        ++evals;
        if (cr < cost[order[0]]) {
            const auto exp_pt = blend(-2.0);
            const double ce = chi_square(pr, exp_pt);
            ++evals;
            if (ce < cr) {
                pts[worst] = exp_pt;
                cost[worst] = ce;
            } else {
                pts[worst] = refl;
                cost[worst] = cr;
            }
        } else if (cr < cost[second]) {
            pts[worst] = refl;
            cost[worst] = cr;
        } else {
            const auto con = blend(0.5);
            const double cc = chi_square(pr, con);
            ++evals;
            if (cc < cost[worst]) {
                pts[worst] = con;
                cost[worst] = cc;
            } else {
                for (int i = 0; i < m; ++i) {
                    if (i == best) continue;
                    for (int j = 0; j < n; ++j) {
                        pts[i][act[j]] =
                            0.5 * (pts[i][act[j]] + pts[best][act[j]]);
                    }
                    cost[i] = chi_square(pr, pts[i]);
                    evals += 1;
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i < m; ++i) {
        if (cost[i] < cost[best]) best = i;
    }
    p = pts[best];
}

// Detects a genuine modulation: deviations from the baseline must swing to
// both sides by a non-trivial fraction of the extremal deviation.
bool beat_present(const std::vector<double>& dev) {
    double dmax = 0.0, dmin = 0.0, amax = 0.0;
    for (double d : dev) {
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
        amax = std::max(amax, std::abs(d));
    }
    if (amax == 0.0) return false;
    return dmax > 0.2 * amax && -dmin > 0.2 * amax;
}

}  // namespace

double BeatFitModel::operator()(double tau) const {
    return eval_model(pack(*this), model_sign(sign), tau);
}

BeatFitModel initial_guess(const Interferogram& data, ScanKind sign) {
    const std::size_t n = data.samples.size();
    if (n < 8) {
        throw std::invalid_argument("initial_guess: need at least 8 samples");
    }
    // Baseline from the 10% of samples with the largest |tau|.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(data.samples[a].tau) > std::abs(data.samples[b].tau);
    });
    const std::size_t outer = std::max<std::size_t>(1, n / 10);
    double baseline = 0.0;
    for (std::size_t i = 0; i < outer; ++i) {
        baseline += data.samples[idx[i]].value;
    }
    baseline /= static_cast<double>(outer);
    if (baseline <= 0.0) {
        double mean = 0.0;
        for (const auto& s : data.samples) mean += s.value;
        baseline = std::max(mean / static_cast<double>(n), 1e-300);
    }

    std::vector<double> dev(n);
    double amax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dev[i] = data.samples[i].value - baseline;
        amax = std::max(amax, std::abs(dev[i]));
    }

    // Envelope center and width from the weighted spread of |deviations|.
    double wsum = 0.0, csum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        wsum += std::abs(dev[i]);
        csum += std::abs(dev[i]) * data.samples[i].tau;
    }
    const double span =
        data.samples.back().tau - data.samples.front().tau;
    double center = wsum > 0.0 ? csum / wsum : 0.0;
    double width = 0.25 * span;
    if (wsum > 0.0) {
        double m2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = data.samples[i].tau - center;
            m2 += std::abs(dev[i]) * u * u;
        }
        width = std::sqrt(m2 / wsum);
    }
    width = std::clamp(width, 1e-3 * span, 0.5 * span);

    BeatFitModel guess;
    guess.sign = sign;
    guess.baseline = baseline;
    guess.visibility = std::clamp(amax / baseline, 0.0, 1.0);
    guess.envelope_width = width;
    guess.envelope_center = center;
    guess.beat_phase = 0.0;
    guess.beat_freq = 0.0;

    if (beat_present(dev)) {
        // Dominant nonzero discrete-Fourier component on the tau grid; the
        // first two bins belong to the envelope itself.
        const double t0 = data.samples.front().tau;
        double best_mag = -1.0, best_omega = 0.0;
        const std::size_t kmax = n / 2;
        auto magnitude = [&](double omega) {
            double re = 0.0, im = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double ph = omega * (data.samples[i].tau - t0);
                re += dev[i] * std::cos(ph);
                im += dev[i] * std::sin(ph);
            }
            return std::sqrt(re * re + im * im);
        };
        for (std::size_t k = 2; k <= kmax; ++k) {
            const double omega = 2.0 * std::numbers::pi * static_cast<double>(k) /
                                 span;
            const double mag = magnitude(omega);
            if (mag > best_mag) {
                best_mag = mag;
                best_omega = omega;
            }
        }
        // Parabolic refinement around the winning bin.
        const double domega = 2.0 * std::numbers::pi / span;
        const double m0 = magnitude(best_omega - 0.5 * domega);
        const double m1 = best_mag;
        const double m2 = magnitude(best_omega + 0.5 * domega);
        const double denom = m0 - 2.0 * m1 + m2;
        if (denom < 0.0) {
            best_omega += 0.25 * domega * (m0 - m2) / denom;
        }
        guess.beat_freq = best_omega;
    }
    return guess;
}

FitReport fit(const Interferogram& data, ScanKind sign) {
    return fit(data, sign, initial_guess(data, sign));
}

FitReport fit(const Interferogram& data, ScanKind sign,
              const BeatFitModel& start) {
    if (data.samples.size() < 8) {
        throw std::invalid_argument("fit: need at least 8 samples");
    }
    const Problem pr = make_problem(data, sign);
    const bool beat_fixed = start.beat_freq == 0.0;
    const std::vector<int> act = active_indices(beat_fixed);
    const int na = static_cast<int>(act.size());
    const std::size_t n = pr.tau.size();

    std::array<double, kBeatFitParams> p = pack(start);
    if (beat_fixed) {
        p[3] = 0.0;
        p[4] = 0.0;
    }
    double chi2 = chi_square(pr, p);
    double lambda = 1e-3;
    bool converged = false;
    bool rank_deficient = false;
    int iter = 0;

    std::vector<double> jtj(na * na), jtr(na), scale(na), delta;
    std::array<double, kBeatFitParams> jrow{};
    for (; iter < kMaxIterations && !converged; ++iter) {
        std::fill(jtj.begin(), jtj.end(), 0.0);
        std::fill(jtr.begin(), jtr.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            eval_jacobian(p, pr.s, pr.tau[i], jrow);
            const double r =
                pr.sqrt_w[i] * (eval_model(p, pr.s, pr.tau[i]) - pr.y[i]);
            for (int a = 0; a < na; ++a) {
                const double ja = pr.sqrt_w[i] * jrow[act[a]];
                jtr[a] += ja * r;
                for (int b = a; b < na; ++b) {
                    jtj[a * na + b] += ja * pr.sqrt_w[i] * jrow[act[b]];
                }
            }
        }
        for (int a = 0; a < na; ++a) {
            for (int b = 0; b < a; ++b) jtj[a * na + b] = jtj[b * na + a];
        }
        // Column scaling keeps the solve well conditioned across the very
        // different parameter magnitudes (seconds vs rad/s).
        for (int a = 0; a < na; ++a) {
            scale[a] = std::sqrt(std::max(jtj[a * na + a], 0.0));
            if (scale[a] == 0.0) scale[a] = 1.0;
        }
        bool stepped = false;
        while (!stepped) {
            std::vector<double> lhs(na * na);
            std::vector<double> rhs(na);
            for (int a = 0; a < na; ++a) {
                for (int b = 0; b < na; ++b) {
                    lhs[a * na + b] = jtj[a * na + b] / (scale[a] * scale[b]);
                }
                lhs[a * na + a] += lambda;
                rhs[a] = -jtr[a] / scale[a];
            }
            if (!solve_linear(lhs, rhs, na, delta)) {
                rank_deficient = true;
                break;
            }
            std::array<double, kBeatFitParams> trial = p;
            double max_rel = 0.0;
            for (int a = 0; a < na; ++a) {
                const double step = delta[a] / scale[a];
                trial[act[a]] += step;
                const double ref = std::max(std::abs(p[act[a]]), 1e-30);
                max_rel = std::max(max_rel, std::abs(step) / ref);
            }
            const double trial_chi2 = chi_square(pr, trial);
            if (trial_chi2 <= chi2) {
                p = trial;
                const bool tiny_step = max_rel < kRelTol;
                const bool tiny_gain =
                    chi2 - trial_chi2 <= 1e-14 * (chi2 + 1e-300);
                chi2 = trial_chi2;
                lambda = std::max(lambda / 3.0, 1e-14);
                stepped = true;
                if (tiny_step || tiny_gain) converged = true;
            } else {
                lambda *= 10.0;
                if (lambda > 1e12) {
                    converged = true;  // no descent direction left
                    stepped = true;
                }
            }
        }
        if (rank_deficient) break;
    }

    if (rank_deficient) {
        simplex_minimize(pr, act, p, 400 * na);
        chi2 = chi_square(pr, p);
        converged = true;
    }

    // Canonical signs: width positive, visibility nonnegative.
    p[2] = std::abs(p[2]);
    if (p[1] < 0.0) {
        p[1] = -p[1];
        p[4] += std::numbers::pi;
    }
    p[4] = std::remainder(p[4], 2.0 * std::numbers::pi);

    FitReport report;
    report.model = unpack(p, sign);
    report.iterations = iter;
    report.converged = converged;
    report.beat_fixed = beat_fixed;
    report.rms_residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = eval_model(p, pr.s, pr.tau[i]) - pr.y[i];
        report.rms_residual += r * r;
    }
    report.rms_residual = std::sqrt(report.rms_residual / static_cast<double>(n));

    // Parameter errors from the local quadratic model: cov = (J^T W J)^-1,
    // scaled by the reduced chi-square when the weights were uniform.
    std::fill(jtj.begin(), jtj.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        eval_jacobian(p, pr.s, pr.tau[i], jrow);
        for (int a = 0; a < na; ++a) {
            const double ja = pr.sqrt_w[i] * jrow[act[a]];
            for (int b = a; b < na; ++b) {
                jtj[a * na + b] += ja * pr.sqrt_w[i] * jrow[act[b]];
            }
        }
    }
    for (int a = 0; a < na; ++a) {
        for (int b = 0; b < a; ++b) jtj[a * na + b] = jtj[b * na + a];
    }
    for (int a = 0; a < na; ++a) {
        scale[a] = std::sqrt(std::max(jtj[a * na + a], 0.0));
        if (scale[a] == 0.0) scale[a] = 1.0;
    }
    std::vector<double> scaled(na * na), inv;
    for (int a = 0; a < na; ++a) {
        for (int b = 0; b < na; ++b) {
            scaled[a * na + b] = jtj[a * na + b] / (scale[a] * scale[b]);
        }
    }
    if (invert_matrix(scaled, na, inv)) {
        const double dof = std::max<double>(1.0, static_cast<double>(n) - na);
        const double s2 = pr.weighted ? 1.0 : chi2 / dof;
        for (int a = 0; a < na; ++a) {
            const double var = inv[a * na + a] / (scale[a] * scale[a]) * s2;
            report.std_errors[act[a]] = var > 0.0 ? std::sqrt(var) : 0.0;
        }
    }
    return report;
}

}  // namespace homsim
