#include "homsim/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "homsim/coincidence.hpp"
#include "homsim/fitting.hpp"
#include "homsim/svgplot.hpp"

namespace homsim {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

void reject_unknown(const json& obj, const std::string& scope,
                    std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        const std::string& key = item.key();
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
                return key == a;
            }) != allowed.end()) {
            continue;
        }
        const std::string path = scope.empty() ? key : scope + "." + key;
        if (lower(key).find("mhz") != std::string::npos) {
            throw ConfigError("field '" + path +
                              "': frequencies must be given in rad/s "
                              "(delta_rel_rad_s); MHz-as-printed values are "
                              "ambiguous and not accepted");
        }
        throw ConfigError("unknown field '" + path + "'");
    }
}

double get_number(const json& obj, const std::string& scope, const char* key,
                  double fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required) {
            throw ConfigError("missing field '" + scope + "." + key + "'");
        }
        return fallback;
    }
    if (!obj[key].is_number()) {
        throw ConfigError("field '" + scope + "." + key + "' must be a number");
    }
    return obj[key].get<double>();
}

bool get_bool(const json& obj, const std::string& scope, const char* key,
              bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) {
        throw ConfigError("field '" + scope + "." + key + "' must be a boolean");
    }
    return obj[key].get<bool>();
}

std::uint64_t get_count(const json& obj, const std::string& scope,
                        const char* key, std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_unsigned()) {
        throw ConfigError("field '" + scope + "." + key +
                          "' must be a nonnegative integer");
    }
    return obj[key].get<std::uint64_t>();
}

DetectorModel parse_detector(const json& obj, const std::string& scope,
                             const DetectorModel& fallback) {
    reject_unknown(obj, scope, {"efficiency", "dark_prob", "gate_width_s"});
    DetectorModel det = fallback;
    det.efficiency = get_number(obj, scope, "efficiency", det.efficiency);
    det.dark_prob = get_number(obj, scope, "dark_prob", det.dark_prob);
    det.gate_width = get_number(obj, scope, "gate_width_s", det.gate_width);
    return det;
}

ExperimentMode parse_mode(const std::string& text) {
    if (text == "analytic-dip") return ExperimentMode::AnalyticDip;
    if (text == "analytic-peak") return ExperimentMode::AnalyticPeak;
    if (text == "wcs-dip") return ExperimentMode::WcsDip;
    if (text == "wcs-peak") return ExperimentMode::WcsPeak;
    if (text == "hbt-scan") return ExperimentMode::HbtScan;
    if (text == "fit") return ExperimentMode::Fit;
    throw ConfigError("field 'mode': unknown mode '" + text + "'");
}

fs::path output_path(const ExperimentConfig& cfg, const std::string& suffix) {
    return fs::path(cfg.out_dir) / (cfg.basename + suffix);
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open output file '" + path.string() +
                                 "'");
    }
    return os;
}

void write_text_file(const fs::path& path, const std::string& text,
                     RunResult& result) {
    auto os = open_output(path);
    os << text;
    if (!os) {
        throw std::runtime_error("write failed for '" + path.string() + "'");
    }
    result.files_written.push_back(path.string());
}

void write_interferogram_outputs(const ExperimentConfig& cfg,
                                 const Interferogram& ig, RunResult& result) {
    {
        std::ostringstream csv;
        write_csv(ig, csv);
        write_text_file(output_path(cfg, ".csv"), csv.str(), result);
    }
    write_text_file(output_path(cfg, ".json"), to_json(ig) + "\n", result);
    if (cfg.plot) {
        SvgSeries series;
        series.label = to_string(ig.kind);
        series.color = ig.kind == ScanKind::Dip ? "#c0392b" : "#1f1f1f";
        series.markers = !ig.samples.empty() && ig.samples[0].std_error > 0.0;
        for (const auto& s : ig.samples) series.points.push_back({s.tau, s.value});
        std::ostringstream svg;
        write_svg_plot(svg, cfg.basename, "tau [s]", "coincidence", "",
                       {series});
        write_text_file(output_path(cfg, ".svg"), svg.str(), result);
    }
}

void run_analytic(const ExperimentConfig& cfg, RunResult& result) {
    const WavePacket ea = WavePacket::gaussian(0.0, cfg.sigma, 0.0);
    const WavePacket eb = WavePacket::gaussian(0.0, cfg.sigma, cfg.delta_rel);
    const ScanKind kind = cfg.mode == ExperimentMode::AnalyticDip
                              ? ScanKind::Dip
                              : ScanKind::Peak;
    Interferogram ig = scan(ea, eb, cfg.taus, kind, cfg.normalize);
    ig.config_json = resolved_config_json(cfg);
    write_interferogram_outputs(cfg, ig, result);
}

SourceModel source_from(const ExperimentConfig& cfg) {
    SourceModel src;
    src.mu = cfg.mu;
    src.phase_randomized = cfg.phase_randomized;
    src.fixed_phase = cfg.fixed_phase;
    src.freq_displacement = cfg.delta_rel;
    src.sigma = cfg.sigma;
    return src;
}

void run_wcs(const ExperimentConfig& cfg, RunResult& result) {
    const SourceModel src = source_from(cfg);
    const ModeNetwork net = cfg.mode == ExperimentMode::WcsDip
                                ? standard_hom()
                                : modified_hom();
    Interferogram ig = run_hom_scan(src, net, cfg.det_signal, cfg.taus,
                                    cfg.trials, TrialRng{cfg.seed, 0});
    ig.config_json = resolved_config_json(cfg);
    write_interferogram_outputs(cfg, ig, result);
}

void run_hbt_mode(const ExperimentConfig& cfg, RunResult& result) {
    const SourceModel src = source_from(cfg);
    const std::vector<HbtPoint> points =
        hbt_scan(src, cfg.det_herald, cfg.det_signal, cfg.taus, cfg.trials,
                 TrialRng{cfg.seed, 0});
    const std::string config_echo = resolved_config_json(cfg);

    std::ostringstream csv;
    csv << "# config: " << config_echo << "\n";
    csv << "delay_s,g2,g2_stderr,n_herald,n_A,n_B,n_AB\n";
    for (const HbtPoint& p : points) {
        csv << fmt_double(p.delay) << ',' << fmt_double(p.g2.g2) << ','
            << fmt_double(p.g2.std_error) << ',' << p.counts.n_herald << ','
            << p.counts.n_A << ',' << p.counts.n_B << ',' << p.counts.n_AB
            << "\n";
    }
    write_text_file(output_path(cfg, ".csv"), csv.str(), result);

    ordered_json j;
    j["config"] = ordered_json::parse(config_echo);
    ordered_json arr = ordered_json::array();
    for (const HbtPoint& p : points) {
        arr.push_back({{"delay_s", p.delay},
                       {"g2", p.g2.g2},
                       {"g2_stderr", p.g2.std_error},
                       {"n_herald", p.counts.n_herald},
                       {"n_A", p.counts.n_A},
                       {"n_B", p.counts.n_B},
                       {"n_AB", p.counts.n_AB}});
    }
    j["points"] = std::move(arr);
    write_text_file(output_path(cfg, ".json"), j.dump(2) + "\n", result);

    if (cfg.plot) {
        SvgSeries sa{"herald-A coincidences", "#1f1f1f", true, true, 0, {}};
        SvgSeries sb{"herald-B coincidences", "#c0392b", true, true, 0, {}};
        SvgSeries sg{"g2(0)", "#2060c0", false, true, 1, {}};
        for (const HbtPoint& p : points) {
            sa.points.push_back({p.delay, static_cast<double>(p.counts.n_A)});
            sb.points.push_back({p.delay, static_cast<double>(p.counts.n_B)});
            sg.points.push_back({p.delay, p.g2.g2});
        }
        std::ostringstream svg;
        write_svg_plot(svg, cfg.basename, "herald delay [s]",
                       "conditioned counts", "g2(0)", {sa, sb, sg});
        write_text_file(output_path(cfg, ".svg"), svg.str(), result);
    }
}

void run_fit_mode(const ExperimentConfig& cfg, RunResult& result) {
    fs::path input(cfg.fit_input);
    if (input.is_relative()) {
        const fs::path in_out_dir = fs::path(cfg.out_dir) / input;
        if (fs::exists(in_out_dir)) input = in_out_dir;
    }
    std::ifstream is(input);
    if (!is) {
        throw ConfigError("fit.input_csv: cannot open '" + input.string() + "'");
    }
    Interferogram data = read_csv(is);
    const FitReport report = fit(data, cfg.fit_sign);

    ordered_json j;
    j["config"] = ordered_json::parse(resolved_config_json(cfg));
    j["input"] = input.string();
    j["sign"] = to_string(cfg.fit_sign);
    j["converged"] = report.converged;
    j["beat_fixed"] = report.beat_fixed;
    j["iterations"] = report.iterations;
    j["rms_residual"] = report.rms_residual;
    j["parameters"] = {{"baseline", report.model.baseline},
                       {"visibility", report.model.visibility},
                       {"envelope_width_s", report.model.envelope_width},
                       {"beat_freq_rad_s", report.model.beat_freq},
                       {"beat_phase_rad", report.model.beat_phase},
                       {"envelope_center_s", report.model.envelope_center}};
    j["std_errors"] = {{"baseline", report.std_errors[0]},
                       {"visibility", report.std_errors[1]},
                       {"envelope_width_s", report.std_errors[2]},
                       {"beat_freq_rad_s", report.std_errors[3]},
                       {"beat_phase_rad", report.std_errors[4]},
                       {"envelope_center_s", report.std_errors[5]}};
    write_text_file(output_path(cfg, ".json"), j.dump(2) + "\n", result);
    if (!report.converged) {
        throw std::runtime_error("fit did not converge (report written to '" +
                                 output_path(cfg, ".json").string() + "')");
    }
}

}  // namespace

std::string to_string(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::AnalyticDip: return "analytic-dip";
        case ExperimentMode::AnalyticPeak: return "analytic-peak";
        case ExperimentMode::WcsDip: return "wcs-dip";
        case ExperimentMode::WcsPeak: return "wcs-peak";
        case ExperimentMode::HbtScan: return "hbt-scan";
        case ExperimentMode::Fit: return "fit";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ConfigError("packet.sigma_s must be > 0");
    }
    if (!std::isfinite(delta_rel)) {
        throw ConfigError("packet.delta_rel_rad_s must be finite");
    }
    if (mode == ExperimentMode::Fit) {
        if (fit_input.empty()) {
            throw ConfigError("fit.input_csv is required in fit mode");
        }
        return;
    }
    if (taus.size() < 2) {
        throw ConfigError("delay grid needs at least 2 points");
    }
    for (std::size_t i = 1; i < taus.size(); ++i) {
        if (!(taus[i - 1] < taus[i])) {
            throw ConfigError("delay grid must be strictly increasing");
        }
    }
    const bool monte_carlo = mode == ExperimentMode::WcsDip ||
                             mode == ExperimentMode::WcsPeak ||
                             mode == ExperimentMode::HbtScan;
    if (monte_carlo) {
        if (!(mu > 0.0)) throw ConfigError("source.mu must be > 0");
        if (mu > 0.2) {
            std::cerr << "warning: source.mu = " << mu
                      << " exceeds the 0.2 validity bound of the few-photon "
                         "model\n";
        }
        if (trials == 0) throw ConfigError("trials must be >= 1");
        try {
            det_signal.validate();
            det_herald.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("detectors: ") + e.what());
        }
    }
}

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(doc, "",
                   {"mode", "packet", "source", "detectors", "tau_grid",
                    "taus_s", "trials", "seed", "normalize", "fit", "output"});
    if (!doc.contains("mode") || !doc["mode"].is_string()) {
        throw ConfigError("field 'mode' (string) is required");
    }
    ExperimentConfig cfg;
    cfg.mode = parse_mode(doc["mode"].get<std::string>());

    if (doc.contains("packet")) {
        const json& p = doc["packet"];
        reject_unknown(p, "packet", {"sigma_s", "delta_rel_rad_s"});
        cfg.sigma = get_number(p, "packet", "sigma_s", cfg.sigma);
        cfg.delta_rel = get_number(p, "packet", "delta_rel_rad_s", cfg.delta_rel);
    }
    if (doc.contains("source")) {
        const json& s = doc["source"];
        reject_unknown(s, "source",
                       {"mu", "phase_randomized", "fixed_phase_rad"});
        cfg.mu = get_number(s, "source", "mu", cfg.mu);
        cfg.phase_randomized =
            get_bool(s, "source", "phase_randomized", cfg.phase_randomized);
        cfg.fixed_phase = get_number(s, "source", "fixed_phase_rad",
                                     cfg.fixed_phase);
    }
    if (doc.contains("detectors")) {
        const json& d = doc["detectors"];
        reject_unknown(d, "detectors", {"signal", "herald"});
        if (d.contains("signal")) {
            cfg.det_signal =
                parse_detector(d["signal"], "detectors.signal", cfg.det_signal);
        }
        if (d.contains("herald")) {
            cfg.det_herald =
                parse_detector(d["herald"], "detectors.herald", cfg.det_herald);
        }
    }
    if (doc.contains("tau_grid") && doc.contains("taus_s")) {
        throw ConfigError("give either 'tau_grid' or 'taus_s', not both");
    }
    if (doc.contains("tau_grid")) {
        const json& g = doc["tau_grid"];
        reject_unknown(g, "tau_grid", {"start_s", "stop_s", "count"});
        const double start = get_number(g, "tau_grid", "start_s", 0.0, true);
        const double stop = get_number(g, "tau_grid", "stop_s", 0.0, true);
        const std::uint64_t count = get_count(g, "tau_grid", "count", 0);
        if (count < 2) throw ConfigError("tau_grid.count must be >= 2");
        if (!(start < stop)) {
            throw ConfigError("tau_grid.start_s must be < tau_grid.stop_s");
        }
        cfg.taus.resize(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            cfg.taus[i] = start + (stop - start) * static_cast<double>(i) /
                                      static_cast<double>(count - 1);
        }
    } else if (doc.contains("taus_s")) {
        const json& arr = doc["taus_s"];
        if (!arr.is_array() || arr.empty()) {
            throw ConfigError("taus_s must be a nonempty array of numbers");
        }
        for (const json& v : arr) {
            if (!v.is_number()) {
                throw ConfigError("taus_s must contain only numbers");
            }
            cfg.taus.push_back(v.get<double>());
        }
    }
    cfg.trials = get_count(doc, "", "trials", cfg.trials);
    cfg.seed = get_count(doc, "", "seed", cfg.seed);
    cfg.normalize = get_bool(doc, "", "normalize", cfg.normalize);
    if (doc.contains("fit")) {
        const json& f = doc["fit"];
        reject_unknown(f, "fit", {"input_csv", "sign"});
        if (f.contains("input_csv")) {
            if (!f["input_csv"].is_string()) {
                throw ConfigError("fit.input_csv must be a string");
            }
            cfg.fit_input = f["input_csv"].get<std::string>();
        }
        if (f.contains("sign")) {
            const std::string sign = f["sign"].get<std::string>();
            if (sign == "dip") {
                cfg.fit_sign = ScanKind::Dip;
            } else if (sign == "peak") {
                cfg.fit_sign = ScanKind::Peak;
            } else {
                throw ConfigError("fit.sign must be 'dip' or 'peak'");
            }
        }
    }
    if (doc.contains("output")) {
        const json& o = doc["output"];
        reject_unknown(o, "output", {"dir", "basename", "plot"});
        if (o.contains("dir")) cfg.out_dir = o["dir"].get<std::string>();
        if (o.contains("basename")) {
            cfg.basename = o["basename"].get<std::string>();
        }
        cfg.plot = get_bool(o, "output", "plot", cfg.plot);
    }
    cfg.validate();
    return cfg;
}

std::string resolved_config_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["mode"] = to_string(cfg.mode);
    j["packet"] = {{"sigma_s", cfg.sigma}, {"delta_rel_rad_s", cfg.delta_rel}};
    j["source"] = {{"mu", cfg.mu},
                   {"phase_randomized", cfg.phase_randomized},
                   {"fixed_phase_rad", cfg.fixed_phase}};
    j["detectors"] = {
        {"signal",
         {{"efficiency", cfg.det_signal.efficiency},
          {"dark_prob", cfg.det_signal.dark_prob},
          {"gate_width_s", cfg.det_signal.gate_width}}},
        {"herald",
         {{"efficiency", cfg.det_herald.efficiency},
          {"dark_prob", cfg.det_herald.dark_prob},
          {"gate_width_s", cfg.det_herald.gate_width}}}};
    if (!cfg.taus.empty()) j["taus_s"] = cfg.taus;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["normalize"] = cfg.normalize;
    if (cfg.mode == ExperimentMode::Fit) {
        j["fit"] = {{"input_csv", cfg.fit_input},
                    {"sign", to_string(cfg.fit_sign)}};
    }
    j["output"] = {{"dir", cfg.out_dir},
                   {"basename", cfg.basename},
                   {"plot", cfg.plot}};
    return j.dump();
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output dir '" + cfg.out_dir +
                                 "': " + ec.message());
    }
    RunResult result;
    switch (cfg.mode) {
        case ExperimentMode::AnalyticDip:
        case ExperimentMode::AnalyticPeak:
            run_analytic(cfg, result);
            break;
        case ExperimentMode::WcsDip:
        case ExperimentMode::WcsPeak:
            run_wcs(cfg, result);
            break;
        case ExperimentMode::HbtScan:
            run_hbt_mode(cfg, result);
            break;
        case ExperimentMode::Fit:
            run_fit_mode(cfg, result);
            break;
    }
    return result;
}

}  // namespace homsim
