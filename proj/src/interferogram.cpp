#include "homsim/interferogram.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace homsim {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string to_string(ScanKind kind) {
    return kind == ScanKind::Dip ? "dip" : "peak";
}

void Interferogram::validate() const {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const InterferogramSample& s = samples[i];
        if (s.value < 0.0 || s.std_error < 0.0) {
            throw std::invalid_argument(
                "Interferogram: negative value or error at sample " +
                std::to_string(i));
        }
        if (i > 0 && !(samples[i - 1].tau < s.tau)) {
            throw std::invalid_argument(
                "Interferogram: taus must be strictly increasing");
        }
    }
}

double Interferogram::max_value() const {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, s.value);
    return m;
}

Interferogram Interferogram::normalized() const {
    Interferogram out = *this;
    const double m = max_value();
    if (m <= 0.0) return out;
    for (auto& s : out.samples) {
        s.value /= m;
        s.std_error /= m;
    }
    return out;
}

void write_csv(const Interferogram& ig, std::ostream& os) {
    os << "# config: " << (ig.config_json.empty() ? "{}" : ig.config_json)
       << "\n";
    os << "# kind: " << to_string(ig.kind) << "\n";
    os << "tau_s,value,stderr\n";
    for (const auto& s : ig.samples) {
        os << fmt_double(s.tau) << ',' << fmt_double(s.value) << ','
           << fmt_double(s.std_error) << "\n";
    }
}

Interferogram read_csv(std::istream& is) {
    Interferogram ig;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string key = "# config: ";
            if (line.rfind(key, 0) == 0) ig.config_json = line.substr(key.size());
            const std::string kkey = "# kind: ";
            if (line.rfind(kkey, 0) == 0) {
                ig.kind = line.substr(kkey.size()) == "peak" ? ScanKind::Peak
                                                             : ScanKind::Dip;
            }
            continue;
        }
        if (!header_seen) {  // column header row
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        std::string field;
        InterferogramSample s;
        double* slots[3] = {&s.tau, &s.value, &s.std_error};
        for (int i = 0; i < 3; ++i) {
            if (!std::getline(ss, field, ',')) {
                throw std::invalid_argument("read_csv: malformed row '" + line +
                                            "'");
            }
            *slots[i] = std::stod(field);
        }
        ig.samples.push_back(s);
    }
    if (!header_seen) {
        throw std::invalid_argument("read_csv: missing header row");
    }
    return ig;
}

std::string to_json(const Interferogram& ig) {
    nlohmann::ordered_json j;
    j["config"] = ig.config_json.empty()
                      ? nlohmann::ordered_json::object()
                      : nlohmann::ordered_json::parse(ig.config_json);
    j["kind"] = to_string(ig.kind);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : ig.samples) {
        arr.push_back({{"tau_s", s.tau},
                       {"value", s.value},
                       {"stderr", s.std_error}});
    }
    j["samples"] = std::move(arr);
    return j.dump(2);
}

}  // namespace homsim
