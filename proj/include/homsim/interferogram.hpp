#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace homsim {

enum class ScanKind { Dip, Peak };

std::string to_string(ScanKind kind);

struct InterferogramSample {
    double tau = 0.0;        // delay [s]
    double value = 0.0;      // coincidence probability (or normalized value)
    double std_error = 0.0;  // statistical error, 0 for analytic curves
};

/// Sequence of coincidence values over a strictly increasing delay grid,
/// together with a JSON echo of the configuration that produced it.
struct Interferogram {
    ScanKind kind = ScanKind::Dip;
    std::vector<InterferogramSample> samples;
    std::string config_json;  // resolved run description ("{}" if none)

    /// Throws std::invalid_argument unless taus are strictly increasing and
    /// values/errors are nonnegative.
    void validate() const;

    double max_value() const;

    /// Copy rescaled so the maximum value is 1 (errors scaled alongside).
    Interferogram normalized() const;
};

/// CSV with a leading "# config: {...}" comment; columns tau_s,value,stderr.
void write_csv(const Interferogram& ig, std::ostream& os);

/// Parse the CSV format written by write_csv (comment lines ignored).
Interferogram read_csv(std::istream& is);

/// JSON document with the config echo and the sample array.
std::string to_json(const Interferogram& ig);

}  // namespace homsim
