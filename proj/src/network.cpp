#include "homsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace homsim {

namespace {

const ComplexAmplitude kI{0.0, 1.0};

double inv_sqrt2() { return 1.0 / std::sqrt(2.0); }

}  // namespace

ModeNetwork::ModeNetwork(std::vector<std::string> sources,
                         std::vector<Splitter> splitters)
    : sources_(std::move(sources)), splitters_(std::move(splitters)) {
    std::set<std::string> defined(sources_.begin(), sources_.end());
    if (defined.size() != sources_.size()) {
        throw std::invalid_argument("ModeNetwork: duplicate source label");
    }
    std::set<std::string> consumed;
    for (const Splitter& sp : splitters_) {
        for (const std::string* in : {&sp.in1, &sp.in2}) {
            if (!defined.count(*in)) {
                throw std::invalid_argument(
                    "ModeNetwork: splitter input '" + *in +
                    "' is neither a source nor an earlier output");
            }
            if (consumed.count(*in)) {
                throw std::invalid_argument("ModeNetwork: mode '" + *in +
                                            "' consumed twice");
            }
            consumed.insert(*in);
        }
        for (const std::string* out : {&sp.out1, &sp.out2}) {
            if (!defined.insert(*out).second) {
                throw std::invalid_argument("ModeNetwork: duplicate mode label '" +
                                            *out + "'");
            }
        }
    }
}

std::vector<std::string> ModeNetwork::terminal_modes() const {
    std::set<std::string> consumed;
    for (const Splitter& sp : splitters_) {
        consumed.insert(sp.in1);
        consumed.insert(sp.in2);
    }
    std::vector<std::string> out;
    for (const std::string& s : sources_) {
        if (!consumed.count(s)) out.push_back(s);
    }
    for (const Splitter& sp : splitters_) {
        if (!consumed.count(sp.out1)) out.push_back(sp.out1);
        if (!consumed.count(sp.out2)) out.push_back(sp.out2);
    }
    return out;
}

bool ModeNetwork::has_mode(const std::string& label) const {
    if (std::find(sources_.begin(), sources_.end(), label) != sources_.end()) {
        return true;
    }
    for (const Splitter& sp : splitters_) {
        if (sp.out1 == label || sp.out2 == label) return true;
    }
    return false;
}

TransferMatrix::TransferMatrix(std::vector<std::string> outputs,
                               std::vector<std::string> inputs,
                               std::vector<ComplexAmplitude> entries)
    : outputs_(std::move(outputs)),
      inputs_(std::move(inputs)),
      entries_(std::move(entries)) {
    if (entries_.size() != outputs_.size() * inputs_.size()) {
        throw std::invalid_argument("TransferMatrix: entry count mismatch");
    }
}

ComplexAmplitude TransferMatrix::coeff(std::size_t row, std::size_t col) const {
    return entries_.at(row * inputs_.size() + col);
}

ComplexAmplitude TransferMatrix::coeff(const std::string& output,
                                       const std::string& input) const {
    const auto r = std::find(outputs_.begin(), outputs_.end(), output);
    if (r == outputs_.end()) {
        throw std::invalid_argument("TransferMatrix: unknown output '" + output +
                                    "'");
    }
    const auto c = std::find(inputs_.begin(), inputs_.end(), input);
    if (c == inputs_.end()) {
        throw std::invalid_argument("TransferMatrix: unknown input '" + input +
                                    "'");
    }
    return coeff(static_cast<std::size_t>(r - outputs_.begin()),
                 static_cast<std::size_t>(c - inputs_.begin()));
}

double TransferMatrix::row_norm_sq(std::size_t row) const {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols(); ++c) acc += std::norm(coeff(row, c));
    return acc;
}

bool TransferMatrix::is_unitary(double tol) const {
    if (rows() != cols()) return false;
    for (std::size_t r1 = 0; r1 < rows(); ++r1) {
        for (std::size_t r2 = 0; r2 < rows(); ++r2) {
            ComplexAmplitude dot{0.0, 0.0};
            for (std::size_t c = 0; c < cols(); ++c) {
                dot += coeff(r1, c) * std::conj(coeff(r2, c));
            }
            const double expect = (r1 == r2) ? 1.0 : 0.0;
            if (std::abs(dot - ComplexAmplitude{expect, 0.0}) > tol) {
                return false;
            }
        }
    }
    return true;
}

ModeNetwork standard_hom() {
    return ModeNetwork({"a", "b"}, {Splitter{"a", "b", "c", "d"}});
}

ModeNetwork modified_hom() {
    // Port order (c, e) -> (g, f) reproduces the sign convention of the
    // modified interferometer: f carries the reflected copy of c.
    return ModeNetwork({"a", "b", "e"}, {Splitter{"a", "b", "c", "d"},
                                         Splitter{"c", "e", "g", "f"}});
}

ModeNetwork hbt_network() {
    return ModeNetwork({"a", "b", "e", "e2"},
                       {Splitter{"a", "b", "c", "d"},
                        Splitter{"c", "e", "g", "f"},
                        Splitter{"f", "e2", "A", "B"}});
}

TransferMatrix transfer(const ModeNetwork& net,
                        const std::vector<std::string>& outputs) {
    const std::size_t n = net.sources().size();
    // Row vector over the source modes for every live mode label.
    std::map<std::string, std::vector<ComplexAmplitude>> row;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<ComplexAmplitude> unit(n, ComplexAmplitude{0.0, 0.0});
        unit[j] = ComplexAmplitude{1.0, 0.0};
        row[net.sources()[j]] = std::move(unit);
    }
    const double r = inv_sqrt2();
    for (const Splitter& sp : net.splitters()) {
        const std::vector<ComplexAmplitude> x = row.at(sp.in1);
        const std::vector<ComplexAmplitude> y = row.at(sp.in2);
        std::vector<ComplexAmplitude> o1(n), o2(n);
        for (std::size_t j = 0; j < n; ++j) {
            o1[j] = r * (x[j] + kI * y[j]);
            o2[j] = r * (kI * x[j] + y[j]);
        }
        row[sp.out1] = std::move(o1);
        row[sp.out2] = std::move(o2);
    }
    std::vector<ComplexAmplitude> entries;
    entries.reserve(outputs.size() * n);
    for (const std::string& label : outputs) {
        const auto it = row.find(label);
        if (it == row.end()) {
            throw std::invalid_argument("transfer: unknown mode label '" + label +
                                        "'");
        }
        entries.insert(entries.end(), it->second.begin(), it->second.end());
    }
    return TransferMatrix(outputs, net.sources(), std::move(entries));
}

}  // namespace homsim
