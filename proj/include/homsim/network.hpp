#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "homsim/wavepacket.hpp"

namespace homsim {

/// One symmetric 50:50 beam splitter. Port order is significant: inputs
/// (in1, in2) map to outputs
///   out1 = (in1 + i in2) / sqrt(2)
///   out2 = (i in1 + in2) / sqrt(2)
/// i.e. transmission amplitude 1 and reflection amplitude i.
struct Splitter {
    std::string in1, in2;
    std::string out1, out2;
};

/// Directed acyclic network of 50:50 splitters with named modes. Every
/// splitter input must be a source mode or the output of an earlier
/// splitter, and no mode may be consumed twice.
class ModeNetwork {
  public:
    ModeNetwork(std::vector<std::string> sources,
                std::vector<Splitter> splitters);

    const std::vector<std::string>& sources() const { return sources_; }
    const std::vector<Splitter>& splitters() const { return splitters_; }

    /// Modes never consumed by a later splitter (where detectors sit).
    std::vector<std::string> terminal_modes() const;

    bool has_mode(const std::string& label) const;

  private:
    std::vector<std::string> sources_;
    std::vector<Splitter> splitters_;
};

/// Complex coefficients mapping input-mode operators to output-mode
/// operators: row o, column j holds the amplitude with which source j
/// contributes to output o.
class TransferMatrix {
  public:
    TransferMatrix(std::vector<std::string> outputs,
                   std::vector<std::string> inputs,
                   std::vector<ComplexAmplitude> entries);

    const std::vector<std::string>& outputs() const { return outputs_; }
    const std::vector<std::string>& inputs() const { return inputs_; }

    ComplexAmplitude coeff(std::size_t row, std::size_t col) const;
    ComplexAmplitude coeff(const std::string& output,
                           const std::string& input) const;

    std::size_t rows() const { return outputs_.size(); }
    std::size_t cols() const { return inputs_.size(); }

    /// Sum of |M_oj|^2 over one row (1 for every output of a lossless net).
    double row_norm_sq(std::size_t row) const;

    /// True when the matrix is square and M M^dagger = I within tol.
    bool is_unitary(double tol = 1e-12) const;

  private:
    std::vector<std::string> outputs_;
    std::vector<std::string> inputs_;
    std::vector<ComplexAmplitude> entries_;  // row-major
};

/// Single splitter (a, b) -> (c, d): the standard Hong-Ou-Mandel
/// interferometer.
ModeNetwork standard_hom();

/// (a, b) -> (c, d) followed by (c, e) -> (g, f), with e the disconnected
/// vacuum port. The second splitter's port order is chosen so that
///   f = (i c + e)/sqrt(2) = (i a - b)/2 + e/sqrt(2)
///   g = (c + i e)/sqrt(2) = (a + i b)/2 + i e/sqrt(2).
ModeNetwork modified_hom();

/// modified_hom plus a third splitter (f, e2) -> (A, B): the tap used to
/// measure the statistics of mode f conditioned on clicks in g.
ModeNetwork hbt_network();

/// Compose the splitter matrices and return the rows for the requested
/// outputs (columns ordered as net.sources()). Throws std::invalid_argument
/// for an unknown output label.
TransferMatrix transfer(const ModeNetwork& net,
                        const std::vector<std::string>& outputs);

}  // namespace homsim
