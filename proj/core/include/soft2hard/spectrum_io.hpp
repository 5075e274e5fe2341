#pragma once

// Plain-text spectrum files:
//
//   T=<horizon> N=<modes>
//   1<TAB><c_1>
//   2<TAB><c_2>
//   ...
//
// Values are written in shortest round-trip form.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "soft2hard/heat_modal.hpp"

namespace soft2hard::heat {

class SpectrumFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpectrumFile {
  double horizon = 1.0;
  SineSpectrum spectrum = SineSpectrum::zeros(1);
};

void write_spectrum(std::ostream& out, const SineSpectrum& spectrum, double horizon);
void write_spectrum(const std::filesystem::path& path, const SineSpectrum& spectrum,
                    double horizon);

/// Throws SpectrumFormatError naming the offending line.
SpectrumFile read_spectrum(std::istream& in);
SpectrumFile read_spectrum(const std::filesystem::path& path);

}  // namespace soft2hard::heat
