#include "soft2hard/spectrum_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "soft2hard/numeric.hpp"

namespace soft2hard::heat {

namespace {

template <typename T>
bool parse_number(std::string_view text, T& value) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw SpectrumFormatError("spectrum line " + std::to_string(line) + ": " + what);
}

}  // namespace

void write_spectrum(std::ostream& out, const SineSpectrum& spectrum, double horizon) {
  out << "T=" << format_double(horizon) << " N=" << spectrum.size() << '\n';
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    out << (i + 1) << '\t' << format_double(spectrum.coefficients()[i]) << '\n';
  }
}

void write_spectrum(const std::filesystem::path& path, const SineSpectrum& spectrum,
                    double horizon) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_spectrum(out, spectrum, horizon);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

SpectrumFile read_spectrum(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(1, "missing header");

  std::istringstream header(line);
  std::string t_field, n_field;
  header >> t_field >> n_field;
  double horizon = 0.0;
  std::size_t modes = 0;
  if (t_field.rfind("T=", 0) != 0 || !parse_number(std::string_view(t_field).substr(2), horizon)) {
    fail(1, "expected 'T=<value>'");
  }
  if (n_field.rfind("N=", 0) != 0 || !parse_number(std::string_view(n_field).substr(2), modes) ||
      modes < 1) {
    fail(1, "expected 'N=<count>' with count >= 1");
  }

  std::vector<double> c(modes, 0.0);
  std::vector<bool> seen(modes, false);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) fail(lineno, "expected '<n>\\t<coefficient>'");
    std::size_t n = 0;
    double value = 0.0;
    if (!parse_number(std::string_view(line).substr(0, tab), n) || n < 1 || n > modes) {
      fail(lineno, "mode index outside 1.." + std::to_string(modes));
    }
    if (!parse_number(std::string_view(line).substr(tab + 1), value)) {
      fail(lineno, "malformed coefficient");
    }
    if (seen[n - 1]) fail(lineno, "duplicate mode " + std::to_string(n));
    seen[n - 1] = true;
    c[n - 1] = value;
  }
  for (std::size_t i = 0; i < modes; ++i) {
    if (!seen[i]) fail(lineno, "mode " + std::to_string(i + 1) + " missing");
  }
  return {horizon, SineSpectrum(std::move(c))};
}

SpectrumFile read_spectrum(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spectrum file " + path.string());
  return read_spectrum(in);
}

}  // namespace soft2hard::heat
