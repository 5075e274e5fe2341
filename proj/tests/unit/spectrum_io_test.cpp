#include "soft2hard/spectrum_io.hpp"

#include <random>
#include <sstream>

#include <gtest/gtest.h>

namespace soft2hard::heat {
namespace {

TEST(SpectrumIoTest, TextLayout) {
  std::ostringstream out;
  write_spectrum(out, SineSpectrum({0.5, -0.25, 0.0}), 1.0);
  EXPECT_EQ(out.str(), "T=1 N=3\n1\t0.5\n2\t-0.25\n3\t0\n");
}

TEST(SpectrumIoTest, RoundTripProperty) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> c(static_cast<std::size_t>(trial) + 1);
    for (double& v : c) v = n01(rng) * std::pow(10.0, trial - 10);
    const double T = 0.1 + trial * 0.37;
    std::stringstream buffer;
    write_spectrum(buffer, SineSpectrum(c), T);
    const SpectrumFile f = read_spectrum(buffer);
    EXPECT_EQ(f.horizon, T);
    EXPECT_EQ(f.spectrum, SineSpectrum(c));
  }
}

TEST(SpectrumIoTest, MalformedInputs) {
  for (const char* text : {"", "N=2 T=1\n1\t0\n2\t0\n", "T=1 N=0\n", "T=1 N=2\n1\t0\n",
                           "T=1 N=2\n1\t0\n1\t0\n", "T=1 N=1\n2\t0\n", "T=1 N=1\n1 0\n",
                           "T=1 N=1\n1\tabc\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_spectrum(in), SpectrumFormatError) << text;
  }
}

}  // namespace
}  // namespace soft2hard::heat
