#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace soft2hard {

/// Raised when a least-squares fit has fewer than two usable points.
class DegenerateFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Recursive pairwise summation with a fixed split order. The result depends
/// only on the values and their order, never on how they were produced.
double pairwise_sum(std::span<const double> values);

/// Composite Simpson rule for f on [a, b]; `panels` is rounded up to even.
double simpson(const std::function<double(double)>& f, double a, double b,
               int panels);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = slope * x + intercept.
/// Throws DegenerateFitError with fewer than two points or constant x.
LineFit least_squares_line(std::span<const double> x, std::span<const double> y);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into pre-sized slots so the
/// output is independent of scheduling.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

/// Worker count from SOFT2HARD_THREADS, or 1 when unset or malformed.
int threads_from_environment();

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

}  // namespace soft2hard
