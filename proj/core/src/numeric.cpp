#include "soft2hard/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace soft2hard {

namespace {
constexpr std::size_t kPairwiseBlock = 8;
}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= kPairwiseBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int panels) {
  if (panels < 2) panels = 2;
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / panels;
  std::vector<double> terms(static_cast<std::size_t>(panels) + 1);
  for (int i = 0; i <= panels; ++i) {
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    terms[static_cast<std::size_t>(i)] = w * f(a + i * h);
  }
  return pairwise_sum(terms) * h / 3.0;
}

LineFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("least_squares_line: x and y differ in length");
  }
  const std::size_t n = x.size();
  if (n < 2) {
    throw DegenerateFitError("least-squares fit needs at least two points, got " +
                             std::to_string(n));
  }
  const double mx = pairwise_sum(x) / static_cast<double>(n);
  const double my = pairwise_sum(y) / static_cast<double>(n);
  std::vector<double> sxx(n), sxy(n), syy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx[i] = dx * dx;
    sxy[i] = dx * dy;
    syy[i] = dy * dy;
  }
  const double Sxx = pairwise_sum(sxx);
  const double Sxy = pairwise_sum(sxy);
  const double Syy = pairwise_sum(syy);
  if (Sxx <= 0.0) {
    throw DegenerateFitError("least-squares fit has no spread in x");
  }
  LineFit fit;
  fit.slope = Sxy / Sxx;
  fit.intercept = my - fit.slope * mx;
  // Perfectly flat data is fit exactly.
  fit.r_squared = Syy > 0.0 ? std::clamp(Sxy * Sxy / (Sxx * Syy), 0.0, 1.0) : 1.0;
  fit.points = n;
  return fit;
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

int threads_from_environment() {
  const char* raw = std::getenv("SOFT2HARD_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  int value = 0;
  const char* end = raw + std::char_traits<char>::length(raw);
  auto [ptr, ec] = std::from_chars(raw, end, value);
  if (ec != std::errc{} || ptr != end || value < 1) return 1;
  return value;
}

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buffer, ptr);
}

}  // namespace soft2hard
