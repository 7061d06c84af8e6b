#include "shiftpois/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace shiftpois {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};

}  // namespace

FourierTable::FourierTable(long max_freq)
    : max_freq_(max_freq), c_(static_cast<std::size_t>(2 * max_freq + 1)) {
  if (max_freq < 0) throw std::invalid_argument("negative max_freq");
}

cplx FourierTable::operator[](long l) const noexcept {
  if (l < -max_freq_ || l > max_freq_) return {};
  return c_[static_cast<std::size_t>(l + max_freq_)];
}

cplx& FourierTable::at(long l) {
  if (l < -max_freq_ || l > max_freq_)
    throw std::out_of_range("frequency " + std::to_string(l) +
                            " outside table");
  return c_[static_cast<std::size_t>(l + max_freq_)];
}

double FourierTable::energy() const noexcept {
  double e = 0.0;
  for (const auto& v : c_) e += std::norm(v);
  return e;
}

double FourierTable::value(double t) const noexcept {
  if (max_freq_ < 0) return 0.0;
  double acc = (*this)[0].real();
  for (long l = 1; l <= max_freq_; ++l) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(l) * t;
    const cplx e{std::cos(ang), std::sin(ang)};
    acc += ((*this)[l] * e + (*this)[-l] * std::conj(e)).real();
  }
  return acc;
}

bool is_power_of_two(std::size_t g) noexcept {
  return g != 0 && (g & (g - 1)) == 0;
}

cplx unit_phase(long num, long den) noexcept {
  long r = num % den;
  if (r < 0) r += den;
  const double ang =
      2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
  return {std::cos(ang), std::sin(ang)};
}

std::vector<cplx> inverse_dft(std::vector<cplx> bins) {
  const auto g = bins.size();
  if (g <= 1) return bins;
  std::unique_ptr<fftw_complex, FftwFree> buf(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * g)));
  if (!buf) throw std::bad_alloc();
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(g), buf.get(), buf.get(),
                            FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < g; ++i) {
    buf.get()[i][0] = bins[i].real();
    buf.get()[i][1] = bins[i].imag();
  }
  fftw_execute(plan);
  for (std::size_t i = 0; i < g; ++i)
    bins[i] = {buf.get()[i][0], buf.get()[i][1]};
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return bins;
}

std::vector<cplx> forward_dft(std::vector<cplx> x) {
  for (auto& v : x) v = std::conj(v);
  x = inverse_dft(std::move(x));
  for (auto& v : x) v = std::conj(v);
  return x;
}

GridValues synthesize_grid(const FourierTable& table, std::size_t grid) {
  if (!is_power_of_two(grid))
    throw std::invalid_argument("grid size must be a power of two");
  const long L = table.max_freq();
  if (L >= 0 && static_cast<long>(grid) < 2 * L)
    throw std::invalid_argument("grid of " + std::to_string(grid) +
                                " points too small for band limit " +
                                std::to_string(L));
  std::vector<cplx> bins(grid);
  const long g = static_cast<long>(grid);
  for (long l = -L; l <= L; ++l) {
    long b = l % g;
    if (b < 0) b += g;
    bins[static_cast<std::size_t>(b)] += table[l];
  }
  bins = inverse_dft(std::move(bins));
  GridValues out;
  out.values.resize(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    out.values[i] = bins[i].real();
    out.max_imag = std::max(out.max_imag, std::abs(bins[i].imag()));
  }
  return out;
}

}  // namespace shiftpois
