#include "nwidths/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace nwidths {
namespace {

constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread-safe; execution with new arrays is.
std::mutex g_plan_mutex;

struct Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

const Plans& plans_for(int N) {
  static std::map<int, Plans> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  double* in = fftw_alloc_real(N);
  fftw_complex* out = fftw_alloc_complex(N / 2 + 1);
  Plans p;
  p.fwd = fftw_plan_dft_r2c_1d(N, in, out, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft_c2r_1d(N, out, in, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  return cache.emplace(N, p).first->second;
}

void check_grid(const GridSignal& s) {
  if (s.values.size() != s.grid.N) throw std::invalid_argument("signal: length mismatch");
}

}  // namespace

namespace fft {

std::vector<std::complex<double>> forward(const Vec& x) {
  const int N = static_cast<int>(x.size());
  const Plans& p = plans_for(N);
  double* in = fftw_alloc_real(N);
  fftw_complex* out = fftw_alloc_complex(N / 2 + 1);
  std::memcpy(in, x.data(), sizeof(double) * N);
  fftw_execute_dft_r2c(p.fwd, in, out);
  std::vector<std::complex<double>> X(N / 2 + 1);
  for (int k = 0; k <= N / 2; ++k) X[k] = {out[k][0], out[k][1]};
  fftw_free(in);
  fftw_free(out);
  return X;
}

Vec backward(const std::vector<std::complex<double>>& X, int N) {
  const Plans& p = plans_for(N);
  double* out = fftw_alloc_real(N);
  fftw_complex* in = fftw_alloc_complex(N / 2 + 1);
  for (int k = 0; k <= N / 2; ++k) {
    in[k][0] = X[k].real();
    in[k][1] = X[k].imag();
  }
  fftw_execute_dft_c2r(p.bwd, in, out);
  Vec x(N);
  std::memcpy(x.data(), out, sizeof(double) * N);
  fftw_free(in);
  fftw_free(out);
  return x;
}

}  // namespace fft

Grid make_grid(int N) {
  if (N < 4 || N % 2 != 0) throw std::invalid_argument("make_grid: N must be even and >= 4");
  Grid g;
  g.N = N;
  g.nodes.resize(N);
  for (int j = 0; j < N; ++j) g.nodes[j] = 2.0 * kPi * j / N;
  return g;
}

GridSignal make_signal(const Grid& grid, Vec values) {
  GridSignal s{grid, std::move(values)};
  check_grid(s);
  if (!s.values.allFinite()) throw std::invalid_argument("signal: non-finite sample");
  return s;
}

double discrete_norm_any(const Vec& v, double p) {
  if (v.size() == 0) return 0.0;
  const double m = v.cwiseAbs().maxCoeff();
  if (p == kInf) return m;
  if (m == 0.0) return 0.0;
  const double w = 2.0 * kPi / static_cast<double>(v.size());
  const double s = (v.cwiseAbs() / m).array().pow(p).sum();
  return m * std::pow(w * s, 1.0 / p);
}

double discrete_norm(const GridSignal& s, double p) {
  check_grid(s);
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("discrete_norm: p must be finite and > 1");
  }
  return discrete_norm_any(s.values, p);
}

FourierCoeffs fourier_coefficients(const GridSignal& s, int K) {
  check_grid(s);
  const int N = s.grid.N;
  if (K < 1) throw std::invalid_argument("fourier_coefficients: K must be positive");
  if (2 * K >= N) throw std::invalid_argument("fourier_coefficients: K aliases on this grid");
  const auto X = fft::forward(s.values);
  FourierCoeffs c;
  c.K = K;
  c.a.resize(K);
  c.b.resize(K);
  for (int k = 1; k <= K; ++k) {
    c.a(k - 1) = 2.0 * X[k].real() / N;
    c.b(k - 1) = -2.0 * X[k].imag() / N;
  }
  return c;
}

GridSignal synthesize(const FourierCoeffs& c, const Grid& grid) {
  return partial_sum(c, c.K, grid);
}

GridSignal partial_sum(const FourierCoeffs& c, int n, const Grid& grid) {
  if (n < 0 || n > c.K) throw std::invalid_argument("partial_sum: n out of range");
  if (2 * n >= grid.N) throw std::invalid_argument("partial_sum: grid too coarse");
  std::vector<std::complex<double>> X(grid.N / 2 + 1, {0.0, 0.0});
  for (int k = 1; k <= n; ++k) X[k] = {0.5 * c.a(k - 1), -0.5 * c.b(k - 1)};
  return GridSignal{grid, fft::backward(X, grid.N)};
}

FourierCoeffs apply_multiplier(const FourierCoeffs& c, const MultiplierSequence& lambda,
                               double beta) {
  const double cs = std::cos(beta * kPi / 2.0);
  const double sn = std::sin(beta * kPi / 2.0);
  FourierCoeffs out = c;
  for (int k = 1; k <= c.K; ++k) {
    const double l = lambda.at(k);
    const double a = c.a(k - 1);
    const double b = c.b(k - 1);
    out.a(k - 1) = l * (a * cs - b * sn);
    out.b(k - 1) = l * (b * cs + a * sn);
  }
  return out;
}

GridSignal kernel_signal(const MultiplierSequence& lambda, double beta, const Grid& grid,
                         int K) {
  if (K < 1 || 2 * K >= grid.N) throw std::invalid_argument("kernel_signal: bad K");
  FourierCoeffs c;
  c.K = K;
  c.a = Vec::Zero(K);
  c.b = Vec::Zero(K);
  for (int k = 1; k <= K; ++k) c.a(k - 1) = 1.0;
  return synthesize(apply_multiplier(c, lambda, beta), grid);
}

GridSignal convolve(const GridSignal& kernel, const GridSignal& phi) {
  check_grid(kernel);
  check_grid(phi);
  if (!(kernel.grid == phi.grid)) throw std::invalid_argument("convolve: grid mismatch");
  const int N = phi.grid.N;
  auto A = fft::forward(kernel.values);
  const auto B = fft::forward(phi.values);
  for (std::size_t k = 0; k < A.size(); ++k) A[k] *= B[k];
  Vec v = fft::backward(A, N);
  v *= 2.0 * kPi / (static_cast<double>(N) * N);
  return GridSignal{phi.grid, v};
}

int kernel_truncation(const MultiplierSequence& lambda, int N) {
  const int cap = std::max(1, N / 4);
  const double l1 = lambda.at(1);
  for (int k = 1; k <= cap; ++k) {
    if (lambda.at(k) < 1e-14 * l1) return k;
  }
  return cap;
}

SpectralMultiplier::SpectralMultiplier(int N, std::vector<double> m, double theta)
    : N_(N), m_(std::move(m)), theta_(theta) {
  if (N < 4 || N % 2) throw std::invalid_argument("SpectralMultiplier: bad grid size");
  if (2 * static_cast<int>(m_.size()) >= N) {
    throw std::invalid_argument("SpectralMultiplier: band exceeds grid capacity");
  }
}

SpectralMultiplier SpectralMultiplier::band(int N, const MultiplierSequence& lambda,
                                            double beta, int lo, int hi) {
  std::vector<double> m(static_cast<std::size_t>(std::max(hi, 0)), 0.0);
  for (int k = lo + 1; k <= hi; ++k) m[k - 1] = lambda.at(k);
  return SpectralMultiplier(N, std::move(m), beta * kPi / 2.0);
}

Vec SpectralMultiplier::apply_phase(const Vec& values, double theta) const {
  if (values.size() != N_) throw std::invalid_argument("SpectralMultiplier: length mismatch");
  auto X = fft::forward(values);
  const std::complex<double> rot = std::polar(1.0, -theta);
  const int K = static_cast<int>(m_.size());
  X[0] = 0.0;
  for (int k = 1; k <= N_ / 2; ++k) X[k] = k <= K ? X[k] * (m_[k - 1] * rot) : 0.0;
  Vec v = fft::backward(X, N_);
  v /= static_cast<double>(N_);
  return v;
}

Vec SpectralMultiplier::apply(const Vec& values) const { return apply_phase(values, theta_); }

Vec SpectralMultiplier::apply_adjoint(const Vec& values) const {
  return apply_phase(values, -theta_);
}

double SpectralMultiplier::max_abs() const {
  double m = 0.0;
  for (double v : m_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace nwidths
