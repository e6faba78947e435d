#pragma once

#include <complex>
#include <vector>

#include "nwidths/classes.hpp"
#include "nwidths/norms.hpp"

namespace nwidths {

/// N equispaced nodes 2*pi*j/N on [0, 2*pi).
struct Grid {
  int N = 0;
  std::vector<double> nodes;
  bool operator==(const Grid& o) const { return N == o.N; }
};

struct GridSignal {
  Grid grid;
  Vec values;
};

/// Coefficients a_k, b_k for k = 1..K, stored at index k-1.
struct FourierCoeffs {
  int K = 0;
  Vec a;
  Vec b;
};

Grid make_grid(int N);
GridSignal make_signal(const Grid& grid, Vec values);

/// ((2*pi/N) sum |v_j|^p)^{1/p}; p in (1, inf).
double discrete_norm(const GridSignal& s, double p);
/// Same quadrature, any p in [1, inf] (inf gives the max).
double discrete_norm_any(const Vec& values, double p);

/// Trapezoid-rule a_k = (1/pi) int s cos kt, b_k = (1/pi) int s sin kt.
FourierCoeffs fourier_coefficients(const GridSignal& s, int K);
/// Samples of sum_{k<=K} a_k cos kx + b_k sin kx.
GridSignal synthesize(const FourierCoeffs& c, const Grid& grid);
/// S_n: the first n harmonics only.
GridSignal partial_sum(const FourierCoeffs& c, int n, const Grid& grid);

FourierCoeffs apply_multiplier(const FourierCoeffs& c, const MultiplierSequence& lambda,
                               double beta);

/// sum_{k=1}^K lambda(k) cos(kx - beta*pi/2).
GridSignal kernel_signal(const MultiplierSequence& lambda, double beta, const Grid& grid,
                         int K);

/// (2*pi/N) sum_m kernel(x_j - y_m) phi(y_m).
GridSignal convolve(const GridSignal& kernel, const GridSignal& phi);

/// Smallest K with lambda(K) < 1e-14 lambda(1), capped at N/4.
int kernel_truncation(const MultiplierSequence& lambda, int N);

/// Diagonal action on the grid: harmonic k (1 <= k <= K) is multiplied by
/// m_k e^{-i*theta}; the mean and all harmonics above K are removed.
class SpectralMultiplier {
 public:
  SpectralMultiplier(int N, std::vector<double> m, double theta);
  /// lambda(k) for lo < k <= hi, zero elsewhere.
  static SpectralMultiplier band(int N, const MultiplierSequence& lambda, double beta, int lo,
                                 int hi);

  int N() const { return N_; }
  Vec apply(const Vec& values) const;
  Vec apply_adjoint(const Vec& values) const;
  double max_abs() const;

 private:
  Vec apply_phase(const Vec& values, double theta) const;
  int N_;
  std::vector<double> m_;
  double theta_;
};

namespace fft {
/// Unnormalized real-to-half-complex transform, X_k = sum_j x_j e^{-2 pi i jk/N}.
std::vector<std::complex<double>> forward(const Vec& x);
/// Inverse of forward without the 1/N factor.
Vec backward(const std::vector<std::complex<double>>& X, int N);
}  // namespace fft

}  // namespace nwidths
