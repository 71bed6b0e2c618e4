#include "attention_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace attnsphere::detail {

void attention_means(const double* coords, const double* bx_major, std::size_t n, std::size_t d, double beta,
                     double* means) {
  std::vector<double> weights(n);
  double* __restrict w = weights.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = coords + i * d;
    std::fill(w, w + n, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      const double xk = beta * x[k];
      const double* __restrict col = bx_major + k * n;
      for (std::size_t j = 0; j < n; ++j) w[j] += xk * col[j];
    }
    double top = w[0];
    for (std::size_t j = 1; j < n; ++j) top = std::max(top, w[j]);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      w[j] = std::exp(w[j] - top);
      total += w[j];
    }
    double* __restrict m = means + i * d;
    std::fill(m, m + d, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double wj = w[j];
      const double* y = coords + j * d;
      for (std::size_t k = 0; k < d; ++k) m[k] += wj * y[k];
    }
    const double inv = 1.0 / total;
    for (std::size_t k = 0; k < d; ++k) m[k] *= inv;
  }
}

}  // namespace attnsphere::detail
