#pragma once

#include <cstddef>

namespace attnsphere::detail {

/// For every token i, writes sum_j softmax_j(beta <x_i, B x_j>) x_j into
/// means[i * d .. i * d + d). `bx_major` holds B x_j coordinate-major
/// (entry k of token j at k * n + j). Compiled with relaxed floating-point
/// rules so the exponentials vectorize; inputs must be finite.
void attention_means(const double* coords, const double* bx_major, std::size_t n, std::size_t d, double beta,
                     double* means);

}  // namespace attnsphere::detail
