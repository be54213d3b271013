// Deterministic numeric helpers shared across modules.
#ifndef NLSFV_NUMERIC_HPP
#define NLSFV_NUMERIC_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace nlsfv {

using cdouble = std::complex<double>;

// Pairwise (tree) summation: fixed evaluation order independent of any
// threading, and better rounding behaviour than a running sum.
template <class T>
T pairwise_sum_range(const T* data, std::size_t n) {
  if (n <= 8) {
    T acc{};
    for (std::size_t i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_range(data, half) + pairwise_sum_range(data + half, n - half);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum_range(v.data(), v.size());
}

// Uniform double in [0, 1) with exactly 53 random bits; avoids the
// implementation-defined std::uniform_real_distribution.
inline double rand01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace nlsfv

#endif
