// Independent reference computations for the unit and acceptance tests.
// Everything here is brute force in long double; none of it calls into the
// library under test.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;

// sum_{k=first}^{last} f(k), smallest terms first
template <class F>
long double brute_sum(F f, u64 first, u64 last) {
  long double acc = 0.0L;
  for (u64 k = last; k >= first; --k) {
    acc += f(k);
    if (k == first) break;
  }
  return acc;
}

// terms in double, accumulation in long double
inline long double power_sum(long double p, u64 first, u64 last) {
  const double pd = static_cast<double>(p);
  return brute_sum([pd](u64 k) { return static_cast<long double>(std::pow(static_cast<double>(k), -pd)); },
                   first, last);
}

// sum_{k>m} k^{-p}: direct to N, midpoint integral beyond
inline long double power_tail(long double p, u64 m, u64 N = 10'000'000) {
  long double acc = 0.0L;
  if (m < N) acc = power_sum(p, m + 1, N);
  const long double from = static_cast<long double>(std::max(m, N)) + 0.5L;
  return acc + std::pow(from, 1.0L - p) / (p - 1.0L);
}

inline u64 block_of(u64 k) {
  u64 j = 0;
  while ((k >> 1) >= (u64{1} << j)) ++j;
  return j;
}

// theta_k = 2^{-js} k^{-gamma}, k in [2^j, 2^{j+1})
inline long double dyadic_coefficient(long double s, long double gamma, u64 k) {
  const long double j = static_cast<long double>(block_of(k));
  return std::pow(2.0L, -j * s) * std::pow(static_cast<long double>(k), -gamma);
}

// sum_{k>m} k^{-extra} theta_k^2 for the dyadic family: direct to N block by
// block, then midpoint integrals
inline long double dyadic_tail(long double s, long double gamma, long double extra, u64 m,
                               u64 N = 10'000'000) {
  const long double q = 2.0L * gamma + extra;
  long double acc = 0.0L;
  if (m < N) {
    // blocks from the far end so small terms go first
    for (u64 j = block_of(N);; --j) {
      const u64 lo = std::max<u64>(u64{1} << j, m + 1);
      const u64 hi = std::min<u64>((u64{1} << (j + 1)) - 1, N);
      if (lo <= hi) acc += std::pow(2.0L, -2.0L * j * s) * power_sum(q, lo, hi);
      if (j == 0 || (u64{1} << j) <= m + 1) break;
    }
  }
  const u64 start = std::max(m, N);
  auto integral = [q](long double a, long double b) {
    if (std::fabs(q - 1.0L) < 1e-15L) return std::log(b / a);
    return (std::pow(a, 1.0L - q) - std::pow(b, 1.0L - q)) / (q - 1.0L);
  };
  u64 j = block_of(start + 1);
  long double lo = static_cast<long double>(start) + 0.5L;
  for (int guard = 0; guard < 2000; ++guard, ++j) {
    const long double hi = std::ldexp(1.0L, static_cast<int>(j) + 1) - 0.5L;
    const long double piece = std::pow(2.0L, -2.0L * j * s) * integral(lo, hi);
    acc += piece;
    if (piece < 1e-22L * acc) break;
    lo = hi;
  }
  return acc;
}

// textbook quadratic formula for beta C^2 - (2 beta C1 + 4) C + (beta C1^2 - 2) = 0
inline long double cmax_root(long double c1, long double beta) {
  const long double a = beta;
  const long double b = -(2.0L * beta * c1 + 4.0L);
  const long double c = beta * c1 * c1 - 2.0L;
  return (-b + std::sqrt(b * b - 4.0L * a * c)) / (2.0L * a);
}

inline long double cmin_direct(long double c1, long double beta) {
  const long double l = -std::log(1.0L - beta);
  return std::sqrt(std::sqrt(-2.0L * std::log(1.0L - beta) + (c1 - 4.0L * std::sqrt(l))) -
                   std::sqrt(-2.0L * std::log(1.0L - beta)));
}

inline long double inv4_prefix(long double t, u64 D) {
  return brute_sum([t](u64 k) { return std::pow(static_cast<long double>(k), 4.0L * t); }, 1, D);
}

}  // namespace oracle
