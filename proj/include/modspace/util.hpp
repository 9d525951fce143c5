#ifndef MODSPACE_UTIL_HPP
#define MODSPACE_UTIL_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace modspace {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

inline cplx unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Number of worker threads: MODSPACE_WORKERS env var, else hardware count.
int worker_count();

// Chunked parallel loop over [0, n). Deterministic: each index owns its work;
// callers must not share accumulators across indices. Nested calls run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Pairwise (cascade) summation, deterministic for a fixed element order.
double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

// FNV-1a over a byte string; used to stamp reports with their config.
std::uint64_t fnv1a(const std::string& s);
std::string hash_hex(std::uint64_t h);

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
std::size_t next_pow2(std::size_t n);

// Fixed-format floating point used by all report writers ("%.17g" round-trips).
std::string fmt_double(double v);

} // namespace modspace

#endif
