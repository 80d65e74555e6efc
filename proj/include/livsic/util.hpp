#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>

namespace livsic::util {

/// Deterministic RNG. The raw mt19937_64 stream is standard-specified, and the
/// uniform draw below avoids std::uniform_real_distribution (whose output is
/// implementation-defined), so identical seeds give identical numbers on every
/// platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] (inclusive).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(gen_() % span);
    }

    std::complex<double> unit_complex() {
        const double theta = 2.0 * 3.14159265358979323846 * uniform();
        return {std::cos(theta), std::sin(theta)};
    }

private:
    std::mt19937_64 gen_;
};

/// Worker count used by parallel_for. 0 means hardware concurrency.
void set_thread_count(int threads);
int thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Results must not
/// depend on the chunking; callers only use it for independent per-index work
/// and order-independent reductions.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

/// Level from LIVSIC_LOG (quiet|info|debug), read once. Default: info.
LogLevel log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

} // namespace livsic::util
