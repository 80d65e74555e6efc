#include "livsic/util.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

namespace livsic::util {

namespace {

std::atomic<int> g_threads{1};

std::mutex& log_mutex() {
    static std::mutex m;
    return m;
}

LogLevel read_env_level() {
    const char* v = std::getenv("LIVSIC_LOG");
    if (v == nullptr) return LogLevel::info;
    const std::string s(v);
    if (s == "quiet") return LogLevel::quiet;
    if (s == "debug") return LogLevel::debug;
    return LogLevel::info;
}

} // namespace

void set_thread_count(int threads) {
    if (threads <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = hw == 0 ? 1 : static_cast<int>(hw);
    }
    g_threads.store(threads);
}

int thread_count() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    const int workers = thread_count();
    if (workers <= 1 || n < 2) {
        body(0, n);
        return;
    }
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::thread> pool;
    pool.reserve(t);
    const std::size_t chunk = (n + t - 1) / t;
    for (std::size_t w = 0; w < t; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& th : pool) th.join();
}

LogLevel log_level() {
    static const LogLevel level = read_env_level();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::info) {
        std::lock_guard<std::mutex> lock(log_mutex());
        std::cerr << "[livsic] " << msg << "\n";
    }
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::debug) {
        std::lock_guard<std::mutex> lock(log_mutex());
        std::cerr << "[livsic:debug] " << msg << "\n";
    }
}

} // namespace livsic::util
