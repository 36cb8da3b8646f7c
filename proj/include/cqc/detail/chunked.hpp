#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace cqc {

namespace detail {

/// Runs body(i) for i in [0, count) on up to `threads` workers.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    threads = std::max(1u, threads);
    if (threads == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) body(i);
    };
    std::vector<std::jthread> pool;
    const auto n = std::min<std::size_t>(threads, count);
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
}

}  // namespace detail

template <typename Sampler>
std::vector<double> chunked_sample(std::size_t count, std::uint64_t seed, std::uint64_t tag,
                                   unsigned threads, Sampler&& sampler) {
    std::vector<double> out(count);
    const std::size_t chunks = (count + kChunkSize - 1) / kChunkSize;
    detail::parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t begin = c * kChunkSize;
        const std::size_t len = std::min(kChunkSize, count - begin);
        auto stream = SeededStream::derive(seed, tag, c);
        const std::vector<double> part = sampler(stream, len);
        std::copy(part.begin(), part.end(), out.begin() + static_cast<std::ptrdiff_t>(begin));
    });
    return out;
}

}  // namespace cqc
