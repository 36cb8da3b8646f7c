#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace cqc {

/// Lognormal law for the transmittance, truncated to (0,1].
struct TruncatedLognormalSpec {
    double mu_ln = 0.0;
    double sigma_ln = 1.0;

    void validate() const;
};

/// Normal law truncated to [lower, upper].
struct TruncatedGaussianSpec {
    double mu = 0.0;
    double sigma = 1.0;
    double lower = 0.0;
    double upper = 1.0;

    void validate() const;
};

struct ExponentialSpec {
    double rate = 1.0;

    void validate() const;
};

/// splitmix64 finalizer; used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

/**
 * Reproducible source of uniform variates on the open interval (0,1).
 *
 * Backed by std::mt19937_64. Each call to uniform() consumes exactly one
 * 64-bit word, so two streams built from the same seed stay aligned draw for
 * draw.
 */
class SeededStream {
public:
    explicit SeededStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    /// Stream for chunk `chunk` of logical stream `tag` under a master seed.
    static SeededStream derive(std::uint64_t seed, std::uint64_t tag, std::uint64_t chunk);

    double uniform();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t position() const { return position_; }

private:
    std::uint64_t seed_;
    std::uint64_t position_ = 0;
    std::mt19937_64 engine_;
};

// Standard normal helpers.
double normal_cdf(double x);
/// Upper tail 1 - normal_cdf(x), accurate for large positive x.
double normal_sf(double x);
/// Inverse of normal_cdf on (0,1).
double normal_quantile(double p);

std::vector<double> sample_truncated_lognormal(const TruncatedLognormalSpec& spec, std::size_t count,
                                               SeededStream& stream);
std::vector<double> sample_truncated_gaussian(const TruncatedGaussianSpec& spec, std::size_t count,
                                              SeededStream& stream);
std::vector<double> sample_exponential(const ExponentialSpec& spec, std::size_t count,
                                       SeededStream& stream);

// Analytic CDFs of the truncated laws (used by goodness-of-fit checks).
double truncated_lognormal_cdf(const TruncatedLognormalSpec& spec, double x);
double truncated_gaussian_cdf(const TruncatedGaussianSpec& spec, double x);
double exponential_cdf(const ExponentialSpec& spec, double x);

/// Number of draws per chunk when a stream is split for parallel generation.
inline constexpr std::size_t kChunkSize = 1u << 16;

/**
 * Fills `count` values by splitting [0,count) into kChunkSize chunks. Chunk c
 * is produced by `fill(stream, offset, length)` with
 * stream = SeededStream::derive(seed, tag, c). The result does not depend on
 * `threads`.
 */
template <typename Sampler>
std::vector<double> chunked_sample(std::size_t count, std::uint64_t seed, std::uint64_t tag,
                                   unsigned threads, Sampler&& sampler);

}  // namespace cqc

#include "cqc/detail/chunked.hpp"
