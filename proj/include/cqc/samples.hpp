#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cqc/distributions.hpp"

namespace cqc {

/// Independent truncated-lognormal transmittance and truncated-Gaussian noise.
struct StochasticChannel {
    TruncatedLognormalSpec eta;
    TruncatedGaussianSpec nb;
};

/// Fixed transmittance eta0 with exponentially distributed noise of rate `rate`.
struct BenchmarkChannel {
    double eta0 = 0.9;
    double rate = 10.0;

    void validate() const;
};

using ChannelSpec = std::variant<StochasticChannel, BenchmarkChannel>;
using Digest = std::array<std::uint8_t, 32>;

void validate(const ChannelSpec& spec);

/// SHA-256 of a canonical, bit-exact rendering of the channel law.
Digest channel_digest(const ChannelSpec& spec);
std::string to_hex(const Digest& d);

/// Unsorted per-frame draws, index-aligned.
struct ChannelDraws {
    std::vector<double> eta;
    std::vector<double> nb;
};

ChannelDraws draw_channel_realizations(const ChannelSpec& spec, std::size_t K, std::uint64_t seed,
                                       unsigned threads = 1);

/**
 * Cached Monte Carlo reduction of a channel law: the covertness constants
 * and achievable rates of K frame draws, each sorted ascending.
 *
 * The two arrays are sorted independently. Every consumer only needs the
 * marginal distributions, never the pairing.
 */
class SampleSet {
public:
    SampleSet(std::vector<double> ccov, std::vector<double> rach, std::uint64_t seed, Digest digest);

    const std::vector<double>& ccov() const { return ccov_; }
    const std::vector<double>& rach() const { return rach_; }
    std::size_t size() const { return ccov_.size(); }
    std::uint64_t seed() const { return seed_; }
    const Digest& digest() const { return digest_; }

    friend bool operator==(const SampleSet&, const SampleSet&) = default;

private:
    std::vector<double> ccov_;
    std::vector<double> rach_;
    std::uint64_t seed_;
    Digest digest_;
};

SampleSet generate_sample_set(const ChannelSpec& spec, std::size_t K, std::uint64_t seed,
                              unsigned threads = 1);

inline constexpr std::uint32_t kCacheVersion = 1;
inline constexpr std::size_t kCacheHeaderSize = 64;

/**
 * Binary cache layout (all little-endian):
 *   0  "CQCS"
 *   4  u32 format version
 *   8  u64 K
 *  16  u64 seed
 *  24  32-byte channel digest
 *  56  u64 FNV-1a checksum of the payload
 *  64  K binary64 c_cov values, then K binary64 rates
 */
void save_sample_set(const SampleSet& s, const std::filesystem::path& path);

/// Throws CacheIntegrityError if `expected` is given and differs from the stored digest.
SampleSet load_sample_set(const std::filesystem::path& path,
                          std::optional<Digest> expected = std::nullopt);

/// Columns: index, c_cov, r_ach (both sorted).
void write_sample_csv(const SampleSet& s, std::ostream& out);

}  // namespace cqc
