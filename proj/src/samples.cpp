#include "cqc/samples.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cqc/csv.hpp"
#include "cqc/error.hpp"
#include "cqc/physics.hpp"

namespace cqc {

namespace {

// Stream tags for the two marginals.
constexpr std::uint64_t kEtaStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

std::string hexfloat(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

struct CanonicalText {
    std::string operator()(const StochasticChannel& c) const {
        std::ostringstream os;
        os << "stochastic;eta.mu_ln=" << hexfloat(c.eta.mu_ln) << ";eta.sigma_ln=" << hexfloat(c.eta.sigma_ln)
           << ";nb.mu=" << hexfloat(c.nb.mu) << ";nb.sigma=" << hexfloat(c.nb.sigma)
           << ";nb.lower=" << hexfloat(c.nb.lower) << ";nb.upper=" << hexfloat(c.nb.upper);
        return os.str();
    }
    std::string operator()(const BenchmarkChannel& c) const {
        return "benchmark;eta0=" + hexfloat(c.eta0) + ";rate=" + hexfloat(c.rate);
    }
};

std::uint64_t fnv1a(const unsigned char* data, std::size_t len, std::uint64_t h) {
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

constexpr std::uint64_t kFnvBasis = 0xCBF29CE484222325ull;

void put_u32(unsigned char* p, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}
void put_u64(unsigned char* p, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}
std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{p[i]} << (8 * i);
    return v;
}
std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{p[i]} << (8 * i);
    return v;
}

std::vector<unsigned char> encode_doubles(const std::vector<double>& values) {
    std::vector<unsigned char> bytes(values.size() * 8);
    for (std::size_t i = 0; i < values.size(); ++i) put_u64(&bytes[8 * i], std::bit_cast<std::uint64_t>(values[i]));
    return bytes;
}

std::vector<double> decode_doubles(const unsigned char* p, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = std::bit_cast<double>(get_u64(p + 8 * i));
    return out;
}

}  // namespace

void BenchmarkChannel::validate() const {
    detail::require(eta0 > 0.0 && eta0 < 1.0, "benchmark: eta0 must lie in (0,1)");
    detail::require(std::isfinite(rate) && rate > 0.0, "benchmark: rate must be > 0");
}

void validate(const ChannelSpec& spec) {
    std::visit(
        [](const auto& c) {
            if constexpr (std::is_same_v<std::decay_t<decltype(c)>, StochasticChannel>) {
                c.eta.validate();
                c.nb.validate();
            } else {
                c.validate();
            }
        },
        spec);
}

Digest channel_digest(const ChannelSpec& spec) {
    const std::string text = std::visit(CanonicalText{}, spec);
    Digest d{};
    SHA256(reinterpret_cast<const unsigned char*>(text.data()), text.size(), d.data());
    return d;
}

std::string to_hex(const Digest& d) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(64);
    for (auto b : d) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xF]);
    }
    return s;
}

ChannelDraws draw_channel_realizations(const ChannelSpec& spec, std::size_t K, std::uint64_t seed,
                                       unsigned threads) {
    validate(spec);
    ChannelDraws draws;
    if (const auto* s = std::get_if<StochasticChannel>(&spec)) {
        draws.eta = chunked_sample(K, seed, kEtaStream, threads, [&](SeededStream& st, std::size_t n) {
            return sample_truncated_lognormal(s->eta, n, st);
        });
        draws.nb = chunked_sample(K, seed, kNoiseStream, threads, [&](SeededStream& st, std::size_t n) {
            return sample_truncated_gaussian(s->nb, n, st);
        });
    } else {
        const auto& b = std::get<BenchmarkChannel>(spec);
        const ExponentialSpec noise{b.rate};
        draws.eta.assign(K, b.eta0);
        draws.nb = chunked_sample(K, seed, kNoiseStream, threads, [&](SeededStream& st, std::size_t n) {
            return sample_exponential(noise, n, st);
        });
    }
    return draws;
}

SampleSet::SampleSet(std::vector<double> ccov, std::vector<double> rach, std::uint64_t seed, Digest digest)
    : ccov_(std::move(ccov)), rach_(std::move(rach)), seed_(seed), digest_(digest) {
    detail::require(!ccov_.empty(), "sample set: K must be >= 1");
    detail::require(ccov_.size() == rach_.size(), "sample set: array lengths differ");
    detail::require(std::is_sorted(ccov_.begin(), ccov_.end()), "sample set: c_cov not sorted");
    detail::require(std::is_sorted(rach_.begin(), rach_.end()), "sample set: rates not sorted");
    detail::require(ccov_.front() >= 0.0, "sample set: negative c_cov");
    detail::require(rach_.front() >= 0.0 && rach_.back() <= 1.0, "sample set: rate outside [0,1]");
}

SampleSet generate_sample_set(const ChannelSpec& spec, std::size_t K, std::uint64_t seed, unsigned threads) {
    detail::require(K >= 1, "generate_sample_set: K must be >= 1");
    ChannelDraws draws = draw_channel_realizations(spec, K, seed, threads);
    std::vector<double> ccov(K);
    std::vector<double> rach(K);
    const std::size_t chunks = (K + kChunkSize - 1) / kChunkSize;
    detail::parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t end = std::min(K, (c + 1) * kChunkSize);
        for (std::size_t i = c * kChunkSize; i < end; ++i) {
            const ChannelRealization r{draws.eta[i], draws.nb[i]};
            ccov[i] = covertness_constant(r);
            rach[i] = achievable_rate(r);
        }
    });
    std::sort(ccov.begin(), ccov.end());
    std::sort(rach.begin(), rach.end());
    return SampleSet(std::move(ccov), std::move(rach), seed, channel_digest(spec));
}

void save_sample_set(const SampleSet& s, const std::filesystem::path& path) {
    const auto c = encode_doubles(s.ccov());
    const auto r = encode_doubles(s.rach());
    std::uint64_t checksum = fnv1a(c.data(), c.size(), kFnvBasis);
    checksum = fnv1a(r.data(), r.size(), checksum);

    unsigned char header[kCacheHeaderSize] = {'C', 'Q', 'C', 'S'};
    put_u32(header + 4, kCacheVersion);
    put_u64(header + 8, s.size());
    put_u64(header + 16, s.seed());
    std::copy(s.digest().begin(), s.digest().end(), header + 24);
    put_u64(header + 56, checksum);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(header), sizeof header);
    out.write(reinterpret_cast<const char*>(c.data()), static_cast<std::streamsize>(c.size()));
    out.write(reinterpret_cast<const char*>(r.data()), static_cast<std::streamsize>(r.size()));
    if (!out) throw CacheError("write failed for '" + path.string() + "'");
}

SampleSet load_sample_set(const std::filesystem::path& path, std::optional<Digest> expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("cannot open '" + path.string() + "'");
    const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};

    if (bytes.size() >= 4 && !std::equal(bytes.begin(), bytes.begin() + 4, "CQCS")) {
        throw CacheFormatError("bad magic bytes in '" + path.string() + "'");
    }
    if (bytes.size() < kCacheHeaderSize) throw CacheTruncatedError("header truncated in '" + path.string() + "'");

    const std::uint32_t version = get_u32(&bytes[4]);
    if (version != kCacheVersion) {
        throw CacheVersionError("unsupported cache version " + std::to_string(version));
    }
    const std::uint64_t K = get_u64(&bytes[8]);
    const std::uint64_t seed = get_u64(&bytes[16]);
    Digest digest{};
    std::copy(bytes.begin() + 24, bytes.begin() + 56, digest.begin());
    const std::uint64_t checksum = get_u64(&bytes[56]);

    if (K == 0) throw CacheFormatError("cache declares K = 0");
    const std::size_t payload = bytes.size() - kCacheHeaderSize;
    if (K > payload / 16) {
        throw CacheTruncatedError("payload truncated: expected " + std::to_string(16 * K) + " bytes, found " +
                                  std::to_string(payload));
    }
    if (payload != 16 * K) throw CacheFormatError("trailing bytes after payload");

    const unsigned char* p = bytes.data() + kCacheHeaderSize;
    if (fnv1a(p, 16 * K, kFnvBasis) != checksum) throw CacheIntegrityError("payload checksum mismatch");
    if (expected && *expected != digest) throw CacheIntegrityError("channel digest mismatch");

    auto ccov = decode_doubles(p, K);
    auto rach = decode_doubles(p + 8 * K, K);
    try {
        return SampleSet(std::move(ccov), std::move(rach), seed, digest);
    } catch (const ParameterError& e) {
        throw CacheFormatError(std::string("invalid cached arrays: ") + e.what());
    }
}

void write_sample_csv(const SampleSet& s, std::ostream& out) {
    csv::Writer w(out);
    w.row({"index", "c_cov", "r_ach"});
    for (std::size_t i = 0; i < s.size(); ++i) {
        w.row({csv::format(std::uint64_t{i}), csv::format(s.ccov()[i]), csv::format(s.rach()[i])});
    }
}

}  // namespace cqc
