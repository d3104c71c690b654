#include "tfaes/leakage_sim.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

#include <openssl/evp.h>

namespace tfaes {

void LeakConfig::validate() const {
    if (noise_sigma < 0) throw std::invalid_argument("noise_sigma must be >= 0");
    if (target_byte < 0 || target_byte > 15) throw std::invalid_argument("target_byte out of range");
}

namespace {

inline int hw(uint8_t v) { return std::popcount(static_cast<unsigned>(v)); }

uint64_t splitmix64(uint64_t& s) {
    s += 0x9E3779B97F4A7C15ull;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Per-trace substream seeds: trace index and purpose tag mixed into the set
// seed so parallel generation can reproduce the serial stream exactly.
uint64_t substream_seed(uint32_t seed, uint64_t index, uint64_t tag) {
    uint64_t s = (static_cast<uint64_t>(seed) << 20) ^ (index * 0xD1B54A32D192ED03ull) ^
                 (tag * 0x8CB92BA72F3D8DD7ull);
    return splitmix64(s);
}

Block random_plaintext(uint32_t seed, uint64_t index) {
    std::mt19937_64 eng(substream_seed(seed, index, 0));
    Block pt;
    for (int half = 0; half < 2; ++half) {
        uint64_t v = eng();
        for (int j = 0; j < 8; ++j) pt[8 * half + j] = static_cast<uint8_t>(v >> (8 * j));
    }
    return pt;
}

int other_bytes_activity(const Block& pt, const Block& key, int target_byte) {
    int acc = 0;
    for (int j = 0; j < 16; ++j) {
        if (j == target_byte) continue;
        acc += hw(sbox_lut(static_cast<uint8_t>(pt[j] ^ key[j])));
    }
    return acc;
}

Trace make_trace(uint64_t index, const Block& key, const LeakConfig& cfg,
                 const std::vector<ParameterSet>& catalog, const std::vector<BlockSchedule>& sched,
                 const RoundKeySchedule& rk, uint32_t seed) {
    Trace tr;
    tr.plaintext = random_plaintext(seed, index);

    std::vector<std::vector<uint8_t>> points;
    const uint8_t ptb = tr.plaintext[cfg.target_byte];
    const uint8_t kb = key[cfg.target_byte];
    if (cfg.mode == LeakMode::Unprotected) {
        tr.ciphertext = encrypt_block(tr.plaintext, rk);
        points = leak_point_values_unprotected(ptb, kb);
    } else {
        const BlockSchedule& bs = sched[index];
        const ParameterSet& set = catalog[bs.set_index];
        tr.ciphertext = encrypt_block(tr.plaintext, rk, {SboxBackend::Kind::Composite, &set});
        points = leak_point_values_protected(ptb, kb, set,
                                             bs.has_decoys ? &catalog[bs.decoy1] : nullptr,
                                             bs.has_decoys ? &catalog[bs.decoy2] : nullptr);
    }

    const int algo = cfg.algorithmic_noise ? other_bytes_activity(tr.plaintext, key, cfg.target_byte) : 0;

    std::mt19937_64 noise_eng(substream_seed(seed, index, 1));
    std::normal_distribution<double> gauss(0.0, cfg.noise_sigma > 0 ? cfg.noise_sigma : 1.0);

    tr.samples.resize(points.size());
    for (size_t t = 0; t < points.size(); ++t) {
        double v = algo;
        for (uint8_t byte : points[t]) v += hw(byte);
        if (cfg.noise_sigma > 0) v += gauss(noise_eng);
        tr.samples[t] = static_cast<float>(v);
    }
    return tr;
}

TraceSet generate_impl(size_t n, const Block& key, const LeakConfig& cfg,
                       const std::vector<ParameterSet>& catalog, uint32_t seed, bool parallel) {
    cfg.validate();
    if (n == 0) throw std::invalid_argument("trace count must be >= 1");

    TraceSet ts;
    ts.config = cfg;
    ts.seed = seed;
    ts.key_fingerprint = key_fingerprint(key);
    ts.traces.resize(n);

    const RoundKeySchedule rk = key_expand(key);

    std::vector<BlockSchedule> sched;
    if (cfg.mode == LeakMode::Protected) {
        RandomizationContext ctx(seed, catalog, cfg.decoys);
        sched = make_block_schedule(ctx, n);
    }

    const long count = static_cast<long>(n);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < count; ++i)
            ts.traces[i] = make_trace(static_cast<uint64_t>(i), key, cfg, catalog, sched, rk, seed);
    } else {
        for (long i = 0; i < count; ++i)
            ts.traces[i] = make_trace(static_cast<uint64_t>(i), key, cfg, catalog, sched, rk, seed);
    }
    return ts;
}

}  // namespace

std::vector<std::vector<uint8_t>> leak_point_values_unprotected(uint8_t pt_byte, uint8_t key_byte) {
    const uint8_t x = static_cast<uint8_t>(pt_byte ^ key_byte);
    return {{x}, {sbox_lut(x)}};
}

std::vector<std::vector<uint8_t>> leak_point_values_protected(uint8_t pt_byte, uint8_t key_byte,
                                                              const ParameterSet& set,
                                                              const ParameterSet* decoy1,
                                                              const ParameterSet* decoy2) {
    const uint8_t x = static_cast<uint8_t>(pt_byte ^ key_byte);
    const SboxIntermediates si = sbox_composite_intermediates(x, set);
    std::vector<std::vector<uint8_t>> points = {
        {x}, {si.mapped}, {si.norm}, {si.norm_inv}, {si.inv_tower}, {si.pre_affine}};
    if (decoy1 && decoy2) {
        points.push_back({si.pre_affine, decoy1->delta_inv.apply(si.inv_tower),
                          decoy2->delta_inv.apply(si.inv_tower)});
    } else {
        points.push_back({si.output});
    }
    return points;
}

TraceSet generate_traces(size_t n, const Block& key, const LeakConfig& cfg,
                         const std::vector<ParameterSet>& catalog, uint32_t seed) {
    return generate_impl(n, key, cfg, catalog, seed, true);
}

TraceSet generate_traces_serial(size_t n, const Block& key, const LeakConfig& cfg,
                                const std::vector<ParameterSet>& catalog, uint32_t seed) {
    return generate_impl(n, key, cfg, catalog, seed, false);
}

std::array<uint8_t, 16> key_fingerprint(const Block& key) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(key.data(), key.size(), md, &len, EVP_sha256(), nullptr) != 1 || len < 16)
        throw std::runtime_error("SHA-256 failed");
    std::array<uint8_t, 16> fp{};
    std::memcpy(fp.data(), md, 16);
    return fp;
}

// ---------------------------------------------------------------------------
// Trace file
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'S', 'C', 'T', 'R', 'A', 'C', 'E', '1'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& os, uint32_t v) {
    const uint8_t b[4] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8),
                          static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::istream& is) {
    uint8_t b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& os, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) os.put(static_cast<char>(bits >> (8 * i)));
}

double get_f64(std::istream& is) {
    uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        const int c = is.get();
        bits |= static_cast<uint64_t>(static_cast<uint8_t>(c)) << (8 * i);
    }
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

void put_f32(std::ostream& os, float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(os, bits);
}

float get_f32(std::istream& is) {
    const uint32_t bits = get_u32(is);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

}  // namespace

void write_trace_file(const TraceSet& ts, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);

    os.write(kMagic, 8);
    put_u32(os, kVersion);
    put_u32(os, static_cast<uint32_t>(ts.traces.size()));
    put_u32(os, static_cast<uint32_t>(ts.config.samples_per_trace()));
    os.put(static_cast<char>(ts.config.mode));
    os.put(ts.config.decoys ? 1 : 0);
    put_f64(os, ts.config.noise_sigma);
    os.put(static_cast<char>(ts.config.target_byte));
    os.write(reinterpret_cast<const char*>(ts.key_fingerprint.data()), 16);

    for (const auto& tr : ts.traces) {
        os.write(reinterpret_cast<const char*>(tr.plaintext.data()), 16);
        os.write(reinterpret_cast<const char*>(tr.ciphertext.data()), 16);
        for (float s : tr.samples) put_f32(os, s);
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

TraceSet read_trace_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open trace file: " + path);

    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("not a trace file: " + path);
    if (get_u32(is) != kVersion) throw std::runtime_error("unsupported trace file version");

    const uint32_t count = get_u32(is);
    const uint32_t samples = get_u32(is);

    TraceSet ts;
    ts.config.mode = static_cast<LeakMode>(is.get());
    ts.config.decoys = is.get() != 0;
    ts.config.noise_sigma = get_f64(is);
    ts.config.target_byte = is.get();
    is.read(reinterpret_cast<char*>(ts.key_fingerprint.data()), 16);

    if (static_cast<uint32_t>(ts.config.samples_per_trace()) != samples)
        throw std::runtime_error("trace file sample count does not match its mode");

    ts.traces.resize(count);
    for (auto& tr : ts.traces) {
        is.read(reinterpret_cast<char*>(tr.plaintext.data()), 16);
        is.read(reinterpret_cast<char*>(tr.ciphertext.data()), 16);
        tr.samples.resize(samples);
        for (auto& s : tr.samples) s = get_f32(is);
    }
    if (!is) throw std::runtime_error("truncated trace file: " + path);
    return ts;
}

}  // namespace tfaes
