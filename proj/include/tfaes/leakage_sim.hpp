#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tfaes/aes_core.hpp"
#include "tfaes/rand_sched.hpp"

// Simulated power traces under a Hamming-weight leakage model. One sample per
// modeled leak point of round 1 for one target byte.
//
// Unprotected trace layout (2 samples):
//   0: HW(pt ^ k)
//   1: HW(sbox(pt ^ k))
//
// Protected trace layout (7 samples), set i scheduled per block:
//   0: HW(pt ^ k)
//   1: HW(delta_i(pt ^ k))
//   2: HW(norm d)
//   3: HW(d^-1)
//   4: HW(inverse in field B)            (pre-final value)
//   5: HW(delta_inv_i applied to 4)      (pre-affine value)
//   6: final stage / output register. With decoys on, the register write is
//      masked by three concurrent delta_inv products and the sample is the
//      sum of their Hamming weights (real product + two decoys). With decoys
//      off nothing masks the write and the sample is HW of the stored S-box
//      output.
//
// Gaussian noise with standard deviation noise_sigma is added to every
// sample. With the algorithmic-noise flag, the summed Hamming weight of the
// other 15 first-round S-box outputs is added to every sample as well.

namespace tfaes {

enum class LeakMode : uint8_t { Unprotected = 0, Protected = 1 };

struct LeakConfig {
    LeakMode mode = LeakMode::Unprotected;
    bool decoys = false;
    double noise_sigma = 0.0;
    int target_byte = 0;
    bool algorithmic_noise = false;

    int samples_per_trace() const { return mode == LeakMode::Protected ? 7 : 2; }
    void validate() const;
};

struct Trace {
    Block plaintext{};
    Block ciphertext{};
    std::vector<float> samples;
};

struct TraceSet {
    LeakConfig config;
    uint32_t seed = 0;
    std::array<uint8_t, 16> key_fingerprint{};
    std::vector<Trace> traces;
};

// Ordered leak-point value lists (one list per sample) before noise.
std::vector<std::vector<uint8_t>> leak_point_values_unprotected(uint8_t pt_byte, uint8_t key_byte);
std::vector<std::vector<uint8_t>> leak_point_values_protected(uint8_t pt_byte, uint8_t key_byte,
                                                              const ParameterSet& set,
                                                              const ParameterSet* decoy1,
                                                              const ParameterSet* decoy2);

// n traces with uniformly random plaintexts; fully determined by
// (seed, key, cfg). The catalog is required in protected mode. The parallel
// variant fans out across traces and produces byte-identical output.
TraceSet generate_traces(size_t n, const Block& key, const LeakConfig& cfg,
                         const std::vector<ParameterSet>& catalog, uint32_t seed);
TraceSet generate_traces_serial(size_t n, const Block& key, const LeakConfig& cfg,
                                const std::vector<ParameterSet>& catalog, uint32_t seed);

// SHA-256 of the key, truncated to 16 bytes. The key itself is never stored.
std::array<uint8_t, 16> key_fingerprint(const Block& key);

// Binary little-endian trace file:
//   magic "SCTRACE1", u32 version=1, u32 trace_count, u32 samples_per_trace,
//   u8 mode, u8 decoys, f64 noise_sigma, u8 target_byte, 16-byte key
//   fingerprint, then per trace: 16-byte plaintext, 16-byte ciphertext,
//   f32 samples.
void write_trace_file(const TraceSet& ts, const std::string& path);
TraceSet read_trace_file(const std::string& path);

}  // namespace tfaes
