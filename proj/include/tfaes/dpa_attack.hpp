#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfaes/leakage_sim.hpp"

// First-order attacks against trace sets: Pearson-correlation CPA and
// distance-of-means DPA with mono-bit or Hamming-weight-threshold selection.
// Predictions depend only on plaintexts and the key guess; the true key is
// used exclusively by the evaluation metrics (rank, disclosure scan).

namespace tfaes {

struct PearsonResult {
    double value = 0.0;
    bool degenerate = false;  // a zero-variance input; value forced to 0
};

// Sample correlation with plain moment estimators:
//   C(T,P) = (E[T*P] - E[T]E[P]) / sqrt(Var(T) * Var(P)).
PearsonResult pearson(std::span<const double> t, std::span<const double> p);

enum class SelectionKind {
    MonoBit,      // D = bit b of the predicted S-box output
    HwThreshold,  // D = 1 iff HW(predicted S-box output) > 4
};

struct Selection {
    SelectionKind kind = SelectionKind::HwThreshold;
    int bit = 0;  // for MonoBit
};

struct GuessStat {
    double peak_statistic = 0.0;
    int peak_sample = 0;
    int rank = 0;         // 1-based
    bool flagged = false;  // degenerate variance / empty partition
};

struct AttackResult {
    std::vector<std::vector<double>> curves;  // 256 x samples_per_trace
    std::array<GuessStat, 256> stats{};
    std::array<uint8_t, 256> ranking{};  // guesses, best first; ties by guess value
    uint8_t best_guess = 0;
    int samples_per_trace = 0;
};

int guess_rank(const AttackResult& r, uint8_t guess);  // 1-based

// OpenMP kernels (parallel across the 256 guesses) and the plain serial
// reference implementations kept for testing and benchmarking.
AttackResult cpa_attack(const TraceSet& ts, int byte_index);
AttackResult cpa_attack_serial(const TraceSet& ts, int byte_index);
AttackResult dom_attack(const TraceSet& ts, int byte_index, const Selection& sel = {});
AttackResult dom_attack_serial(const TraceSet& ts, int byte_index, const Selection& sel = {});

enum class AttackMethod { Cpa, Dom };

struct MtdScanEntry {
    size_t prefix = 0;
    int rank = 0;
};

struct MtdResult {
    std::vector<MtdScanEntry> scan;
    std::optional<size_t> disclosed_at;  // smallest stable-first prefix
};

// Prefix scan in increments of `step`; disclosure is the smallest tested
// prefix at which the true byte ranks first and stays first at every larger
// tested prefix.
MtdResult measurements_to_disclosure(const TraceSet& ts, int byte_index, uint8_t true_key_byte,
                                     AttackMethod method, const Selection& sel, size_t step);

// CSV writers. Attack report: "guess,peak_statistic,peak_sample_index,rank".
// Curve dump: "guess,sample_index,statistic" for the top-n guesses.
// Disclosure scan: "prefix_size,rank_of_true_key".
void write_attack_report(const AttackResult& r, const std::string& path);
void write_curves_report(const AttackResult& r, int top_n, const std::string& path);
void write_mtd_report(const MtdResult& r, const std::string& path);

}  // namespace tfaes
