#include "tfaes/dpa_attack.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace tfaes {

namespace {

inline int hw(uint8_t v) { return std::popcount(static_cast<unsigned>(v)); }

double hw_prediction(uint8_t pt_value, uint8_t guess) {
    return hw(sbox_lut(static_cast<uint8_t>(pt_value ^ guess)));
}

int selection_bit(uint8_t pt_value, uint8_t guess, const Selection& sel) {
    const uint8_t out = sbox_lut(static_cast<uint8_t>(pt_value ^ guess));
    if (sel.kind == SelectionKind::MonoBit) {
        if (sel.bit < 0 || sel.bit > 7) throw std::invalid_argument("selection bit out of range");
        return (out >> sel.bit) & 1;
    }
    return hw(out) > 4 ? 1 : 0;
}

void finalize(AttackResult& r) {
    for (int g = 0; g < 256; ++g) {
        double peak = 0.0;
        int peak_sample = 0;
        for (int s = 0; s < r.samples_per_trace; ++s) {
            const double a = std::fabs(r.curves[g][s]);
            if (a > peak) {
                peak = a;
                peak_sample = s;
            }
        }
        r.stats[g].peak_statistic = peak;
        r.stats[g].peak_sample = peak_sample;
    }
    std::iota(r.ranking.begin(), r.ranking.end(), 0);
    std::stable_sort(r.ranking.begin(), r.ranking.end(), [&](uint8_t a, uint8_t b) {
        if (r.stats[a].peak_statistic != r.stats[b].peak_statistic)
            return r.stats[a].peak_statistic > r.stats[b].peak_statistic;
        return a < b;
    });
    for (int pos = 0; pos < 256; ++pos) r.stats[r.ranking[pos]].rank = pos + 1;
    r.best_guess = r.ranking[0];
}

// Per-plaintext-value conditional sums; predictions only depend on the pt
// byte value, so all 256 guesses reuse them.
struct ColumnSums {
    size_t n = 0;
    int samples = 0;
    std::array<size_t, 256> count{};
    std::vector<std::array<double, 256>> value_sum;  // [sample][pt value]
    std::vector<double> total_sum;                   // [sample]
    std::vector<double> total_sq_sum;                // [sample]

    explicit ColumnSums(int samples_per_trace)
        : samples(samples_per_trace),
          value_sum(samples_per_trace),
          total_sum(samples_per_trace, 0.0),
          total_sq_sum(samples_per_trace, 0.0) {
        for (auto& a : value_sum) a.fill(0.0);
    }

    void add(const Trace& tr, int byte_index) {
        const uint8_t v = tr.plaintext[byte_index];
        ++count[v];
        ++n;
        for (int s = 0; s < samples; ++s) {
            const double x = tr.samples[s];
            value_sum[s][v] += x;
            total_sum[s] += x;
            total_sq_sum[s] += x * x;
        }
    }
};

void cpa_guess_curve(const ColumnSums& cs, uint8_t guess, std::vector<double>& curve,
                     GuessStat& stat) {
    const double n = static_cast<double>(cs.n);
    double sum_p = 0.0, sum_p2 = 0.0;
    std::array<double, 256> pred{};
    for (int v = 0; v < 256; ++v) {
        pred[v] = hw_prediction(static_cast<uint8_t>(v), guess);
        sum_p += pred[v] * static_cast<double>(cs.count[v]);
        sum_p2 += pred[v] * pred[v] * static_cast<double>(cs.count[v]);
    }
    const double var_p = n * sum_p2 - sum_p * sum_p;
    for (int s = 0; s < cs.samples; ++s) {
        double sum_tp = 0.0;
        for (int v = 0; v < 256; ++v) sum_tp += pred[v] * cs.value_sum[s][v];
        const double var_t = n * cs.total_sq_sum[s] - cs.total_sum[s] * cs.total_sum[s];
        const double denom = var_p * var_t;
        if (denom <= 0.0) {
            curve[s] = 0.0;
            stat.flagged = true;
            continue;
        }
        curve[s] = (n * sum_tp - sum_p * cs.total_sum[s]) / std::sqrt(denom);
    }
}

void dom_guess_curve(const ColumnSums& cs, uint8_t guess, const Selection& sel,
                     std::vector<double>& curve, GuessStat& stat) {
    size_t n1 = 0;
    std::array<int, 256> d{};
    for (int v = 0; v < 256; ++v) {
        d[v] = selection_bit(static_cast<uint8_t>(v), guess, sel);
        if (d[v]) n1 += cs.count[v];
    }
    const size_t n0 = cs.n - n1;
    if (n1 == 0 || n0 == 0) {
        std::fill(curve.begin(), curve.end(), 0.0);
        stat.flagged = true;
        return;
    }
    for (int s = 0; s < cs.samples; ++s) {
        double sum1 = 0.0;
        for (int v = 0; v < 256; ++v)
            if (d[v]) sum1 += cs.value_sum[s][v];
        const double mean1 = sum1 / static_cast<double>(n1);
        const double mean0 = (cs.total_sum[s] - sum1) / static_cast<double>(n0);
        curve[s] = mean1 - mean0;
    }
}

ColumnSums accumulate(const TraceSet& ts, int byte_index) {
    if (byte_index < 0 || byte_index > 15) throw std::invalid_argument("byte index out of range");
    if (ts.traces.size() < 2) throw std::invalid_argument("attack needs at least 2 traces");
    ColumnSums cs(ts.config.samples_per_trace());
    for (const auto& tr : ts.traces) cs.add(tr, byte_index);
    return cs;
}

AttackResult init_result(int samples) {
    AttackResult r;
    r.samples_per_trace = samples;
    r.curves.assign(256, std::vector<double>(samples, 0.0));
    return r;
}

}  // namespace

PearsonResult pearson(std::span<const double> t, std::span<const double> p) {
    if (t.size() != p.size() || t.size() < 2)
        throw std::invalid_argument("pearson: need two equal-length series of length >= 2");
    const double n = static_cast<double>(t.size());
    double st = 0, sp = 0, st2 = 0, sp2 = 0, stp = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sp += p[i];
        st2 += t[i] * t[i];
        sp2 += p[i] * p[i];
        stp += t[i] * p[i];
    }
    const double var_t = n * st2 - st * st;
    const double var_p = n * sp2 - sp * sp;
    if (var_t <= 0.0 || var_p <= 0.0) return {0.0, true};
    return {(n * stp - st * sp) / std::sqrt(var_t * var_p), false};
}

AttackResult cpa_attack(const TraceSet& ts, int byte_index) {
    const ColumnSums cs = accumulate(ts, byte_index);
    AttackResult r = init_result(cs.samples);
#pragma omp parallel for schedule(static)
    for (int g = 0; g < 256; ++g)
        cpa_guess_curve(cs, static_cast<uint8_t>(g), r.curves[g], r.stats[g]);
    finalize(r);
    return r;
}

AttackResult cpa_attack_serial(const TraceSet& ts, int byte_index) {
    // Textbook per-trace accumulation, kept as the reference implementation.
    if (byte_index < 0 || byte_index > 15) throw std::invalid_argument("byte index out of range");
    if (ts.traces.size() < 2) throw std::invalid_argument("attack needs at least 2 traces");
    const int samples = ts.config.samples_per_trace();
    const double n = static_cast<double>(ts.traces.size());
    AttackResult r = init_result(samples);
    for (int g = 0; g < 256; ++g) {
        double sum_p = 0, sum_p2 = 0;
        std::vector<double> sum_t(samples, 0.0), sum_t2(samples, 0.0), sum_tp(samples, 0.0);
        for (const auto& tr : ts.traces) {
            const double p = hw_prediction(tr.plaintext[byte_index], static_cast<uint8_t>(g));
            sum_p += p;
            sum_p2 += p * p;
            for (int s = 0; s < samples; ++s) {
                const double x = tr.samples[s];
                sum_t[s] += x;
                sum_t2[s] += x * x;
                sum_tp[s] += x * p;
            }
        }
        const double var_p = n * sum_p2 - sum_p * sum_p;
        for (int s = 0; s < samples; ++s) {
            const double var_t = n * sum_t2[s] - sum_t[s] * sum_t[s];
            const double denom = var_p * var_t;
            if (denom <= 0.0) {
                r.curves[g][s] = 0.0;
                r.stats[g].flagged = true;
                continue;
            }
            r.curves[g][s] = (n * sum_tp[s] - sum_p * sum_t[s]) / std::sqrt(denom);
        }
    }
    finalize(r);
    return r;
}

AttackResult dom_attack(const TraceSet& ts, int byte_index, const Selection& sel) {
    const ColumnSums cs = accumulate(ts, byte_index);
    AttackResult r = init_result(cs.samples);
#pragma omp parallel for schedule(static)
    for (int g = 0; g < 256; ++g)
        dom_guess_curve(cs, static_cast<uint8_t>(g), sel, r.curves[g], r.stats[g]);
    finalize(r);
    return r;
}

AttackResult dom_attack_serial(const TraceSet& ts, int byte_index, const Selection& sel) {
    if (byte_index < 0 || byte_index > 15) throw std::invalid_argument("byte index out of range");
    if (ts.traces.size() < 2) throw std::invalid_argument("attack needs at least 2 traces");
    const int samples = ts.config.samples_per_trace();
    AttackResult r = init_result(samples);
    for (int g = 0; g < 256; ++g) {
        std::vector<double> sum1(samples, 0.0), sum0(samples, 0.0);
        size_t n1 = 0, n0 = 0;
        for (const auto& tr : ts.traces) {
            const int d = selection_bit(tr.plaintext[byte_index], static_cast<uint8_t>(g), sel);
            auto& acc = d ? sum1 : sum0;
            (d ? n1 : n0) += 1;
            for (int s = 0; s < samples; ++s) acc[s] += tr.samples[s];
        }
        if (n1 == 0 || n0 == 0) {
            r.stats[g].flagged = true;
            continue;
        }
        for (int s = 0; s < samples; ++s)
            r.curves[g][s] = sum1[s] / static_cast<double>(n1) - sum0[s] / static_cast<double>(n0);
    }
    finalize(r);
    return r;
}

int guess_rank(const AttackResult& r, uint8_t guess) { return r.stats[guess].rank; }

MtdResult measurements_to_disclosure(const TraceSet& ts, int byte_index, uint8_t true_key_byte,
                                     AttackMethod method, const Selection& sel, size_t step) {
    if (step == 0) throw std::invalid_argument("mtd: step must be >= 1");
    if (byte_index < 0 || byte_index > 15) throw std::invalid_argument("byte index out of range");

    MtdResult result;
    ColumnSums cs(ts.config.samples_per_trace());
    size_t consumed = 0;
    AttackResult r = init_result(cs.samples);

    auto evaluate_rank = [&]() {
        const long guesses = 256;
#pragma omp parallel for schedule(static)
        for (long g = 0; g < guesses; ++g) {
            r.stats[g] = GuessStat{};
            if (method == AttackMethod::Cpa)
                cpa_guess_curve(cs, static_cast<uint8_t>(g), r.curves[g], r.stats[g]);
            else
                dom_guess_curve(cs, static_cast<uint8_t>(g), sel, r.curves[g], r.stats[g]);
        }
        finalize(r);
        return guess_rank(r, true_key_byte);
    };

    while (consumed < ts.traces.size()) {
        const size_t upto = std::min(consumed + step, ts.traces.size());
        for (size_t i = consumed; i < upto; ++i) cs.add(ts.traces[i], byte_index);
        consumed = upto;
        if (cs.n < 2) continue;
        result.scan.push_back({consumed, evaluate_rank()});
    }

    // smallest tested prefix that is rank 1 and stays rank 1 afterwards
    std::optional<size_t> stable;
    for (auto it = result.scan.rbegin(); it != result.scan.rend(); ++it) {
        if (it->rank == 1)
            stable = it->prefix;
        else
            break;
    }
    result.disclosed_at = stable;
    return result;
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    return os;
}

}  // namespace

void write_attack_report(const AttackResult& r, const std::string& path) {
    auto os = open_out(path);
    os << "guess,peak_statistic,peak_sample_index,rank\n";
    for (int g = 0; g < 256; ++g)
        os << g << ',' << fmt_double(r.stats[g].peak_statistic) << ',' << r.stats[g].peak_sample
           << ',' << r.stats[g].rank << '\n';
    if (!os) throw std::runtime_error("write failed: " + path);
}

void write_curves_report(const AttackResult& r, int top_n, const std::string& path) {
    auto os = open_out(path);
    os << "guess,sample_index,statistic\n";
    const int n = std::min(top_n, 256);
    for (int pos = 0; pos < n; ++pos) {
        const uint8_t g = r.ranking[pos];
        for (int s = 0; s < r.samples_per_trace; ++s)
            os << int(g) << ',' << s << ',' << fmt_double(r.curves[g][s]) << '\n';
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

void write_mtd_report(const MtdResult& r, const std::string& path) {
    auto os = open_out(path);
    os << "prefix_size,rank_of_true_key\n";
    for (const auto& e : r.scan) os << e.prefix << ',' << e.rank << '\n';
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace tfaes
