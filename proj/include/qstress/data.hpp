// Copyright 2026 The qstress Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * SCR event data: schema, CSV I/O, amplitude classes, preprocessing,
 * sampling/splitting and a synthetic event generator.
 *
 * CSV header (exact on output):
 *
 *     elapsed_time,scr_amplitude,scr,detected_scr_number,amp_class
 *
 * Canonical rows print elapsed_time and scr with two decimals and
 * scr_amplitude with four, so loading and re-writing a canonical file is
 * byte-identical.
 */
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "matrix.hpp"

namespace qstress {

struct ScrEvent {
    /// seconds since session start
    double elapsed_time{0.0};
    /// microSiemens
    double scr_amplitude{0.0};
    /// microSiemens
    double scr{0.0};
    std::int64_t detected_scr_number{1};
    int amp_class{0};

    friend bool operator==(const ScrEvent &, const ScrEvent &) = default;
};

/// Amplitude class boundaries; each threshold belongs to the class above it.
struct LabelSchema {
    std::array<double, 4> thresholds{0.1, 0.4, 0.7, 1.0};
    std::array<const char *, 4> names{"low", "moderate", "high", "very high"};
};

inline constexpr double kDetectionFloor = 0.1;

/// Bins an amplitude into 0..3 with half-open intervals [t_c, t_{c+1}).
inline int amp_class(double scr_amplitude, const LabelSchema &schema = {}) {
    if (!std::isfinite(scr_amplitude)) {
        throw ValidationError("SCR amplitude is not finite");
    }
    if (scr_amplitude < schema.thresholds[0]) {
        throw BelowDetectionError("SCR amplitude " + std::to_string(scr_amplitude) +
                                  " uS is below the 0.1 uS detection floor");
    }
    int c = 0;
    for (int k = 1; k < 4; ++k) {
        if (scr_amplitude >= schema.thresholds[k]) {
            c = k;
        }
    }
    return c;
}

/// {0, 1} -> 0 (low), {2, 3} -> 1 (high).
inline int to_binary(int amp_class) {
    if (amp_class < 0 || amp_class > 3) {
        throw ValidationError("amplitude class " + std::to_string(amp_class) + " outside 0..3");
    }
    return amp_class >= 2 ? 1 : 0;
}

enum class Task { Binary, Multiclass4 };

inline void to_json(nlohmann::json &j, Task t) { j = t == Task::Binary ? "binary" : "multiclass4"; }

inline void from_json(const nlohmann::json &j, Task &t) {
    const auto s = j.get<std::string>();
    if (s == "binary") {
        t = Task::Binary;
    } else if (s == "multiclass4") {
        t = Task::Multiclass4;
    } else {
        throw ValidationError("unknown task '" + s + "' (binary|multiclass4)");
    }
}

struct Dataset {
    std::vector<ScrEvent> events;

    [[nodiscard]] std::size_t size() const { return events.size(); }

    /// Rows of (elapsed_time, scr_amplitude, scr, detected_scr_number).
    [[nodiscard]] FeatureMatrix features() const {
        FeatureMatrix X;
        X.reserve(events.size());
        for (const auto &e : events) {
            X.push_back({e.elapsed_time, e.scr_amplitude, e.scr,
                         static_cast<double>(e.detected_scr_number)});
        }
        return X;
    }

    [[nodiscard]] std::vector<int> labels(Task task = Task::Binary) const {
        std::vector<int> y;
        y.reserve(events.size());
        for (const auto &e : events) {
            y.push_back(task == Task::Binary ? to_binary(e.amp_class) : e.amp_class);
        }
        return y;
    }
};

inline constexpr std::array<std::string_view, 5> kCsvColumns{
    "elapsed_time", "scr_amplitude", "scr", "detected_scr_number", "amp_class"};

/// Canonical CSV text.
inline std::string write_csv(const Dataset &d) {
    std::string out = "elapsed_time,scr_amplitude,scr,detected_scr_number,amp_class\n";
    char buf[128];
    for (const auto &e : d.events) {
        std::snprintf(buf, sizeof buf, "%.2f,%.4f,%.2f,%lld,%d\n", e.elapsed_time,
                      e.scr_amplitude, e.scr, static_cast<long long>(e.detected_scr_number),
                      e.amp_class);
        out += buf;
    }
    return out;
}

inline void save_csv(const Dataset &d, const std::string &path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    f << write_csv(d);
    if (!f) {
        throw IoError("write to '" + path + "' failed");
    }
}

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream s(line);
    while (std::getline(s, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

template <typename T> T parse_number(std::string_view cell, std::size_t row, std::string_view col) {
    cell = trim(cell);
    T v{};
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || cell.empty()) {
        throw ParseError("row " + std::to_string(row) + ": column " + std::string(col) +
                         ": cannot parse '" + std::string(cell) + "' as a number");
    }
    return v;
}
} // namespace detail

/**
 * Parses CSV text. Columns may appear in any order; amp_class is optional
 * and, when present, must agree with the class recomputed from
 * scr_amplitude. Row numbers in messages are 1-based data rows.
 */
inline Dataset parse_csv(const std::string &text, const LabelSchema &schema = {}) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError("CSV is empty; expected header " + std::string(kCsvColumns[0]) + ",...");
    }
    const auto header = detail::split_csv_line(line);
    std::array<int, 5> col{-1, -1, -1, -1, -1};
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto name = detail::trim(header[i]);
        bool known = false;
        for (std::size_t k = 0; k < kCsvColumns.size(); ++k) {
            if (name == kCsvColumns[k]) {
                if (col[k] != -1) {
                    throw SchemaError("duplicate column " + std::string(name));
                }
                col[k] = static_cast<int>(i);
                known = true;
            }
        }
        if (!known) {
            throw SchemaError("unknown column '" + std::string(name) + "'");
        }
    }
    for (std::size_t k = 0; k < 4; ++k) {
        if (col[k] == -1) {
            throw SchemaError("missing column " + std::string(kCsvColumns[k]));
        }
    }

    Dataset d;
    std::vector<std::size_t> mismatched;
    std::size_t row = 0;
    double last_time = -1.0;
    std::int64_t last_count = 0;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) {
            continue;
        }
        ++row;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size()) {
            throw ParseError("row " + std::to_string(row) + ": expected " +
                             std::to_string(header.size()) + " cells, got " +
                             std::to_string(cells.size()));
        }
        ScrEvent e;
        e.elapsed_time = detail::parse_number<double>(cells[col[0]], row, kCsvColumns[0]);
        e.scr_amplitude = detail::parse_number<double>(cells[col[1]], row, kCsvColumns[1]);
        e.scr = detail::parse_number<double>(cells[col[2]], row, kCsvColumns[2]);
        e.detected_scr_number =
            detail::parse_number<std::int64_t>(cells[col[3]], row, kCsvColumns[3]);

        const std::string where = "row " + std::to_string(row) + ": ";
        if (!(e.elapsed_time >= 0.0) || !std::isfinite(e.elapsed_time)) {
            throw ValidationError(where + "elapsed_time must be a finite value >= 0");
        }
        if (!(e.scr >= 0.0) || !std::isfinite(e.scr)) {
            throw ValidationError(where + "scr must be a finite value >= 0");
        }
        if (e.detected_scr_number < 1) {
            throw ValidationError(where + "detected_scr_number must be positive");
        }
        try {
            e.amp_class = amp_class(e.scr_amplitude, schema);
        } catch (const ValidationError &err) {
            throw BelowDetectionError(where + err.what());
        }
        if (col[4] != -1) {
            const int stated = detail::parse_number<int>(cells[col[4]], row, kCsvColumns[4]);
            if (stated != e.amp_class) {
                mismatched.push_back(row);
            }
        }
        // A step back in time starts a new session.
        if (e.elapsed_time >= last_time && e.detected_scr_number < last_count) {
            throw ValidationError(where + "detected_scr_number decreases within a session");
        }
        last_time = e.elapsed_time;
        last_count = e.detected_scr_number;
        d.events.push_back(e);
    }
    if (!mismatched.empty()) {
        std::string rows;
        for (std::size_t i = 0; i < mismatched.size(); ++i) {
            rows += (i ? ", " : "") + std::to_string(mismatched[i]);
        }
        throw ValidationError("amp_class disagrees with scr_amplitude on rows " + rows);
    }
    return d;
}

inline Dataset load_csv(const std::string &path, const LabelSchema &schema = {}) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str(), schema);
}

/// 64-bit FNV-1a, hex encoded.
inline std::string fingerprint(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Column-wise affine map of fitted [min, max] onto [lower, upper].
struct MinMaxScaler {
    double lower{0.0};
    double upper{1.0};
    std::vector<double> min;
    std::vector<double> max;

    /// Constant columns map to `lower`.
    static MinMaxScaler fit(const FeatureMatrix &X, double lower, double upper) {
        const std::size_t d = check_rectangular(X, "minmax_scale");
        if (!(upper > lower)) {
            throw ValidationError("min-max target range must satisfy lower < upper");
        }
        MinMaxScaler s{lower, upper, X.front(), X.front()};
        for (const auto &row : X) {
            for (std::size_t j = 0; j < d; ++j) {
                s.min[j] = std::min(s.min[j], row[j]);
                s.max[j] = std::max(s.max[j], row[j]);
            }
        }
        return s;
    }

    [[nodiscard]] std::vector<double> transform(std::span<const double> x) const {
        if (x.size() != min.size()) {
            throw ShapeError("scaler fitted on " + std::to_string(min.size()) +
                             " columns, got " + std::to_string(x.size()));
        }
        std::vector<double> out(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double span = max[j] - min[j];
            out[j] = span > 0 ? lower + (x[j] - min[j]) * (upper - lower) / span : lower;
        }
        return out;
    }

    [[nodiscard]] FeatureMatrix transform(const FeatureMatrix &X) const {
        FeatureMatrix out;
        out.reserve(X.size());
        for (const auto &row : X) {
            out.push_back(transform(row));
        }
        return out;
    }
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MinMaxScaler, lower, upper, min, max)

struct ScaledFeatures {
    FeatureMatrix X;
    MinMaxScaler scaler;
};

inline ScaledFeatures minmax_scale(const FeatureMatrix &X, double lower, double upper) {
    auto s = MinMaxScaler::fit(X, lower, upper);
    return {s.transform(X), s};
}

/// x / ||x||_2
inline std::vector<double> l2_normalize(std::span<const double> x) {
    if (x.empty()) {
        throw ShapeError("l2_normalize: empty vector");
    }
    double ss = 0.0;
    for (double v : x) {
        ss += v * v;
    }
    if (!(ss > 0.0)) {
        throw NormalizationError("l2_normalize: zero vector");
    }
    const double inv = 1.0 / std::sqrt(ss);
    std::vector<double> out(x.begin(), x.end());
    for (auto &v : out) {
        v *= inv;
    }
    return out;
}

enum class PipelineKind { Classical, Quantum };

/**
 * Fitted preprocessing.
 *
 * Classical: min-max to [0, 1]. Quantum: min-max to [0, pi/2], then L2
 * normalisation of each row. A row that scales to the zero vector (every
 * feature at its training minimum) is passed through unnormalised.
 */
struct Preprocessor {
    PipelineKind kind{PipelineKind::Classical};
    MinMaxScaler scaler;

    static Preprocessor fit(PipelineKind kind, const FeatureMatrix &train) {
        const double upper = kind == PipelineKind::Quantum ? std::numbers::pi / 2 : 1.0;
        return {kind, MinMaxScaler::fit(train, 0.0, upper)};
    }

    [[nodiscard]] std::vector<double> transform(std::span<const double> x) const {
        auto v = scaler.transform(x);
        if (kind == PipelineKind::Quantum) {
            double ss = 0.0;
            for (double a : v) {
                ss += a * a;
            }
            if (ss > 0.0) {
                v = l2_normalize(v);
            }
        }
        return v;
    }

    [[nodiscard]] FeatureMatrix transform(const FeatureMatrix &X) const {
        FeatureMatrix out;
        out.reserve(X.size());
        for (const auto &row : X) {
            out.push_back(transform(row));
        }
        return out;
    }
};

inline void to_json(nlohmann::json &j, const Preprocessor &p) {
    j = nlohmann::json{{"kind", p.kind == PipelineKind::Quantum ? "quantum" : "classical"},
                       {"scaler", p.scaler}};
}

inline void from_json(const nlohmann::json &j, Preprocessor &p) {
    const auto k = j.at("kind").get<std::string>();
    if (k != "quantum" && k != "classical") {
        throw ValidationError("unknown preprocessing kind '" + k + "'");
    }
    p.kind = k == "quantum" ? PipelineKind::Quantum : PipelineKind::Classical;
    j.at("scaler").get_to(p.scaler);
}

/// Train/test index sets into the source dataset (each sorted ascending).
struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::uint64_t seed{0};
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Split, train, test, seed)

namespace detail {
inline std::map<int, std::vector<std::size_t>> group_by_class(std::span<const int> labels,
                                                              std::span<const std::size_t> idx) {
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i : idx) {
        groups[labels[i]].push_back(i);
    }
    return groups;
}
} // namespace detail

/**
 * Seeded uniform sample of n_sample indices, then a stratified split.
 *
 * The test set has round(n_sample * (1 - train_fraction)) members; per-class
 * test counts follow largest-remainder rounding of the class proportions,
 * adjusted so every class keeps at least one member on each side.
 */
inline Split sample_and_split(std::span<const int> labels, std::size_t n_sample,
                              double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ValidationError("train_fraction must lie in (0, 1)");
    }
    if (n_sample == 0 || labels.size() < n_sample) {
        throw ValidationError("cannot sample " + std::to_string(n_sample) + " events from " +
                              std::to_string(labels.size()));
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> all(labels.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
    }
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(n_sample);

    auto groups = detail::group_by_class(labels, all);
    for (const auto &[c, members] : groups) {
        if (members.size() < 2) {
            throw StratificationError("class " + std::to_string(c) + " has " +
                                      std::to_string(members.size()) +
                                      " sampled member(s); stratification needs at least 2");
        }
    }
    const auto n_test = static_cast<std::size_t>(
        std::llround(static_cast<double>(n_sample) * (1.0 - train_fraction)));
    if (n_test < groups.size() || n_sample - n_test < groups.size()) {
        throw StratificationError("split too small to place every class on both sides");
    }

    struct Quota {
        int cls;
        std::size_t size;
        std::size_t count;
        double exact;
    };
    std::vector<Quota> q;
    std::size_t assigned = 0;
    for (const auto &[c, members] : groups) {
        const double exact = static_cast<double>(members.size()) * static_cast<double>(n_test) /
                             static_cast<double>(n_sample);
        const auto base = static_cast<std::size_t>(std::floor(exact));
        q.push_back({c, members.size(), base, exact});
        assigned += base;
    }
    std::vector<std::size_t> order(q.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return (q[a].exact - std::floor(q[a].exact)) > (q[b].exact - std::floor(q[b].exact));
    });
    for (std::size_t k = 0; assigned < n_test; k = (k + 1) % order.size()) {
        if (q[order[k]].count < q[order[k]].size - 1) {
            ++q[order[k]].count;
            ++assigned;
        }
    }
    // Keep one member of each class on both sides, rebalancing against the
    // class with the most slack.
    for (auto &qi : q) {
        while (qi.count == 0 || qi.count == qi.size) {
            const bool need_more = qi.count == 0;
            Quota *donor = nullptr;
            double best = -1e300;
            for (auto &o : q) {
                if (&o == &qi) {
                    continue;
                }
                const bool can = need_more ? o.count > 1 : o.count + 1 < o.size;
                const double slack = need_more ? static_cast<double>(o.count) - o.exact
                                               : o.exact - static_cast<double>(o.count);
                if (can && slack > best) {
                    best = slack;
                    donor = &o;
                }
            }
            if (donor == nullptr) {
                throw StratificationError("cannot place class " + std::to_string(qi.cls) +
                                          " on both sides of the split");
            }
            if (need_more) {
                ++qi.count;
                --donor->count;
            } else {
                --qi.count;
                ++donor->count;
            }
        }
    }

    Split s;
    s.seed = seed;
    for (const auto &qi : q) {
        const auto &members = groups.at(qi.cls);
        s.test.insert(s.test.end(), members.begin(), members.begin() + qi.count);
        s.train.insert(s.train.end(), members.begin() + qi.count, members.end());
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

/**
 * Stratified k-fold assignment: fold index per sample.
 *
 * Each class is shuffled and the classes are dealt in order, position p
 * going to fold p mod k, so fold sizes differ by at most one.
 */
inline std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t k,
                                                 std::uint64_t seed) {
    if (k < 2) {
        throw ValidationError("cross-validation needs k >= 2");
    }
    std::vector<std::size_t> idx(labels.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = i;
    }
    auto groups = detail::group_by_class(labels, idx);
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> fold(labels.size());
    std::size_t pos = 0;
    for (auto &[c, members] : groups) {
        if (members.size() < k) {
            throw StratificationError("class " + std::to_string(c) + " has " +
                                      std::to_string(members.size()) + " members, fewer than k=" +
                                      std::to_string(k));
        }
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t i : members) {
            fold[i] = pos++ % k;
        }
    }
    return fold;
}

struct SynthParams {
    /// mean inter-event interval, seconds
    double mean_interval{30.0};
    /// median amplitude, uS
    double amp_median{0.3};
    /// log-space standard deviation of the amplitude
    double amp_sigma{0.8};
    /// tonic level, uS
    double baseline{1.5};
    /// per-event random-walk step of the tonic level, uS
    double drift_sigma{0.02};

    void validate() const {
        if (!(mean_interval > 0 && amp_median > 0 && amp_sigma > 0 && baseline >= 0 &&
              drift_sigma >= 0) ||
            !std::isfinite(mean_interval + amp_median + amp_sigma + baseline + drift_sigma)) {
            throw ValidationError("synthetic generator parameters out of range");
        }
    }
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SynthParams, mean_interval, amp_median, amp_sigma,
                                                baseline, drift_sigma)

namespace detail {
inline double round_to(double v, double scale) { return std::round(v * scale) / scale; }
} // namespace detail

/**
 * Synthetic single-session SCR events.
 *
 * Exponential inter-event times, log-normal amplitudes truncated below at
 * the detection floor, scr = baseline + random-walk drift + amplitude.
 * Values are rounded to the canonical CSV precision before classing.
 */
inline Dataset synth_generate(std::size_t n_events, std::uint64_t seed,
                              const SynthParams &params = {}) {
    if (n_events == 0) {
        throw ValidationError("synth_generate: n_events must be positive");
    }
    params.validate();
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> gap(1.0 / params.mean_interval);
    std::lognormal_distribution<double> amp(std::log(params.amp_median), params.amp_sigma);
    std::normal_distribution<double> step(0.0, 1.0);

    Dataset d;
    d.events.reserve(n_events);
    double t = 0.0;
    double drift = 0.0;
    for (std::size_t i = 0; i < n_events; ++i) {
        t += gap(rng);
        drift += params.drift_sigma * step(rng);
        double a = 0.0;
        do {
            a = detail::round_to(amp(rng), 1e4);
        } while (a < kDetectionFloor);
        ScrEvent e;
        e.elapsed_time = detail::round_to(t, 100.0);
        e.scr_amplitude = a;
        e.scr = detail::round_to(std::max(0.0, params.baseline + drift + a), 100.0);
        e.detected_scr_number = static_cast<std::int64_t>(i + 1);
        e.amp_class = amp_class(a);
        d.events.push_back(e);
    }
    return d;
}

} // namespace qstress
