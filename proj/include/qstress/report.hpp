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
 * EvalReport rendering: canonical JSON, one-row-per-model CSV, and a static
 * SVG with four bar-chart panels (accuracy, generalization gap, model
 * complexity, precision/recall/F1).
 *
 * Report JSON layout:
 *
 *     {
 *       "schema_version": 1,
 *       "dataset_fingerprint": "<fnv1a64 of the canonical CSV>",
 *       "dataset": {source, n_events, sample_n, train_size, test_size, task, split_seed},
 *       "config": <effective experiment config>,
 *       "notes": [...],
 *       "models": [
 *         {"model": "qsvm", "status": "ok", "task": "binary", "seed": 0,
 *          "config": {...}, "train_accuracy": 78.75, "test_accuracy": 45.0,
 *          "generalization_gap": 33.75, "parameter_count": 41,
 *          "test_metrics": {"accuracy", "per_class": [...], "macro", "weighted"}},
 *         {"model": "nn", "status": "failed", "error": "...", ...}
 *       ]
 *     }
 *
 * Keys are emitted in sorted order with two-space indentation, so equal
 * reports serialise to identical bytes.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bench.hpp"
#include "error.hpp"

namespace qstress {

enum class ReportFormat { Json, Csv, Svg };

inline ReportFormat parse_report_format(const std::string &s) {
    if (s == "json") {
        return ReportFormat::Json;
    }
    if (s == "csv") {
        return ReportFormat::Csv;
    }
    if (s == "svg") {
        return ReportFormat::Svg;
    }
    throw ValidationError("unknown report format '" + s + "' (json|csv|svg)");
}

inline std::string report_to_json(const EvalReport &r) {
    return nlohmann::json(r).dump(2) + "\n";
}

inline EvalReport report_from_json(const std::string &text) {
    try {
        return nlohmann::json::parse(text).get<EvalReport>();
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("report JSON: ") + e.what());
    }
}

inline constexpr const char *kReportCsvHeader =
    "model,status,task,train_accuracy,test_accuracy,generalization_gap,parameter_count,"
    "macro_precision,macro_recall,macro_f1,weighted_precision,weighted_recall,weighted_f1,"
    "test_accuracy_fraction,seed,dataset_fingerprint,error";

namespace detail {
/// Shortest round-trip decimal text of a number.
inline std::string num(double v) { return nlohmann::json(v).dump(); }

inline std::string csv_quote(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

inline std::vector<std::string> split_quoted(const std::string &line) {
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cells.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cells.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.emplace_back();
        } else {
            cells.back() += c;
        }
    }
    return cells;
}

inline double parse_double(const std::string &s) {
    try {
        return nlohmann::json::parse(s).get<double>();
    } catch (const nlohmann::json::exception &) {
        throw ParseError("report CSV: bad number '" + s + "'");
    }
}
} // namespace detail

inline std::string report_to_csv(const EvalReport &r) {
    std::string out = std::string(kReportCsvHeader) + "\n";
    for (const auto &m : r.models) {
        std::vector<std::string> cells{model_name(m.model), m.failed ? "failed" : "ok",
                                       nlohmann::json(m.task).get<std::string>()};
        if (m.failed) {
            cells.insert(cells.end(), 11, "");
        } else {
            const auto &t = m.test_metrics;
            for (double v : {m.train_accuracy, m.test_accuracy, m.generalization_gap}) {
                cells.push_back(detail::num(v));
            }
            cells.push_back(std::to_string(m.parameter_count));
            for (double v : {t.macro.precision, t.macro.recall, t.macro.f1, t.weighted.precision,
                             t.weighted.recall, t.weighted.f1, t.accuracy}) {
                cells.push_back(detail::num(v));
            }
        }
        cells.push_back(std::to_string(m.seed));
        cells.push_back(r.dataset_fingerprint);
        cells.push_back(detail::csv_quote(m.error));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out += (i ? "," : "") + cells[i];
        }
        out += '\n';
    }
    return out;
}

/**
 * Rebuilds the per-model summary from report CSV. Per-class metrics and
 * config echoes are not part of the CSV and come back empty.
 */
inline EvalReport report_from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kReportCsvHeader) {
        throw SchemaError("report CSV: unexpected header");
    }
    EvalReport r;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto c = detail::split_quoted(line);
        if (c.size() != 17) {
            throw ParseError("report CSV: expected 17 cells, got " + std::to_string(c.size()));
        }
        ModelRecord m;
        m.model = parse_model_id(c[0]);
        m.failed = c[1] == "failed";
        m.task = nlohmann::json(c[2]).get<Task>();
        if (!m.failed) {
            m.train_accuracy = detail::parse_double(c[3]);
            m.test_accuracy = detail::parse_double(c[4]);
            m.generalization_gap = detail::parse_double(c[5]);
            m.parameter_count = std::stoull(c[6]);
            m.test_metrics.macro = {detail::parse_double(c[7]), detail::parse_double(c[8]),
                                    detail::parse_double(c[9])};
            m.test_metrics.weighted = {detail::parse_double(c[10]), detail::parse_double(c[11]),
                                       detail::parse_double(c[12])};
            m.test_metrics.accuracy = detail::parse_double(c[13]);
        }
        m.seed = std::stoull(c[14]);
        r.dataset_fingerprint = c[15];
        m.error = c[16];
        r.models.push_back(m);
    }
    return r;
}

namespace detail {
struct Series {
    const char *name;
    const char *color;
};

inline std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string svg_escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

/**
 * One panel at (x0, y0). values[m][s] is series s of model m; failed models
 * get an empty bar group. The value axis spans [lo, hi] and always includes 0.
 */
inline void svg_panel(std::ostringstream &o, const std::string &id, const std::string &title,
                      double x0, double y0, const EvalReport &r, const std::vector<Series> &series,
                      const std::vector<std::vector<double>> &values, int decimals) {
    constexpr double W = 460, H = 300, left = 50, right = 10, top = 40, bottom = 50;
    double lo = 0.0, hi = 0.0;
    for (std::size_t m = 0; m < r.models.size(); ++m) {
        if (r.models[m].failed) {
            continue;
        }
        for (double v : values[m]) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi - lo <= 0) {
        hi = lo + 1.0;
    }
    const double plot_h = H - top - bottom;
    const double plot_w = W - left - right;
    auto ypos = [&](double v) { return y0 + top + (hi - v) / (hi - lo) * plot_h; };
    const double group_w = plot_w / static_cast<double>(std::max<std::size_t>(1, r.models.size()));
    const double bar_w = group_w * 0.8 / static_cast<double>(series.size());

    o << "<g class=\"panel\" id=\"" << id << "\">\n";
    o << "<text x=\"" << fmt2(x0 + W / 2) << "\" y=\"" << fmt2(y0 + 20)
      << "\" text-anchor=\"middle\" font-size=\"15\" font-weight=\"bold\">" << title << "</text>\n";
    o << "<line x1=\"" << fmt2(x0 + left) << "\" y1=\"" << fmt2(ypos(0)) << "\" x2=\""
      << fmt2(x0 + W - right) << "\" y2=\"" << fmt2(ypos(0)) << "\" stroke=\"#333\"/>\n";
    for (std::size_t m = 0; m < r.models.size(); ++m) {
        const auto &rec = r.models[m];
        const double gx = x0 + left + group_w * static_cast<double>(m) + group_w * 0.1;
        o << "<g class=\"bar-group\" data-model=\"" << model_name(rec.model) << "\">\n";
        if (!rec.failed) {
            for (std::size_t s = 0; s < series.size(); ++s) {
                const double v = values[m][s];
                const double bx = gx + bar_w * static_cast<double>(s);
                const double y_top = std::min(ypos(v), ypos(0));
                const double h = std::abs(ypos(v) - ypos(0));
                char label[64];
                std::snprintf(label, sizeof label, "%.*f", decimals, v);
                o << "<rect class=\"bar\" data-series=\"" << series[s].name << "\" x=\""
                  << fmt2(bx) << "\" y=\"" << fmt2(y_top) << "\" width=\"" << fmt2(bar_w * 0.9)
                  << "\" height=\"" << fmt2(h) << "\" fill=\"" << series[s].color << "\"/>\n";
                o << "<text class=\"value\" x=\"" << fmt2(bx + bar_w * 0.45) << "\" y=\""
                  << fmt2(v >= 0 ? y_top - 3 : y_top + h + 11)
                  << "\" text-anchor=\"middle\" font-size=\"9\">" << label << "</text>\n";
            }
        }
        o << "<text class=\"model-label\" x=\"" << fmt2(gx + group_w * 0.4) << "\" y=\""
          << fmt2(y0 + H - bottom + 18) << "\" text-anchor=\"middle\" font-size=\"11\">"
          << model_name(rec.model) << (rec.failed ? " (failed)" : "") << "</text>\n";
        o << "</g>\n";
    }
    double lx = x0 + left;
    for (const auto &s : series) {
        o << "<rect x=\"" << fmt2(lx) << "\" y=\"" << fmt2(y0 + H - 18)
          << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>";
        o << "<text x=\"" << fmt2(lx + 14) << "\" y=\"" << fmt2(y0 + H - 9)
          << "\" font-size=\"10\">" << s.name << "</text>\n";
        lx += 110;
    }
    o << "</g>\n";
}
} // namespace detail

inline std::string report_to_svg(const EvalReport &r) {
    const std::size_t n = r.models.size();
    std::vector<std::vector<double>> acc(n), gap(n), cx(n), prf(n);
    for (std::size_t m = 0; m < n; ++m) {
        const auto &rec = r.models[m];
        acc[m] = {rec.train_accuracy, rec.test_accuracy};
        gap[m] = {rec.generalization_gap};
        cx[m] = {static_cast<double>(rec.parameter_count)};
        prf[m] = {rec.test_metrics.macro.precision, rec.test_metrics.macro.recall,
                  rec.test_metrics.macro.f1};
    }
    std::size_t failed = 0;
    for (const auto &rec : r.models) {
        failed += rec.failed ? 1 : 0;
    }
    const double height = 640 + 20 * static_cast<double>(failed);

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"940\" height=\"" << detail::fmt2(height)
      << "\" viewBox=\"0 0 940 " << detail::fmt2(height) << "\" font-family=\"sans-serif\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    detail::svg_panel(o, "accuracy", "Model Accuracy (%)", 0, 0, r,
                      {{"train", "#4c72b0"}, {"test", "#dd8452"}}, acc, 2);
    detail::svg_panel(o, "gap", "Generalization Gap (points)", 470, 0, r,
                      {{"train - test", "#c44e52"}}, gap, 2);
    detail::svg_panel(o, "complexity", "Model Complexity (parameters)", 0, 310, r,
                      {{"parameters", "#55a868"}}, cx, 0);
    detail::svg_panel(o, "prf", "Precision, Recall & F1 (macro, test)", 470, 310, r,
                      {{"precision", "#8172b2"}, {"recall", "#937860"}, {"F1", "#da8bc3"}}, prf,
                      2);
    double y = 640;
    for (const auto &rec : r.models) {
        if (rec.failed) {
            o << "<text class=\"legend-note\" x=\"10\" y=\"" << detail::fmt2(y + 14)
              << "\" font-size=\"11\" fill=\"#c44e52\">" << model_name(rec.model)
              << ": failed, no bars drawn (" << detail::svg_escape(rec.error) << ")</text>\n";
            y += 20;
        }
    }
    o << "</svg>\n";
    return o.str();
}

/// Writes <dir>/report.<ext>; returns the path.
inline std::string emit_report(const EvalReport &r, ReportFormat format, const std::string &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create '" + dir + "': " + ec.message());
    }
    const char *ext = format == ReportFormat::Json ? "json" : format == ReportFormat::Csv ? "csv"
                                                                                          : "svg";
    const auto path = (std::filesystem::path(dir) / (std::string("report.") + ext)).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    switch (format) {
    case ReportFormat::Json:
        f << report_to_json(r);
        break;
    case ReportFormat::Csv:
        f << report_to_csv(r);
        break;
    case ReportFormat::Svg:
        f << report_to_svg(r);
        break;
    }
    if (!f) {
        throw IoError("write to '" + path + "' failed");
    }
    return path;
}

} // namespace qstress
