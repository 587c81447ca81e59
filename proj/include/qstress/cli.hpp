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
 * `qstress` command line: gen-data, kernel, train, evaluate,
 * cross-validate, compare, report.
 *
 * Exit codes: 0 success, 1 usage or validation error, 2 runtime failure.
 * Diagnostics go to the error stream; data goes to files or the output
 * stream.
 */
#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bench.hpp"
#include "config.hpp"
#include "data.hpp"
#include "error.hpp"
#include "models.hpp"
#include "qkernel.hpp"
#include "report.hpp"

namespace qstress {

namespace cli_detail {

inline void write_text(const std::string &path, const std::string &text, std::ostream &out) {
    if (path == "-") {
        out << text;
        return;
    }
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    f << text;
    if (!f) {
        throw IoError("write to '" + path + "' failed");
    }
}

inline std::string read_text(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ValidationError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline nlohmann::json parse_json_file(const std::string &path) {
    try {
        return nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError("'" + path + "': " + e.what());
    }
}

/// Config file (if any) with command-line overrides applied.
struct ConfigArgs {
    std::string config_path;
    std::string csv;
    std::optional<std::string> task;
    std::optional<std::uint64_t> seed;

    void add_to(CLI::App *sub) {
        sub->add_option("--config", config_path, "Experiment config (JSON)")
            ->check(CLI::ExistingFile);
        sub->add_option("--in", csv, "Dataset CSV; overrides the config's dataset");
        sub->add_option("--task", task, "binary | multiclass4 (default binary)");
        sub->add_option("--seed", seed, "Sampling seed; overrides seeds.sampling (default 0)");
    }

    [[nodiscard]] ExperimentConfig resolve() const {
        ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        if (!csv.empty()) {
            c.csv_path = csv;
        }
        if (task) {
            c.task = nlohmann::json(*task).get<Task>();
        }
        if (seed) {
            c.seeds.sampling = *seed;
        }
        c.validate();
        return c;
    }
};

} // namespace cli_detail

/**
 * Runs the CLI on argv-style arguments (args[0] is the program name).
 * Returns the process exit code.
 */
inline int run_cli(const std::vector<std::string> &args, std::ostream &out = std::cout,
                   std::ostream &err = std::cerr) {
    using namespace cli_detail;
    CLI::App app{"qstress: quantum and classical classifiers for SCR stress events"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    // gen-data
    auto *gen = app.add_subcommand("gen-data", "Generate a synthetic SCR event CSV");
    std::size_t gen_n = 1000;
    std::uint64_t gen_seed = 7;
    std::string gen_out;
    SynthParams sp;
    gen->add_option("--n", gen_n, "Number of events")->capture_default_str();
    gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
    gen->add_option("--out", gen_out, "Output CSV path ('-' for stdout)")->required();
    gen->add_option("--mean-interval", sp.mean_interval, "Mean inter-event time, s")
        ->capture_default_str();
    gen->add_option("--amp-median", sp.amp_median, "Median SCR amplitude, uS")
        ->capture_default_str();
    gen->add_option("--amp-sigma", sp.amp_sigma, "Log-normal sigma of the amplitude")
        ->capture_default_str();
    gen->add_option("--baseline", sp.baseline, "Tonic SCR baseline, uS")->capture_default_str();
    gen->add_option("--drift-sigma", sp.drift_sigma, "Per-event tonic drift step, uS")
        ->capture_default_str();

    // kernel
    auto *ker = app.add_subcommand("kernel", "Compute a Gram matrix over a dataset");
    std::string k_map = "zz";
    std::optional<std::size_t> k_qubits;
    double k_alpha = 0.7;
    std::size_t k_reps = 1;
    std::string k_pattern = "full";
    double k_gamma = 2.0;
    std::string k_in;
    std::string k_out;
    std::size_t k_sample = 0;
    std::uint64_t k_seed = 0;
    ker->add_option("--map", k_map, "zz | angle | amplitude | linear | rbf")
        ->capture_default_str()
        ->check(CLI::IsMember({"zz", "angle", "amplitude", "linear", "rbf"}));
    ker->add_option("--qubits", k_qubits, "Qubit count (default: zz 8, angle 4, amplitude 2)");
    ker->add_option("--alpha", k_alpha, "ZZ entanglement scale")->capture_default_str();
    ker->add_option("--reps", k_reps, "ZZ repetitions")->capture_default_str();
    ker->add_option("--pattern", k_pattern, "full | linear | disjoint_pairs")
        ->capture_default_str();
    ker->add_option("--gamma", k_gamma, "RBF width")->capture_default_str();
    ker->add_option("--in", k_in, "Dataset CSV")->required()->check(CLI::ExistingFile);
    ker->add_option("--out", k_out, "Kernel CSV path ('-' for stdout)")->required();
    ker->add_option("--sample-n", k_sample, "Use a seeded random subset of rows (0 = all)")
        ->capture_default_str();
    ker->add_option("--seed", k_seed, "Subset seed")->capture_default_str();

    // train
    auto *tr = app.add_subcommand("train", "Train one model on the configured train split");
    std::string tr_model;
    std::string tr_out;
    ConfigArgs tr_cfg;
    tr->add_option("--model", tr_model, "linear-svm | rbf-svm | qsvm | nn | qnn")
        ->required()
        ->check(CLI::IsMember({"linear-svm", "rbf-svm", "qsvm", "nn", "qnn"}));
    tr->add_option("--out", tr_out, "Model JSON path ('-' for stdout)")->required();
    tr_cfg.add_to(tr);

    // evaluate
    auto *ev = app.add_subcommand("evaluate", "Score a trained model");
    std::string ev_model;
    std::string ev_in;
    std::string ev_split = "test";
    std::string ev_out = "-";
    ev->add_option("--model-file", ev_model, "Model JSON written by 'train'")
        ->required()
        ->check(CLI::ExistingFile);
    ev->add_option("--in", ev_in, "Dataset CSV (default: the model's training source)");
    ev->add_option("--split", ev_split, "test | train | all")
        ->capture_default_str()
        ->check(CLI::IsMember({"test", "train", "all"}));
    ev->add_option("--out", ev_out, "Metrics JSON path ('-' for stdout)")->capture_default_str();

    // cross-validate
    auto *cv = app.add_subcommand("cross-validate", "Stratified k-fold accuracy of one model");
    std::string cv_model;
    std::optional<std::size_t> cv_k;
    std::string cv_out = "-";
    ConfigArgs cv_cfg;
    cv->add_option("--model", cv_model, "linear-svm | rbf-svm | qsvm | nn | qnn")
        ->required()
        ->check(CLI::IsMember({"linear-svm", "rbf-svm", "qsvm", "nn", "qnn"}));
    cv->add_option("--k", cv_k, "Number of folds (default 5)");
    cv->add_option("--out", cv_out, "Result JSON path ('-' for stdout)")->capture_default_str();
    cv_cfg.add_to(cv);

    // compare
    auto *cmp = app.add_subcommand("compare", "Run all five models and write the report");
    std::string cmp_out;
    std::vector<std::string> cmp_formats;
    ConfigArgs cmp_cfg;
    cmp->add_option("--out", cmp_out, "Report directory (default: config output.dir)");
    cmp->add_option("--formats", cmp_formats, "json,csv,svg (default all)")->delimiter(',');
    cmp_cfg.add_to(cmp);

    // report
    auto *rep = app.add_subcommand("report", "Re-render a report JSON");
    std::string rep_in;
    std::string rep_out;
    std::vector<std::string> rep_formats{"svg"};
    rep->add_option("--in", rep_in, "Report JSON")->required()->check(CLI::ExistingFile);
    rep->add_option("--out", rep_out, "Output directory")->required();
    rep->add_option("--format", rep_formats, "json | csv | svg (repeatable)")
        ->delimiter(',')
        ->capture_default_str();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) {
        rev.pop_back();
    }
    try {
        app.parse(rev);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*gen) {
            sp.validate();
            write_text(gen_out, write_csv(synth_generate(gen_n, gen_seed, sp)), out);
        } else if (*ker) {
            auto data = load_csv(k_in);
            std::vector<std::size_t> idx(data.size());
            for (std::size_t i = 0; i < idx.size(); ++i) {
                idx[i] = i;
            }
            if (k_sample != 0) {
                if (k_sample > data.size()) {
                    throw ValidationError("--sample-n exceeds the dataset size");
                }
                std::mt19937_64 rng(k_seed);
                std::shuffle(idx.begin(), idx.end(), rng);
                idx.resize(k_sample);
                std::sort(idx.begin(), idx.end());
            }
            FeatureMatrix raw;
            std::vector<std::string> ids;
            const auto all = data.features();
            for (std::size_t i : idx) {
                raw.push_back(all[i]);
                ids.push_back(std::to_string(i));
            }
            KernelSpec spec;
            PipelineKind pipe = PipelineKind::Quantum;
            if (k_map == "linear") {
                spec = KernelSpec::linear();
                pipe = PipelineKind::Classical;
            } else if (k_map == "rbf") {
                spec = KernelSpec::gaussian(k_gamma);
                pipe = PipelineKind::Classical;
            } else {
                FeatureMapSpec fm;
                fm.kind = nlohmann::json(k_map).get<EncodingKind>();
                fm.n_qubits = k_qubits.value_or(k_map == "zz" ? 8 : k_map == "angle" ? 4 : 2);
                fm.alpha = k_alpha;
                fm.repetitions = k_reps;
                fm.pattern = nlohmann::json(k_pattern).get<EntanglementPattern>();
                fm.validate(4);
                spec = KernelSpec::quantum(fm);
            }
            const auto X = Preprocessor::fit(pipe, raw).transform(raw);
            write_text(k_out, kernel_matrix_to_csv(kernel_matrix(X, spec, ids)), out);
        } else if (*tr) {
            const auto cfg = tr_cfg.resolve();
            const auto id = parse_model_id(tr_model);
            const auto data = load_dataset(cfg);
            const auto split = split_for(data, cfg);
            const auto s = select(data.features(), data.labels(model_task(id, cfg.task)),
                                  split.train);
            const auto fitted = fit_model(id, s.X, s.y, cfg);
            nlohmann::json j{{"model", fitted},
                             {"split", split},
                             {"config", cfg},
                             {"dataset_fingerprint", fingerprint(write_csv(data))}};
            write_text(tr_out, j.dump(2) + "\n", out);
        } else if (*ev) {
            const auto j = parse_json_file(ev_model);
            const auto fitted = j.at("model").get<FittedModel>();
            auto cfg = j.at("config").get<ExperimentConfig>();
            if (!ev_in.empty()) {
                cfg.csv_path = ev_in;
            }
            cfg.validate();
            const auto data = load_dataset(cfg);
            std::vector<std::size_t> idx;
            if (ev_split == "all") {
                for (std::size_t i = 0; i < data.size(); ++i) {
                    idx.push_back(i);
                }
            } else {
                const auto split = split_for(data, cfg);
                idx = ev_split == "test" ? split.test : split.train;
            }
            const auto s = select(data.features(), data.labels(fitted.task), idx);
            const auto m = classification_metrics(fitted.predict(s.X), s.y);
            nlohmann::json res{{"model", fitted.id},
                               {"split", ev_split},
                               {"n", s.y.size()},
                               {"accuracy_percent", to_percent(m.accuracy)},
                               {"metrics", m}};
            write_text(ev_out, res.dump(2) + "\n", out);
        } else if (*cv) {
            auto cfg = cv_cfg.resolve();
            if (cv_k) {
                cfg.cv_k = *cv_k;
            }
            const auto id = parse_model_id(cv_model);
            const auto r = cross_validate_model(id, load_dataset(cfg), cfg);
            nlohmann::json res{{"model", id}, {"k", cfg.cv_k}, {"result", r}, {"config", cfg}};
            write_text(cv_out, res.dump(2) + "\n", out);
        } else if (*cmp) {
            auto cfg = cmp_cfg.resolve();
            if (!cmp_out.empty()) {
                cfg.output.dir = cmp_out;
            }
            if (!cmp_formats.empty()) {
                cfg.output.formats = cmp_formats;
            }
            cfg.validate();
            const auto report = compare_models(cfg);
            for (const auto &f : cfg.output.formats) {
                err << "wrote " << emit_report(report, parse_report_format(f), cfg.output.dir)
                    << "\n";
            }
            for (const auto &m : report.models) {
                if (m.failed) {
                    err << model_name(m.model) << " failed: " << m.error << "\n";
                }
            }
        } else if (*rep) {
            const auto report = report_from_json(read_text(rep_in));
            for (const auto &f : rep_formats) {
                err << "wrote " << emit_report(report, parse_report_format(f), rep_out) << "\n";
            }
        }
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

inline int run_cli(int argc, char **argv) {
    return run_cli(std::vector<std::string>(argv, argv + argc));
}

} // namespace qstress
