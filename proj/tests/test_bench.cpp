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
#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "qstress/qstress.hpp"

using namespace qstress;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.generator.n = 300;
    c.generator.seed = 11;
    c.sample_n = 60;
    c.qnn.max_epochs = 15;
    return c;
}

const EvalReport &shared_report() {
    static const EvalReport r = compare_models(small_config());
    return r;
}

std::size_t count(const std::string &hay, const std::string &needle) {
    std::size_t n = 0;
    for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) {
        ++n;
    }
    return n;
}

std::string slurp(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("classification metrics", "[bench][metrics]") {
    SECTION("closed-form confusion counts") {
        // TP=3 FP=1 FN=2 TN=4 for class 1
        const std::vector<int> actual{1, 1, 1, 1, 1, 0, 0, 0, 0, 0};
        const std::vector<int> pred{1, 1, 1, 0, 0, 1, 0, 0, 0, 0};
        const auto m = classification_metrics(pred, actual);
        REQUIRE(m.per_class.size() == 2);
        const auto &c1 = m.per_class[1];
        CHECK(c1.label == 1);
        CHECK_THAT(c1.precision, WithinAbs(0.75, 1e-15));
        CHECK_THAT(c1.recall, WithinAbs(0.6, 1e-15));
        CHECK_THAT(c1.f1, WithinAbs(2.0 / 3.0, 1e-15));
        CHECK(c1.support == 5);
        CHECK_THAT(m.accuracy, WithinAbs(0.7, 1e-15));
        const auto &c0 = m.per_class[0];
        CHECK_THAT(c0.precision, WithinAbs(4.0 / 6.0, 1e-15));
        CHECK_THAT(c0.recall, WithinAbs(0.8, 1e-15));
        CHECK_THAT(m.macro.f1, WithinAbs((c0.f1 + c1.f1) / 2, 1e-15));
    }
    SECTION("perfect predictions") {
        const std::vector<int> y{0, 1, 2, 3, 2};
        const auto m = classification_metrics(y, y);
        CHECK(m.accuracy == 1.0);
        for (const auto &c : m.per_class) {
            CHECK(c.f1 == 1.0);
        }
        CHECK(m.macro.f1 == 1.0);
        CHECK(m.weighted.f1 == 1.0);
    }
    SECTION("constant predictor") {
        const std::vector<int> y{0, 1, 0, 1, 0, 1};
        const std::vector<int> p(6, 1);
        const auto m = classification_metrics(p, y);
        CHECK(m.accuracy == 0.5);
        CHECK(m.per_class[1].recall == 1.0);
        CHECK(m.per_class[0].recall == 0.0);
        CHECK(m.per_class[0].precision == 0.0);
        CHECK(m.per_class[0].precision_undefined);
        CHECK_FALSE(m.per_class[1].precision_undefined);
    }
    SECTION("errors") {
        CHECK_THROWS_AS(classification_metrics(std::vector<int>{1}, std::vector<int>{1, 0}),
                        ShapeError);
        CHECK_THROWS_AS(classification_metrics(std::vector<int>{}, std::vector<int>{}),
                        ShapeError);
    }
}

TEST_CASE("metric ranges", "[bench][metrics][property]") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> cls(0, 3);
    for (int t = 0; t < 200; ++t) {
        std::vector<int> a(1 + static_cast<std::size_t>(t % 30)), p(a.size());
        std::size_t hits = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = cls(rng);
            p[i] = cls(rng);
            hits += a[i] == p[i] ? 1 : 0;
        }
        const auto m = classification_metrics(p, a);
        CHECK(m.accuracy == static_cast<double>(hits) / static_cast<double>(a.size()));
        CHECK(m.macro.f1 >= 0.0);
        CHECK(m.macro.f1 <= 1.0);
        CHECK(m.weighted.recall == Catch::Approx(m.accuracy).margin(1e-12));
    }
}

TEST_CASE("generalization gap", "[bench]") {
    CHECK(generalization_gap(78.75, 45) == 33.75);
    CHECK(generalization_gap(69, 55) == 14);
    CHECK(generalization_gap(62.5, 62.5) == 0);
    CHECK(generalization_gap(40, 55) == -15);
    CHECK_THROWS_AS(generalization_gap(101, 5), ValidationError);
    CHECK_THROWS_AS(generalization_gap(50, -1), ValidationError);
    CHECK(to_percent(0.7875) == 78.75);
    CHECK(to_percent(2.0 / 3.0) == 66.67);
}

TEST_CASE("cross-validation partition", "[bench][cv]") {
    FeatureMatrix X(100, std::vector<double>{0.0});
    std::vector<int> y(100);
    for (std::size_t i = 0; i < 100; ++i) {
        X[i][0] = static_cast<double>(i);
        y[i] = i % 2 == 0 ? 0 : 1;
    }
    std::set<double> seen;
    std::size_t calls = 0;
    const auto r = cross_validate(X, y, 5, 3,
                                  [&](const FeatureMatrix &Xtr, std::span<const int>,
                                      const FeatureMatrix &Xev) {
                                      ++calls;
                                      CHECK(Xtr.size() == 80);
                                      CHECK(Xev.size() == 20);
                                      for (const auto &row : Xev) {
                                          CHECK(seen.insert(row[0]).second);
                                      }
                                      return std::vector<int>(Xev.size(), 1);
                                  });
    CHECK(calls == 5);
    CHECK(seen.size() == 100);
    for (double a : r.fold_accuracy) {
        CHECK(a == 0.5);
    }
    CHECK(r.mean == 0.5);
    CHECK(r.stddev == 0.0);
    const auto again = cross_validate(X, y, 5, 3, [](const FeatureMatrix &, std::span<const int>,
                                                     const FeatureMatrix &e) {
        return std::vector<int>(e.size(), 0);
    });
    CHECK(again.fold_of == r.fold_of);
}

TEST_CASE("model comparison", "[bench][compare]") {
    const auto &r = shared_report();
    REQUIRE(r.models.size() == 5);
    std::set<ModelId> ids;
    for (const auto &m : r.models) {
        ids.insert(m.model);
        INFO(model_name(m.model) << ": " << m.error);
        CHECK_FALSE(m.failed);
        CHECK(m.generalization_gap == m.train_accuracy - m.test_accuracy);
        CHECK(m.train_accuracy >= 0);
        CHECK(m.test_accuracy <= 100);
    }
    CHECK(ids.size() == 5);
    CHECK(r.models[3].model == ModelId::Nn);
    CHECK(r.models[3].parameter_count == 145);
    CHECK(r.models[4].model == ModelId::Qnn);
    CHECK(r.models[4].parameter_count == 24);
    CHECK(r.dataset.train_size == 48);
    CHECK(r.dataset.test_size == 12);
    CHECK(r.dataset_fingerprint == fingerprint(write_csv(synth_generate(300, 11))));
    CHECK(report_to_json(compare_models(small_config())) == report_to_json(r));
}

TEST_CASE("cross-validating a model", "[bench][cv]") {
    auto cfg = small_config();
    const auto data = load_dataset(cfg);
    const auto a = cross_validate_model(ModelId::LinearSvm, data, cfg);
    CHECK(a.fold_accuracy.size() == 5);
    CHECK(a.fold_of.size() == 60);
    CHECK(cross_validate_model(ModelId::LinearSvm, data, cfg).fold_accuracy == a.fold_accuracy);
}

TEST_CASE("failures are isolated per model", "[bench][compare]") {
    const auto data = synth_generate(40, 2);
    Split split;
    split.train = {0, 1};
    split.test = {2, 3};
    const auto y = data.labels();
    if (y[0] != y[1]) {
        split.train = {0};
    }
    const auto rec = evaluate_model(ModelId::LinearSvm, data, split, ExperimentConfig{});
    CHECK(rec.failed);
    CHECK_FALSE(rec.error.empty());
}

TEST_CASE("report formats", "[bench][report]") {
    auto r = shared_report();
    const std::string csv = report_to_csv(r);
    CHECK(csv.rfind(std::string(kReportCsvHeader) + "\n", 0) == 0);
    CHECK(count(csv, "\n") == 6);

    SECTION("json round trip") {
        CHECK(report_to_json(report_from_json(report_to_json(r))) == report_to_json(r));
    }
    SECTION("csv round trip keeps the numbers") {
        const auto back = report_from_csv(csv);
        REQUIRE(back.models.size() == 5);
        CHECK(back.dataset_fingerprint == r.dataset_fingerprint);
        for (std::size_t i = 0; i < 5; ++i) {
            const auto &a = r.models[i];
            const auto &b = back.models[i];
            CHECK(a.model == b.model);
            CHECK(a.train_accuracy == b.train_accuracy);
            CHECK(a.test_accuracy == b.test_accuracy);
            CHECK(a.generalization_gap == b.generalization_gap);
            CHECK(a.parameter_count == b.parameter_count);
            CHECK(a.test_metrics.accuracy == b.test_metrics.accuracy);
            CHECK(a.test_metrics.macro.precision == b.test_metrics.macro.precision);
            CHECK(a.test_metrics.macro.recall == b.test_metrics.macro.recall);
            CHECK(a.test_metrics.macro.f1 == b.test_metrics.macro.f1);
            CHECK(a.test_metrics.weighted.f1 == b.test_metrics.weighted.f1);
            CHECK(a.seed == b.seed);
        }
        CHECK(report_to_csv(back) == csv);
        // json -> csv -> json -> csv
        const auto via = report_from_json(report_to_json(back));
        CHECK(report_to_csv(via) == csv);
    }
    SECTION("svg panels") {
        const auto svg = report_to_svg(r);
        CHECK(count(svg, "class=\"panel\"") == 4);
        CHECK(count(svg, "class=\"bar-group\"") == 20);
        for (const auto &m : r.models) {
            CHECK(count(svg, std::string("data-model=\"") + model_name(m.model) + "\"") == 4);
        }
        CHECK(count(svg, "class=\"bar\"") == 5 * (2 + 1 + 1 + 3));
        CHECK(svg.find("<script") == std::string::npos);
    }
    SECTION("failed model renders without bars") {
        r.models[1].failed = true;
        r.models[1].error = "solver diverged <x>";
        const auto svg = report_to_svg(r);
        CHECK(count(svg, "class=\"bar-group\"") == 20);
        CHECK(count(svg, "class=\"bar\"") == 4 * 7);
        CHECK_THAT(svg, ContainsSubstring("rbf-svm: failed, no bars drawn (solver diverged &lt;x&gt;)"));
        const auto back = report_from_csv(report_to_csv(r));
        CHECK(back.models[1].failed);
        CHECK(back.models[1].error == "solver diverged <x>");
    }
    SECTION("malformed input") {
        CHECK_THROWS_AS(report_from_csv("bad\n"), SchemaError);
        CHECK_THROWS_AS(report_from_json("{"), ParseError);
        CHECK_THROWS_AS(parse_report_format("pdf"), ValidationError);
    }
}

TEST_CASE("report files", "[bench][report]") {
    const auto dir = std::filesystem::temp_directory_path() / "qstress_bench_report";
    std::filesystem::remove_all(dir);
    const auto &r = shared_report();
    const auto p = emit_report(r, ReportFormat::Json, dir.string());
    CHECK(slurp(p) == report_to_json(r));
    CHECK(slurp(emit_report(r, ReportFormat::Csv, dir.string())) == report_to_csv(r));
    CHECK(slurp(emit_report(r, ReportFormat::Svg, dir.string())) == report_to_svg(r));
    std::ofstream(dir / "blocker") << "x";
    CHECK_THROWS_AS(emit_report(r, ReportFormat::Json, (dir / "blocker" / "sub").string()), IoError);
    std::filesystem::remove_all(dir);
}
