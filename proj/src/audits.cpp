#include "asbench/audits.hpp"

#include "asbench/io.hpp"
#include "asbench/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace asbench {

namespace {

constexpr double kAlpha = 0.05;

std::uint64_t fold_seed(std::uint64_t base, SplitKind kind, int fold, MetaKind model) {
    return derive_seed({base, static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(fold),
                        static_cast<std::uint64_t>(model)});
}

const FeatureTable &features_for(const AuditData &data, FeatureSet set) {
    const auto it = data.features.find(set);
    if (it == data.features.end()) {
        throw std::invalid_argument("audit needs the '" + std::string(feature_set_name(set)) + "' feature set");
    }
    return it->second;
}

const FeatureTable &empty_features() {
    static const FeatureTable t;
    return t;
}

double mean_pre(const std::map<InstanceKey, RankVector> &predicted, const TargetTable &truth) {
    double s = 0.0;
    for (const auto &[key, r] : predicted) {
        s += pre(r, truth.at(key));
    }
    return s / static_cast<double>(predicted.size());
}

TestRecord wilcoxon_record(const EvaluationReport &rep, std::string name, std::string protocol, std::string metric,
                           std::string model_a, std::string model_b) {
    TestRecord t;
    t.name = std::move(name);
    t.test = "wilcoxon";
    t.protocol = protocol;
    t.metric = metric;
    t.models = {model_a, model_b};
    const auto a = rep.values(protocol, model_a, metric);
    const auto b = rep.values(protocol, model_b, metric);
    try {
        t.result = wilcoxon_signed_rank(a, b);
    } catch (const std::invalid_argument &e) {
        t.note = e.what();
        t.result.p_value = std::numeric_limits<double>::quiet_NaN();
    }
    return t;
}

std::string fmt(double v, const char *spec = "%.4g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

double median_of(std::vector<double> v) {
    if (v.empty()) {
        throw std::invalid_argument("median of empty sequence");
    }
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> EvaluationReport::values(std::string_view protocol, std::string_view model,
                                             std::string_view metric) const {
    std::vector<double> out;
    for (const auto &f : folds) {
        if (f.protocol == protocol && f.model == model && f.metric == metric) {
            out.push_back(f.value);
        }
    }
    return out;
}

std::optional<double> EvaluationReport::median(std::string_view protocol, std::string_view model,
                                               std::string_view metric) const {
    const auto v = values(protocol, model, metric);
    if (v.empty()) {
        return std::nullopt;
    }
    return median_of(v);
}

const TestRecord *EvaluationReport::find_test(std::string_view name) const {
    for (const auto &t : tests) {
        if (t.name == name) {
            return &t;
        }
    }
    return nullptr;
}

void EvaluationReport::merge(const EvaluationReport &other) {
    folds.insert(folds.end(), other.folds.begin(), other.folds.end());
    tests.insert(tests.end(), other.tests.begin(), other.tests.end());
    scale_table.insert(scale_table.end(), other.scale_table.begin(), other.scale_table.end());
    provenance.update(other.provenance);
}

EvaluationReport leakage_audit(const AuditData &data, const BenchConfig &config) {
    const auto seeds = stage_seeds(config);
    struct ModelSpec {
        MetaKind kind;
        const FeatureTable *features;
    };
    const std::vector<ModelSpec> models = {
        {MetaKind::Random, &empty_features()},
        {MetaKind::Mean, &empty_features()},
        {MetaKind::Ela, &features_for(data, FeatureSet::Ela)},
        {MetaKind::NonInformative, &features_for(data, FeatureSet::NonInformative)},
        {MetaKind::Class, &features_for(data, FeatureSet::Class)},
    };

    auto plans = lio_splits(data.keys, config.lio_test_fraction, config.lio_repeats, seeds.splits);
    const auto lpo = lpo_splits(data.keys);
    plans.insert(plans.end(), lpo.begin(), lpo.end());

    EvaluationReport rep;
    for (const auto &plan : plans) {
        for (const auto &m : models) {
            ForestParams params = config.forest;
            params.seed = fold_seed(seeds.forest, plan.kind, plan.fold_id, m.kind);
            const auto model = fit_meta(m.kind, *m.features, data.train_rank, plan.train, params,
                                        fold_seed(seeds.random_model, plan.kind, plan.fold_id, m.kind));
            const auto ranks = predict_ranks(model, *m.features, plan.test);
            rep.folds.push_back({"leakage", std::string(split_kind_name(plan.kind)), plan.fold_id,
                                 std::string(meta_kind_name(m.kind)), "pre", mean_pre(ranks, data.truth_rank)});
        }
    }
    for (const auto *protocol : {"LIO", "LPO"}) {
        const std::string p = protocol;
        rep.tests.push_back(wilcoxon_record(rep, p + " pre class vs mean", p, "pre", "class", "mean"));
        rep.tests.push_back(wilcoxon_record(rep, p + " pre non-inf vs mean", p, "pre", "non-inf", "mean"));
    }
    rep.provenance["leakage"] = {{"lio_folds", config.lio_repeats},
                                 {"lpo_folds", static_cast<int>(lpo.size())},
                                 {"lio_test_fraction", config.lio_test_fraction},
                                 {"split_seed", seeds.splits}};
    return rep;
}

EvaluationReport scale_audit(const AuditData &data, const BenchConfig &config) {
    const auto seeds = stage_seeds(config);
    const auto &scale = features_for(data, FeatureSet::Scale);
    struct ModelSpec {
        MetaKind kind;
        const TargetTable *targets;
        const FeatureTable *features;
    };
    const std::vector<ModelSpec> models = {
        {MetaKind::MeanPrecision, &data.train_precision, &empty_features()},
        {MetaKind::RfPrecision, &data.train_precision, &scale},
        {MetaKind::MeanRank, &data.train_rank, &empty_features()},
        {MetaKind::RfRank, &data.train_rank, &scale},
    };

    EvaluationReport rep;
    const auto plans = lpo_splits(data.keys);
    for (const auto &plan : plans) {
        for (const auto &m : models) {
            ForestParams params = config.forest;
            params.seed = fold_seed(seeds.forest, plan.kind, plan.fold_id, m.kind);
            const auto model = fit_meta(m.kind, *m.features, *m.targets, plan.train, params);
            const auto values = predict_values(model, *m.features, plan.test);
            const std::string name(meta_kind_name(m.kind));
            if (m.targets->kind == TargetKind::Precision) {
                std::vector<double> predicted;
                std::vector<double> truth;
                for (const auto &[key, v] : values) {
                    const auto &t = data.truth_precision.at(key);
                    predicted.insert(predicted.end(), v.begin(), v.end());
                    truth.insert(truth.end(), t.begin(), t.end());
                }
                rep.folds.push_back({"scale", "LPO", plan.fold_id, name, "mse", mse(predicted, truth)});
            }
            std::map<InstanceKey, RankVector> ranks;
            for (const auto &[key, v] : values) {
                ranks[key] = rank_algorithms(v);
            }
            rep.folds.push_back({"scale", "LPO", plan.fold_id, name, "pre", mean_pre(ranks, data.truth_rank)});
        }
    }

    rep.tests.push_back(wilcoxon_record(rep, "LPO mse rf-precision vs mean-precision", "LPO", "mse", "rf-precision",
                                        "mean-precision"));
    TestRecord fr;
    fr.name = "LPO pre friedman";
    fr.test = "friedman";
    fr.protocol = "LPO";
    fr.metric = "pre";
    std::vector<std::vector<double>> columns;
    for (const auto &m : models) {
        fr.models.emplace_back(meta_kind_name(m.kind));
        columns.push_back(rep.values("LPO", fr.models.back(), "pre"));
    }
    std::vector<std::vector<double>> matrix(columns.front().size(), std::vector<double>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        for (std::size_t i = 0; i < matrix.size(); ++i) {
            matrix[i][j] = columns[j][i];
        }
    }
    fr.result = friedman(matrix);
    rep.tests.push_back(fr);
    rep.provenance["scale"] = {{"lpo_folds", static_cast<int>(plans.size())}, {"feature", "f_scale"}};
    return rep;
}

std::vector<ScaleRow> rescaling_table(const BenchConfig &config) {
    const auto seeds = stage_seeds(config);
    const int n = config.samples_per_dim * config.dim;
    std::vector<ScaleRow> rows;
    for (const int c : config.scale_classes) {
        const auto base = make_instance(c, 1, config.dim);
        for (const double factor : config.scale_factors) {
            const auto inst = rescale(base, factor);
            // Seeds depend on (class, instance, algorithm, repetition) only, so
            // every factor replays the same trajectories.
            const auto table = run_portfolio({inst}, config.budget(), config.train_repetitions, seeds.scale_runs);
            const auto precision = build_targets(table, TargetKind::Precision);
            ScaleRow row;
            row.class_id = c;
            row.instance_id = 1;
            row.factor = factor;
            row.f_scale =
                scale_feature(lhs_sample(inst, n, sample_seed(seeds.samples, c, 1))).values.at(0);
            row.precision = precision.at({c, 1});
            row.rank = mean_ranks(table, c, 1);
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<CriterionResult> check_acceptance(const EvaluationReport &report) {
    std::vector<CriterionResult> out;
    auto med = [&](const char *protocol, const char *model, const char *metric) {
        const auto m = report.median(protocol, model, metric);
        if (!m) {
            throw std::invalid_argument(std::string("report has no ") + protocol + " " + metric + " values for " +
                                        model);
        }
        return *m;
    };
    auto run = [&](int id, const char *name, auto &&body) {
        CriterionResult r;
        r.id = id;
        r.name = name;
        try {
            body(r);
        } catch (const std::exception &e) {
            r.passed = false;
            r.detail = e.what();
        }
        out.push_back(r);
    };

    run(1, "random baseline PRE near 0.5", [&](CriterionResult &r) {
        const double lio = med("LIO", "random", "pre");
        const double lpo = med("LPO", "random", "pre");
        r.passed = lio >= 0.45 && lio <= 0.55 && lpo >= 0.45 && lpo <= 0.55;
        r.detail = "median LIO " + fmt(lio) + ", LPO " + fmt(lpo);
    });

    run(2, "LIO leakage ordering", [&](CriterionResult &r) {
        const double cls = med("LIO", "class", "pre");
        const double ela = med("LIO", "ela", "pre");
        const double ninf = med("LIO", "non-inf", "pre");
        const double mean = med("LIO", "mean", "pre");
        const double rnd = med("LIO", "random", "pre");
        const bool order = cls < ela && cls < ninf && ela < mean && ninf < mean && mean < rnd;
        r.passed = order && cls <= 0.15 && mean - cls >= 0.10;
        r.detail = "class " + fmt(cls) + ", ela " + fmt(ela) + ", non-inf " + fmt(ninf) + ", mean " + fmt(mean) +
                   ", random " + fmt(rnd);
    });

    run(3, "LPO collapse", [&](CriterionResult &r) {
        const double mean = med("LPO", "mean", "pre");
        bool ok = true;
        for (const char *m : {"class", "non-inf"}) {
            const double v = med("LPO", m, "pre");
            const auto *t = report.find_test(std::string("LPO pre ") + m + " vs mean");
            if (t == nullptr) {
                throw std::invalid_argument(std::string("missing LPO test for ") + m);
            }
            const double p = t->result.p_value;
            ok = ok && std::fabs(v - mean) <= 0.07 && p >= kAlpha;
            r.detail += std::string(r.detail.empty() ? "" : "; ") + m + " " + fmt(v) + " vs mean " + fmt(mean) +
                        " (wilcoxon p " + fmt(p) + ")";
        }
        r.passed = ok;
    });

    run(4, "precision MSE illusion", [&](CriterionResult &r) {
        const auto rf = report.values("LPO", "rf-precision", "mse");
        const auto mean = report.values("LPO", "mean-precision", "mse");
        if (rf.size() != mean.size() || rf.empty()) {
            throw std::invalid_argument("unpaired MSE folds");
        }
        int wins = 0;
        std::vector<double> ratios;
        for (std::size_t i = 0; i < rf.size(); ++i) {
            wins += rf[i] < mean[i];
            ratios.push_back(rf[i] > 0.0 ? mean[i] / rf[i] : std::numeric_limits<double>::infinity());
        }
        const double ratio = median_of(ratios);
        const auto *t = report.find_test("LPO mse rf-precision vs mean-precision");
        const double p = t ? t->result.p_value : std::numeric_limits<double>::quiet_NaN();
        r.passed = wins >= 20 && ratio >= 10.0 && p < kAlpha;
        r.detail = "rf better in " + std::to_string(wins) + "/" + std::to_string(rf.size()) +
                   " folds, median ratio " + fmt(ratio) + ", wilcoxon p " + fmt(p);
    });

    run(5, "PRE equalization", [&](CriterionResult &r) {
        const auto *t = report.find_test("LPO pre friedman");
        if (t == nullptr) {
            throw std::invalid_argument("missing Friedman test");
        }
        r.passed = t->result.p_value >= kAlpha;
        r.detail = "friedman chi2 " + fmt(t->result.statistic) + ", p " + fmt(t->result.p_value);
    });

    run(6, "rescaling dichotomy", [&](CriterionResult &r) {
        if (report.scale_table.empty()) {
            throw std::invalid_argument("empty rescaling table");
        }
        auto close = [](double got, double want) {
            return std::fabs(got - want) <= 1e-6 * std::max(std::fabs(want), std::numeric_limits<double>::min());
        };
        bool ranks_ok = true;
        bool prec_ok = true;
        bool scale_ok = true;
        int groups = 0;
        for (const auto &ref : report.scale_table) {
            if (&ref != &report.scale_table.front() && ref.class_id == (&ref - 1)->class_id) {
                continue;
            }
            ++groups;
            for (const auto &row : report.scale_table) {
                if (row.class_id != ref.class_id || row.instance_id != ref.instance_id) {
                    continue;
                }
                const double k = row.factor / ref.factor;
                ranks_ok = ranks_ok && row.rank == ref.rank;
                for (int a = 0; a < kPortfolioSize; ++a) {
                    prec_ok = prec_ok && close(row.precision[a], k * ref.precision[a]);
                }
                scale_ok = scale_ok && close(row.f_scale, k * ref.f_scale);
            }
        }
        r.passed = ranks_ok && prec_ok && scale_ok;
        r.detail = std::to_string(groups) + " instances x " +
                   std::to_string(report.scale_table.size() / std::max(groups, 1)) + " factors: ranks " +
                   (ranks_ok ? "identical" : "DIFFER") + ", precision " + (prec_ok ? "proportional" : "NOT proportional") +
                   ", f_scale " + (scale_ok ? "proportional" : "NOT proportional");
    });
    return out;
}

nlohmann::json report_to_json(const EvaluationReport &report) {
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["provenance"] = report.provenance;
    auto &folds = j["folds"] = nlohmann::json::array();
    for (const auto &f : report.folds) {
        folds.push_back({{"audit", f.audit},
                         {"protocol", f.protocol},
                         {"fold", f.fold},
                         {"model", f.model},
                         {"metric", f.metric},
                         {"value", f.value}});
    }
    auto &tests = j["tests"] = nlohmann::json::array();
    for (const auto &t : report.tests) {
        nlohmann::json jt = {{"name", t.name},
                             {"test", t.test},
                             {"protocol", t.protocol},
                             {"metric", t.metric},
                             {"models", t.models},
                             {"statistic", t.result.statistic},
                             {"n", t.result.n}};
        jt["p_value"] = std::isnan(t.result.p_value) ? nlohmann::json(nullptr) : nlohmann::json(t.result.p_value);
        if (!t.note.empty()) {
            jt["note"] = t.note;
        }
        tests.push_back(jt);
    }
    auto &table = j["scale_table"] = nlohmann::json::array();
    for (const auto &r : report.scale_table) {
        table.push_back({{"class_id", r.class_id},
                         {"instance_id", r.instance_id},
                         {"factor", r.factor},
                         {"f_scale", r.f_scale},
                         {"precision", r.precision},
                         {"rank", r.rank}});
    }
    auto &medians = j["medians"] = nlohmann::json::object();
    for (const auto &f : report.folds) {
        const auto key = f.protocol + " " + f.metric + " " + f.model;
        if (!medians.contains(key)) {
            medians[key] = *report.median(f.protocol, f.model, f.metric);
        }
    }
    return j;
}

EvaluationReport report_from_json(const nlohmann::json &j) {
    EvaluationReport r;
    try {
        r.provenance = j.at("provenance");
        for (const auto &f : j.at("folds")) {
            r.folds.push_back({f.at("audit").get<std::string>(), f.at("protocol").get<std::string>(),
                               f.at("fold").get<int>(), f.at("model").get<std::string>(),
                               f.at("metric").get<std::string>(), f.at("value").get<double>()});
        }
        for (const auto &jt : j.at("tests")) {
            TestRecord t;
            t.name = jt.at("name").get<std::string>();
            t.test = jt.at("test").get<std::string>();
            t.protocol = jt.at("protocol").get<std::string>();
            t.metric = jt.at("metric").get<std::string>();
            t.models = jt.at("models").get<std::vector<std::string>>();
            t.result.statistic = jt.at("statistic").get<double>();
            t.result.n = jt.at("n").get<int>();
            const auto &p = jt.at("p_value");
            t.result.p_value = p.is_null() ? std::numeric_limits<double>::quiet_NaN() : p.get<double>();
            t.note = jt.value("note", "");
            r.tests.push_back(t);
        }
        for (const auto &jr : j.at("scale_table")) {
            ScaleRow row;
            row.class_id = jr.at("class_id").get<int>();
            row.instance_id = jr.at("instance_id").get<int>();
            row.factor = jr.at("factor").get<double>();
            row.f_scale = jr.at("f_scale").get<double>();
            row.precision = jr.at("precision").get<AlgorithmValues>();
            row.rank = jr.at("rank").get<RankVector>();
            r.scale_table.push_back(row);
        }
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("report: ") + e.what());
    }
    return r;
}

std::string folds_csv(const EvaluationReport &report) {
    std::string out = "audit,protocol,fold,model,metric,value\n";
    for (const auto &f : report.folds) {
        out += f.audit + "," + f.protocol + "," + std::to_string(f.fold) + "," + f.model + "," + f.metric + "," +
               format_double(f.value) + "\n";
    }
    return out;
}

std::string plotdata_fig1(const EvaluationReport &report) {
    std::string out = "protocol,fold,model,pre\n";
    for (const auto &f : report.folds) {
        if (f.audit == "leakage" && f.metric == "pre") {
            out += f.protocol + "," + std::to_string(f.fold) + "," + f.model + "," + format_double(f.value) + "\n";
        }
    }
    return out;
}

std::string plotdata_fig2(const EvaluationReport &report) {
    std::string out = "class_id,instance_id,factor,f_scale,algorithm,precision,rank\n";
    for (const auto &r : report.scale_table) {
        for (const auto a : kPortfolio) {
            const int i = algorithm_index(a);
            out += std::to_string(r.class_id) + "," + std::to_string(r.instance_id) + "," + format_double(r.factor) +
                   "," + format_double(r.f_scale) + "," + std::string(algorithm_name(a)) + "," +
                   format_double(r.precision[i]) + "," + format_double(r.rank[i]) + "\n";
        }
    }
    return out;
}

std::string plotdata_fig3(const EvaluationReport &report) {
    std::string out = "fold,model,metric,value\n";
    for (const auto &f : report.folds) {
        if (f.audit == "scale") {
            out += std::to_string(f.fold) + "," + f.model + "," + f.metric + "," + format_double(f.value) + "\n";
        }
    }
    return out;
}

std::string render_report(const EvaluationReport &report) {
    std::ostringstream os;
    auto table = [&](const char *title, const std::vector<const char *> &protocols,
                     const std::vector<const char *> &models, const char *metric, const char *spec) {
        bool any = false;
        for (const auto *p : protocols) {
            for (const auto *m : models) {
                any = any || report.median(p, m, metric).has_value();
            }
        }
        if (!any) {
            return;
        }
        os << title << "\n";
        char buf[128];
        std::snprintf(buf, sizeof buf, "  %-16s", "model");
        os << buf;
        for (const auto *p : protocols) {
            std::snprintf(buf, sizeof buf, "%14s", p);
            os << buf;
        }
        os << "\n";
        for (const auto *m : models) {
            std::snprintf(buf, sizeof buf, "  %-16s", m);
            os << buf;
            for (const auto *p : protocols) {
                const auto v = report.median(p, m, metric);
                std::snprintf(buf, sizeof buf, "%14s", v ? fmt(*v, spec).c_str() : "-");
                os << buf;
            }
            os << "\n";
        }
        os << "\n";
    };
    table("Median PRE (leakage audit)", {"LIO", "LPO"}, {"random", "mean", "ela", "non-inf", "class"}, "pre",
          "%.4f");
    table("Median MSE (scale audit)", {"LPO"}, {"mean-precision", "rf-precision"}, "mse", "%.4g");
    table("Median PRE (scale audit)", {"LPO"}, {"mean-precision", "mean-rank", "rf-precision", "rf-rank"}, "pre",
          "%.4f");

    if (!report.tests.empty()) {
        os << "Tests\n";
        for (const auto &t : report.tests) {
            os << "  " << t.name << ": " << t.test << " statistic " << fmt(t.result.statistic) << ", p "
               << (std::isnan(t.result.p_value) ? std::string("n/a") : fmt(t.result.p_value));
            if (!t.note.empty()) {
                os << " (" << t.note << ")";
            }
            os << "\n";
        }
        os << "\n";
    }
    if (!report.scale_table.empty()) {
        os << "Rescaling table\n";
        for (const auto &r : report.scale_table) {
            os << "  class " << r.class_id << " instance " << r.instance_id << " factor " << fmt(r.factor)
               << " f_scale " << fmt(r.f_scale) << "\n";
            for (const auto a : kPortfolio) {
                const int i = algorithm_index(a);
                char buf[128];
                std::snprintf(buf, sizeof buf, "    %-6s precision %-12.6g rank %.3f\n",
                              std::string(algorithm_name(a)).c_str(), r.precision[i], r.rank[i]);
                os << buf;
            }
        }
        os << "\n";
    }
    os << "Acceptance\n";
    for (const auto &c : check_acceptance(report)) {
        os << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.id << " " << c.name << ": " << c.detail << "\n";
    }
    return os.str();
}

} // namespace asbench
