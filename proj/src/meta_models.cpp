#include "asbench/meta_models.hpp"

#include "asbench/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace asbench {

namespace {

struct KindName {
    MetaKind kind;
    std::string_view name;
};

constexpr KindName kKindNames[] = {
    {MetaKind::Random, "random"},
    {MetaKind::Mean, "mean"},
    {MetaKind::Ela, "ela"},
    {MetaKind::NonInformative, "non-inf"},
    {MetaKind::Class, "class"},
    {MetaKind::MeanPrecision, "mean-precision"},
    {MetaKind::MeanRank, "mean-rank"},
    {MetaKind::RfPrecision, "rf-precision"},
    {MetaKind::RfRank, "rf-rank"},
};

std::string key_text(const InstanceKey &key) {
    return std::to_string(key.first) + "/" + std::to_string(key.second);
}

const FeatureVector &feature_row(const FeatureTable &features, const InstanceKey &key) {
    const auto it = features.find(key);
    if (it == features.end()) {
        throw std::invalid_argument("no features for instance " + key_text(key));
    }
    return it->second;
}

// Reorders `fv` to `names`, failing on any missing name.
std::vector<double> aligned_values(const FeatureVector &fv, const std::vector<std::string> &names) {
    if (fv.names == names) {
        return fv.values;
    }
    std::vector<double> out;
    out.reserve(names.size());
    for (const auto &n : names) {
        const auto v = fv.find(n);
        if (!v) {
            throw std::invalid_argument("missing feature '" + n + "'");
        }
        out.push_back(*v);
    }
    return out;
}

} // namespace

std::string_view meta_kind_name(MetaKind kind) {
    for (const auto &kn : kKindNames) {
        if (kn.kind == kind) {
            return kn.name;
        }
    }
    return "?";
}

MetaKind parse_meta_kind(std::string_view name) {
    for (const auto &kn : kKindNames) {
        if (kn.name == name) {
            return kn.kind;
        }
    }
    if (name == "noninf") {
        return MetaKind::NonInformative;
    }
    throw std::invalid_argument("unknown meta-model kind '" + std::string(name) + "'");
}

bool is_constant_kind(MetaKind kind) {
    return kind == MetaKind::Random || kind == MetaKind::Mean || kind == MetaKind::MeanRank ||
           kind == MetaKind::MeanPrecision;
}

FeatureTable to_feature_table(const std::vector<InstanceFeatures> &rows) {
    FeatureTable t;
    for (const auto &r : rows) {
        t[{r.class_id, r.instance_id}] = r.features;
    }
    return t;
}

AlgorithmValues MetaModel::predict(const InstanceKey &key, const FeatureVector *features) const {
    AlgorithmValues out{};
    if (kind == MetaKind::Random) {
        Rng rng(derive_seed({seed, static_cast<std::uint64_t>(key.first), static_cast<std::uint64_t>(key.second)}));
        std::iota(out.begin(), out.end(), 1.0);
        rng.shuffle(out.begin(), out.end());
        return out;
    }
    if (is_constant_kind(kind)) {
        return constants;
    }
    if (features == nullptr) {
        throw std::invalid_argument("model '" + std::string(meta_kind_name(kind)) + "' needs features");
    }
    const auto x = aligned_values(*features, feature_names);
    for (int a = 0; a < kPortfolioSize; ++a) {
        out[a] = forests[a].predict(x);
    }
    return out;
}

MetaModel fit_meta(MetaKind kind, const FeatureTable &features, const TargetTable &targets,
                   const std::vector<InstanceKey> &train, const ForestParams &params, std::uint64_t seed) {
    if (train.empty()) {
        throw std::invalid_argument("empty training set");
    }
    MetaModel m;
    m.kind = kind;
    m.seed = seed;
    if (kind == MetaKind::Random) {
        return m;
    }
    if (is_constant_kind(kind)) {
        for (const auto &key : train) {
            const auto &t = targets.at(key);
            for (int a = 0; a < kPortfolioSize; ++a) {
                m.constants[a] += t[a];
            }
        }
        for (auto &v : m.constants) {
            v /= static_cast<double>(train.size());
        }
        return m;
    }

    m.feature_names = feature_row(features, train.front()).names;
    FeatureMatrix x(train.size(), m.feature_names.size());
    std::array<std::vector<double>, kPortfolioSize> y;
    for (std::size_t r = 0; r < train.size(); ++r) {
        const auto row = aligned_values(feature_row(features, train[r]), m.feature_names);
        std::copy(row.begin(), row.end(), x.data.begin() + static_cast<std::ptrdiff_t>(r * x.cols));
        const auto &t = targets.at(train[r]);
        for (int a = 0; a < kPortfolioSize; ++a) {
            y[a].push_back(t[a]);
        }
    }
    m.forests.resize(kPortfolioSize);
    for (int a = 0; a < kPortfolioSize; ++a) {
        ForestParams p = params;
        p.seed = derive_seed({params.seed, static_cast<std::uint64_t>(a)});
        m.forests[a] = fit_forest(x, y[a], p, m.feature_names);
    }
    return m;
}

std::map<InstanceKey, AlgorithmValues> predict_values(const MetaModel &model, const FeatureTable &features,
                                                      const std::vector<InstanceKey> &keys) {
    std::map<InstanceKey, AlgorithmValues> out;
    for (const auto &key : keys) {
        const FeatureVector *fv = nullptr;
        if (!is_constant_kind(model.kind)) {
            fv = &feature_row(features, key);
        }
        out[key] = model.predict(key, fv);
    }
    return out;
}

std::map<InstanceKey, RankVector> predict_ranks(const MetaModel &model, const FeatureTable &features,
                                                const std::vector<InstanceKey> &keys) {
    std::map<InstanceKey, RankVector> out;
    for (const auto &[key, v] : predict_values(model, features, keys)) {
        out[key] = rank_algorithms(v);
    }
    return out;
}

void to_json(nlohmann::json &j, const MetaModel &m) {
    j = nlohmann::json{{"kind", meta_kind_name(m.kind)}, {"seed", m.seed}};
    if (m.kind != MetaKind::Random && is_constant_kind(m.kind)) {
        j["constants"] = m.constants;
    }
    if (!m.forests.empty()) {
        j["feature_names"] = m.feature_names;
        j["forests"] = m.forests;
    }
}

} // namespace asbench
