#include "asbench/config.hpp"

#include "asbench/rng.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace asbench {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T v{};
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("config: bad value '" + std::string(text) + "' for " + std::string(key));
    }
    return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw std::invalid_argument("config: bad boolean '" + std::string(text) + "' for " + std::string(key));
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (const char ch : text) {
        if (ch == ',' || ch == ' ') {
            if (!cur.empty()) {
                out.push_back(cur);
            }
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) {
        out.push_back(cur);
    }
    return out;
}

template <typename T, typename F>
std::string join(const std::vector<T> &v, F fmt) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) {
            s += ",";
        }
        s += fmt(v[i]);
    }
    return s;
}

struct Entry {
    const char *key;
    std::function<void(BenchConfig &, std::string_view)> set;
    std::function<std::string(const BenchConfig &)> get;
    /// false for keys that cannot change results.
    bool affects_results = true;
};

#define INT_ENTRY(name, member)                                                                  \
    Entry {                                                                                      \
        name, [](BenchConfig &c, std::string_view v) { c.member = parse_number<int>(name, v); }, \
            [](const BenchConfig &c) { return std::to_string(c.member); }                        \
    }

const std::vector<Entry> &entries() {
    static const std::vector<Entry> table = {
        INT_ENTRY("suite.dim", dim),
        INT_ENTRY("suite.instances_per_class", instances_per_class),
        INT_ENTRY("portfolio.budget_per_dim", budget_per_dim),
        INT_ENTRY("portfolio.train_repetitions", train_repetitions),
        INT_ENTRY("portfolio.truth_repetitions", truth_repetitions),
        INT_ENTRY("features.samples_per_dim", samples_per_dim),
        {"features.sets",
         [](BenchConfig &c, std::string_view v) {
             c.feature_sets.clear();
             for (const auto &s : split_list(v)) {
                 c.feature_sets.push_back(parse_feature_set(s));
             }
         },
         [](const BenchConfig &c) {
             return join(c.feature_sets, [](FeatureSet s) { return std::string(feature_set_name(s)); });
         }},
        INT_ENTRY("features.noninf_count", noninf_count),
        INT_ENTRY("forest.n_trees", forest.n_trees),
        INT_ENTRY("forest.max_depth", forest.max_depth),
        INT_ENTRY("forest.min_samples_split", forest.min_samples_split),
        INT_ENTRY("forest.min_samples_leaf", forest.min_samples_leaf),
        {"forest.max_features",
         [](BenchConfig &c, std::string_view v) { c.forest.max_features = parse_number<double>("forest.max_features", v); },
         [](const BenchConfig &c) { return fmt_double(c.forest.max_features); }},
        {"forest.bootstrap", [](BenchConfig &c, std::string_view v) { c.forest.bootstrap = parse_bool("forest.bootstrap", v); },
         [](const BenchConfig &c) { return std::string(c.forest.bootstrap ? "true" : "false"); }},
        {"splits.lio_test_fraction",
         [](BenchConfig &c, std::string_view v) { c.lio_test_fraction = parse_number<double>("splits.lio_test_fraction", v); },
         [](const BenchConfig &c) { return fmt_double(c.lio_test_fraction); }},
        INT_ENTRY("splits.lio_repeats", lio_repeats),
        {"audit.leakage", [](BenchConfig &c, std::string_view v) { c.leakage_audit = parse_bool("audit.leakage", v); },
         [](const BenchConfig &c) { return std::string(c.leakage_audit ? "true" : "false"); }},
        {"audit.scale", [](BenchConfig &c, std::string_view v) { c.scale_audit = parse_bool("audit.scale", v); },
         [](const BenchConfig &c) { return std::string(c.scale_audit ? "true" : "false"); }},
        {"audit.scale_classes",
         [](BenchConfig &c, std::string_view v) {
             c.scale_classes.clear();
             for (const auto &s : split_list(v)) {
                 c.scale_classes.push_back(parse_number<int>("audit.scale_classes", s));
             }
         },
         [](const BenchConfig &c) { return join(c.scale_classes, [](int v) { return std::to_string(v); }); }},
        {"audit.scale_factors",
         [](BenchConfig &c, std::string_view v) {
             c.scale_factors.clear();
             for (const auto &s : split_list(v)) {
                 c.scale_factors.push_back(parse_number<double>("audit.scale_factors", s));
             }
         },
         [](const BenchConfig &c) { return join(c.scale_factors, fmt_double); }},
        {"run.master_seed",
         [](BenchConfig &c, std::string_view v) { c.master_seed = parse_number<std::uint64_t>("run.master_seed", v); },
         [](const BenchConfig &c) { return std::to_string(c.master_seed); }},
        {"run.output_dir", [](BenchConfig &c, std::string_view v) { c.output_dir = std::string(v); },
         [](const BenchConfig &c) { return c.output_dir.string(); }, false},
        {"run.threads", [](BenchConfig &c, std::string_view v) { c.threads = parse_number<int>("run.threads", v); },
         [](const BenchConfig &c) { return std::to_string(c.threads); }, false},
    };
    return table;
}

#undef INT_ENTRY

const Entry &find_entry(std::string_view key) {
    for (const auto &e : entries()) {
        if (key == e.key) {
            return e;
        }
    }
    throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
}

std::string canonical(const BenchConfig &c, const std::vector<std::string> &prefixes) {
    std::string out;
    for (const auto &e : entries()) {
        if (!e.affects_results) {
            continue;
        }
        const std::string_view key = e.key;
        bool selected = prefixes.empty();
        for (const auto &p : prefixes) {
            selected = selected || key.starts_with(p);
        }
        if (selected) {
            out += key;
            out += '=';
            out += e.get(c);
            out += '\n';
        }
    }
    return out;
}

} // namespace

void BenchConfig::validate() const {
    auto positive = [](int v, const char *name) {
        if (v < 1) {
            throw std::invalid_argument(std::string("config: ") + name + " must be positive");
        }
    };
    positive(dim, "suite.dim");
    positive(instances_per_class, "suite.instances_per_class");
    positive(budget_per_dim, "portfolio.budget_per_dim");
    positive(train_repetitions, "portfolio.train_repetitions");
    positive(truth_repetitions, "portfolio.truth_repetitions");
    positive(samples_per_dim, "features.samples_per_dim");
    positive(noninf_count, "features.noninf_count");
    positive(lio_repeats, "splits.lio_repeats");
    if (dim < 2 || dim > kMaxDim) {
        throw std::invalid_argument("config: suite.dim out of range");
    }
    if (!(lio_test_fraction > 0.0 && lio_test_fraction < 1.0)) {
        throw std::invalid_argument("config: splits.lio_test_fraction must lie in (0, 1)");
    }
    for (const double f : scale_factors) {
        if (!(f > 0.0)) {
            throw std::invalid_argument("config: audit.scale_factors must be positive");
        }
    }
    for (const int c : scale_classes) {
        if (c < 1 || c > kNumClasses) {
            throw std::invalid_argument("config: audit.scale_classes out of range");
        }
    }
    forest.validate();
}

BenchConfig parse_config(std::string_view text) {
    boost::property_tree::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error &e) {
        throw std::invalid_argument("config: line " + std::to_string(e.line()) + ": " + e.message());
    }
    BenchConfig c;
    for (const auto &[section, body] : tree) {
        if (body.empty()) {
            throw std::invalid_argument("config: key '" + section + "' outside a section");
        }
        for (const auto &[key, value] : body) {
            find_entry(section + "." + key).set(c, value.data());
        }
    }
    c.validate();
    return c;
}

BenchConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void set_config_value(BenchConfig &config, std::string_view dotted_key, std::string_view value) {
    find_entry(dotted_key).set(config, value);
}

std::string to_ini(const BenchConfig &config) {
    std::string out;
    std::string section;
    for (const auto &e : entries()) {
        const std::string_view key = e.key;
        const auto dot = key.find('.');
        const auto sec = std::string(key.substr(0, dot));
        if (sec != section) {
            if (!section.empty()) {
                out += '\n';
            }
            out += "[" + sec + "]\n";
            section = sec;
        }
        out += std::string(key.substr(dot + 1)) + " = " + e.get(config) + "\n";
    }
    return out;
}

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string s;
    for (unsigned int i = 0; i < len; ++i) {
        s += hex[md[i] >> 4];
        s += hex[md[i] & 15];
    }
    return s;
}

std::string config_digest(const BenchConfig &config) {
    return sha256_hex(canonical(config, {}));
}

StageSeeds stage_seeds(const BenchConfig &config) {
    const auto m = config.master_seed;
    return {derive_seed({m, 1}), derive_seed({m, 2}), derive_seed({m, 3}), derive_seed({m, 4}),
            derive_seed({m, 5}), derive_seed({m, 6}), derive_seed({m, 7}), derive_seed({m, 8})};
}

std::map<std::string, std::string> stage_digests(const BenchConfig &config) {
    const auto base = canonical(config, {"suite.", "run."});
    const auto runs = base + canonical(config, {"portfolio.budget_per_dim"});
    std::map<std::string, std::string> d;
    d["runs-train"] = sha256_hex("runs-train\n" + runs + canonical(config, {"portfolio.train_repetitions"}));
    d["runs-truth"] = sha256_hex("runs-truth\n" + runs + canonical(config, {"portfolio.truth_repetitions"}));
    const auto features = base + canonical(config, {"features.samples_per_dim"});
    for (const auto set : {FeatureSet::Ela, FeatureSet::NonInformative, FeatureSet::Class, FeatureSet::Scale}) {
        auto text = "features-" + std::string(feature_set_name(set)) + "\n" + features;
        if (set == FeatureSet::NonInformative) {
            text += canonical(config, {"features.noninf_count"});
        }
        d["features-" + std::string(feature_set_name(set))] = sha256_hex(text);
    }
    d["targets-train"] = sha256_hex("targets\n" + d["runs-train"]);
    d["targets-truth"] = sha256_hex("targets\n" + d["runs-truth"]);
    std::string upstream;
    for (const auto &[k, v] : d) {
        upstream += k + "=" + v + "\n";
    }
    d["audit"] = sha256_hex("audit\n" + upstream + canonical(config, {"forest.", "splits.", "audit.", "portfolio."}));
    return d;
}

} // namespace asbench
