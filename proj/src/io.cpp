#include "asbench/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace asbench {

namespace {

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> cells;
    std::string cur;
    for (const char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    return cells;
}

class CsvReader {
public:
    CsvReader(std::istream &in, std::string source) : in_(in), source_(std::move(source)) {}

    std::vector<std::string> header() {
        std::string line;
        if (!std::getline(in_, line)) {
            fail("missing header row");
        }
        ++line_no_;
        return split_csv(line);
    }

    bool next(std::vector<std::string> &cells, std::size_t expected) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (line.empty() || line == "\r") {
                continue;
            }
            cells = split_csv(line);
            if (cells.size() != expected) {
                fail("expected " + std::to_string(expected) + " fields, found " + std::to_string(cells.size()));
            }
            return true;
        }
        return false;
    }

    template <typename T>
    T number(const std::string &text) {
        T v{};
        const auto *end = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(text.data(), end, v);
        if (ec != std::errc{} || ptr != end) {
            // from_chars rejects "inf"/"nan" spellings of other printers; strtod does not.
            if constexpr (std::is_floating_point_v<T>) {
                char *e = nullptr;
                v = std::strtod(text.c_str(), &e);
                if (!text.empty() && e == text.c_str() + text.size()) {
                    return v;
                }
            }
            fail("bad number '" + text + "'");
        }
        return v;
    }

    [[noreturn]] void fail(const std::string &what) const {
        throw ParseError(source_ + ":" + std::to_string(line_no_) + ": " + what);
    }

private:
    std::istream &in_;
    std::string source_;
    int line_no_ = 0;
};

void expect_header(CsvReader &reader, const std::vector<std::string> &got, const std::vector<std::string> &want) {
    if (got.size() < want.size() || !std::equal(want.begin(), want.end(), got.begin())) {
        std::string w;
        for (const auto &s : want) {
            w += (w.empty() ? "" : ",") + s;
        }
        reader.fail("header must start with " + w);
    }
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }
    return std::string(buf, ptr);
}

void write_runs_csv(std::ostream &out, const RunTable &table) {
    out << "class_id,instance_id,algorithm,repetition,seed,best_f,evals_used,scale_factor,precision\n";
    for (const auto &r : table.records()) {
        out << r.class_id << ',' << r.instance_id << ',' << algorithm_name(r.algorithm) << ',' << r.repetition << ','
            << r.seed << ',' << format_double(r.best_f) << ',' << r.evals_used << ',' << format_double(r.scale_factor)
            << ',' << format_double(r.precision) << '\n';
    }
}

RunTable read_runs_csv(std::istream &in, const std::string &source) {
    CsvReader reader(in, source);
    const std::vector<std::string> want = {"class_id", "instance_id", "algorithm",   "repetition", "seed",
                                           "best_f",   "evals_used",  "scale_factor", "precision"};
    expect_header(reader, reader.header(), want);
    std::vector<RunRecord> records;
    std::vector<std::string> c;
    int max_rep = -1;
    while (reader.next(c, want.size())) {
        RunRecord r;
        r.class_id = reader.number<int>(c[0]);
        r.instance_id = reader.number<int>(c[1]);
        try {
            r.algorithm = parse_algorithm(c[2]);
        } catch (const std::invalid_argument &e) {
            reader.fail(e.what());
        }
        r.repetition = reader.number<int>(c[3]);
        r.seed = reader.number<std::uint64_t>(c[4]);
        r.best_f = reader.number<double>(c[5]);
        r.evals_used = reader.number<int>(c[6]);
        r.scale_factor = reader.number<double>(c[7]);
        r.precision = reader.number<double>(c[8]);
        max_rep = std::max(max_rep, r.repetition);
        records.push_back(r);
    }
    return RunTable(std::move(records), max_rep + 1);
}

void write_features_csv(std::ostream &out, const std::vector<InstanceFeatures> &rows) {
    out << "class_id,instance_id";
    if (!rows.empty()) {
        for (const auto &n : rows.front().features.names) {
            out << ',' << n;
        }
    }
    out << '\n';
    for (const auto &r : rows) {
        out << r.class_id << ',' << r.instance_id;
        for (const double v : r.features.values) {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
}

std::vector<InstanceFeatures> read_features_csv(std::istream &in, FeatureSet set, const std::string &source) {
    CsvReader reader(in, source);
    const auto header = reader.header();
    expect_header(reader, header, {"class_id", "instance_id"});
    const std::vector<std::string> names(header.begin() + 2, header.end());
    std::vector<InstanceFeatures> rows;
    std::vector<std::string> c;
    while (reader.next(c, header.size())) {
        InstanceFeatures r;
        r.class_id = reader.number<int>(c[0]);
        r.instance_id = reader.number<int>(c[1]);
        r.features.set = set;
        for (std::size_t j = 0; j < names.size(); ++j) {
            r.features.add(names[j], reader.number<double>(c[j + 2]));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_targets_csv(std::ostream &out, const TargetTable &table) {
    out << "class_id,instance_id,algorithm,kind,value\n";
    for (const auto &[key, values] : table.values) {
        for (const auto a : kPortfolio) {
            out << key.first << ',' << key.second << ',' << algorithm_name(a) << ',' << target_kind_name(table.kind)
                << ',' << format_double(values[algorithm_index(a)]) << '\n';
        }
    }
}

TargetTable read_targets_csv(std::istream &in, const std::string &source) {
    CsvReader reader(in, source);
    const std::vector<std::string> want = {"class_id", "instance_id", "algorithm", "kind", "value"};
    expect_header(reader, reader.header(), want);
    TargetTable t;
    std::map<InstanceKey, int> seen;
    std::vector<std::string> c;
    bool first = true;
    while (reader.next(c, want.size())) {
        const InstanceKey key{reader.number<int>(c[0]), reader.number<int>(c[1])};
        try {
            const auto a = parse_algorithm(c[2]);
            const auto kind = parse_target_kind(c[3]);
            if (first) {
                t.kind = kind;
                first = false;
            } else if (kind != t.kind) {
                reader.fail("mixed target kinds");
            }
            t.values[key][algorithm_index(a)] = reader.number<double>(c[4]);
            ++seen[key];
        } catch (const std::invalid_argument &e) {
            reader.fail(e.what());
        }
    }
    for (const auto &[key, n] : seen) {
        if (n != kPortfolioSize) {
            throw ParseError(source + ": instance " + std::to_string(key.first) + "/" + std::to_string(key.second) +
                             " does not list every algorithm exactly once");
        }
    }
    return t;
}

void write_suite_csv(std::ostream &out, const std::vector<ProblemInstance> &suite, int range_points,
                     std::uint64_t seed) {
    out << "class_id,instance_id,dim,f_opt,f_range_estimate\n";
    for (const auto &inst : suite) {
        out << inst.class_id << ',' << inst.instance_id << ',' << inst.dim << ',' << format_double(inst.f_opt) << ','
            << format_double(estimate_f_range(inst, range_points, seed)) << '\n';
    }
}

void write_file_atomic(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << text;
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace asbench
