#include "asbench/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace asbench {

std::vector<double> rank_with_ties(std::span<const double> values) {
    const auto n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) {
            ++j;
        }
        // positions i..j-1 (0-based) share rank mean(i+1..j)
        const double r = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            ranks[order[k]] = r;
        }
        i = j;
    }
    return ranks;
}

RankVector rank_algorithms(const AlgorithmValues &values) {
    const auto r = rank_with_ties(values);
    RankVector out{};
    std::copy(r.begin(), r.end(), out.begin());
    return out;
}

RankVector mean_ranks(const RunTable &table, int class_id, int instance_id) {
    std::array<std::vector<RunRecord>, kPortfolioSize> runs;
    for (const auto a : kPortfolio) {
        try {
            runs[algorithm_index(a)] = table.lookup(class_id, instance_id, a);
        } catch (const std::out_of_range &) {
            throw std::invalid_argument("incomplete run table: no runs of " + std::string(algorithm_name(a)) +
                                        " on class " + std::to_string(class_id) + " instance " +
                                        std::to_string(instance_id));
        }
    }
    const auto reps = runs[0].size();
    for (const auto &r : runs) {
        if (r.size() != reps || reps == 0) {
            throw std::invalid_argument("incomplete run table: unequal repetition counts on class " +
                                        std::to_string(class_id) + " instance " + std::to_string(instance_id));
        }
    }
    RankVector acc{};
    for (std::size_t rep = 0; rep < reps; ++rep) {
        AlgorithmValues v{};
        for (int a = 0; a < kPortfolioSize; ++a) {
            if (runs[a][rep].repetition != static_cast<int>(rep)) {
                throw std::invalid_argument("incomplete run table: missing repetition " + std::to_string(rep));
            }
            v[a] = runs[a][rep].precision;
        }
        const auto r = rank_algorithms(v);
        for (int a = 0; a < kPortfolioSize; ++a) {
            acc[a] += r[a];
        }
    }
    for (auto &v : acc) {
        v /= static_cast<double>(reps);
    }
    return acc;
}

double target_precision(const RunRecord &record, const ProblemInstance &instance) {
    if (record.class_id != instance.class_id || record.instance_id != instance.instance_id) {
        throw IntegrityError("run record does not belong to instance " + std::to_string(instance.class_id) + "/" +
                             std::to_string(instance.instance_id));
    }
    const double p = record.best_f - instance.f_opt;
    if (p < 0.0) {
        throw IntegrityError("best_f below f_opt on class " + std::to_string(instance.class_id) + " instance " +
                             std::to_string(instance.instance_id));
    }
    return p;
}

std::string_view target_kind_name(TargetKind kind) {
    return kind == TargetKind::Rank ? "rank" : "precision";
}

TargetKind parse_target_kind(std::string_view name) {
    if (name == "rank") {
        return TargetKind::Rank;
    }
    if (name == "precision") {
        return TargetKind::Precision;
    }
    throw std::invalid_argument("unknown target kind '" + std::string(name) + "'");
}

const AlgorithmValues &TargetTable::at(const InstanceKey &key) const {
    const auto it = values.find(key);
    if (it == values.end()) {
        throw std::out_of_range("no targets for class " + std::to_string(key.first) + " instance " +
                                std::to_string(key.second));
    }
    return it->second;
}

TargetTable build_targets(const RunTable &table, TargetKind kind) {
    if (!table.complete()) {
        throw std::invalid_argument("incomplete run table");
    }
    TargetTable out;
    out.kind = kind;
    for (const auto &[c, i] : table.instance_keys()) {
        if (kind == TargetKind::Rank) {
            out.values[{c, i}] = mean_ranks(table, c, i);
            continue;
        }
        AlgorithmValues v{};
        for (const auto a : kPortfolio) {
            const auto runs = table.lookup(c, i, a);
            double s = 0.0;
            for (const auto &r : runs) {
                if (r.precision < 0.0) {
                    throw IntegrityError("negative precision in run table");
                }
                s += r.precision;
            }
            v[algorithm_index(a)] = s / static_cast<double>(runs.size());
        }
        out.values[{c, i}] = v;
    }
    return out;
}

} // namespace asbench
