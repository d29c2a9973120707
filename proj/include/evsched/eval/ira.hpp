#pragma once

#include <atomic>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "evsched/agents/classifier.hpp"
#include "evsched/eval/corpus.hpp"

namespace evsched::eval {

namespace detail {

// Index-stable bounded fan-out: worker k writes only to its own slots, so
// aggregation order never depends on scheduling.
template <typename Fn>
void parallel_for(size_t count, int jobs, Fn&& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<size_t>(jobs));
    for (int k = 0; k < jobs; ++k)
        workers.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& w : workers) w.join();
}

}  // namespace detail

// Counts of classification outcomes per metric row. Probabilities are
// normalized over classified outcomes; errors (out-of-set picks, gateway
// failures) are tallied separately and only enter the IRA denominator.
struct ConfusionMatrix {
    std::map<PerformanceMetric, std::map<OpClass, int>> counts;
    std::map<PerformanceMetric, int> errors;

    int classified_total(PerformanceMetric m) const {
        int total = 0;
        auto it = counts.find(m);
        if (it != counts.end())
            for (const auto& [cls, n] : it->second) total += n;
        return total;
    }

    int row_total(PerformanceMetric m) const {
        auto it = errors.find(m);
        return classified_total(m) + (it != errors.end() ? it->second : 0);
    }

    // p_{i -> J}; rows sum to 1 over the classes whenever anything classified.
    double probability(PerformanceMetric m, OpClass j) const {
        const int total = classified_total(m);
        if (total == 0) return 0.0;
        auto it = counts.find(m);
        auto jt = it->second.find(j);
        return jt == it->second.end() ? 0.0 : static_cast<double>(jt->second) / total;
    }
};

inline void to_json(nlohmann::json& j, const ConfusionMatrix& cm) {
    nlohmann::json rows = nlohmann::json::object();
    for (const auto& [m, row] : cm.counts) {
        nlohmann::json r = nlohmann::json::object();
        for (const auto& [cls, n] : row) r[to_string(cls)] = n;
        rows[to_string(m)] = r;
    }
    nlohmann::json errs = nlohmann::json::object();
    for (const auto& [m, n] : cm.errors) errs[to_string(m)] = n;
    j = {{"rows", rows}, {"errors", errs}};
}

inline void from_json(const nlohmann::json& j, ConfusionMatrix& cm) {
    cm.counts.clear();
    cm.errors.clear();
    for (const auto& [mk, row] : j.at("rows").items()) {
        const auto m = parse_metric(mk);
        if (!m) throw Error("confusion matrix: unknown metric " + mk);
        for (const auto& [ck, n] : row.items()) {
            const auto c = parse_op_class(ck);
            if (!c) throw Error("confusion matrix: unknown class " + ck);
            cm.counts[*m][*c] = n.get<int>();
        }
    }
    if (j.contains("errors"))
        for (const auto& [mk, n] : j["errors"].items()) {
            const auto m = parse_metric(mk);
            if (!m) throw Error("confusion matrix: unknown metric " + mk);
            cm.errors[*m] = n.get<int>();
        }
}

// How the out-of-knowledge (EI) entries were absorbed: they never count
// toward the IRA, but the distribution of the classes they landed in and the
// rate at which the classifier produced any valid answer are reported.
struct EiSummary {
    int total = 0;
    int resolved = 0;  // produced some in-set classification
    int errors = 0;
    std::map<OpClass, int> classified_into;

    double resolved_rate() const { return total > 0 ? static_cast<double>(resolved) / total : 0.0; }
};

struct IraResult {
    double ira = 0.0;
    int total = 0;    // non-EI entries
    int correct = 0;
    ConfusionMatrix confusion;
    std::map<PerformanceMetric, double> per_metric;
    std::map<std::string, double> per_explicitness;  // "explicit" / "implicit"
    EiSummary ei;
};

// Classifies every corpus entry and tallies exact matches. OutOfSet picks and
// gateway failures count as misclassifications. EI entries are scored
// separately (out-of-knowledge), never inside the IRA denominator.
inline IraResult compute_ira(const std::vector<CorpusEntry>& corpus,
                             const agents::ClassifierConfig& cfg, const agents::KnowledgeBase& kb,
                             int jobs = 4) {
    if (corpus.empty()) throw EmptyCorpus("corpus has no entries");

    struct Outcome {
        std::optional<OpClass> cls;
    };
    std::vector<Outcome> outcomes(corpus.size());
    detail::parallel_for(corpus.size(), jobs, [&](size_t i) {
        try {
            outcomes[i].cls = agents::classify(corpus[i].text, cfg, kb).op_class;
        } catch (const Error&) {
            outcomes[i].cls.reset();
        }
    });

    IraResult out;
    std::map<PerformanceMetric, int> metric_total, metric_correct;
    std::map<std::string, int> expl_total, expl_correct;
    for (size_t i = 0; i < corpus.size(); ++i) {
        const CorpusEntry& e = corpus[i];
        const auto& got = outcomes[i].cls;
        if (e.metric == PerformanceMetric::EI) {
            ++out.ei.total;
            if (got) {
                ++out.ei.resolved;
                ++out.ei.classified_into[*got];
            } else {
                ++out.ei.errors;
            }
            continue;
        }
        if (!e.truth_op_class) throw Error("corpus entry " + e.id + " lacks a truth label");
        ++out.total;
        ++metric_total[e.metric];
        const std::string ek = e.explicit_request ? "explicit" : "implicit";
        ++expl_total[ek];
        if (got) {
            ++out.confusion.counts[e.metric][*got];
            if (*got == *e.truth_op_class) {
                ++out.correct;
                ++metric_correct[e.metric];
                ++expl_correct[ek];
            }
        } else {
            ++out.confusion.errors[e.metric];
        }
    }
    if (out.total == 0) throw EmptyCorpus("corpus has no entries with truth labels");
    out.ira = static_cast<double>(out.correct) / out.total;
    for (const auto& [m, n] : metric_total)
        out.per_metric[m] = static_cast<double>(metric_correct[m]) / n;
    for (const auto& [k, n] : expl_total)
        out.per_explicitness[k] = static_cast<double>(expl_correct[k]) / n;
    return out;
}

inline nlohmann::json ira_result_json(const IraResult& r) {
    nlohmann::json per_metric = nlohmann::json::object();
    for (const auto& [m, v] : r.per_metric) per_metric[to_string(m)] = v;
    nlohmann::json ei_into = nlohmann::json::object();
    for (const auto& [c, n] : r.ei.classified_into) ei_into[to_string(c)] = n;
    return nlohmann::json{
        {"ira", r.ira},
        {"total", r.total},
        {"correct", r.correct},
        {"per_metric", per_metric},
        {"per_explicitness", r.per_explicitness},
        {"confusion", r.confusion},
        {"ei", {{"total", r.ei.total},
                {"resolved", r.ei.resolved},
                {"errors", r.ei.errors},
                {"resolved_rate", r.ei.resolved_rate()},
                {"classified_into", ei_into}}}};
}

}  // namespace evsched::eval
