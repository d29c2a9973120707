#pragma once

#include <vector>

#include "evsched/eval/ira.hpp"

namespace evsched::eval {

// One row of the request-mix study: expected IRA from the per-metric
// accuracies versus the directly evaluated mixture, for a CC weight pi and
// CT/PP sharing the remainder.
struct MixtureRow {
    double pi = 0.0;
    std::vector<OpClass> candidate_set;
    double expected_ira = 0.0;
    double direct_ira = 0.0;
    double ira_cc = 0.0, ira_ct = 0.0, ira_pp = 0.0;
};

namespace detail {

inline double mixture_formula(double pi, double cc, double ct, double pp) {
    return pi * cc + 0.5 * (1.0 - pi) * (ct + pp);
}

}  // namespace detail

// Two computation paths for the same quantity. The expected path classifies
// per-metric subsets through compute_ira and combines the accuracies; the
// direct path re-classifies the mixed corpus in one interleaved pass and
// combines its own tallies with the identical expression. With a
// deterministic backend both land on the same value bit for bit.
inline std::vector<MixtureRow> mixture_study(const std::vector<double>& pi_values,
                                             const std::vector<CorpusEntry>& corpus,
                                             const std::vector<std::vector<OpClass>>& candidate_sets,
                                             const agents::ClassifierConfig& cfg_template,
                                             const agents::KnowledgeBase& kb, int jobs = 4) {
    std::vector<CorpusEntry> cc, ct, pp;
    for (const auto& e : corpus) {
        if (e.metric == PerformanceMetric::CC) cc.push_back(e);
        if (e.metric == PerformanceMetric::CT) ct.push_back(e);
        if (e.metric == PerformanceMetric::PP) pp.push_back(e);
    }
    if (cc.empty() || ct.empty() || pp.empty())
        throw EmptyCorpus("mixture study needs CC, CT and PP entries");

    std::vector<MixtureRow> rows;
    for (const auto& set : candidate_sets) {
        agents::ClassifierConfig cfg = cfg_template;
        cfg.candidate_set = set;

        // Path A: per-metric IRA on separate subsets.
        const double ira_cc = compute_ira(cc, cfg, kb, jobs).ira;
        const double ira_ct = compute_ira(ct, cfg, kb, jobs).ira;
        const double ira_pp = compute_ira(pp, cfg, kb, jobs).ira;

        // Path B: one interleaved pass over the mixed corpus, own tallies.
        std::vector<const CorpusEntry*> mixed;
        const size_t longest = std::max({cc.size(), ct.size(), pp.size()});
        for (size_t i = 0; i < longest; ++i) {
            if (i < cc.size()) mixed.push_back(&cc[i]);
            if (i < ct.size()) mixed.push_back(&ct[i]);
            if (i < pp.size()) mixed.push_back(&pp[i]);
        }
        std::map<PerformanceMetric, int> total, correct;
        std::vector<std::optional<OpClass>> got(mixed.size());
        detail::parallel_for(mixed.size(), jobs, [&](size_t i) {
            try {
                got[i] = agents::classify(mixed[i]->text, cfg, kb).op_class;
            } catch (const Error&) {
                got[i].reset();
            }
        });
        for (size_t i = 0; i < mixed.size(); ++i) {
            ++total[mixed[i]->metric];
            if (got[i] && mixed[i]->truth_op_class && *got[i] == *mixed[i]->truth_op_class)
                ++correct[mixed[i]->metric];
        }
        auto acc = [&](PerformanceMetric m) {
            return static_cast<double>(correct[m]) / total[m];
        };
        const double direct_cc = acc(PerformanceMetric::CC);
        const double direct_ct = acc(PerformanceMetric::CT);
        const double direct_pp = acc(PerformanceMetric::PP);

        for (double pi : pi_values) {
            MixtureRow row;
            row.pi = pi;
            row.candidate_set = set;
            row.ira_cc = ira_cc;
            row.ira_ct = ira_ct;
            row.ira_pp = ira_pp;
            row.expected_ira = detail::mixture_formula(pi, ira_cc, ira_ct, ira_pp);
            row.direct_ira = detail::mixture_formula(pi, direct_cc, direct_ct, direct_pp);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline nlohmann::json mixture_rows_json(const std::vector<MixtureRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json set = nlohmann::json::array();
        for (OpClass c : r.candidate_set) set.push_back(to_string(c));
        out.push_back({{"pi", r.pi},
                       {"candidate_set", set},
                       {"expected_ira", r.expected_ira},
                       {"direct_ira", r.direct_ira},
                       {"ira_cc", r.ira_cc},
                       {"ira_ct", r.ira_ct},
                       {"ira_pp", r.ira_pp}});
    }
    return out;
}

}  // namespace evsched::eval
