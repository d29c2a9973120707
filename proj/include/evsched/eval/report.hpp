#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "evsched/eval/arol.hpp"
#include "evsched/eval/mixture.hpp"

namespace evsched::eval {

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string set_name(const std::vector<OpClass>& set) {
    std::string s;
    for (OpClass c : set) {
        if (!s.empty()) s += "+";
        s += to_string(c);
    }
    return s;
}

}  // namespace detail

// Everything emit_report can serialize. Sections may be empty; the matching
// CSV then just carries its header, which keeps reruns byte-comparable.
struct ReportBundle {
    // scenario name -> results
    std::map<std::string, IraResult> ira_by_scenario;
    std::map<std::string, ArolResult> arol_by_scenario;
    // candidate-set name -> per-metric IRA
    std::map<std::string, std::map<PerformanceMetric, double>> ira_by_candidate_set;
    std::vector<MixtureRow> mixture;
    // per-slot profiles: slot index -> {cc, ct, pp, baseline}
    struct ProfileRow {
        int slot;
        double cc, ct, pp, baseline;
    };
    std::vector<ProfileRow> schedules;
};

// Writes report.json plus one CSV per figure family into out_dir. No
// timestamps or timings are embedded, so identical inputs give identical
// bytes.
inline void emit_report(const ReportBundle& bundle, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto open = [&](const char* name) {
        std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
        if (!out) throw Error(std::string("cannot write report file ") + name);
        return out;
    };

    nlohmann::json report = nlohmann::json::object();
    {
        nlohmann::json by_scenario = nlohmann::json::object();
        for (const auto& [scenario, r] : bundle.ira_by_scenario)
            by_scenario[scenario] = ira_result_json(r);
        report["ira_by_scenario"] = by_scenario;
        nlohmann::json arols = nlohmann::json::object();
        for (const auto& [scenario, r] : bundle.arol_by_scenario)
            arols[scenario] = arol_result_json(r);
        report["arol_by_scenario"] = arols;
        nlohmann::json by_set = nlohmann::json::object();
        for (const auto& [set, per_metric] : bundle.ira_by_candidate_set) {
            nlohmann::json row = nlohmann::json::object();
            for (const auto& [m, v] : per_metric) row[to_string(m)] = v;
            by_set[set] = row;
        }
        report["ira_by_candidate_set"] = by_set;
        report["mixture"] = mixture_rows_json(bundle.mixture);
    }
    {
        auto out = open("report.json");
        out << report.dump(2) << "\n";
    }
    {
        auto out = open("ira_by_scenario.csv");
        out << "scenario,metric,ira\n";
        for (const auto& [scenario, r] : bundle.ira_by_scenario) {
            out << scenario << ",all," << detail::fmt(r.ira) << "\n";
            for (const auto& [m, v] : r.per_metric)
                out << scenario << "," << to_string(m) << "," << detail::fmt(v) << "\n";
        }
    }
    {
        auto out = open("arol_by_scenario.csv");
        out << "scenario,metric,arol\n";
        for (const auto& [scenario, r] : bundle.arol_by_scenario)
            for (const auto& [m, v] : r.arol)
                out << scenario << "," << to_string(m) << "," << detail::fmt(v) << "\n";
    }
    {
        auto out = open("ira_by_candidate_set.csv");
        out << "candidate_set,metric,ira\n";
        for (const auto& [set, per_metric] : bundle.ira_by_candidate_set)
            for (const auto& [m, v] : per_metric)
                out << set << "," << to_string(m) << "," << detail::fmt(v) << "\n";
    }
    {
        auto out = open("mixture.csv");
        out << "pi,candidate_set,expected_ira,direct_ira\n";
        for (const auto& r : bundle.mixture)
            out << detail::fmt(r.pi) << "," << detail::set_name(r.candidate_set) << ","
                << detail::fmt(r.expected_ira) << "," << detail::fmt(r.direct_ira) << "\n";
    }
    {
        auto out = open("schedules.csv");
        out << "slot,cc,ct,pp,baseline\n";
        for (const auto& row : bundle.schedules)
            out << row.slot << "," << detail::fmt(row.cc) << "," << detail::fmt(row.ct) << ","
                << detail::fmt(row.pp) << "," << detail::fmt(row.baseline) << "\n";
    }
}

}  // namespace evsched::eval
