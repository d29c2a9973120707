#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evsched/core/types.hpp"
#include "evsched/errors.hpp"
#include "evsched/rng.hpp"

namespace evsched::eval {

// One labeled request. truth_op_class is absent for EI entries (their metric
// has no class in the knowledge base by design). truth_params keeps the
// rendering inputs so the ground-truth window can be reconstructed.
struct CorpusEntry {
    std::string id;
    std::string text;
    PerformanceMetric metric = PerformanceMetric::CC;
    bool explicit_request = true;
    std::optional<OpClass> truth_op_class;
    std::optional<double> soc_target;
    std::optional<double> duration_hours;
    std::optional<std::string> deadline_phrase;
};

inline void to_json(nlohmann::json& j, const CorpusEntry& e) {
    j = nlohmann::json{{"id", e.id},
                       {"text", e.text},
                       {"metric", to_string(e.metric)},
                       {"explicitness", e.explicit_request ? "explicit" : "implicit"}};
    if (e.truth_op_class) j["truth_op_class"] = to_string(*e.truth_op_class);
    nlohmann::json params = nlohmann::json::object();
    if (e.soc_target) params["soc_target"] = *e.soc_target;
    if (e.duration_hours) params["duration_hours"] = *e.duration_hours;
    if (e.deadline_phrase) params["deadline"] = *e.deadline_phrase;
    j["truth_params"] = params;
}

inline void from_json(const nlohmann::json& j, CorpusEntry& e) {
    e.id = j.at("id").get<std::string>();
    e.text = j.at("text").get<std::string>();
    const auto m = parse_metric(j.at("metric").get<std::string>());
    if (!m) throw Error("corpus entry " + e.id + ": unknown metric");
    e.metric = *m;
    e.explicit_request = j.at("explicitness").get<std::string>() == "explicit";
    e.truth_op_class.reset();
    if (j.contains("truth_op_class"))
        e.truth_op_class = parse_op_class(j["truth_op_class"].get<std::string>());
    const auto& params = j.value("truth_params", nlohmann::json::object());
    e.soc_target.reset();
    e.duration_hours.reset();
    e.deadline_phrase.reset();
    if (params.contains("soc_target")) e.soc_target = params["soc_target"].get<double>();
    if (params.contains("duration_hours"))
        e.duration_hours = params["duration_hours"].get<double>();
    if (params.contains("deadline")) e.deadline_phrase = params["deadline"].get<std::string>();
}

struct MetricTemplates {
    std::vector<std::string> explicit_;
    std::vector<std::string> implicit_;
};

using TemplateSet = std::map<PerformanceMetric, MetricTemplates>;

inline TemplateSet load_templates(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open template file: " + path);
    nlohmann::json j;
    in >> j;
    TemplateSet out;
    for (const auto& [key, value] : j.items()) {
        const auto m = parse_metric(key);
        if (!m) throw Error("template file: unknown metric " + key);
        MetricTemplates t;
        t.explicit_ = value.at("explicit").get<std::vector<std::string>>();
        t.implicit_ = value.at("implicit").get<std::vector<std::string>>();
        out[*m] = t;
    }
    return out;
}

inline nlohmann::json templates_to_json(const TemplateSet& templates) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [m, t] : templates)
        j[to_string(m)] = {{"explicit", t.explicit_}, {"implicit", t.implicit_}};
    return j;
}

namespace detail {

// Deadline phrases paired with nothing but their text: the ground truth is
// re-derived by the same convention table the parser agent uses.
inline const std::vector<std::string>& deadline_pool() {
    static const std::vector<std::string> pool{
        "tomorrow at 6 a.m.", "tomorrow morning", "by 9 p.m.", "tonight",
        "tomorrow at 7:30 a.m."};
    return pool;
}

inline std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

inline std::string trim_trailing_zeros(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace detail

// Deterministic corpus generation: per metric, the first half of the entries
// renders explicit templates (cycled), the second half implicit ones, with
// placeholder values drawn from the seeded generator.
inline std::vector<CorpusEntry> generate_corpus(int per_metric, uint64_t seed,
                                                const TemplateSet& templates) {
    if (per_metric < 1) throw Error("generate_corpus: per_metric must be >= 1");
    for (const auto& [m, t] : templates)
        if (t.explicit_.size() < 8 || t.implicit_.size() < 8)
            throw InsufficientTemplates("metric " + to_string(m) +
                                        " needs >= 8 explicit and >= 8 implicit templates");

    static const std::vector<double> soc_choices{60, 70, 80, 85, 90};
    static const std::vector<double> duration_choices{6, 8, 10, 12, 24};

    Rng rng(seed);
    std::vector<CorpusEntry> corpus;
    for (PerformanceMetric metric : all_metrics()) {
        auto it = templates.find(metric);
        if (it == templates.end()) continue;
        const int n_explicit = (per_metric + 1) / 2;
        for (int i = 0; i < per_metric; ++i) {
            const bool is_explicit = i < n_explicit;
            const auto& pool = is_explicit ? it->second.explicit_ : it->second.implicit_;
            const std::string& tpl = pool[static_cast<size_t>(i) % pool.size()];

            CorpusEntry e;
            e.metric = metric;
            e.explicit_request = is_explicit;
            e.truth_op_class = metric_to_class(metric);
            char idbuf[64];
            std::snprintf(idbuf, sizeof idbuf, "%s-%s-%03d", to_string(metric).c_str(),
                          is_explicit ? "exp" : "imp", i);
            e.id = idbuf;

            std::string text = tpl;
            if (text.find("{SOC}") != std::string::npos) {
                const double soc = rng.pick(soc_choices);
                e.soc_target = soc / 100.0;
                text = detail::replace_all(text, "{SOC}", detail::trim_trailing_zeros(soc));
            }
            if (text.find("{DURATION}") != std::string::npos) {
                const double d = rng.pick(duration_choices);
                e.duration_hours = d;
                text = detail::replace_all(text, "{DURATION}", detail::trim_trailing_zeros(d));
            }
            if (text.find("{DEADLINE}") != std::string::npos) {
                const std::string& phrase = rng.pick(detail::deadline_pool());
                e.deadline_phrase = phrase;
                text = detail::replace_all(text, "{DEADLINE}", phrase);
            }
            e.text = text;
            corpus.push_back(std::move(e));
        }
    }
    return corpus;
}

inline void write_corpus_jsonl(const std::vector<CorpusEntry>& corpus, std::ostream& out) {
    for (const auto& e : corpus) {
        nlohmann::json j = e;
        out << j.dump() << "\n";
    }
}

inline std::vector<CorpusEntry> read_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file: " + path);
    std::vector<CorpusEntry> corpus;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        corpus.push_back(nlohmann::json::parse(line).get<CorpusEntry>());
    }
    return corpus;
}

// The built-in template families. Explicit renderings state the metric with
// its canonical vocabulary; implicit ones paraphrase it. The fixture copy
// under fixtures/templates.json mirrors this content (pinned by a test).
inline TemplateSet default_templates() {
    TemplateSet t;
    t[PerformanceMetric::CC] = {
        {
            "Charge my EV while minimizing the electricity cost",
            "You have {DURATION}h to charge my EV at {SOC}% while minimizing the cost of charging",
            "Please charge the car to {SOC}% at the lowest possible price",
            "Charge my EV but try to reduce the costs please.",
            "Please, initiate EV charging but make it cost-effective.",
            "Recharge the EV to {SOC}% and keep my electricity bill as low as possible",
            "Charge the car by {DEADLINE}, prioritizing the cheapest hours",
            "Minimize the charging cost while getting the battery to {SOC}% within {DURATION} hours",
            "Top up my EV to {SOC}% using the cheapest slots of the night",
        },
        {
            "I want my EV to juice up but only when it's financially wise",
            "Guess it's time to charge the car but find me those bargain electricity hours, yeah?",
            "Charge my vehicle but do it in a way that's gentle on my expenses.",
            "Fill up the battery to {SOC}% without burning a hole in my wallet",
            "Charge the EV when electricity is practically given away",
            "Get the car ready by {DEADLINE} and be thrifty about the energy we buy",
            "Juice the car overnight, I'd rather not overpay for power",
            "Charge my EV to {SOC}%, my budget is stretched thin this month",
        }};
    t[PerformanceMetric::CT] = {
        {
            "Charge my EV as fast as possible",
            "Minimize the charging time, I need the car at {SOC}% soon",
            "Get the battery to {SOC}% in the shortest time you can",
            "Charge the EV quickly, I leave {DEADLINE}",
            "I need a full charge asap",
            "Make the charge to {SOC}% as quick as you can",
            "Reach {SOC}% in minimum time",
            "Fastest possible charge to {SOC}% please",
            "Time matters most today: charge to {SOC}% without wasting a minute",
        },
        {
            "I'm in a hurry, have the car ready before I leave",
            "Get me back on the road again without delay",
            "The sooner the car is ready, the better",
            "I need to leave for the airport, make it snappy",
            "Don't dawdle with this charge, I have places to be",
            "Have the EV ready at {SOC}% before you know it",
            "Charge the car like we're late for a wedding",
            "My meeting moved up, the car must be usable really soon",
        }};
    t[PerformanceMetric::EI] = {
        {
            "Charge the EV using as much renewable energy as possible",
            "Maximize the share of solar power in my charge to {SOC}%",
            "Charge when the energy mix is at its greenest",
            "Prioritize wind and solar while charging the car",
            "Make this charge as environmentally friendly as you can",
            "Minimize the carbon footprint of charging to {SOC}%",
            "Use clean energy for this charging session",
            "Charge my EV on sunshine, not smoke",
            "Keep the emissions of this charge as low as possible",
        },
        {
            "Charge the car in a way a polar bear would approve of",
            "Top up the EV while keeping mother nature smiling",
            "Charge guilt-free, please",
            "Fill the battery with the cleanest electrons you can find",
            "Charge my EV like the planet is watching",
            "Make sure the trees would be proud of this charging session",
            "Charge the car without making the sky any dirtier",
            "Power the EV the eco-friendly way",
        }};
    t[PerformanceMetric::PP] = {
        {
            "Charge the EV while minimizing the power peak on my installation",
            "Keep the peak load low while charging to {SOC}%",
            "Charge my car but don't trip the breaker",
            "Avoid demand peaks while the EV charges overnight",
            "Charge to {SOC}% and keep the household peak under control",
            "Flatten the peak: charge the EV when the house draws little power",
            "Stay within my installation limit while charging the car",
            "Charge the EV to {SOC}% with the smallest possible peak draw",
            "No big peaks please, the main breaker is touchy",
        },
        {
            "Charge the car gently so the lights don't flicker when the oven is on",
            "Don't overload the house wiring while topping up the EV",
            "Spread the charging out so we don't stress the mains fuse",
            "Charge to {SOC}% without making the electrical panel sweat",
            "The house can only take so much at once, charge accordingly",
            "Top up the EV but play nice with the other appliances",
            "Keep our total draw tame while the car charges",
            "Charge the EV so we never come close to blowing a fuse",
        }};
    t[PerformanceMetric::PV] = {
        {
            "Charge the EV with a smooth power profile",
            "Minimize variations in the charging power while reaching {SOC}%",
            "Avoid fluctuations in the power delivered to the charger",
            "Give me a smooth, steady charge to {SOC}%",
            "Charge with as little variation as possible",
            "Smooth out the charging power, no sudden jumps",
            "Keep power fluctuations minimal during this charge",
            "A smooth ramp to {SOC}% is what I want",
            "Charge the car, minimizing power variation from slot to slot",
        },
        {
            "Charge the car evenly, none of that start-stop nonsense",
            "I want the charger humming along at a constant pace",
            "No jerky power swings while the EV charges",
            "Charge to {SOC}% like a calm river, not a rollercoaster",
            "Keep the juice flowing on an even keel overnight",
            "The charger buzzing up and down annoys me, keep it level",
            "Feed the battery gently and uniformly until morning",
            "A flat, boring charging profile is exactly what I want",
        }};
    t[PerformanceMetric::GD] = {
        {
            "Charge the EV while limiting damage to the distribution grid",
            "Go easy on the grid while charging to {SOC}%",
            "Minimize transformer stress while the car charges",
            "Charge in a way that limits aging of the grid equipment",
            "Protect the local grid: charge the EV gently to {SOC}%",
            "Keep grid damage to a minimum during this charging session",
            "Charge the car without punishing the neighborhood transformer",
            "Limit wear on the grid infrastructure while charging",
            "Charge to {SOC}% while being kind to the power grid",
        },
        {
            "Charge the car so the utility's hardware lives a long life",
            "Be gentle with the local electrical infrastructure while charging",
            "Don't cook the pole-top equipment when you charge my EV",
            "Charge to {SOC}% in a way the utility company would thank us for",
            "Treat the neighborhood electrics kindly during the charge",
            "Charge without putting the street's equipment through the wringer",
            "The substation has seen better days, charge considerately",
            "Top up the EV without hastening the demise of the local cables",
        }};
    return t;
}

}  // namespace evsched::eval
