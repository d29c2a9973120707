#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "evsched/core/types.hpp"
#include "evsched/errors.hpp"

namespace evsched::agents {

// Prompt building blocks for one problem class. math is the generic
// formulation; ev_context grounds it in EV charging; remarks carry the
// error-informed guidance. Any block may be absent (out-of-knowledge classes).
struct KnowledgeBlocks {
    std::optional<std::string> math;
    std::optional<std::string> ev_context;
    std::optional<std::string> remarks;
    bool operator==(const KnowledgeBlocks&) const = default;
};

struct KnowledgeBase {
    std::map<OpClass, KnowledgeBlocks> entries;

    const KnowledgeBlocks* find(OpClass c) const {
        auto it = entries.find(c);
        return it == entries.end() ? nullptr : &it->second;
    }
    bool operator==(const KnowledgeBase&) const = default;
};

// On-disk layout: <dir>/<CLASS>/{math.md, ev_context.md, remarks.md};
// a missing file means the block is absent.
inline KnowledgeBase load_knowledge_base(const std::string& dir) {
    namespace fs = std::filesystem;
    KnowledgeBase kb;
    auto read = [](const fs::path& p) -> std::optional<std::string> {
        if (!fs::exists(p)) return std::nullopt;
        std::ifstream in(p);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    for (OpClass c : all_op_classes()) {
        const fs::path base = fs::path(dir) / to_string(c);
        if (!fs::exists(base)) continue;
        KnowledgeBlocks b;
        b.math = read(base / "math.md");
        b.ev_context = read(base / "ev_context.md");
        b.remarks = read(base / "remarks.md");
        kb.entries[c] = b;
    }
    if (kb.entries.empty()) throw MissingKnowledge("no knowledge directories under " + dir);
    return kb;
}

inline void save_knowledge_base(const KnowledgeBase& kb, const std::string& dir) {
    namespace fs = std::filesystem;
    for (const auto& [cls, blocks] : kb.entries) {
        const fs::path base = fs::path(dir) / to_string(cls);
        fs::create_directories(base);
        auto write = [&](const char* name, const std::optional<std::string>& text) {
            if (!text) return;
            std::ofstream out(base / name);
            out << *text;
        };
        write("math.md", blocks.math);
        write("ev_context.md", blocks.ev_context);
        write("remarks.md", blocks.remarks);
    }
}

// Built-in knowledge base used when no --kb directory is given. The fixture
// copy under fixtures/kb mirrors this content (pinned by a test).
inline KnowledgeBase default_knowledge_base() {
    KnowledgeBase kb;
    auto& e = kb.entries;

    e[OpClass::LP] = {
        "Linear Programming (LP): minimize c'x subject to A x <= b, A_eq x = b_eq and "
        "0 <= x_min <= x_t <= x_max. Objective and constraints are all linear in the "
        "decision vector x.\n",
        "In EV charging, LP covers charging-cost minimization: c holds the electricity "
        "price of each slot times the slot length, one total-energy constraint makes the "
        "battery reach its target state of charge, and the charger rating bounds x.\n"
        "Keywords: electricity cost, price, bill, cheap hours, save money, expenses.\n"
        "Example requests: \"Charge my EV while minimizing the electricity cost.\" "
        "\"Please charge the car to 80% at the lowest possible price.\"\n",
        "Cost wording wins even when a deadline is present: \"as cheap as possible before "
        "8am\" is still LP; the deadline only sizes the horizon. Money vocabulary "
        "(bill, tariff, bargain, expenses) signals LP even without the word cost.\n"};

    e[OpClass::QP] = {
        "Quadratic Programming (QP): minimize (1/2) x'Qx + c'x with Q symmetric positive "
        "semidefinite, subject to A x <= b, A_eq x = b_eq and box bounds on x.\n",
        "In EV charging, QP covers smooth-power requests: Q penalizes slot-to-slot "
        "changes of the charging power, an energy equality fixes the delivered energy, "
        "and the charger rating bounds x.\n"
        "Keywords: smooth, steady, power variations, fluctuations, no sudden jumps.\n"
        "Example requests: \"Charge the EV with a smooth power profile.\" \"Avoid "
        "fluctuations in the power delivered to the charger.\"\n",
        "QP is about *changes* of the charging power from one slot to the next. If the "
        "user worries about the maximum total draw instead, that is MM, not QP.\n"};

    e[OpClass::MM] = {
        "Mini-Max (MM): minimize max_i f_i(x) over affine components f_i(x) = F_i x + g_i, "
        "subject to A x <= b, A_eq x = b_eq and box bounds on x.\n",
        "In EV charging, MM covers power-peak limitation: each component is the total "
        "household draw of one slot (charging power plus non-flexible load), so the "
        "objective is the worst-slot demand peak.\n"
        "Keywords: power peak, demand peak, breaker, fuse, installation limit.\n"
        "Example requests: \"Charge the EV while minimizing the power peak on my "
        "installation.\" \"Charge my car but don't trip the breaker.\"\n",
        "Peak requests mention a worst moment (breaker, fuse, peak, overload) rather than "
        "the shape of the charging curve over time; the latter is QP. Damage to utility "
        "equipment over time is CP, not MM.\n"};

    e[OpClass::CP] = {
        "Convex Programming (CP): minimize a convex function f(x) subject to convex "
        "inequalities g_i(x) <= 0, linear equalities A_eq x = b_eq and box bounds on x.\n",
        "In EV charging, CP covers grid-damage limitation: the damage proxy is a "
        "superlinear power of the total draw per slot, summed over the horizon, with an "
        "energy equality and the charger rating as constraints.\n"
        "Keywords: grid damage, transformer stress, equipment aging, distribution grid.\n"
        "Example requests: \"Charge the EV while limiting damage to the distribution "
        "grid.\" \"Minimize transformer stress while the car charges.\"\n",
        "Damage accumulates over every slot (a sum of superlinear terms), unlike MM which "
        "only watches the single worst slot. Mentions of utility equipment, transformers "
        "or aging point to CP.\n"};

    e[OpClass::LMT] = {
        "Linear Minimum Time (LMT): minimize the horizon tau subject to linear dynamics "
        "s_{t+1} = A s_t + B x_t, boundary conditions on s_0 and s_tau, input bounds "
        "0 <= x_min <= x_t <= x_max and a state box s_min <= s_t <= s_max.\n",
        "In EV charging, LMT covers fastest-charge requests: the state is the battery "
        "energy, the input is the charging power, and the target is the requested state "
        "of charge reached in as few slots as possible.\n"
        "Keywords: charging time, fast, quick, asap, in a hurry, deadline pressure.\n"
        "Example requests: \"Charge my EV as fast as possible.\" \"I need a full charge "
        "asap.\"\n",
        "Pick LMT only when elapsed time itself is minimized. A deadline combined with a "
        "money objective is LP; a deadline alone just sizes the horizon of whichever "
        "objective the user actually states.\n"};

    e[OpClass::LQR] = {
        "Linear Quadratic Regulator (LQR): minimize sum_{t=0}^{N-1} (s_t'Q s_t + r x_t^2) "
        "+ s_N'Q_f s_N given s_0, subject to linear dynamics s_{t+1} = A s_t + B x_t and "
        "input bounds.\n",
        "In EV charging, LQR covers tracking a reference state of charge: the state is "
        "the deviation of the battery energy from its target, and the quadratic cost "
        "balances fast regulation against charging effort.\n"
        "Keywords: track a target, regulate, hold the battery at a level.\n"
        "Example requests: \"Regulate the battery toward 80% and hold it there.\" "
        "\"Track my target state of charge smoothly.\"\n",
        "LQR needs an explicit tracking or regulation intent. Plain \"charge to 80%\" is "
        "not LQR; some other stated objective (cost, time, peak...) decides the class.\n"};

    return kb;
}

}  // namespace evsched::agents
