// Command-line front door: classify requests, run the full request-to-schedule
// pipeline, and drive the evaluation harness (IRA, AROL, corpus generation,
// request-mix study). Machine-readable JSON/CSV goes to stdout or --out files;
// human logs go to stderr.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evsched/evsched.hpp"

namespace {

using namespace evsched;

struct GlobalOptions {
    std::string env_path = "fixtures/normalized.json";
    std::string backend = "mock";
    std::string base_url;
    std::string model;
    std::string scenario = "contextualized";
    std::string classes = "LP,QP,MM,CP,LMT,LQR";
    std::string kb_dir;
    std::string defaults_path;
    std::string out_dir;
    uint64_t seed = 0;
    int jobs = 4;
};

std::vector<OpClass> parse_classes(const std::string& csv) {
    std::vector<OpClass> out;
    std::string token;
    std::stringstream ss(csv);
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        auto c = parse_op_class(token);
        if (!c) throw CLI::ValidationError("--classes", "unknown class '" + token + "'");
        out.push_back(*c);
    }
    if (out.empty()) throw CLI::ValidationError("--classes", "need at least one class");
    return out;
}

llm::BackendConfig make_backend(const GlobalOptions& g) {
    llm::BackendConfig cfg;
    if (g.backend == "mock") {
        cfg.kind = llm::BackendKind::mock;
    } else if (g.backend == "openai") {
        cfg.kind = llm::BackendKind::openai_compatible;
        cfg.base_url = "http://localhost:8000";
    } else if (g.backend == "ollama") {
        cfg.kind = llm::BackendKind::ollama_native;
        cfg.base_url = "http://localhost:11434";
    } else {
        throw CLI::ValidationError("--backend", "expected mock|openai|ollama");
    }
    cfg.model_name = "llama3";
    // Precedence: flags > environment variables > built-in defaults.
    if (cfg.kind != llm::BackendKind::mock) {
        if (const char* v = std::getenv("LLM_BASE_URL")) cfg.base_url = v;
        if (const char* v = std::getenv("LLM_MODEL")) cfg.model_name = v;
    }
    if (!g.base_url.empty()) cfg.base_url = g.base_url;
    if (!g.model.empty()) cfg.model_name = g.model;
    return cfg;
}

agents::ClassifierConfig make_classifier(const GlobalOptions& g) {
    agents::ClassifierConfig cfg;
    cfg.candidate_set = parse_classes(g.classes);
    auto scenario = agents::parse_scenario(g.scenario);
    if (!scenario)
        throw CLI::ValidationError("--scenario", "expected basic|contextualized|error-informed");
    cfg.scenario = *scenario;
    cfg.backend = make_backend(g);
    cfg.backend.max_inflight = g.jobs;
    return cfg;
}

agents::KnowledgeBase make_kb(const GlobalOptions& g) {
    return g.kb_dir.empty() ? agents::default_knowledge_base()
                            : agents::load_knowledge_base(g.kb_dir);
}

agents::DefaultsBook make_defaults(const GlobalOptions& g) {
    return g.defaults_path.empty() ? agents::DefaultsBook::standard()
                                   : agents::load_defaults(g.defaults_path);
}

void write_or_print(const GlobalOptions& g, const char* filename, const std::string& payload) {
    if (g.out_dir.empty()) {
        std::cout << payload;
        return;
    }
    std::filesystem::create_directories(g.out_dir);
    std::ofstream out(std::filesystem::path(g.out_dir) / filename, std::ios::binary);
    out << payload;
    std::cerr << "wrote " << (std::filesystem::path(g.out_dir) / filename).string() << "\n";
}

int cmd_classify(const GlobalOptions& g, const std::string& text) {
    const auto result = agents::classify(text, make_classifier(g), make_kb(g));
    nlohmann::json raw{{"content", result.raw_response.content}};
    for (const auto& c : result.raw_response.tool_calls)
        raw["tool_calls"].push_back({{"name", c.name}, {"arguments", c.arguments}});
    nlohmann::json j{{"op_class", to_string(result.op_class)},
                     {"scenario", agents::to_string(result.scenario)},
                     {"raw_response", raw}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_schedule(const GlobalOptions& g, const std::string& text, const std::string& csv_path,
                 bool llm_init) {
    const auto env = load_environment(g.env_path);
    pipeline::RunOptions opts;
    opts.llm_initial_point = llm_init;
    const auto rec =
        pipeline::run(text, env, make_classifier(g), make_kb(g), make_defaults(g), opts);
    std::cout << pipeline::run_record_json(rec).dump(2) << "\n";
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw Error("cannot write " + csv_path);
        out << "slot," << to_string(rec.classification.op_class) << ",baseline\n";
        for (size_t t = 0; t < rec.result.schedule.values.size(); ++t)
            out << t << "," << rec.result.schedule.values[t] << "," << rec.baseline.values[t]
                << "\n";
        std::cerr << "wrote " << csv_path << "\n";
    }
    return 0;
}

int cmd_evaluate(const GlobalOptions& g, const std::string& corpus_path) {
    const auto corpus = eval::read_corpus_jsonl(corpus_path);
    const auto cfg = make_classifier(g);
    const auto result = eval::compute_ira(corpus, cfg, make_kb(g), g.jobs);
    std::cout << eval::ira_result_json(result).dump(2) << "\n";
    if (!g.out_dir.empty()) {
        eval::ReportBundle bundle;
        bundle.ira_by_scenario[agents::to_string(cfg.scenario)] = result;
        eval::emit_report(bundle, g.out_dir);
        nlohmann::json cj = result.confusion;
        std::ofstream out(std::filesystem::path(g.out_dir) / "confusion.json", std::ios::binary);
        out << cj.dump(2) << "\n";
        std::cerr << "wrote report files to " << g.out_dir << "\n";
    }
    return 0;
}

int cmd_arol(const GlobalOptions& g, const std::string& confusion_path, int samples) {
    std::ifstream in(confusion_path);
    if (!in) throw Error("cannot open confusion file: " + confusion_path);
    nlohmann::json cj;
    in >> cj;
    const auto confusion = cj.get<eval::ConfusionMatrix>();
    const auto env = load_environment(g.env_path);
    const auto result = eval::compute_arol(confusion, samples, g.seed, env, make_defaults(g));
    std::cout << eval::arol_result_json(result).dump(2) << "\n";
    if (!g.out_dir.empty()) {
        eval::ReportBundle bundle;
        bundle.arol_by_scenario[g.scenario] = result;
        eval::emit_report(bundle, g.out_dir);
        std::cerr << "wrote report files to " << g.out_dir << "\n";
    }
    return 0;
}

int cmd_gen_corpus(const GlobalOptions& g, int per_metric, const std::string& templates_path) {
    const auto templates = templates_path.empty() ? eval::default_templates()
                                                  : eval::load_templates(templates_path);
    const auto corpus = eval::generate_corpus(per_metric, g.seed, templates);
    std::ostringstream ss;
    eval::write_corpus_jsonl(corpus, ss);
    write_or_print(g, "corpus.jsonl", ss.str());
    return 0;
}

int cmd_mixture(const GlobalOptions& g, const std::vector<double>& pis,
                const std::string& corpus_path, const std::vector<std::string>& sets) {
    const auto corpus = eval::read_corpus_jsonl(corpus_path);
    std::vector<std::vector<OpClass>> candidate_sets;
    for (const auto& s : sets) candidate_sets.push_back(parse_classes(s));
    if (candidate_sets.empty())
        candidate_sets = {parse_classes("LP,LMT"), parse_classes("LP,LMT,MM"),
                          parse_classes("LP,QP,MM,CP,LMT,LQR")};
    const auto rows =
        eval::mixture_study(pis, corpus, candidate_sets, make_classifier(g), make_kb(g), g.jobs);
    std::cout << eval::mixture_rows_json(rows).dump(2) << "\n";
    if (!g.out_dir.empty()) {
        eval::ReportBundle bundle;
        bundle.mixture = rows;
        eval::emit_report(bundle, g.out_dir);
        std::cerr << "wrote report files to " << g.out_dir << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "evsched: free-text EV charging requests to power schedules.\n"
        "Config precedence: flags > environment variables (LLM_BASE_URL, LLM_MODEL) > "
        "fixture/config files > built-in defaults."};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--env", g.env_path, "Environment fixture JSON")->capture_default_str();
    app.add_option("--backend", g.backend, "mock|openai|ollama")->capture_default_str();
    app.add_option("--base-url", g.base_url, "Backend base URL (overrides LLM_BASE_URL)");
    app.add_option("--model", g.model, "Model name (overrides LLM_MODEL)");
    app.add_option("--scenario", g.scenario, "basic|contextualized|error-informed")
        ->capture_default_str();
    app.add_option("--classes", g.classes, "Comma-separated candidate classes")
        ->capture_default_str();
    app.add_option("--kb", g.kb_dir, "Knowledge-base directory (default: built-in)");
    app.add_option("--defaults", g.defaults_path, "Defaults book JSON (default: built-in)");
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--out", g.out_dir, "Directory for report files");
    app.add_option("--jobs", g.jobs, "Classification concurrency")->capture_default_str();

    std::string text, csv_path, corpus_path, confusion_path, templates_path;
    bool llm_init = false;
    int per_metric = 160;
    int samples = 1000;
    std::vector<double> pis;
    std::vector<std::string> sets;

    auto* classify = app.add_subcommand("classify", "Classify one request into a problem class");
    classify->add_option("text", text, "The request")->required();

    auto* schedule = app.add_subcommand("schedule", "Full pipeline: request to schedule");
    schedule->add_option("text", text, "The request")->required();
    schedule->add_option("--csv", csv_path, "Also write slot,<class>,baseline CSV");
    schedule->add_flag("--llm-init", llm_init, "Ask the backend for a solver starting point");

    auto* evaluate = app.add_subcommand("evaluate", "IRA and confusion matrix over a corpus");
    evaluate->add_option("--corpus", corpus_path, "Corpus JSONL")->required();

    auto* arol = app.add_subcommand("arol", "Relative optimality loss from a confusion matrix");
    arol->add_option("--confusion", confusion_path, "confusion.json from evaluate")->required();
    arol->add_option("--samples", samples, "Number of abstract requests")->capture_default_str();

    auto* gen = app.add_subcommand("gen-corpus", "Generate a labeled request corpus");
    gen->add_option("--per-metric", per_metric, "Requests per metric")->capture_default_str();
    gen->add_option("--templates", templates_path, "Template JSON (default: built-in)");

    auto* mixture = app.add_subcommand("mixture", "Request-mix study over candidate sets");
    mixture->add_option("--pi", pis, "CC mixture weights (repeatable)")->required();
    mixture->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
    mixture->add_option("--sets", sets, "Candidate sets, e.g. --sets LP,LMT (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the usage schema
        return 2;
    }

    try {
        if (*classify) return cmd_classify(g, text);
        if (*schedule) return cmd_schedule(g, text, csv_path, llm_init);
        if (*evaluate) return cmd_evaluate(g, corpus_path);
        if (*arol) return cmd_arol(g, confusion_path, samples);
        if (*gen) return cmd_gen_corpus(g, per_metric, templates_path);
        if (*mixture) return cmd_mixture(g, pis, corpus_path, sets);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
