#include "olp/backends.hpp"
#include "olp/board.hpp"
#include "olp/error.hpp"
#include "olp/harness.hpp"
#include "olp/metrics.hpp"
#include "olp/model.hpp"
#include "olp/pipeline.hpp"
#include "olp/rng.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

namespace fs = std::filesystem;
using namespace olp;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void spill(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path.string());
    out << text;
    if (!out) throw io_error("write failed: " + path.string());
}

std::vector<std::string> resolve_aspects(const std::string& spec) {
    if (spec == "live-commerce" || spec == "news") return model::aspect_preset(spec);
    std::vector<std::string> names;
    std::string cur;
    for (char c : spec) {
        if (c == ',') {
            if (!cur.empty()) names.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) names.push_back(cur);
    if (names.empty()) throw config_error("aspects: empty aspect list");
    return names;
}

void write_run_outputs(const fs::path& dir, const harness::RunResult& run,
                       const harness::RunResult& baseline, const std::string& baseline_llm,
                       const std::string& variant) {
    spill(dir / "history.csv", harness::history_csv(run));
    spill(dir / "board.csv", harness::board_csv(run));
    spill(dir / "qtables.json", harness::qtables_json(run));
    spill(dir / "summary.json", harness::summary_json(run, baseline, baseline_llm, variant));
}

int cmd_run(const std::string& config_path, const std::string& sim_path,
            const std::string& out_dir, std::optional<std::uint64_t> seed) {
    auto config = model::load_config(config_path);
    if (seed) config.seed = *seed;
    auto sim = backends::SimProfile::load(sim_path);
    auto tasks = harness::load_tasks(config);

    auto run = harness::run_experiment(config, sim, tasks);
    auto baseline = harness::run_baseline_strongest(config, sim, tasks);
    write_run_outputs(out_dir, run, baseline, config.baseline_llm, "full");
    spill(fs::path(out_dir) / "baseline_history.csv", harness::history_csv(baseline));
    std::cout << "wrote " << out_dir << "/{history.csv,board.csv,qtables.json,summary.json}\n";
    return 0;
}

int cmd_ablate(const std::string& config_path, const std::string& sim_path,
               const std::string& out_dir, double high_epsilon) {
    auto config = model::load_config(config_path);
    auto sim = backends::SimProfile::load(sim_path);
    auto tasks = harness::load_tasks(config);

    auto baseline = harness::run_baseline_strongest(config, sim, tasks);

    struct Row {
        std::string name;
        harness::RunResult result;
    };
    std::vector<Row> rows;
    rows.push_back({"full", harness::run_experiment(config, sim, tasks)});
    rows.push_back({"no_greedy",
                    harness::run_ablation(harness::Variant::NoGreedy, config, sim, tasks)});
    rows.push_back({"no_cross",
                    harness::run_ablation(harness::Variant::NoCross, config, sim, tasks)});
    auto high = config;
    high.epsilon = high_epsilon;
    rows.push_back({"high_epsilon", harness::run_experiment(high, sim, tasks)});

    nlohmann::ordered_json cmp;
    for (auto& row : rows) {
        write_run_outputs(fs::path(out_dir) / row.name, row.result, baseline,
                          config.baseline_llm, row.name);
        int switches = 0;
        for (const auto& [role, n] : row.result.summary.switches) switches += n;
        cmp[row.name] = {{"total_cost", row.result.summary.total_cost},
                         {"total_reward", row.result.summary.total_reward},
                         {"switches", switches}};
    }
    cmp["baseline"] = {{"total_cost", baseline.summary.total_cost},
                       {"total_reward", baseline.summary.total_reward}};
    spill(fs::path(out_dir) / "comparison.json", cmp.dump(2) + "\n");
    std::cout << "wrote " << out_dir << "/comparison.json\n";
    return 0;
}

std::unique_ptr<backends::Backend> make_pipeline_backend(
    const std::string& kind, const std::optional<model::TaskSpec>& task,
    const std::string& sim_path, const std::string& providers_path,
    std::uint64_t seed) {
    if (kind == "oracle") {
        if (!task) throw config_error("--backend oracle requires --task");
        return std::make_unique<backends::OracleBackend>(*task);
    }
    if (kind == "sim") {
        if (!task) throw config_error("--backend sim requires --task");
        if (sim_path.empty()) throw config_error("--backend sim requires --sim");
        return std::make_unique<backends::SimBackend>(*task, backends::SimProfile::load(sim_path),
                                                      backends::ProfileSet(), 25000, 25000, seed);
    }
    if (kind == "http") {
        if (providers_path.empty()) throw config_error("--backend http requires --providers");
        auto j = nlohmann::ordered_json::parse(slurp(providers_path), nullptr, false);
        if (j.is_discarded()) throw config_error("providers: not valid JSON");
        std::map<std::string, backends::HttpEndpoint> endpoints;
        for (auto it = j.begin(); it != j.end(); ++it) {
            backends::HttpEndpoint e;
            e.base_url = it.value().at("base_url").get<std::string>();
            e.model = it.value().value("model", it.key());
            e.key_env = it.value().value("key_env", "");
            e.path = it.value().value("path", std::string("/v1/chat/completions"));
            e.timeout_s = it.value().value("timeout_s", 60);
            e.fixed_tokens = it.value().value("fixed_tokens", false);
            e.tokens_in = it.value().value("tokens_in", std::int64_t{25000});
            e.tokens_out = it.value().value("tokens_out", std::int64_t{25000});
            endpoints[it.key()] = e;
        }
        return std::make_unique<backends::HttpBackend>(std::move(endpoints),
                                                       backends::ProfileSet());
    }
    throw config_error("unknown backend: " + kind);
}

int cmd_pipeline(const std::string& transcript_path, const std::string& aspects,
                 const std::string& backend_kind, const std::string& out_path,
                 const std::string& task_path, const std::string& sim_path,
                 const std::string& providers_path, const std::string& llm,
                 std::size_t max_chars, std::uint64_t seed, bool render) {
    auto transcript = model::parse_transcript(slurp(transcript_path));
    auto schema = resolve_aspects(aspects);

    std::optional<model::TaskSpec> task;
    if (!task_path.empty()) task = model::load_task(task_path);
    auto backend = make_pipeline_backend(backend_kind, task, sim_path, providers_path, seed);

    pipeline::Options options;
    options.max_chars = max_chars;
    auto invoke = [&](RoleId role, const grammar::RoleRequest& request) {
        backends::Invocation inv;
        inv.role = role;
        inv.llm = llm;
        inv.request = request;
        inv.prompt = grammar::render_prompt(role, request);
        return backend->invoke(inv);
    };
    auto result = pipeline::process_stream(transcript, schema, invoke, options);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

    spill(out_path, model::serialize_document(result.document));
    if (render) std::cout << model::render_document(result.document);
    return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& gold_path) {
    auto pred = model::parse_document(slurp(pred_path));
    auto gold = model::parse_document(slurp(gold_path));
    const double recall = metrics::recall_rate(pred, gold);
    std::printf("%.3f\n", recall);
    return 0;
}

int cmd_ingest_longbench(const std::string& input_path, int topics, std::uint64_t seed,
                         const std::string& out_dir) {
    auto j = nlohmann::ordered_json::parse(slurp(input_path), nullptr, false);
    if (j.is_discarded() || !j.contains("items"))
        throw data_error("ingest: expected {\"items\": [...]}");
    const auto& items = j.at("items");
    if (topics < 0 || static_cast<std::size_t>(topics) > items.size())
        throw config_error("ingest: requested " + std::to_string(topics) + " topics but only " +
                           std::to_string(items.size()) + " available");

    // seeded partial shuffle picks the sample and its order
    Rng rng = Rng::derive(seed, 0x10BE);
    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = 0; i < static_cast<std::size_t>(topics); ++i)
        std::swap(order[i], order[i + rng.next_below(order.size() - i)]);

    const auto schema = model::aspect_preset("news");
    model::TaskSpec task;
    const std::string stem = fs::path(input_path).stem().string();
    task.id = stem + "_" + std::to_string(topics);
    task.topic_count = topics;
    task.gold.aspect_schema = schema;

    std::int64_t next_index = 0;
    double total_chars = 0;
    for (int k = 0; k < topics; ++k) {
        const auto& item = items[order[static_cast<std::size_t>(k)]];
        const auto passages = item.at("passages").get<std::vector<std::string>>();
        if (passages.empty()) throw data_error("ingest: item without passages");

        model::TopicRecord topic;
        topic.title = item.at("title").get<std::string>();
        topic.span = {next_index, next_index + static_cast<std::int64_t>(passages.size()) - 1};
        for (const auto& name : schema) topic.aspects.push_back({name, {}});

        std::vector<std::int64_t> global(passages.size());
        for (std::size_t p = 0; p < passages.size(); ++p) {
            global[p] = next_index;
            task.transcript.push_back({next_index++, passages[p]});
            total_chars += static_cast<double>(passages[p].size());
        }
        if (item.contains("aspects"))
            for (auto it = item.at("aspects").begin(); it != item.at("aspects").end(); ++it) {
                model::AspectList* aspect = nullptr;
                for (auto& al : topic.aspects)
                    if (al.name == it.key()) {
                        aspect = &al;
                        break;
                    }
                if (!aspect)
                    throw data_error("ingest: unknown aspect \"" + it.key() + "\" in " + topic.title);
                for (const auto& pos_j : it.value()) {
                    const auto pos = pos_j.get<std::size_t>();
                    if (pos >= passages.size())
                        throw data_error("ingest: aspect position out of range in " + topic.title);
                    aspect->entries.push_back({global[pos], passages[pos]});
                }
            }
        task.gold.topics.push_back(std::move(topic));
    }
    task.chars_per_topic = topics > 0 ? total_chars / topics : 0;

    spill(fs::path(out_dir) / "transcript.jsonl", model::serialize_transcript(task.transcript));
    spill(fs::path(out_dir) / "task.json", model::serialize_task(task));
    std::cout << "wrote " << out_dir << "/{transcript.jsonl,task.json} (" << topics
              << " topics)\n";
    return 0;
}

int cmd_export_tables(const std::string& tables_path, double k1, std::int64_t tokens_in,
                      std::int64_t tokens_out) {
    auto j = nlohmann::ordered_json::parse(slurp(tables_path), nullptr, false);
    if (j.is_discarded() || !j.is_array()) throw data_error("export-tables: expected a JSON array");

    backends::ProfileSet profiles;
    std::vector<rlcore::QTable> tables;
    for (const auto& jt : j) tables.push_back(rlcore::QTable::from_json(jt.dump()));

    auto print_table = [&](const rlcore::QTable& t) {
        std::printf("== %s ==\n%-28s", t.role().c_str(), "state \\ action");
        for (const auto& a : t.actions()) std::printf(" %14s", a.c_str());
        std::printf("\n");
        for (std::size_t i = 0; i < t.action_count(); ++i)
            for (int f = 0; f < 2; ++f) {
                const std::string label = t.actions()[i] + (f ? " failed" : " succeeded");
                std::printf("%-28s", label.c_str());
                for (std::size_t a = 0; a < t.action_count(); ++a)
                    std::printf(" %14.4f", t.values()[i * 2 + f][a]);
                std::printf("\n");
            }
        std::printf("\n");
    };

    for (const auto& t : tables) print_table(t);

    bool aligned = tables.size() > 1;
    for (const auto& t : tables)
        if (t.actions() != tables.front().actions()) aligned = false;
    if (aligned) {
        std::vector<const rlcore::QTable*> ptrs;
        for (const auto& t : tables) ptrs.push_back(&t);
        std::vector<double> costs;
        for (const auto& id : tables.front().actions())
            costs.push_back(profiles.per_call_cost(id, tokens_in, tokens_out));
        print_table(board::representative_table(ptrs, costs, k1));
    } else if (tables.size() > 1) {
        std::printf("(action sets diverged; representative table not available)\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Role-driven LLM routing and online long-context processing"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run the routing experiment against the simulated backend");
    std::string run_config, run_sim, run_out;
    std::optional<std::uint64_t> run_seed;
    run->add_option("--config", run_config, "experiment config JSON")->required();
    run->add_option("--sim", run_sim, "sim profile JSON")->required();
    run->add_option("--out", run_out, "output directory")->required();
    run->add_option("--seed", run_seed, "override the config seed");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "process a transcript through the six roles");
    std::string p_transcript, p_aspects = "live-commerce", p_backend = "oracle", p_out;
    std::string p_task, p_sim, p_providers, p_llm = "claude-3-opus";
    std::size_t p_max_chars = 6000;
    std::uint64_t p_seed = 0;
    bool p_render = false;
    pipe->add_option("--transcript", p_transcript, "line-delimited transcript")->required();
    pipe->add_option("--aspects", p_aspects, "preset name or comma-separated aspect list");
    pipe->add_option("--backend", p_backend, "oracle | sim | http");
    pipe->add_option("--out", p_out, "output document path")->required();
    pipe->add_option("--task", p_task, "task file with the gold document (oracle/sim)");
    pipe->add_option("--sim", p_sim, "sim profile (sim backend)");
    pipe->add_option("--providers", p_providers, "provider endpoints JSON (http backend)");
    pipe->add_option("--llm", p_llm, "LLM id to bind to every role");
    pipe->add_option("--max-chars", p_max_chars, "chunk budget in characters");
    pipe->add_option("--seed", p_seed, "seed for the sim backend");
    pipe->add_flag("--render", p_render, "also print the human-readable document");

    // ablate
    auto* ablate = app.add_subcommand("ablate", "run full, no-greedy, no-cross and high-epsilon variants");
    std::string a_config, a_sim, a_out;
    double a_high_eps = 0.1;
    ablate->add_option("--config", a_config)->required();
    ablate->add_option("--sim", a_sim)->required();
    ablate->add_option("--out", a_out)->required();
    ablate->add_option("--epsilon-high", a_high_eps, "epsilon for the high-epsilon variant");

    // eval
    auto* eval = app.add_subcommand("eval", "recall of a predicted document against gold");
    std::string e_pred, e_gold;
    eval->add_option("--pred", e_pred)->required();
    eval->add_option("--gold", e_gold)->required();

    // ingest-longbench
    auto* ingest = app.add_subcommand("ingest-longbench",
                                      "restructure adapter-format news items into a task");
    std::string i_input, i_out;
    int i_topics = 10;
    std::uint64_t i_seed = 0;
    ingest->add_option("--input", i_input, "adapter-format JSON corpus")->required();
    ingest->add_option("--topics", i_topics, "number of topics to sample");
    ingest->add_option("--seed", i_seed, "sampling seed");
    ingest->add_option("--out", i_out, "output directory")->required();

    // export-tables
    auto* expt = app.add_subcommand("export-tables", "pretty-print Q-table checkpoints");
    std::string x_tables;
    double x_k1 = 1.0;
    std::int64_t x_tin = 25000, x_tout = 25000;
    expt->add_option("--tables", x_tables, "qtables.json from a run")->required();
    expt->add_option("--k1", x_k1, "cost coefficient for the representative table");
    expt->add_option("--tokens-in", x_tin);
    expt->add_option("--tokens-out", x_tout);

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(run_config, run_sim, run_out, run_seed);
        if (pipe->parsed())
            return cmd_pipeline(p_transcript, p_aspects, p_backend, p_out, p_task, p_sim,
                                p_providers, p_llm, p_max_chars, p_seed, p_render);
        if (ablate->parsed()) return cmd_ablate(a_config, a_sim, a_out, a_high_eps);
        if (eval->parsed()) return cmd_eval(e_pred, e_gold);
        if (ingest->parsed()) return cmd_ingest_longbench(i_input, i_topics, i_seed, i_out);
        if (expt->parsed()) return cmd_export_tables(x_tables, x_k1, x_tin, x_tout);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
