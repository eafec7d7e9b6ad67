// Regenerates the reference fixtures under data/. Run from anywhere:
//   gen_fixtures <data-dir> [seed]
// The checked-in fixtures were produced with the default seed below; change
// it only together with the expectations in the acceptance suite.

#include "olp/backends.hpp"
#include "olp/harness.hpp"
#include "olp/model.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

static void spill(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        std::cerr << "cannot write " << path << "\n";
        std::exit(1);
    }
    std::cout << "wrote " << path.string() << "\n";
}

static olp::backends::SimProfile reference_sim() {
    using R = olp::RoleId;
    olp::backends::SimProfile sim;
    sim.mode = olp::backends::SimProfile::Mode::Threshold;
    sim.temperature = 0.02;

    auto cap = [&](const char* llm, double tf, double tl, double rc, double co) {
        auto& m = sim.capability[llm];
        m[olp::role_name(R::TopicFinder)] = tf;
        m[olp::role_name(R::TopicLocator)] = tl;
        m[olp::role_name(R::RelationshipChecker)] = rc;
        m[olp::role_name(R::ContentOrganizer)] = co;
        sim.judge_accuracy[llm] = 1.0;
    };
    // ability climbs with price; gpt-4o-mini is the cheap-but-strong
    // relationship checker that takes that role over late in the run
    cap("llama3-8b", 0.30, 0.25, 0.20, 0.35);
    cap("gpt-4o-mini", 0.50, 0.50, 0.80, 0.50);
    cap("mixtral-8x7b", 0.60, 0.52, 0.30, 0.45);
    cap("command-r", 0.55, 0.70, 0.75, 0.55);
    cap("gpt-4o", 0.65, 0.68, 0.74, 0.70);
    cap("gemini-1.5-pro", 0.80, 0.85, 0.85, 0.85);
    cap("claude-3-opus", 0.95, 0.95, 0.95, 0.95);

    auto diff = [&](const char* task, double tf, double tl, double rc, double co) {
        auto& m = sim.difficulty[task];
        m[olp::role_name(R::TopicFinder)] = tf;
        m[olp::role_name(R::TopicLocator)] = tl;
        m[olp::role_name(R::RelationshipChecker)] = rc;
        m[olp::role_name(R::ContentOrganizer)] = co;
    };
    // long topics are hard to find but easy to locate; short ones invert that
    diff("task1", 0.90, 0.65, 0.72, 0.75);
    diff("task2", 0.20, 0.80, 0.72, 0.30);
    diff("task3", 0.58, 0.75, 0.72, 0.80);
    return sim;
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: gen_fixtures <data-dir> [seed]\n";
        return 2;
    }
    const fs::path data_dir = argv[1];
    const std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 7;

    // the three reference tasks, sized like the live-commerce benchmarks
    struct Row {
        const char* id;
        int topics;
        double chars;
    };
    for (const Row& row : {Row{"task1", 4, 676.3}, Row{"task2", 2, 139.0}, Row{"task3", 8, 253.5}}) {
        olp::harness::SynthOptions opt;
        opt.id = row.id;
        opt.topics = row.topics;
        opt.chars_per_topic = row.chars;
        opt.start_index = 10000;
        auto task = olp::harness::make_synth_task(seed, opt);
        spill(data_dir / "tasks" / (std::string(row.id) + ".json"),
              olp::model::serialize_task(task));
    }

    spill(data_dir / "sim" / "reference_sim.json", reference_sim().to_json());

    ordered_json config;
    config["alpha"] = 0.1;
    config["epsilon"] = 0.03;
    config["gamma"] = 0.0;
    config["omega"] = 0.0;
    config["k1"] = 1.0;
    config["k2"] = 0.1;
    config["v_correct"] = 10.0;
    config["v_wrong"] = -100.0;
    config["delta_w"] = 0.01;
    config["freeze_rounds"] = 100;
    config["tokens_in"] = 25000;
    config["tokens_out"] = 25000;
    config["rounds"] = 2000;
    config["judge_every_n"] = 1;
    config["seed"] = seed;
    config["llm_pool"] = {"llama3-8b", "mixtral-8x7b", "command-r",
                          "gpt-4o",    "gemini-1.5-pro", "claude-3-opus"};
    config["pool_schedule"] = ordered_json::array({{{"round", 1500}, {"llm", "gpt-4o-mini"}}});
    config["task_schedule"] = ordered_json::array({{{"from", 0}, {"to", 499}, {"task", "task1"}},
                                                   {{"from", 500}, {"to", 999}, {"task", "task2"}},
                                                   {{"from", 1000}, {"to", 1999}, {"task", "task3"}}});
    config["tasks"] = {{"task1", "../tasks/task1.json"},
                       {"task2", "../tasks/task2.json"},
                       {"task3", "../tasks/task3.json"}};
    config["board_member"] = "gemini-1.5-pro";
    config["baseline_llm"] = "claude-3-opus";
    config["pool_mode"] = "replace";
    config["election_mode"] = "union";
    config["bill_partner"] = true;
    spill(data_dir / "config" / "reference.json", config.dump(2) + "\n");

    // a small adapter-format news corpus for the ingest command
    olp::harness::SynthOptions news_opt;
    news_opt.id = "news";
    news_opt.topics = 32;
    news_opt.chars_per_topic = 550;
    news_opt.aspect_schema = olp::model::aspect_preset("news");
    auto corpus = olp::harness::make_synth_task(seed + 1, news_opt);

    ordered_json adapter;
    adapter["items"] = ordered_json::array();
    for (const auto& topic : corpus.gold.topics) {
        ordered_json item;
        item["title"] = topic.title;
        ordered_json passages = ordered_json::array();
        for (const auto& p : corpus.transcript)
            if (topic.span.contains(p.index)) passages.push_back(p.text);
        item["passages"] = std::move(passages);
        ordered_json aspects = ordered_json::object();
        for (const auto& aspect : topic.aspects) {
            ordered_json positions = ordered_json::array();
            for (const auto& e : aspect.entries)
                positions.push_back(e.index - topic.span.first);
            aspects[aspect.name] = std::move(positions);
        }
        item["aspects"] = std::move(aspects);
        adapter["items"].push_back(std::move(item));
    }
    spill(data_dir / "longbench" / "sample_news.json", adapter.dump(2) + "\n");
    return 0;
}
