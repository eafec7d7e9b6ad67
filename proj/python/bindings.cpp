#include "olp/backends.hpp"
#include "olp/error.hpp"
#include "olp/harness.hpp"
#include "olp/metrics.hpp"
#include "olp/model.hpp"
#include "olp/pipeline.hpp"
#include "olp/rlcore.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace olp;

namespace {

harness::Variant variant_from_name(const std::string& name) {
    if (name == "full") return harness::Variant::Full;
    if (name == "no_greedy") return harness::Variant::NoGreedy;
    if (name == "no_cross") return harness::Variant::NoCross;
    throw config_error("variant must be full, no_greedy or no_cross");
}

py::dict summary_to_dict(const harness::RunResult& run) {
    py::dict d;
    d["rounds"] = run.summary.rounds;
    d["total_cost"] = run.summary.total_cost;
    d["total_reward"] = run.summary.total_reward;
    py::dict switches;
    for (const auto& [role, n] : run.summary.switches) switches[py::str(role)] = n;
    d["switches"] = switches;
    py::dict board;
    for (const auto& [id, w] : run.summary.final_board) board[py::str(id)] = w;
    d["final_board"] = board;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Q-learning LLM router and streaming topic/aspect pipeline";

    m.def(
        "compute_cost",
        [](const std::string& llm, std::int64_t tokens_in, std::int64_t tokens_out) {
            backends::ProfileSet profiles;
            return backends::compute_cost(profiles.get(llm), tokens_in, tokens_out);
        },
        py::arg("llm"), py::arg("tokens_in") = 25000, py::arg("tokens_out") = 25000,
        "Per-call dollar cost of one of the built-in model profiles.");

    m.def(
        "profiles",
        [] {
            py::list out;
            for (const auto& p : backends::default_profiles()) {
                py::dict d;
                d["id"] = p.id;
                d["display_name"] = p.display_name;
                d["input_price"] = p.input_price;
                d["output_price"] = p.output_price;
                out.append(d);
            }
            return out;
        },
        "The built-in price table.");

    m.def(
        "compute_reward",
        [](double v, double cost, double delay, double k1, double k2) {
            return rlcore::compute_reward(v, cost, delay, {k1, k2, 10.0, -100.0});
        },
        py::arg("v"), py::arg("cost"), py::arg("delay"), py::arg("k1") = 1.0,
        py::arg("k2") = 0.1, "R = v - k1*cost - k2*delay");

    m.def(
        "classify_outcome",
        [](double reward) {
            return std::string(rlcore::outcome_name(rlcore::classify_outcome(reward)));
        },
        py::arg("reward"));

    m.def(
        "iou",
        [](std::int64_t a_first, std::int64_t a_last, std::int64_t b_first, std::int64_t b_last) {
            return metrics::iou({a_first, a_last}, {b_first, b_last});
        },
        py::arg("a_first"), py::arg("a_last"), py::arg("b_first"), py::arg("b_last"),
        "Discrete IoU of two inclusive index spans.");

    m.def("text_similarity", &metrics::text_similarity, py::arg("a"), py::arg("b"),
          "Token-level F1 over normalized unigram multisets.");

    m.def("map_score_to_v", &metrics::map_score_to_v, py::arg("score"),
          py::arg("v_correct") = 10.0, py::arg("v_wrong") = -100.0);

    m.def(
        "recall_rate",
        [](const std::string& pred_json, const std::string& gold_json) {
            return metrics::recall_rate(model::parse_document(pred_json),
                                        model::parse_document(gold_json));
        },
        py::arg("pred_json"), py::arg("gold_json"),
        "Aspect-credited recall between two documents in their JSON form.");

    m.def(
        "validate_document",
        [](const std::string& doc_json) {
            return model::validate_document(model::parse_document(doc_json)).violations;
        },
        py::arg("doc_json"), "Invariant violations; empty means the document is well-formed.");

    m.def(
        "render_document",
        [](const std::string& doc_json) {
            return model::render_document(model::parse_document(doc_json));
        },
        py::arg("doc_json"), "Human-readable topic/aspect rendering.");

    m.def(
        "parse_transcript",
        [](const std::string& text, std::int64_t start_index) {
            py::list out;
            for (const auto& p : model::parse_transcript(text, start_index))
                out.append(py::make_tuple(p.index, p.text));
            return out;
        },
        py::arg("text"), py::arg("start_index") = 0);

    m.def(
        "run_experiment",
        [](const std::string& config_path, const std::string& sim_path,
           const std::string& variant, std::optional<std::uint64_t> seed) {
            auto config = model::load_config(config_path);
            if (seed) config.seed = *seed;
            auto sim = backends::SimProfile::load(sim_path);
            auto tasks = harness::load_tasks(config);
            auto run = harness::run_experiment(config, sim, tasks, variant_from_name(variant));
            return summary_to_dict(run);
        },
        py::arg("config_path"), py::arg("sim_path"), py::arg("variant") = "full",
        py::arg("seed") = py::none(),
        "Run the routing experiment and return its summary.");

    m.def(
        "run_baseline",
        [](const std::string& config_path, const std::string& sim_path) {
            auto config = model::load_config(config_path);
            auto sim = backends::SimProfile::load(sim_path);
            auto tasks = harness::load_tasks(config);
            return summary_to_dict(harness::run_baseline_strongest(config, sim, tasks));
        },
        py::arg("config_path"), py::arg("sim_path"),
        "Strongest-LLM-everywhere baseline summary.");

    m.def(
        "pipeline_oracle",
        [](const std::string& task_path, std::size_t max_chars) {
            auto task = model::load_task(task_path);
            auto invoke = [&task](RoleId role, const grammar::RoleRequest& request) {
                backends::Invocation inv{role, "oracle", "p", request};
                return backends::oracle_invoke(inv, task);
            };
            pipeline::Options options;
            options.max_chars = max_chars;
            auto result = pipeline::process_stream(task.transcript, task.gold.aspect_schema,
                                                   invoke, options);
            py::dict d;
            d["document"] = model::serialize_document(result.document);
            d["recall"] = metrics::recall_rate(result.document, task.gold);
            d["warnings"] = result.warnings;
            return d;
        },
        py::arg("task_path"), py::arg("max_chars") = 6000,
        "Drive the six-role pipeline over a task's transcript with the oracle backend.");

    py::register_exception<Error>(m, "OlpError");
}
