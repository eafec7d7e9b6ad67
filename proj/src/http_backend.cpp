#include "olp/backends.hpp"
#include "olp/error.hpp"

#include <chrono>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

namespace olp::backends {

Completion http_invoke(const Invocation& inv, const HttpEndpoint& endpoint,
                       const model::LlmProfile& profile) {
    if (endpoint.base_url.empty())
        throw config_error("http backend: no endpoint configured for " + inv.llm);
    const char* key = endpoint.key_env.empty() ? nullptr : std::getenv(endpoint.key_env.c_str());
    if (!key || !*key)
        throw credentials_error("missing credentials: " +
                                (endpoint.key_env.empty() ? std::string("no key_env configured")
                                                          : endpoint.key_env + " is not set"));

    httplib::Client client(endpoint.base_url);
    client.set_connection_timeout(endpoint.timeout_s, 0);
    client.set_read_timeout(endpoint.timeout_s, 0);
    client.set_write_timeout(endpoint.timeout_s, 0);

    nlohmann::ordered_json body;
    body["model"] = endpoint.model.empty() ? profile.id : endpoint.model;
    body["messages"] = nlohmann::ordered_json::array(
        {nlohmann::ordered_json{{"role", "user"}, {"content", inv.prompt}}});

    httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}};

    const auto t0 = std::chrono::steady_clock::now();
    auto res = client.Post(endpoint.path, headers, body.dump(), "application/json");
    const auto t1 = std::chrono::steady_clock::now();

    if (!res)
        throw io_error("http backend: transport failure talking to " + endpoint.base_url +
                       " (" + httplib::to_string(res.error()) + ")");
    if (res->status < 200 || res->status >= 300)
        throw io_error("http backend: status " + std::to_string(res->status) + " from " +
                       endpoint.base_url);

    auto j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.contains("choices") || j["choices"].empty() ||
        !j["choices"][0].contains("message") || !j["choices"][0]["message"].contains("content"))
        throw data_error("http backend: malformed completion body");

    Completion c;
    c.text = j["choices"][0]["message"]["content"].get<std::string>();
    if (j.contains("usage")) {
        c.tokens_in = j["usage"].value("prompt_tokens", std::int64_t{0});
        c.tokens_out = j["usage"].value("completion_tokens", std::int64_t{0});
    }
    c.latency_s = std::chrono::duration<double>(t1 - t0).count();
    // actual usage prices the call unless the endpoint pins the fixed counts
    c.cost = endpoint.fixed_tokens ? compute_cost(profile, endpoint.tokens_in, endpoint.tokens_out)
                                   : compute_cost(profile, c.tokens_in, c.tokens_out);
    return c;
}

Completion HttpBackend::invoke(const Invocation& inv) {
    auto it = endpoints_.find(inv.llm);
    if (it == endpoints_.end())
        throw config_error("http backend: no endpoint configured for " + inv.llm);
    return http_invoke(inv, it->second, profiles_.get(inv.llm));
}

} // namespace olp::backends
