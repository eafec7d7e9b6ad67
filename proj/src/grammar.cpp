#include "olp/grammar.hpp"
#include "olp/error.hpp"

#include <sstream>

namespace olp {

const std::string& role_name(RoleId role) {
    static const std::string names[] = {
        "topic_finder", "topic_locator", "relationship_checker",
        "content_organizer", "format_checker", "chunk_splitter"};
    return names[static_cast<int>(role)];
}

RoleId role_from_name(const std::string& name) {
    for (int i = 0; i < 6; ++i)
        if (role_name(static_cast<RoleId>(i)) == name) return static_cast<RoleId>(i);
    throw config_error("unknown role: " + name);
}

} // namespace olp

namespace olp::grammar {

static std::string render_chunk(const model::Chunk& chunk) {
    std::string out;
    for (const auto& p : chunk.passages)
        out += "[" + std::to_string(p.index) + ", \"" + p.text + "\"]\n";
    return out;
}

std::string render_prompt(RoleId role, const RoleRequest& request) {
    std::ostringstream p;
    switch (role) {
    case RoleId::TopicFinder:
        p << "You are the topic finder in a streaming transcript pipeline.\n"
          << "List the distinct topics discussed in the passages below, one title per line,\n"
          << "in order of first appearance. Output titles only, no numbering.\n\n"
          << render_chunk(request.chunk);
        break;
    case RoleId::TopicLocator:
        p << "You are the topic locator. For each topic title below, give the inclusive\n"
          << "passage-index range that covers it, one per line, formatted as\n"
          << "title<TAB>first<TAB>last.\n\nTopics:\n";
        for (const auto& t : request.titles) p << t << "\n";
        p << "\nPassages:\n" << render_chunk(request.chunk);
        break;
    case RoleId::RelationshipChecker:
        p << "You are the relationship checker. The numbered topics below were located in\n"
          << "the passages. Decide whether any topic should be deleted or two adjacent\n"
          << "topics merged. Answer with zero or more lines \"MERGE i j\" or \"DELETE i\"\n"
          << "(0-based positions). An empty answer keeps everything.\n\nTopics:\n";
        for (std::size_t i = 0; i < request.topics.size(); ++i)
            p << i << ". " << request.topics[i].title << " [" << request.topics[i].span.first
              << ", " << request.topics[i].span.last << "]\n";
        p << "\nPassages:\n" << render_chunk(request.chunk);
        break;
    case RoleId::ContentOrganizer:
        p << "You are the content organizer. Reorganize the passages of each confirmed\n"
          << "topic below into the aspects ";
        for (std::size_t i = 0; i < request.aspect_schema.size(); ++i)
            p << (i ? ", " : "") << '"' << request.aspect_schema[i] << '"';
        p << ".\nRespond with a JSON document {\"aspect_schema\": [...], \"topics\": [...]} where\n"
          << "each topic has \"title\", \"span\" and \"aspects\" mapping aspect names to\n"
          << "[{\"index\": int, \"text\": str}] lists. Cite only passage indices inside each\n"
          << "topic's span.\n\nConfirmed topics:\n";
        for (const auto& t : request.topics)
            p << t.title << " [" << t.span.first << ", " << t.span.last << "]\n";
        p << "\nPassages:\n" << render_chunk(request.chunk);
        if (!request.feedback.empty())
            p << "\nYour previous answer failed the format check:\n" << request.feedback
              << "Produce a corrected document.\n";
        break;
    default:
        throw config_error("render_prompt: " + role_name(role) + " is not model-backed");
    }
    return p.str();
}

std::string serialize_titles(const std::vector<std::string>& titles) {
    std::string out;
    for (const auto& t : titles) out += t + "\n";
    return out;
}

std::string serialize_spans(const std::vector<TopicSketch>& topics) {
    std::string out;
    for (const auto& t : topics)
        out += t.title + "\t" + std::to_string(t.span.first) + "\t" +
               std::to_string(t.span.last) + "\n";
    return out;
}

std::string serialize_decisions(const std::vector<Decision>& decisions) {
    std::string out;
    for (const auto& d : decisions) {
        if (d.kind == Decision::Merge)
            out += "MERGE " + std::to_string(d.first) + " " + std::to_string(d.second) + "\n";
        else
            out += "DELETE " + std::to_string(d.first) + "\n";
    }
    return out;
}

static std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> parse_titles(const std::string& text) {
    // duplicates are deduplicated preserving first occurrence
    std::vector<std::string> titles;
    for (auto& line : split_lines(text)) {
        bool seen = false;
        for (const auto& t : titles)
            if (t == line) {
                seen = true;
                break;
            }
        if (!seen) titles.push_back(line);
    }
    return titles;
}

std::vector<TopicSketch> parse_spans(const std::string& text) {
    std::vector<TopicSketch> out;
    for (auto& line : split_lines(text)) {
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos)
            throw data_error("span line lacks title<TAB>first<TAB>last: " + line);
        TopicSketch t;
        t.title = line.substr(0, tab1);
        try {
            t.span.first = std::stoll(line.substr(tab1 + 1, tab2 - tab1 - 1));
            t.span.last = std::stoll(line.substr(tab2 + 1));
        } catch (const std::exception&) {
            throw data_error("span line has non-numeric bounds: " + line);
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<Decision> parse_decisions(const std::string& text) {
    std::vector<Decision> out;
    for (auto& line : split_lines(text)) {
        std::istringstream in(line);
        std::string kind;
        in >> kind;
        Decision d;
        if (kind == "MERGE") {
            d.kind = Decision::Merge;
            if (!(in >> d.first >> d.second))
                throw data_error("MERGE needs two positions: " + line);
        } else if (kind == "DELETE") {
            d.kind = Decision::Delete;
            if (!(in >> d.first))
                throw data_error("DELETE needs a position: " + line);
        } else {
            throw data_error("unknown decision: " + line);
        }
        out.push_back(d);
    }
    return out;
}

} // namespace olp::grammar
