#pragma once

#include <array>
#include <string>

namespace olp {

// The six pipeline roles. The first four are model-backed, the last two are
// deterministic code.
enum class RoleId {
    TopicFinder,
    TopicLocator,
    RelationshipChecker,
    ContentOrganizer,
    FormatChecker,
    ChunkSplitter,
};

inline constexpr std::array<RoleId, 4> kLlmRoles = {
    RoleId::TopicFinder, RoleId::TopicLocator,
    RoleId::RelationshipChecker, RoleId::ContentOrganizer};

const std::string& role_name(RoleId role);
RoleId role_from_name(const std::string& name); // throws on unknown names

} // namespace olp
