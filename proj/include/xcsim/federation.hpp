#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xcsim/errors.hpp"

namespace xcsim {

enum class NodeKind { Redirector, OriginServer };

// Input description of one federation node, as read from a topology file.
struct NodeSpec {
    std::string id;
    NodeKind kind = NodeKind::Redirector;
    std::optional<std::string> parent;  // nullopt for the root
    std::string site;
    std::vector<std::string> holdings;  // origin servers only
};

struct FederationNode {
    std::string id;
    NodeKind kind = NodeKind::Redirector;
    std::optional<std::string> parent;
    std::vector<std::string> children;  // declaration order
    std::string site;
    std::set<std::string> holdings;
    int depth = 0;  // root = 0
};

// Validated federation tree: origin servers at the leaves, redirectors
// above, exactly one root redirector. Immutable after build; all queries
// are pure.
class Topology {
public:
    // Checks the tree invariants and names the offending node on failure.
    static Topology build(const std::vector<NodeSpec>& specs);

    bool contains(const std::string& id) const { return nodes_.count(id) > 0; }
    // Throws ValidationError for an unknown id.
    const FederationNode& node(const std::string& id) const;
    const std::string& root() const { return root_; }
    const std::map<std::string, FederationNode>& nodes() const { return nodes_; }

private:
    std::map<std::string, FederationNode> nodes_;
    std::string root_;
};

// Record of one redirect resolution.
struct ResolveTrace {
    std::optional<std::string> server;  // engaged iff the lfn was found
    std::vector<std::string> hops;      // redirectors consulted, in order
    int depth_queried = 0;              // distinct tree levels among hops
    bool found() const { return server.has_value(); }
};

Topology build_topology(const std::vector<NodeSpec>& specs);

// Loads a topology from JSON Lines; one node per line with fields
// id, kind ("redirector" | "origin-server"), parent (null for the root),
// site, holdings (array, servers only).
Topology load_topology(const std::string& path);

// Resolves `lfn` starting at redirector `start`. A redirector first asks
// its direct child servers (lexicographic tie-break among holders), then
// descends through child redirectors in declaration order; on failure the
// query escalates to the parent, skipping the subtree already searched.
ResolveTrace resolve(const Topology& topology, const std::string& start, const std::string& lfn);

// Deterministic pick among equivalent servers: the lexicographically
// smallest id. Throws UsageError on an empty candidate list.
std::string select_server(const std::vector<std::string>& candidates);

}  // namespace xcsim
