#include "xcsim/federation.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

#include <json.hpp>

namespace xcsim {

namespace {

NodeKind parse_kind(const std::string& text, const std::string& where) {
    if (text == "redirector") {
        return NodeKind::Redirector;
    }
    if (text == "origin-server") {
        return NodeKind::OriginServer;
    }
    throw ParseError(where + ": unknown node kind '" + text +
                     "' (expected 'redirector' or 'origin-server')");
}

}  // namespace

Topology Topology::build(const std::vector<NodeSpec>& specs) {
    Topology topo;
    // First pass: insert nodes, reject duplicates.
    for (const auto& spec : specs) {
        if (spec.id.empty()) {
            throw ValidationError("node with empty id");
        }
        FederationNode node;
        node.id = spec.id;
        node.kind = spec.kind;
        node.parent = spec.parent;
        node.site = spec.site;
        node.holdings.insert(spec.holdings.begin(), spec.holdings.end());
        if (!topo.nodes_.emplace(spec.id, std::move(node)).second) {
            throw ValidationError("duplicate node id '" + spec.id + "'");
        }
    }
    // Second pass: wire children in declaration order, find the root.
    std::vector<std::string> roots;
    for (const auto& spec : specs) {
        if (!spec.parent.has_value()) {
            roots.push_back(spec.id);
            continue;
        }
        auto parent_it = topo.nodes_.find(*spec.parent);
        if (parent_it == topo.nodes_.end()) {
            throw ValidationError("node '" + spec.id + "' names unknown parent '" + *spec.parent +
                                  "'");
        }
        parent_it->second.children.push_back(spec.id);
    }
    if (roots.empty()) {
        throw ValidationError("no root node (every node has a parent)");
    }
    if (roots.size() > 1) {
        std::string msg = "multiple root nodes:";
        for (const auto& r : roots) {
            msg += " '" + r + "'";
        }
        throw ValidationError(msg);
    }
    topo.root_ = roots.front();
    if (topo.nodes_.at(topo.root_).kind != NodeKind::Redirector) {
        throw ValidationError("root node '" + topo.root_ + "' is not a redirector");
    }
    // Structural checks per node.
    for (const auto& [id, node] : topo.nodes_) {
        if (node.kind == NodeKind::Redirector && !node.holdings.empty()) {
            throw ValidationError("redirector '" + id + "' has holdings");
        }
        if (node.kind == NodeKind::OriginServer && !node.children.empty()) {
            throw ValidationError("origin-server '" + id + "' has children");
        }
    }
    // Every node must reach the root through the parent chain; a walk that
    // exceeds the node count has hit a cycle.
    for (const auto& [id, node] : topo.nodes_) {
        const FederationNode* current = &node;
        std::size_t steps = 0;
        while (current->parent.has_value()) {
            if (++steps > topo.nodes_.size()) {
                throw ValidationError("cycle detected involving node '" + id + "'");
            }
            current = &topo.nodes_.at(*current->parent);
        }
        if (current->id != topo.root_) {
            throw ValidationError("node '" + id + "' is not connected to the root");
        }
    }
    // Depths, for the level-count reported by resolve.
    std::function<void(const std::string&, int)> assign_depth = [&](const std::string& id,
                                                                    int depth) {
        FederationNode& node = topo.nodes_.at(id);
        node.depth = depth;
        for (const auto& child : node.children) {
            assign_depth(child, depth + 1);
        }
    };
    assign_depth(topo.root_, 0);
    return topo;
}

const FederationNode& Topology::node(const std::string& id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) {
        throw ValidationError("unknown node '" + id + "'");
    }
    return it->second;
}

Topology build_topology(const std::vector<NodeSpec>& specs) {
    return Topology::build(specs);
}

Topology load_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::vector<NodeSpec> specs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::string where = path + ": line " + std::to_string(line_no);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
        try {
            NodeSpec spec;
            spec.id = j.at("id").get<std::string>();
            spec.kind = parse_kind(j.at("kind").get<std::string>(), where);
            if (!j.at("parent").is_null()) {
                spec.parent = j.at("parent").get<std::string>();
            }
            spec.site = j.value("site", std::string{});
            if (j.contains("holdings") && !j.at("holdings").is_null()) {
                spec.holdings = j.at("holdings").get<std::vector<std::string>>();
            }
            specs.push_back(std::move(spec));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    return Topology::build(specs);
}

std::string select_server(const std::vector<std::string>& candidates) {
    if (candidates.empty()) {
        throw UsageError("select_server called with no candidates");
    }
    return *std::min_element(candidates.begin(), candidates.end());
}

namespace {

// Searches the subtree under `redirector`, skipping the child named by
// `skip` (the subtree a previous escalation round already covered).
std::optional<std::string> search_subtree(const Topology& topo, const FederationNode& redirector,
                                          const std::string& lfn, const std::string& skip,
                                          std::vector<std::string>& hops) {
    hops.push_back(redirector.id);
    std::vector<std::string> holders;
    for (const auto& child_id : redirector.children) {
        if (child_id == skip) {
            continue;
        }
        const FederationNode& child = topo.node(child_id);
        if (child.kind == NodeKind::OriginServer && child.holdings.count(lfn) > 0) {
            holders.push_back(child_id);
        }
    }
    if (!holders.empty()) {
        return select_server(holders);
    }
    for (const auto& child_id : redirector.children) {
        if (child_id == skip) {
            continue;
        }
        const FederationNode& child = topo.node(child_id);
        if (child.kind != NodeKind::Redirector) {
            continue;
        }
        auto found = search_subtree(topo, child, lfn, std::string{}, hops);
        if (found.has_value()) {
            return found;
        }
    }
    return std::nullopt;
}

}  // namespace

ResolveTrace resolve(const Topology& topology, const std::string& start, const std::string& lfn) {
    const FederationNode& start_node = topology.node(start);
    if (start_node.kind != NodeKind::Redirector) {
        throw UsageError("resolve must start at a redirector, '" + start + "' is an origin-server");
    }
    ResolveTrace trace;
    const FederationNode* current = &start_node;
    std::string skip;
    while (true) {
        auto found = search_subtree(topology, *current, lfn, skip, trace.hops);
        if (found.has_value()) {
            trace.server = std::move(found);
            break;
        }
        if (!current->parent.has_value()) {
            break;  // the root search failed: not found anywhere
        }
        skip = current->id;
        current = &topology.node(*current->parent);
    }
    std::set<int> levels;
    for (const auto& hop : trace.hops) {
        levels.insert(topology.node(hop).depth);
    }
    trace.depth_queried = static_cast<int>(levels.size());
    return trace;
}

}  // namespace xcsim
