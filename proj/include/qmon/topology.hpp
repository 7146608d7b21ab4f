#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qmon/component_catalog.hpp"
#include "qmon/wdm_grid.hpp"

namespace qmon {

enum class TopologyKind { star, open_ring, ring, mesh };

inline std::string to_string(TopologyKind k) {
    switch (k) {
        case TopologyKind::star: return "star";
        case TopologyKind::open_ring: return "open_ring";
        case TopologyKind::ring: return "ring";
        case TopologyKind::mesh: return "mesh";
    }
    return "?";
}

/// Reference span lengths, metre resolution.
struct SpanLengths {
    int user_m = 1000;      // user to access switch/AWG site
    int feeder_m = 3500;    // AWG to backbone node
    int backbone_m = 4000;  // backbone node to neighbor
};

/// A tree access network hanging off one backbone node: users behind a
/// switch and an AWG. Return-path loops on the network side of the switch
/// let co-located users talk without entering the backbone.
struct AccessNetwork {
    int id = 0;
    int node = -1;
    std::optional<CwdmChannel> conventional;
    std::optional<CwdmChannel> quantum;
    int user_count = 16;
    int awg_channel_count = 32;
    int switch_port_count = 36;
    int return_loop_count = 1;

    std::string name() const { return "A" + std::to_string(id + 1); }
};

struct BackboneNode {
    int id = 0;
    BackboneKind kind = BackboneKind::passive_oadm;
    bool source_site = false;
    int access_network = -1;

    std::string name() const { return "N" + std::to_string(id + 1); }
};

struct Link {
    int a = 0;
    int b = 0;
    int length_m = 4000;
};

/// Typed network graph. Immutable after construction; rings list their
/// nodes in propagation order (signals travel node i -> node i+1 mod N).
struct NetworkModel {
    TopologyKind kind = TopologyKind::ring;
    std::vector<BackboneNode> nodes;
    std::vector<Link> links;
    std::vector<AccessNetwork> access;
    SpanLengths spans;
    // Entanglement-only designs group all sources at a head end feeding the
    // first node through one backbone span.
    bool head_end_source = false;
    // Mesh designs pool channels instead of mapping them to access networks.
    std::vector<CwdmChannel> quantum_pool;
    std::vector<CwdmChannel> conventional_pool;
    std::vector<std::string> warnings;

    int n_access() const { return static_cast<int>(access.size()); }
    int n_nodes() const { return static_cast<int>(nodes.size()); }

    const AccessNetwork& an(int id) const { return access.at(id); }

    std::optional<int> link_between(int a, int b) const {
        for (std::size_t i = 0; i < links.size(); ++i)
            if ((links[i].a == a && links[i].b == b) || (links[i].a == b && links[i].b == a))
                return static_cast<int>(i);
        return std::nullopt;
    }

    std::vector<int> neighbors(int node) const {
        std::vector<int> out;
        for (const Link& l : links) {
            if (l.a == node) out.push_back(l.b);
            if (l.b == node) out.push_back(l.a);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

struct UserRef {
    int access_network = 0;
    int user_index = 0;

    friend bool operator==(const UserRef& a, const UserRef& b) {
        return a.access_network == b.access_network && a.user_index == b.user_index;
    }
};

/// A pair source site: attached to a backbone node, or the grouped head-end
/// site of the entanglement-only designs.
struct SourceRef {
    int node = -1;
    bool head_end = false;
};

using Emitter = std::variant<UserRef, SourceRef>;

// ---------------------------------------------------------------------------
// Routes

struct FiberHop {
    int length_m;
    std::string label;
};

struct DeviceHop {
    Part part;
    std::string label;
};

struct NodeHop {
    int node;
    NodeAction action;
    bool injection = false;  // source entering the network at this node
};

using Hop = std::variant<FiberHop, DeviceHop, NodeHop>;

/// A concrete one-way path from an emitter (user or source) to a user.
/// backbone_hops is the x-closest count: the number of backbone spans.
struct Route {
    SignalClass cls = SignalClass::quantum_oneway;
    Emitter from;
    UserRef to;
    std::vector<Hop> hops;
    int backbone_hops = 0;
    bool via_return_path = false;
    bool via_full_backbone = false;
};

struct RouteOptions {
    // Route a same-access-network pair over the whole backbone instead of
    // the switch loop.
    bool force_backbone = false;
};

namespace detail {

inline void append_access_egress(const NetworkModel& net, std::vector<Hop>& hops) {
    hops.push_back(FiberHop{net.spans.user_m, "user fiber"});
    hops.push_back(DeviceHop{Part::optical_switch, "access switch"});
    hops.push_back(DeviceHop{Part::awg32, "access AWG"});
    hops.push_back(FiberHop{net.spans.feeder_m, "feeder fiber"});
}

inline void append_access_ingress(const NetworkModel& net, std::vector<Hop>& hops) {
    hops.push_back(FiberHop{net.spans.feeder_m, "feeder fiber"});
    hops.push_back(DeviceHop{Part::awg32, "access AWG"});
    hops.push_back(DeviceHop{Part::optical_switch, "access switch"});
    hops.push_back(FiberHop{net.spans.user_m, "user fiber"});
}

inline int backbone_span_m(const NetworkModel& net, int from_node, int to_node) {
    if (auto l = net.link_between(from_node, to_node)) return net.links[*l].length_m;
    throw Error("no backbone link between N" + std::to_string(from_node + 1) + " and N" +
                std::to_string(to_node + 1));
}

}  // namespace detail

/// Switch-loop route between two users of one access network.
inline Route make_return_path_route(const NetworkModel& net, SignalClass cls, UserRef from, UserRef to) {
    if (from.access_network != to.access_network) throw Error("return path requires a common access network");
    if (net.an(from.access_network).return_loop_count < 1)
        throw Error(net.an(from.access_network).name() + " has no return-path loop");
    Route r;
    r.cls = cls;
    r.from = from;
    r.to = to;
    r.via_return_path = true;
    r.hops.push_back(FiberHop{net.spans.user_m, "user fiber"});
    r.hops.push_back(DeviceHop{Part::optical_switch, "access switch"});
    r.hops.push_back(DeviceHop{Part::optical_switch, "access switch (loop)"});
    r.hops.push_back(FiberHop{net.spans.user_m, "user fiber"});
    return r;
}

/// Ring route along the propagation direction; hop count k = 1..N, where
/// k = N is the own access network reached via the full backbone.
inline Route make_ring_route(const NetworkModel& net, SignalClass cls, Emitter from, UserRef to, int hops_k) {
    const int n = net.n_nodes();
    if (hops_k < 1 || hops_k > n) throw Error("ring hop count out of range");
    Route r;
    r.cls = cls;
    r.from = from;
    r.to = to;
    r.backbone_hops = hops_k;
    r.via_full_backbone = hops_k == n;

    int node = -1;
    if (const UserRef* u = std::get_if<UserRef>(&from)) {
        node = net.an(u->access_network).node;
        detail::append_access_egress(net, r.hops);
        r.hops.push_back(NodeHop{node, NodeAction::add});
    } else {
        const SourceRef s = std::get<SourceRef>(from);
        if (s.head_end) {
            // The grouped sources feed the first node through one span.
            node = -1;
        } else {
            node = s.node;
            if (!net.nodes.at(node).source_site) throw Error(net.nodes.at(node).name() + " has no source site");
            r.hops.push_back(NodeHop{node, NodeAction::add, true});
        }
    }

    for (int i = 0; i < hops_k; ++i) {
        const int next = node < 0 ? 0 : (node + 1) % n;
        const int span = node < 0 ? net.spans.backbone_m : detail::backbone_span_m(net, node, next);
        r.hops.push_back(FiberHop{span, "backbone span"});
        const bool last = i == hops_k - 1;
        r.hops.push_back(NodeHop{next, last ? NodeAction::drop : NodeAction::pass});
        node = next;
    }
    if (net.nodes.at(node).access_network != to.access_network)
        throw Error("route does not terminate at " + net.an(to.access_network).name());
    detail::append_access_ingress(net, r.hops);
    return r;
}

/// Mesh route along an explicit node path (PXC settings choose the path, so
/// non-shortest paths are legitimate). Sources inject at the first node.
inline Route make_mesh_path_route(const NetworkModel& net, SignalClass cls, Emitter from, UserRef to,
                                  const std::vector<int>& node_path) {
    if (node_path.empty()) throw Error("mesh route requires at least one node");
    Route r;
    r.cls = cls;
    r.from = from;
    r.to = to;
    r.backbone_hops = static_cast<int>(node_path.size()) - 1;

    const bool from_source = std::holds_alternative<SourceRef>(from);
    if (from_source) {
        const SourceRef s = std::get<SourceRef>(from);
        if (s.node != node_path.front()) throw Error("source is not at the first node of the path");
        if (!net.nodes.at(s.node).source_site) throw Error(net.nodes.at(s.node).name() + " has no source site");
    } else {
        const UserRef u = std::get<UserRef>(from);
        if (net.an(u.access_network).node != node_path.front())
            throw Error("emitter access network is not at the first node of the path");
        detail::append_access_egress(net, r.hops);
    }
    r.hops.push_back(NodeHop{node_path.front(), NodeAction::cross, from_source});
    for (std::size_t i = 1; i < node_path.size(); ++i) {
        r.hops.push_back(
            FiberHop{detail::backbone_span_m(net, node_path[i - 1], node_path[i]), "backbone span"});
        r.hops.push_back(NodeHop{node_path[i], NodeAction::cross});
    }
    if (net.nodes.at(node_path.back()).access_network != to.access_network)
        throw Error("route does not terminate at " + net.an(to.access_network).name());
    detail::append_access_ingress(net, r.hops);
    return r;
}

/// Entanglement-only arm: head-end sources, k spans, k-1 pass-throughs, and
/// the drop at the destination node.
inline Route make_head_end_arm(const NetworkModel& net, UserRef to) {
    if (!net.head_end_source) throw Error("network has no head-end source site");
    const int dest_node = net.an(to.access_network).node;
    const int k = dest_node + 1;  // head end feeds node 0 through one span
    Route r;
    r.cls = SignalClass::entangled;
    r.from = SourceRef{-1, true};
    r.to = to;
    r.backbone_hops = k;
    for (int i = 0; i < k; ++i) {
        r.hops.push_back(FiberHop{net.spans.backbone_m, "backbone span"});
        const bool last = i == k - 1;
        r.hops.push_back(NodeHop{i, last ? NodeAction::drop : NodeAction::pass});
    }
    detail::append_access_ingress(net, r.hops);
    return r;
}

/// Star access network: source feeds users directly through the hub switch.
inline Route make_star_arm(const NetworkModel& net, UserRef to) {
    Route r;
    r.cls = SignalClass::entangled;
    r.from = SourceRef{-1, true};
    r.to = to;
    r.hops.push_back(DeviceHop{Part::optical_switch, "hub switch"});
    r.hops.push_back(FiberHop{net.spans.user_m, "user fiber"});
    return r;
}

// ---------------------------------------------------------------------------
// Reference builders

/// Conventional CWDM channel of an access network: the AWG period image of
/// its quantum channel, 220 nm below.
inline int conventional_partner_nm(int quantum_nm) { return quantum_nm - 220; }

struct BuildOptions {
    SpanLengths spans;
    int users_per_an = 16;
    // First quantum CWDM channel; consecutive access networks step by 20 nm.
    int quantum_base_nm = 1510;
    // Entanglement-only designs spread over the plain CWDM grid.
    int entanglement_only_base_nm = 1450;
    // Mesh channel pools.
    std::vector<int> mesh_quantum_nm = {1530, 1550};
    std::vector<int> mesh_conventional_nm = {1290, 1310};
    // Mesh edges as node index pairs; empty selects the reference layout
    // (one cycle plus one cross link).
    std::vector<std::pair<int, int>> mesh_edges;
};

/// Reference network of a given architecture with the default distances.
inline NetworkModel build_reference_network(TopologyKind kind, int n_access, BackboneKind node_kind,
                                            const BuildOptions& opt = {}) {
    if (n_access < 1) throw Error("need at least one access network");
    NetworkModel net;
    net.kind = kind;
    net.spans = opt.spans;

    auto make_an = [&](int i, int node) {
        AccessNetwork an;
        an.id = i;
        an.node = node;
        an.user_count = opt.users_per_an;
        return an;
    };

    if (kind == TopologyKind::star) {
        if (n_access != 1) throw Error("a star network is a single access network");
        net.head_end_source = true;
        AccessNetwork an = make_an(0, -1);
        an.quantum = CwdmChannel(opt.quantum_base_nm);
        net.access.push_back(an);
        return net;
    }

    const bool entanglement_only = node_kind == BackboneKind::cwdm_oadm_simple;

    if (kind == TopologyKind::ring || kind == TopologyKind::open_ring) {
        for (int i = 0; i < n_access; ++i) {
            BackboneNode node{i, node_kind, !entanglement_only, i};
            net.nodes.push_back(node);
            AccessNetwork an = make_an(i, i);
            const int base = entanglement_only ? opt.entanglement_only_base_nm : opt.quantum_base_nm;
            an.quantum = CwdmChannel(base + 20 * i);
            if (!entanglement_only) an.conventional = CwdmChannel(conventional_partner_nm(base + 20 * i));
            net.access.push_back(an);
        }
        const int span = opt.spans.backbone_m;
        const int closing_links = kind == TopologyKind::ring ? n_access : n_access - 1;
        for (int i = 0; i < closing_links; ++i) net.links.push_back(Link{i, (i + 1) % n_access, span});
        net.head_end_source = entanglement_only;
        return net;
    }

    // Mesh.
    if (n_access < 3) net.warnings.push_back("mesh with fewer than 3 access networks degenerates to a ring");
    for (int i = 0; i < n_access; ++i) {
        net.nodes.push_back(BackboneNode{i, node_kind, true, i});
        net.access.push_back(make_an(i, i));
    }
    std::vector<std::pair<int, int>> edges = opt.mesh_edges;
    if (edges.empty()) {
        for (int i = 0; i < n_access; ++i) edges.emplace_back(i, (i + 1) % n_access);
        if (n_access >= 4) edges.emplace_back(0, 2);
    }
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n_access || b >= n_access || a == b) throw Error("invalid mesh edge");
        if (!net.link_between(a, b)) net.links.push_back(Link{a, b, opt.spans.backbone_m});
    }
    for (int nm : opt.mesh_quantum_nm) net.quantum_pool.emplace_back(nm);
    for (int nm : opt.mesh_conventional_nm) net.conventional_pool.emplace_back(nm);
    return net;
}

/// Access network that owns a channel in the class band, ring designs only.
inline std::optional<int> access_network_for_channel(const NetworkModel& net, SignalClass cls,
                                                     const DwdmChannel& ch) {
    const double nm = ch.wavelength_nm();
    for (const AccessNetwork& an : net.access) {
        const std::optional<CwdmChannel>& c = cls == SignalClass::conventional ? an.conventional : an.quantum;
        if (c && c->passband_lo_nm() <= nm && nm <= c->passband_hi_nm()) return an.id;
    }
    return std::nullopt;
}

/// The unique route of a fixed-wavelength ring (or the head-end arm of an
/// entanglement-only design). Mesh routing is configuration-driven and
/// lives with the scheduler.
inline Route enumerate_route(const NetworkModel& net, SignalClass cls, Emitter from, UserRef to,
                             std::optional<DwdmChannel> channel = std::nullopt, RouteOptions opt = {}) {
    if (channel) {
        auto owner = access_network_for_channel(net, cls, *channel);
        if (!owner || *owner != to.access_network)
            throw Error("no route for channel: it is not assigned to " + net.an(to.access_network).name());
    }
    if (net.kind == TopologyKind::star) {
        if (!std::holds_alternative<SourceRef>(from)) throw Error("star reference routes start at the source");
        return make_star_arm(net, to);
    }
    if (net.kind == TopologyKind::mesh)
        throw Error("mesh routes are induced by a node configuration; use the scheduler");

    if (const UserRef* u = std::get_if<UserRef>(&from)) {
        if (net.head_end_source)
            throw Error("entanglement-only networks carry no user-emitted signals");
        const int k = (to.access_network - u->access_network + net.n_nodes()) % net.n_nodes();
        if (k == 0 && !opt.force_backbone) return make_return_path_route(net, cls, *u, to);
        return make_ring_route(net, cls, from, to, k == 0 ? net.n_nodes() : k);
    }
    const SourceRef s = std::get<SourceRef>(from);
    if (s.head_end) return make_head_end_arm(net, to);
    const int k = (to.access_network - s.node + net.n_nodes()) % net.n_nodes();
    return make_ring_route(net, SignalClass::entangled, from, to, k == 0 ? net.n_nodes() : k);
}

/// Structural checks: attachment integrity, ring cycles, mesh connectivity,
/// port budgets.
inline std::vector<std::string> validate_network(const NetworkModel& net) {
    std::vector<std::string> issues;
    for (const AccessNetwork& an : net.access) {
        if (net.kind != TopologyKind::star) {
            if (an.node < 0 || an.node >= net.n_nodes())
                issues.push_back(an.name() + " is not attached to a backbone node");
            else if (net.nodes[an.node].access_network != an.id)
                issues.push_back(an.name() + " attachment is not mirrored by its node");
        }
        if (an.user_count > an.awg_channel_count)
            issues.push_back(an.name() + " has more users than AWG ports");
        if (an.return_loop_count < 0) issues.push_back(an.name() + " has a negative loop count");
    }
    if (net.kind == TopologyKind::ring) {
        for (int i = 0; i < net.n_nodes(); ++i)
            if (!net.link_between(i, (i + 1) % net.n_nodes()))
                issues.push_back("ring is missing the span N" + std::to_string(i + 1) + "-N" +
                                 std::to_string((i + 1) % net.n_nodes() + 1));
    }
    if (net.kind == TopologyKind::mesh && net.n_nodes() > 0) {
        std::vector<bool> seen(net.n_nodes(), false);
        std::vector<int> stack = {0};
        seen[0] = true;
        while (!stack.empty()) {
            const int n = stack.back();
            stack.pop_back();
            for (int m : net.neighbors(n))
                if (!seen[m]) {
                    seen[m] = true;
                    stack.push_back(m);
                }
        }
        if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
            issues.push_back("mesh backbone is not connected");
    }
    return issues;
}

/// All simple paths between two nodes, shortest first, then lexicographic.
/// Backbones here are a handful of nodes, so exhaustive enumeration is fine.
inline std::vector<std::vector<int>> simple_paths(const NetworkModel& net, int from, int to,
                                                  std::size_t max_len = 16) {
    std::vector<std::vector<int>> out;
    std::vector<int> path = {from};
    std::vector<bool> used(net.n_nodes(), false);
    used[from] = true;
    auto rec = [&](auto&& self, int node) -> void {
        if (node == to) {
            out.push_back(path);
            return;
        }
        if (path.size() >= max_len) return;
        for (int m : net.neighbors(node)) {
            if (used[m]) continue;
            used[m] = true;
            path.push_back(m);
            self(self, m);
            path.pop_back();
            used[m] = false;
        }
    };
    rec(rec, from);
    std::sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

}  // namespace qmon
