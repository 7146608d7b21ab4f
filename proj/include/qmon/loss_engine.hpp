#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmon/component_catalog.hpp"
#include "qmon/topology.hpp"

namespace qmon {

/// Tolerable end-to-end attenuation per signal class. Entangled links are
/// budgeted on the sum of both arms. Conventional links are classical and
/// unbudgeted unless configured.
struct BudgetPolicy {
    std::optional<LossDb> conventional;
    std::optional<LossDb> quantum_oneway = LossDb::from_centidb(3000);
    std::optional<LossDb> entangled = LossDb::from_centidb(3000);

    std::optional<LossDb> for_class(SignalClass c) const {
        switch (c) {
            case SignalClass::conventional: return conventional;
            case SignalClass::quantum_oneway: return quantum_oneway;
            case SignalClass::entangled: return entangled;
        }
        return std::nullopt;
    }
};

/// Everything needed to price a route.
struct Pricing {
    Catalog catalog;
    NodeLossTable nodes;
    BudgetPolicy budgets;
};

struct Segment {
    std::string label;
    LossDb db;
};

/// Priced path: per-element breakdown, exact total, and budget verdict.
/// Entangled reports hold both arms; total is the arm sum.
struct PathLossReport {
    SignalClass cls = SignalClass::quantum_oneway;
    std::vector<Route> routes;
    std::vector<Segment> per_segment;
    LossDb total_db;
    std::optional<LossDb> budget_db;
    bool feasible = true;
    std::vector<int> arm_backbone_hops;  // x-closest class of each arm

    void apply_budget(const BudgetPolicy& budgets) {
        budget_db = budgets.for_class(cls);
        feasible = !budget_db || total_db <= *budget_db;
    }
};

namespace detail {

inline LossDb price_hop(const Pricing& pricing, const NetworkModel& net, SignalClass cls, const Hop& hop,
                        std::string* label) {
    const BandName b = band_of(cls);
    if (const FiberHop* f = std::get_if<FiberHop>(&hop)) {
        if (label) *label = f->label + " (" + std::to_string(f->length_m) + " m)";
        return span_loss(pricing.catalog.loss(Part::fiber, b), f->length_m);
    }
    if (const DeviceHop* d = std::get_if<DeviceHop>(&hop)) {
        if (label) *label = d->label;
        return pricing.catalog.loss(d->part, b);
    }
    const NodeHop n = std::get<NodeHop>(hop);
    const BackboneKind kind = net.nodes.at(n.node).kind;
    // A transiting entangled photon is just a quantum signal; the dedicated
    // entangled entry of the cross-connect is its source-injection loss.
    SignalClass effective = cls;
    if (cls == SignalClass::entangled && kind == BackboneKind::active_pxc && !n.injection)
        effective = SignalClass::quantum_oneway;
    if (label)
        *label = net.nodes.at(n.node).name() + " " + to_string(n.action) + (n.injection ? " (injection)" : "");
    return pricing.nodes.node_loss(kind, n.action, effective);
}

}  // namespace detail

/// Price one route end to end. Fiber is priced in the class band (0.32 dB/km
/// in the O band, 0.20 dB/km in the C band).
inline PathLossReport one_way_loss(const Pricing& pricing, const NetworkModel& net, const Route& route) {
    PathLossReport report;
    report.cls = route.cls;
    report.routes.push_back(route);
    report.arm_backbone_hops.push_back(route.backbone_hops);
    for (const Hop& hop : route.hops) {
        std::string label;
        const LossDb db = detail::price_hop(pricing, net, route.cls, hop, &label);
        report.per_segment.push_back({label, db});
        report.total_db += db;
    }
    report.apply_budget(pricing.budgets);
    return report;
}

/// Entangled link between two users: the sum of the two photon paths.
inline PathLossReport entangled_link_loss(const Pricing& pricing, const NetworkModel& net, const Route& arm_a,
                                          const Route& arm_b) {
    if (arm_a.cls != SignalClass::entangled || arm_b.cls != SignalClass::entangled)
        throw Error("entangled links are priced with entangled arms");
    PathLossReport report;
    report.cls = SignalClass::entangled;
    for (const Route* arm : {&arm_a, &arm_b}) {
        report.routes.push_back(*arm);
        report.arm_backbone_hops.push_back(arm->backbone_hops);
        const std::string prefix = "arm " + std::to_string(report.routes.size()) + ": ";
        for (const Hop& hop : arm->hops) {
            std::string label;
            const LossDb db = detail::price_hop(pricing, net, SignalClass::entangled, hop, &label);
            report.per_segment.push_back({prefix + label, db});
            report.total_db += db;
        }
    }
    report.apply_budget(pricing.budgets);
    return report;
}

/// Entangled link on a ring, both arms from one source site.
inline PathLossReport entangled_link_loss(const Pricing& pricing, const NetworkModel& net, SourceRef source,
                                          UserRef user_a, UserRef user_b,
                                          std::optional<std::pair<DwdmChannel, DwdmChannel>> channel_pair =
                                              std::nullopt) {
    if (channel_pair) {
        const PairingCenter center = PairingCenter::between(channel_pair->first, channel_pair->second);
        if (entangled_partner(channel_pair->first, center) != channel_pair->second)
            throw Error("channel pair is not symmetric about a source center");
    }
    const Route arm_a = enumerate_route(net, SignalClass::entangled, source, user_a);
    const Route arm_b = enumerate_route(net, SignalClass::entangled, source, user_b);
    return entangled_link_loss(pricing, net, arm_a, arm_b);
}

// ---------------------------------------------------------------------------
// Worst-case tables

/// One row per x-closest destination; cells hold every signal class. A ring
/// has no direct entangled path to the source's own access network, so that
/// cell is undefined and the full-backbone value is reported separately.
struct WorstCaseTable {
    struct Row {
        int x = 0;
        std::optional<LossDb> conventional;
        std::optional<LossDb> quantum;
        std::optional<LossDb> entangled;
    };
    std::vector<Row> rows;
    std::optional<LossDb> ring_self_entangled_via_backbone;
    // Largest x per class still inside its budget (-1: none, INT_MAX-free).
    std::optional<int> conventional_boundary;
    std::optional<int> quantum_boundary;
    std::optional<int> entangled_boundary;
};

namespace detail {

/// A simple backbone path with exactly `links` spans starting anywhere; used
/// to exercise x-closest rows of reconfigurable meshes.
inline std::optional<std::vector<int>> mesh_path_with_links(const NetworkModel& net, int links) {
    for (int start = 0; start < net.n_nodes(); ++start) {
        std::vector<int> path = {start};
        std::vector<bool> used(net.n_nodes(), false);
        used[start] = true;
        auto rec = [&](auto&& self, int node) -> std::optional<std::vector<int>> {
            if (static_cast<int>(path.size()) == links + 1) {
                if (net.nodes.at(path.back()).access_network >= 0 &&
                    net.nodes.at(path.front()).access_network >= 0)
                    return path;
                return std::nullopt;
            }
            for (int m : net.neighbors(node)) {
                if (used[m]) continue;
                used[m] = true;
                path.push_back(m);
                if (auto r = self(self, m)) return r;
                path.pop_back();
                used[m] = false;
            }
            return std::nullopt;
        };
        if (auto r = rec(rec, start)) return r;
    }
    return std::nullopt;
}

}  // namespace detail

/// Emitter-to-receiver losses for every signal class over increasing
/// backbone distance, as a reference table plus feasibility boundaries.
inline WorstCaseTable worst_case_analysis(const Pricing& pricing, const NetworkModel& net, int max_x = 3) {
    WorstCaseTable table;
    const bool ent_only = net.head_end_source;

    auto price = [&](const Route& r) { return one_way_loss(pricing, net, r).total_db; };

    for (int x = 0; x <= max_x; ++x) {
        WorstCaseTable::Row row;
        row.x = x;
        if (net.kind == TopologyKind::mesh) {
            if (x == 0) {
                row.conventional = price(make_return_path_route(net, SignalClass::conventional, UserRef{0},
                                                                UserRef{0, 1}));
                row.quantum =
                    price(make_return_path_route(net, SignalClass::quantum_oneway, UserRef{0}, UserRef{0, 1}));
                row.entangled = price(make_mesh_path_route(net, SignalClass::entangled, SourceRef{0},
                                                           UserRef{net.nodes[0].access_network}, {0}));
            } else if (auto path = detail::mesh_path_with_links(net, x)) {
                const UserRef from{net.nodes.at(path->front()).access_network};
                const UserRef to{net.nodes.at(path->back()).access_network};
                row.conventional = price(make_mesh_path_route(net, SignalClass::conventional, from, to, *path));
                row.quantum = price(make_mesh_path_route(net, SignalClass::quantum_oneway, from, to, *path));
                row.entangled = price(make_mesh_path_route(net, SignalClass::entangled,
                                                           SourceRef{path->front()}, to, *path));
            } else {
                continue;  // no simple path that long
            }
        } else if (ent_only) {
            if (x == 0 || x > net.n_access()) continue;
            row.entangled = price(make_head_end_arm(net, UserRef{x - 1}));
        } else {
            if (x > net.n_nodes()) continue;
            if (x == 0) {
                row.conventional = price(make_return_path_route(net, SignalClass::conventional, UserRef{0},
                                                                UserRef{0, 1}));
                row.quantum =
                    price(make_return_path_route(net, SignalClass::quantum_oneway, UserRef{0}, UserRef{0, 1}));
                // No short entanglement path to the source's own network.
            } else {
                const UserRef to{(0 + x) % net.n_nodes()};
                RouteOptions force;
                force.force_backbone = x == net.n_nodes();
                row.conventional = price(enumerate_route(net, SignalClass::conventional, UserRef{0}, to,
                                                         std::nullopt, force));
                row.quantum = price(enumerate_route(net, SignalClass::quantum_oneway, UserRef{0}, to,
                                                    std::nullopt, force));
                row.entangled = price(enumerate_route(net, SignalClass::entangled, SourceRef{0}, to));
            }
        }
        table.rows.push_back(row);
    }

    if (!ent_only && net.kind != TopologyKind::mesh && net.n_nodes() > 0)
        table.ring_self_entangled_via_backbone =
            price(enumerate_route(net, SignalClass::entangled, SourceRef{0}, UserRef{0}));

    auto boundary = [&](std::optional<LossDb> budget,
                        std::optional<LossDb> WorstCaseTable::Row::*cell) -> std::optional<int> {
        if (!budget) return std::nullopt;
        int best = -1;
        bool any = false;
        for (const auto& row : table.rows)
            if (row.*cell) {
                any = true;
                if (*(row.*cell) <= *budget) best = std::max(best, row.x);
            }
        if (!any) return std::nullopt;
        return best;
    };
    table.conventional_boundary = boundary(pricing.budgets.conventional, &WorstCaseTable::Row::conventional);
    table.quantum_boundary = boundary(pricing.budgets.quantum_oneway, &WorstCaseTable::Row::quantum);
    table.entangled_boundary = boundary(pricing.budgets.entangled, &WorstCaseTable::Row::entangled);
    return table;
}

}  // namespace qmon
