#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qmon/entanglement_source.hpp"
#include "qmon/loss_engine.hpp"
#include "qmon/topology.hpp"

namespace qmon {

enum class ChannelRole { entangled, one_way, reserved };

inline std::string to_string(ChannelRole r) {
    switch (r) {
        case ChannelRole::entangled: return "entangled";
        case ChannelRole::one_way: return "one_way";
        case ChannelRole::reserved: return "reserved";
    }
    return "?";
}

struct PlanOptions {
    int dwdm_spacing_ghz = 100;
    double cwdm_passband_nm = 13.0;
    // Fraction of each quantum CWDM channel kept free for one-way signals.
    double one_way_fraction = 0.5;
    int quantum_base_nm = 1510;
    int entanglement_only_base_nm = 1450;
    // Widest spectrum a deployable source can offer.
    double source_max_width_nm = 160.0;
    // CWDM channels available to the quantum plan before running out of
    // spectrum (the fixed-mapping ceiling).
    int max_quantum_cwdm = 8;
};

/// Global channel assignment: two CWDM channels per access network (the O
/// band image sits one AWG period, 220 nm, below the quantum channel), a
/// role for every quantum DWDM channel, and the pair sources feeding them.
struct ChannelPlan {
    struct Assignment {
        int an;
        CwdmChannel conventional;
        CwdmChannel quantum;
    };
    struct DwdmUse {
        DwdmChannel channel;
        ChannelRole role = ChannelRole::one_way;
        int source_id = -1;
    };
    struct Block {
        int an;
        CwdmChannel cwdm;
        std::vector<DwdmUse> channels;
    };

    int n_access = 0;
    int spacing_ghz = 100;
    std::vector<Assignment> assignments;
    std::vector<Block> blocks;
    std::vector<EntangledSourceSpec> sources;

    const Block& block(int an) const { return blocks.at(an); }
};

/// Builds the reference channel plan for n access networks.
///
/// Within each quantum CWDM channel the DWDM slots are handled as mirror
/// pairs about the channel center; a source owns whole mirror units in each
/// channel it serves, which keeps its connected set pairing-closed, and
/// one-way units are interleaved between entangled ones. The unit used by
/// the source of access-network pair (x, y) is colored (x + y) mod n, so
/// allocations never collide within a channel.
inline ChannelPlan synthesize_channel_plan(int n_access, const PlanOptions& opt = {}) {
    if (n_access < 1) throw Error("need at least one access network");
    if (opt.one_way_fraction < 0.0 || opt.one_way_fraction > 1.0)
        throw Error("one-way fraction must lie in [0, 1]");

    ChannelPlan plan;
    plan.n_access = n_access;
    plan.spacing_ghz = opt.dwdm_spacing_ghz;

    for (int i = 0; i < n_access; ++i) {
        const int q_nm = opt.quantum_base_nm + 20 * i;
        const int c_nm = conventional_partner_nm(q_nm);
        if (q_nm > 1610) throw Error("quantum CWDM grid exhausted");
        const CwdmChannel q(q_nm, opt.cwdm_passband_nm);
        const CwdmChannel c(c_nm, opt.cwdm_passband_nm);
        if (!kCBand.contains(q.passband_lo_nm()) || !kCBand.contains(q.passband_hi_nm()))
            throw Error(q.name() + " does not fit the quantum band");
        if (!kOBand.contains(c.passband_lo_nm()) || !kOBand.contains(c.passband_hi_nm()))
            throw Error(c.name() + " does not fit the conventional band");
        plan.assignments.push_back({i, c, q});
    }

    // DWDM blocks per quantum channel; all blocks share one slot count.
    std::vector<std::vector<DwdmChannel>> block_channels;
    for (const auto& a : plan.assignments)
        block_channels.push_back(dwdm_channels_in(a.quantum, opt.dwdm_spacing_ghz));
    const int slots = static_cast<int>(block_channels.front().size());
    const int units = slots / 2;

    // Interleave one-way units among the entangled ones.
    std::vector<bool> unit_is_one_way(units, false);
    int one_way_units = static_cast<int>(std::floor(units * opt.one_way_fraction + 0.5));
    if (opt.one_way_fraction > 0.0 && one_way_units == 0 && units > 0) one_way_units = 1;
    for (int t = 0; t < one_way_units; ++t)
        unit_is_one_way[(2 * t + 1) * units / (2 * one_way_units)] = true;
    std::vector<int> ent_units;
    for (int u = 0; u < units; ++u)
        if (!unit_is_one_way[u]) ent_units.push_back(u);

    if (static_cast<int>(ent_units.size()) < n_access) {
        const int deficit = n_access - static_cast<int>(ent_units.size());
        throw Error("insufficient DWDM channels: " + std::to_string(n_access) +
                    " entangled units needed per CWDM channel, " + std::to_string(ent_units.size()) +
                    " available (deficit " + std::to_string(deficit) +
                    "); lower the one-way reservation or use a denser grid");
    }

    for (int i = 0; i < n_access; ++i) {
        ChannelPlan::Block b;
        b.an = i;
        b.cwdm = plan.assignments[i].quantum;
        for (const DwdmChannel& ch : block_channels[i]) b.channels.push_back({ch, ChannelRole::reserved, -1});
        if (slots % 2 == 1) b.channels[slots / 2].role = ChannelRole::one_way;
        for (int u = 0; u < units; ++u)
            if (unit_is_one_way[u]) {
                b.channels[u].role = ChannelRole::one_way;
                b.channels[slots - 1 - u].role = ChannelRole::one_way;
            }
        plan.blocks.push_back(std::move(b));
    }

    // One source per unordered pair; color (x + y) mod n picks its units.
    int source_id = 0;
    for (int x = 0; x < n_access; ++x) {
        for (int y = x; y < n_access; ++y) {
            const int color = (x + y) % n_access;
            EntangledSourceSpec src = make_source(
                (plan.assignments[x].quantum.nominal_nm + plan.assignments[y].quantum.nominal_nm) / 2.0,
                required_width_nm(plan.assignments[x].quantum, plan.assignments[y].quantum));
            src.id = source_id++;
            src.serves.push_back({x, y});
            const std::int64_t twice =
                block_channels[x].front().index + block_channels[y].front().index + (slots - 1);
            src.grid_center = PairingCenter{twice, opt.dwdm_spacing_ghz};
            for (std::size_t r = 0; color + static_cast<int>(r) * n_access <
                                    static_cast<int>(ent_units.size());
                 ++r) {
                const int u = ent_units[color + static_cast<int>(r) * n_access];
                for (int an : {x, y}) {
                    for (int slot : {u, slots - 1 - u}) {
                        auto& use = plan.blocks[an].channels[slot];
                        if (use.role != ChannelRole::reserved && use.source_id != src.id)
                            throw Error("internal: unit coloring collision");
                        use.role = ChannelRole::entangled;
                        use.source_id = src.id;
                        src.connected_channels.push_back(use.channel);
                    }
                }
            }
            std::sort(src.connected_channels.begin(), src.connected_channels.end());
            src.connected_channels.erase(
                std::unique(src.connected_channels.begin(), src.connected_channels.end()),
                src.connected_channels.end());
            validate_source(src);
            plan.sources.push_back(std::move(src));
        }
    }
    return plan;
}

/// Entangled DWDM pairs a source offers between two access networks (or
/// within one, for x == y).
inline std::vector<std::pair<DwdmChannel, DwdmChannel>> source_pairs(const EntangledSourceSpec& src,
                                                                     const ChannelPlan& plan, int x, int y) {
    std::vector<std::pair<DwdmChannel, DwdmChannel>> pairs;
    if (!src.grid_center) return pairs;
    std::set<DwdmChannel> in_x, in_y;
    for (const auto& use : plan.block(x).channels)
        if (use.source_id == src.id) in_x.insert(use.channel);
    for (const auto& use : plan.block(y).channels)
        if (use.source_id == src.id) in_y.insert(use.channel);
    for (const DwdmChannel& ch : in_x) {
        const DwdmChannel partner = entangled_partner(ch, *src.grid_center);
        if (in_y.count(partner) && (x != y || ch < partner)) pairs.emplace_back(ch, partner);
    }
    return pairs;
}

// ---------------------------------------------------------------------------
// Capacity analysis

enum class LimitingFactor { loss_budget, source_width, cwdm_spectrum, none };

inline std::string to_string(LimitingFactor f) {
    switch (f) {
        case LimitingFactor::loss_budget: return "loss_budget";
        case LimitingFactor::source_width: return "source_width";
        case LimitingFactor::cwdm_spectrum: return "cwdm_spectrum";
        case LimitingFactor::none: return "none";
    }
    return "?";
}

struct CapacityReport {
    int max_access_networks = 0;
    bool unbounded = false;
    LimitingFactor limiting = LimitingFactor::none;
    int users_per_an = 0;
    long total_users = 0;
    std::vector<PathLossReport> witnesses;
    std::string note;
};

/// Best source placement for an entangled pair on a ring whose nodes all
/// host source sites. A source reaches its own node's network only around
/// the whole ring, so hop counts are in 1..N.
inline PathLossReport best_ring_entangled_link(const Pricing& pricing, const NetworkModel& net, int an_a,
                                               int an_b) {
    std::optional<PathLossReport> best;
    for (const BackboneNode& node : net.nodes) {
        if (!node.source_site) continue;
        PathLossReport r = entangled_link_loss(pricing, net, SourceRef{node.id}, UserRef{an_a}, UserRef{an_b});
        if (!best || r.total_db < best->total_db) best = std::move(r);
    }
    if (!best) throw Error("network has no source sites");
    return *best;
}

namespace detail {

/// Worst entangled link of the entanglement-only design: both worst arms,
/// to the last and second-to-last access networks.
inline PathLossReport ent_only_worst_link(const Pricing& pricing, const NetworkModel& net) {
    const int n = net.n_access();
    const Route far_arm = make_head_end_arm(net, UserRef{n - 1});
    const Route near_arm = make_head_end_arm(net, UserRef{n >= 2 ? n - 2 : n - 1});
    return entangled_link_loss(pricing, net, near_arm, far_arm);
}

inline bool ent_only_loss_feasible(const Pricing& pricing, int n, const PlanOptions& opt) {
    BuildOptions bo;
    bo.entanglement_only_base_nm = opt.entanglement_only_base_nm;
    const NetworkModel net = build_reference_network(TopologyKind::ring, n, BackboneKind::cwdm_oadm_simple, bo);
    return ent_only_worst_link(pricing, net).feasible;
}

inline bool ring_loss_feasible(const Pricing& pricing, int n) {
    const NetworkModel net = build_reference_network(TopologyKind::ring, n, BackboneKind::passive_oadm);
    // One-way quantum between every ordered pair of access networks.
    for (int x = 1; x < n; ++x) {
        const Route r = enumerate_route(net, SignalClass::quantum_oneway, UserRef{0}, UserRef{x % n});
        if (!one_way_loss(pricing, net, r).feasible) return false;
    }
    // An entangled link for every unordered pair, best source placement.
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (!best_ring_entangled_link(pricing, net, i, j).feasible) return false;
    return true;
}

inline int ring_spectrum_ceiling(const PlanOptions& opt) {
    int n = 0;
    while (true) {
        const int q_nm = opt.quantum_base_nm + 20 * n;
        if (q_nm > 1610) break;
        const CwdmChannel q(q_nm, opt.cwdm_passband_nm);
        const int c_nm = conventional_partner_nm(q_nm);
        if (c_nm < 1270) break;
        const CwdmChannel c(c_nm, opt.cwdm_passband_nm);
        if (!kCBand.contains(q.passband_lo_nm()) || !kCBand.contains(q.passband_hi_nm())) break;
        if (!kOBand.contains(c.passband_lo_nm()) || !kOBand.contains(c.passband_hi_nm())) break;
        ++n;
    }
    return n;
}

}  // namespace detail

/// Largest number of access networks a reference design supports under the
/// loss budget, the source spectral width, and the CWDM spectrum ceiling.
/// Active mesh designs rotate channel assignments instead of mapping them,
/// so none of the three factors caps their size.
inline CapacityReport max_access_networks(BackboneKind node_kind, const Pricing& pricing,
                                          double source_width_nm, const PlanOptions& opt = {}) {
    CapacityReport report;
    const CwdmChannel probe(1550, opt.cwdm_passband_nm);
    report.users_per_an = static_cast<int>(dwdm_channels_in(probe, opt.dwdm_spacing_ghz).size());

    if (node_kind == BackboneKind::active_pxc) {
        report.unbounded = true;
        report.limiting = LimitingFactor::none;
        report.note = "reconfigurable mesh: growth only adds configurations (channel assignment rotates)";
        return report;
    }

    const bool ent_only = node_kind == BackboneKind::cwdm_oadm_simple;
    const int base = ent_only ? opt.entanglement_only_base_nm : opt.quantum_base_nm;
    const int spectrum_ceiling =
        ent_only ? std::min(opt.max_quantum_cwdm, (1610 - base) / 20 + 1) : detail::ring_spectrum_ceiling(opt);

    auto width_ok = [&](int n) {
        const CwdmChannel first(base, opt.cwdm_passband_nm);
        const CwdmChannel last(base + 20 * (n - 1), opt.cwdm_passband_nm);
        return required_width_nm(first, last) <= source_width_nm + 1e-9;
    };
    auto loss_ok = [&](int n) {
        return ent_only ? detail::ent_only_loss_feasible(pricing, n, opt) : detail::ring_loss_feasible(pricing, n);
    };

    int n = 0;
    while (n + 1 <= spectrum_ceiling && width_ok(n + 1) && loss_ok(n + 1)) ++n;
    report.max_access_networks = n;
    report.total_users = static_cast<long>(n) * report.users_per_an;

    if (!loss_ok(n + 1))
        report.limiting = LimitingFactor::loss_budget;
    else if (!width_ok(n + 1))
        report.limiting = LimitingFactor::source_width;
    else
        report.limiting = LimitingFactor::cwdm_spectrum;

    if (n >= 1) {
        BuildOptions bo;
        bo.entanglement_only_base_nm = opt.entanglement_only_base_nm;
        bo.quantum_base_nm = opt.quantum_base_nm;
        const BackboneKind bk = ent_only ? BackboneKind::cwdm_oadm_simple : BackboneKind::passive_oadm;
        const NetworkModel net = build_reference_network(TopologyKind::ring, n, bk, bo);
        if (ent_only) {
            report.witnesses.push_back(detail::ent_only_worst_link(pricing, net));
        } else {
            std::optional<PathLossReport> worst;
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    PathLossReport r = best_ring_entangled_link(pricing, net, i, j);
                    if (!worst || r.total_db > worst->total_db) worst = std::move(r);
                }
            if (worst) report.witnesses.push_back(std::move(*worst));
            if (n >= 2) {
                const Route r = enumerate_route(net, SignalClass::quantum_oneway, UserRef{0}, UserRef{n - 1});
                report.witnesses.push_back(one_way_loss(pricing, net, r));
            }
        }
        // Tightness: the step to n+1 breaks the budget, witnessed explicitly.
        if (report.limiting == LimitingFactor::loss_budget) {
            const NetworkModel grown = build_reference_network(TopologyKind::ring, n + 1, bk, bo);
            std::optional<PathLossReport> violator;
            if (ent_only) {
                violator = detail::ent_only_worst_link(pricing, grown);
            } else {
                for (int i = 0; i < n + 1; ++i)
                    for (int j = i; j < n + 1; ++j) {
                        PathLossReport r = best_ring_entangled_link(pricing, grown, i, j);
                        if (!violator || r.total_db > violator->total_db) violator = std::move(r);
                    }
            }
            if (violator && !violator->feasible) report.witnesses.push_back(std::move(*violator));
        }
    }
    return report;
}

struct ExtensionVerdict {
    bool feasible = true;
    std::vector<PathLossReport> violations;
    std::vector<PathLossReport> witnesses;
    std::string note;
};

/// Would one more access network still meet the budgets?
///
/// Rings are re-evaluated pair by pair on the grown network. Meshes grow by
/// adding bypass links, so the check prices the design's worst admissible
/// cases instead: three backbone spans one-way, one plus two spans for the
/// entangled arms.
inline ExtensionVerdict feasibility_of_extension(const Pricing& pricing, const NetworkModel& net,
                                                 int added = 1) {
    ExtensionVerdict verdict;
    const int n = net.n_access() + added;

    if (net.kind == TopologyKind::mesh) {
        NetworkModel probe = build_reference_network(TopologyKind::mesh, 4, BackboneKind::active_pxc);
        const Route arm1 = make_mesh_path_route(probe, SignalClass::entangled, SourceRef{0}, UserRef{1}, {0, 1});
        const Route arm2 =
            make_mesh_path_route(probe, SignalClass::entangled, SourceRef{0}, UserRef{3}, {0, 2, 3});
        PathLossReport ent = entangled_link_loss(pricing, probe, arm1, arm2);
        const Route oneway =
            make_mesh_path_route(probe, SignalClass::quantum_oneway, UserRef{0}, UserRef{3}, {0, 1, 2, 3});
        PathLossReport ow = one_way_loss(pricing, probe, oneway);
        verdict.feasible = ent.feasible && ow.feasible;
        if (!ent.feasible) verdict.violations.push_back(ent);
        if (!ow.feasible) verdict.violations.push_back(ow);
        verdict.witnesses.push_back(std::move(ent));
        verdict.witnesses.push_back(std::move(ow));
        verdict.note = "mesh growth adds bypass links; worst admissible cases priced";
        return verdict;
    }

    if (net.head_end_source) {
        BuildOptions bo;
        bo.entanglement_only_base_nm = net.access.front().quantum->nominal_nm;
        const NetworkModel grown =
            build_reference_network(TopologyKind::ring, n, BackboneKind::cwdm_oadm_simple, bo);
        PathLossReport worst = detail::ent_only_worst_link(pricing, grown);
        verdict.feasible = worst.feasible;
        if (!worst.feasible) verdict.violations.push_back(worst);
        verdict.witnesses.push_back(std::move(worst));
        return verdict;
    }

    const NetworkModel grown = build_reference_network(net.kind, n, BackboneKind::passive_oadm);
    for (int x = 1; x < n; ++x) {
        const Route r = enumerate_route(grown, SignalClass::quantum_oneway, UserRef{0}, UserRef{x});
        PathLossReport rep = one_way_loss(pricing, grown, r);
        if (!rep.feasible) verdict.violations.push_back(std::move(rep));
    }
    std::optional<PathLossReport> worst;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            PathLossReport rep = best_ring_entangled_link(pricing, grown, i, j);
            if (!worst || rep.total_db > worst->total_db) worst = rep;
            if (!rep.feasible) verdict.violations.push_back(std::move(rep));
        }
    if (worst) verdict.witnesses.push_back(std::move(*worst));
    verdict.feasible = verdict.violations.empty();
    return verdict;
}

}  // namespace qmon
