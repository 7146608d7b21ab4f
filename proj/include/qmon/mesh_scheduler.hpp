#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "qmon/loss_engine.hpp"
#include "qmon/topology.hpp"

namespace qmon {

enum class DemandType { direct_path, entangled_pair };

/// An unordered access-network pair that must be connected: a bidirectional
/// direct optical path, or an entangled link (self-pairs allowed).
struct Demand {
    DemandType type = DemandType::direct_path;
    int an_a = 0;
    int an_b = 0;

    Demand() = default;
    Demand(DemandType t, int a, int b) : type(t), an_a(std::min(a, b)), an_b(std::max(a, b)) {
        if (t == DemandType::direct_path && a == b)
            throw Error("direct paths within one access network use the switch return loop");
    }

    std::string id() const {
        return std::string(type == DemandType::direct_path ? "D" : "E") + "(A" + std::to_string(an_a + 1) +
               ",A" + std::to_string(an_b + 1) + ")";
    }

    friend bool operator==(const Demand& x, const Demand& y) {
        return x.type == y.type && x.an_a == y.an_a && x.an_b == y.an_b;
    }
    friend bool operator<(const Demand& x, const Demand& y) {
        return std::tie(x.type, x.an_a, x.an_b) < std::tie(y.type, y.an_a, y.an_b);
    }
};

struct DemandSet {
    std::vector<Demand> demands;

    /// Any-to-any demands of an n-network mesh: every inter-network direct
    /// path and every entangled pair; self entangled pairs optional (they
    /// are served locally at their own node).
    static DemandSet any_to_any(int n_access, bool include_self_pairs = false) {
        DemandSet set;
        for (int i = 0; i < n_access; ++i)
            for (int j = i + 1; j < n_access; ++j) set.demands.emplace_back(DemandType::direct_path, i, j);
        for (int i = 0; i < n_access; ++i)
            for (int j = include_self_pairs ? i : i + 1; j < n_access; ++j)
                set.demands.emplace_back(DemandType::entangled_pair, i, j);
        std::sort(set.demands.begin(), set.demands.end());
        return set;
    }
};

/// One demand as realized inside a configuration. Direct paths use route_a
/// with a quantum and a conventional channel in both directions; entangled
/// pairs originate at source_node with one route and channel per arm; self
/// pairs keep both photons in a single channel dropped at the own network.
struct ServedPath {
    Demand demand;
    int source_node = -1;
    std::vector<int> route_a;
    std::vector<int> route_b;
    int quantum_a_nm = 0;
    int quantum_b_nm = 0;
    int conventional_nm = 0;
};

/// Per-node switch states of one network configuration, derived from the
/// paths it serves.
struct MeshConfiguration {
    std::vector<ServedPath> served;
};

struct Schedule {
    std::vector<MeshConfiguration> configurations;
    std::map<std::string, int> coverage;  // demand id -> configuration index
    bool minimal_certified = false;
    bool possibly_non_minimal = false;
};

namespace mesh_detail {

// Directed channel occupancy. Feeder spans (node <-> access network) are
// addressed past the backbone link ids.
struct Claims {
    std::set<std::tuple<int, int, int, int>> links;      // (edge, dir, band, channel)
    std::set<std::pair<int, int>> source_channels;       // (node, channel)
};

inline int feeder_edge(const NetworkModel& net, int an) { return static_cast<int>(net.links.size()) + an; }

inline bool claim(Claims& c, int edge, int dir, int band, int nm) {
    return c.links.insert({edge, dir, band, nm}).second;
}

/// Directed occupancy entries of one served path.
inline std::vector<std::tuple<int, int, int, int>> path_entries(const NetworkModel& net, const ServedPath& p) {
    std::vector<std::tuple<int, int, int, int>> out;
    auto add_route = [&](const std::vector<int>& route, int nm, int band, bool both_dirs, int dest_an) {
        for (std::size_t i = 0; i + 1 < route.size(); ++i) {
            const auto link = net.link_between(route[i], route[i + 1]);
            if (!link) throw Error("no backbone link between N" + std::to_string(route[i] + 1) + " and N" +
                                   std::to_string(route[i + 1] + 1));
            const int fwd = net.links[*link].a == route[i] ? 0 : 1;
            out.push_back({*link, fwd, band, nm});
            if (both_dirs) out.push_back({*link, 1 - fwd, band, nm});
        }
        out.push_back({feeder_edge(net, dest_an), 0, band, nm});
        if (both_dirs) out.push_back({feeder_edge(net, dest_an), 1, band, nm});
    };
    if (p.demand.type == DemandType::direct_path) {
        add_route(p.route_a, p.quantum_a_nm, 0, true, p.demand.an_b);
        out.push_back({feeder_edge(net, p.demand.an_a), 0, 0, p.quantum_a_nm});
        out.push_back({feeder_edge(net, p.demand.an_a), 1, 0, p.quantum_a_nm});
        add_route(p.route_a, p.conventional_nm, 1, true, p.demand.an_b);
        out.push_back({feeder_edge(net, p.demand.an_a), 0, 1, p.conventional_nm});
        out.push_back({feeder_edge(net, p.demand.an_a), 1, 1, p.conventional_nm});
    } else if (p.demand.an_a == p.demand.an_b) {
        add_route(p.route_a, p.quantum_a_nm, 0, false, p.demand.an_a);
    } else {
        add_route(p.route_a, p.quantum_a_nm, 0, false, p.demand.an_a);
        add_route(p.route_b, p.quantum_b_nm, 0, false, p.demand.an_b);
    }
    return out;
}

inline bool try_claim_path(const NetworkModel& net, Claims& claims, const ServedPath& p) {
    const auto entries = path_entries(net, p);
    std::vector<std::tuple<int, int, int, int>> taken;
    bool ok = true;
    for (const auto& e : entries) {
        if (!claims.links.insert(e).second) {
            ok = false;
            break;
        }
        taken.push_back(e);
    }
    if (p.demand.type == DemandType::entangled_pair && ok) {
        if (!claims.source_channels.insert({p.source_node, p.quantum_a_nm}).second) ok = false;
        else if (p.demand.an_a != p.demand.an_b &&
                 !claims.source_channels.insert({p.source_node, p.quantum_b_nm}).second) {
            claims.source_channels.erase({p.source_node, p.quantum_a_nm});
            ok = false;
        }
    }
    if (!ok)
        for (const auto& e : taken) claims.links.erase(e);
    return ok;
}

inline void release_path(const NetworkModel& net, Claims& claims, const ServedPath& p) {
    for (const auto& e : path_entries(net, p)) claims.links.erase(e);
    if (p.demand.type == DemandType::entangled_pair) {
        claims.source_channels.erase({p.source_node, p.quantum_a_nm});
        if (p.demand.an_a != p.demand.an_b) claims.source_channels.erase({p.source_node, p.quantum_b_nm});
    }
}

inline LossDb arm_loss(const Pricing& pricing, const NetworkModel& net, const std::vector<int>& route,
                       int dest_an) {
    const Route r =
        make_mesh_path_route(net, SignalClass::entangled, SourceRef{route.front()}, UserRef{dest_an}, route);
    return one_way_loss(pricing, net, r).total_db;
}

inline PathLossReport direct_report(const Pricing& pricing, const NetworkModel& net, const ServedPath& p) {
    const Route r = make_mesh_path_route(net, SignalClass::quantum_oneway, UserRef{p.demand.an_a},
                                         UserRef{p.demand.an_b}, p.route_a);
    return one_way_loss(pricing, net, r);
}

inline PathLossReport entangled_report(const Pricing& pricing, const NetworkModel& net, const ServedPath& p) {
    const Route a = make_mesh_path_route(net, SignalClass::entangled, SourceRef{p.source_node},
                                         UserRef{p.demand.an_a}, p.route_a);
    const Route b = p.demand.an_a == p.demand.an_b
                        ? a
                        : make_mesh_path_route(net, SignalClass::entangled, SourceRef{p.source_node},
                                               UserRef{p.demand.an_b}, p.route_b);
    return entangled_link_loss(pricing, net, a, b);
}

/// Enumerates placements of one demand in deterministic order and calls fn
/// until it returns true. Claims are left untouched on failure.
template <typename Fn>
bool for_each_placement(const Pricing& pricing, const NetworkModel& net, Claims& claims,
                        const std::vector<int>& quantum, const std::vector<int>& conventional,
                        const Demand& d, Fn&& fn) {
    if (d.type == DemandType::direct_path) {
        for (const auto& route : simple_paths(net, net.an(d.an_a).node, net.an(d.an_b).node)) {
            ServedPath p;
            p.demand = d;
            p.route_a = route;
            if (!direct_report(pricing, net, p).feasible) continue;  // paths sorted by length
            for (int q : quantum)
                for (int c : conventional) {
                    p.quantum_a_nm = q;
                    p.conventional_nm = c;
                    if (!try_claim_path(net, claims, p)) continue;
                    if (fn(p)) return true;
                    release_path(net, claims, p);
                }
        }
        return false;
    }
    if (d.an_a == d.an_b) {
        // Served locally: source at the own node, one channel, no backbone.
        const int s = net.an(d.an_a).node;
        if (!net.nodes.at(s).source_site) return false;
        ServedPath p;
        p.demand = d;
        p.source_node = s;
        p.route_a = {s};
        const LossDb arm = arm_loss(pricing, net, p.route_a, d.an_a);
        if (pricing.budgets.entangled && arm + arm > *pricing.budgets.entangled) return false;
        for (int q : quantum) {
            p.quantum_a_nm = q;
            if (!try_claim_path(net, claims, p)) continue;
            if (fn(p)) return true;
            release_path(net, claims, p);
        }
        return false;
    }
    for (const BackboneNode& node : net.nodes) {
        if (!node.source_site) continue;
        for (const auto& route_a : simple_paths(net, node.id, net.an(d.an_a).node)) {
            const LossDb loss_a = arm_loss(pricing, net, route_a, d.an_a);
            for (const auto& route_b : simple_paths(net, node.id, net.an(d.an_b).node)) {
                if (pricing.budgets.entangled &&
                    loss_a + arm_loss(pricing, net, route_b, d.an_b) > *pricing.budgets.entangled)
                    continue;
                ServedPath p;
                p.demand = d;
                p.source_node = node.id;
                p.route_a = route_a;
                p.route_b = route_b;
                for (int qa : quantum)
                    for (int qb : quantum) {
                        if (qa == qb) continue;
                        p.quantum_a_nm = qa;
                        p.quantum_b_nm = qb;
                        if (!try_claim_path(net, claims, p)) continue;
                        if (fn(p)) return true;
                        release_path(net, claims, p);
                    }
            }
        }
    }
    return false;
}

/// Downstream feeder slots a demand occupies per access network.
inline void count_slots(const Demand& d, std::vector<int>& slots) {
    slots[d.an_a] += 1;
    if (d.an_b != d.an_a) slots[d.an_b] += 1;
}

/// Joint search: can this exact demand set coexist in one configuration?
inline std::optional<std::vector<ServedPath>> realize(const Pricing& pricing, const NetworkModel& net,
                                                      const std::vector<int>& quantum,
                                                      const std::vector<int>& conventional,
                                                      std::vector<Demand> demands) {
    std::sort(demands.begin(), demands.end());
    std::vector<int> slots(net.n_access(), 0);
    for (const Demand& d : demands) count_slots(d, slots);
    for (int s : slots)
        if (s > static_cast<int>(quantum.size())) return std::nullopt;

    Claims claims;
    std::vector<ServedPath> placed;
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == demands.size()) return true;
        return for_each_placement(pricing, net, claims, quantum, conventional, demands[i],
                                  [&](const ServedPath& p) {
                                      placed.push_back(p);
                                      if (self(self, i + 1)) return true;
                                      placed.pop_back();
                                      return false;
                                  });
    };
    if (rec(rec, 0)) return placed;
    return std::nullopt;
}

}  // namespace mesh_detail

/// Certificate search: smallest number of configurations that can serve the
/// demand set, by exhaustive assignment of demands to configurations (with
/// joint realizability checked per configuration). Exponential, intended
/// for reference-sized instances.
inline std::optional<int> shortest_schedule_length(const Pricing& pricing, const NetworkModel& net,
                                                   const DemandSet& demands,
                                                   const std::vector<int>& quantum,
                                                   const std::vector<int>& conventional, int max_len) {
    std::vector<Demand> ds = demands.demands;
    std::sort(ds.begin(), ds.end());
    if (ds.empty()) return 0;
    if (ds.size() > 63) throw Error("certificate search supports at most 63 demands");
    std::map<std::uint64_t, bool> memo;
    auto realizable = [&](const std::vector<Demand>& set, std::uint64_t mask) {
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        const bool ok = mesh_detail::realize(pricing, net, quantum, conventional, set).has_value();
        memo.emplace(mask, ok);
        return ok;
    };
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::vector<Demand>> configs(len);
        std::vector<std::uint64_t> masks(len, 0);
        auto rec = [&](auto&& self, std::size_t i, int used) -> bool {
            if (i == ds.size()) return true;
            const int limit = std::min(len, used + 1);
            for (int c = 0; c < limit; ++c) {
                configs[c].push_back(ds[i]);
                masks[c] |= std::uint64_t{1} << i;
                if (realizable(configs[c], masks[c]) && self(self, i + 1, std::max(used, c + 1))) return true;
                masks[c] &= ~(std::uint64_t{1} << i);
                configs[c].pop_back();
            }
            return false;
        };
        if (rec(rec, 0, 0)) return len;
    }
    return std::nullopt;
}

/// Minimal set of configurations covering all demands.
///
/// Exact for small instances: iterative deepening from a per-network slot
/// counting bound, demands assigned in identifier order. Among schedules of
/// minimal length, type-balanced configurations are preferred (each holds
/// at most ceil(|type| / length) demands of either type), falling back to
/// unbalanced packing at the same length. Beyond 6 access networks a greedy
/// cover runs instead; its result is flagged possibly non-minimal.
inline Schedule schedule(const Pricing& pricing, const NetworkModel& net, const DemandSet& demand_set,
                         const std::vector<CwdmChannel>& quantum_channels,
                         const std::vector<CwdmChannel>& conventional_channels) {
    if (net.kind != TopologyKind::mesh) throw Error("the scheduler drives mesh backbones");
    for (const BackboneNode& n : net.nodes)
        if (n.kind != BackboneKind::active_pxc) throw Error("the scheduler requires active cross-connect nodes");
    if (quantum_channels.empty()) throw Error("no quantum CWDM channels configured");

    std::vector<int> quantum, conventional;
    for (const CwdmChannel& c : quantum_channels) quantum.push_back(c.nominal_nm);
    for (const CwdmChannel& c : conventional_channels) conventional.push_back(c.nominal_nm);
    bool has_direct = false;
    for (const Demand& d : demand_set.demands)
        if (d.type == DemandType::direct_path) has_direct = true;
    if (has_direct && conventional.empty()) throw Error("no conventional CWDM channels configured");

    std::vector<Demand> ds = demand_set.demands;
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());

    Schedule result;
    if (ds.empty()) return result;

    // Every demand must be servable somewhere on its own.
    for (const Demand& d : ds) {
        mesh_detail::Claims claims;
        std::optional<LossDb> best;
        bool placed = mesh_detail::for_each_placement(pricing, net, claims, quantum, conventional, d,
                                                      [&](const ServedPath&) { return true; });
        if (!placed) {
            // Recompute the cheapest loss with budgets lifted for the report.
            Pricing free = pricing;
            free.budgets = BudgetPolicy{std::nullopt, std::nullopt, std::nullopt};
            mesh_detail::Claims c2;
            mesh_detail::for_each_placement(free, net, c2, quantum, conventional, d, [&](const ServedPath& p) {
                const PathLossReport r = d.type == DemandType::direct_path
                                             ? mesh_detail::direct_report(free, net, p)
                                             : mesh_detail::entangled_report(free, net, p);
                if (!best || r.total_db < *best) best = r.total_db;
                return false;  // keep scanning for the minimum
            });
            throw Error("demand " + d.id() + " is unservable under the budget in any configuration" +
                        (best ? " (minimum achievable loss " + best->str() + " dB)" : ""));
        }
    }

    // Counting lower bound: each network offers |quantum| downstream feeder
    // slots per configuration.
    std::vector<int> slots(net.n_access(), 0);
    int total_slots = 0;
    int n_ent = 0, n_dir = 0;
    for (const Demand& d : ds) {
        mesh_detail::count_slots(d, slots);
        (d.type == DemandType::entangled_pair ? n_ent : n_dir) += 1;
    }
    for (int s : slots) total_slots += s;
    int lower = 1;
    for (int s : slots)
        lower = std::max(lower, (s + static_cast<int>(quantum.size()) - 1) / static_cast<int>(quantum.size()));
    const int cap = net.n_access() * static_cast<int>(quantum.size());
    lower = std::max(lower, (total_slots + cap - 1) / cap);

    if (ds.size() > 63) throw Error("the scheduler supports at most 63 distinct demands");
    std::map<std::uint64_t, std::optional<std::vector<ServedPath>>> memo;
    auto realize_memo =
        [&](const std::vector<Demand>& set, std::uint64_t mask) -> const std::optional<std::vector<ServedPath>>& {
        auto it = memo.find(mask);
        if (it == memo.end())
            it = memo.emplace(mask, mesh_detail::realize(pricing, net, quantum, conventional, set)).first;
        return it->second;
    };
    auto mask_of = [&](const std::vector<Demand>& set) {
        std::uint64_t mask = 0;
        for (const Demand& d : set)
            mask |= std::uint64_t{1}
                    << (std::lower_bound(ds.begin(), ds.end(), d) - ds.begin());
        return mask;
    };

    auto pack = [&](int len, bool balanced) -> std::optional<std::vector<std::vector<Demand>>> {
        const int cap_e = balanced ? (n_ent + len - 1) / len : static_cast<int>(ds.size());
        const int cap_d = balanced ? (n_dir + len - 1) / len : static_cast<int>(ds.size());
        std::vector<std::vector<Demand>> configs(len);
        std::vector<std::uint64_t> masks(len, 0);
        std::vector<std::pair<int, int>> counts(len, {0, 0});  // (ent, direct)
        auto rec = [&](auto&& self, std::size_t i, int used) -> bool {
            if (i == ds.size()) return true;
            const bool ent = ds[i].type == DemandType::entangled_pair;
            const int limit = std::min(len, used + 1);
            for (int c = 0; c < limit; ++c) {
                if (ent ? counts[c].first >= cap_e : counts[c].second >= cap_d) continue;
                configs[c].push_back(ds[i]);
                masks[c] |= std::uint64_t{1} << i;
                (ent ? counts[c].first : counts[c].second) += 1;
                if (realize_memo(configs[c], masks[c]).has_value() && self(self, i + 1, std::max(used, c + 1)))
                    return true;
                (ent ? counts[c].first : counts[c].second) -= 1;
                masks[c] &= ~(std::uint64_t{1} << i);
                configs[c].pop_back();
            }
            return false;
        };
        if (rec(rec, 0, 0)) return configs;
        return std::nullopt;
    };

    std::optional<std::vector<std::vector<Demand>>> packed;
    if (net.n_access() <= 6) {
        for (int len = lower; !packed && len <= lower + static_cast<int>(ds.size()); ++len) {
            packed = pack(len, true);
            if (!packed) packed = pack(len, false);
            if (packed) result.minimal_certified = true;
        }
    } else {
        // Greedy cover: grow each configuration with the next demand that
        // still fits, in identifier order.
        std::vector<std::vector<Demand>> configs;
        std::vector<bool> done(ds.size(), false);
        std::size_t remaining = ds.size();
        while (remaining > 0) {
            std::vector<Demand> current;
            std::uint64_t mask = 0;
            for (std::size_t i = 0; i < ds.size(); ++i) {
                if (done[i]) continue;
                current.push_back(ds[i]);
                if (realize_memo(current, mask | (std::uint64_t{1} << i)).has_value()) {
                    mask |= std::uint64_t{1} << i;
                    done[i] = true;
                    --remaining;
                } else {
                    current.pop_back();
                }
            }
            if (current.empty()) throw Error("scheduler failed to place a servable demand");
            configs.push_back(std::move(current));
        }
        packed = std::move(configs);
        result.possibly_non_minimal = true;
    }
    if (!packed) throw Error("no schedule found within the search horizon");

    for (const auto& config_demands : *packed) {
        const auto& served = realize_memo(config_demands, mask_of(config_demands));
        MeshConfiguration conf;
        conf.served = *served;
        for (const ServedPath& p : conf.served)
            result.coverage[p.demand.id()] = static_cast<int>(result.configurations.size());
        result.configurations.push_back(std::move(conf));
    }
    return result;
}

namespace mesh_detail {

/// Switch states implied by a configuration's served paths, as maps
/// (node, band, channel, in-port) -> out-port. Ports are neighbor node ids;
/// -1 is the access port, -2 a source input.
inline std::map<std::tuple<int, int, int, int>, int> port_maps(const NetworkModel& net,
                                                               const MeshConfiguration& conf) {
    std::map<std::tuple<int, int, int, int>, int> maps;
    auto walk = [&](const std::vector<int>& route, int nm, int band, bool reverse_too, bool from_source) {
        auto add = [&](int node, int in_port, int out_port) {
            const auto key = std::make_tuple(node, band, nm, in_port);
            auto it = maps.find(key);
            if (it != maps.end() && it->second != out_port)
                throw Error("configuration routes one channel from one input to two outputs");
            maps[key] = out_port;
        };
        for (std::size_t i = 0; i < route.size(); ++i)
            add(route[i], i == 0 ? (from_source ? -2 : -1) : route[i - 1],
                i + 1 < route.size() ? route[i + 1] : -1);
        if (reverse_too)
            for (std::size_t i = route.size(); i-- > 0;)
                add(route[i], i + 1 < route.size() ? route[i + 1] : -1, i == 0 ? -1 : route[i - 1]);
    };
    for (const ServedPath& p : conf.served) {
        if (p.demand.type == DemandType::direct_path) {
            walk(p.route_a, p.quantum_a_nm, 0, true, false);
            walk(p.route_a, p.conventional_nm, 1, true, false);
        } else {
            walk(p.route_a, p.quantum_a_nm, 0, false, true);
            if (p.demand.an_a != p.demand.an_b) walk(p.route_b, p.quantum_b_nm, 0, false, true);
        }
    }
    return maps;
}

}  // namespace mesh_detail

/// The route a configuration induces for an emitter, a destination and a
/// CWDM channel: the signal enters the emitter's node and follows the
/// switch states until it exits at an access port.
inline Route route_in_configuration(const NetworkModel& net, const MeshConfiguration& conf, SignalClass cls,
                                    Emitter from, UserRef to, int cwdm_nm) {
    const auto maps = mesh_detail::port_maps(net, conf);
    const int band = cls == SignalClass::conventional ? 1 : 0;
    int node;
    int in_port;
    if (const UserRef* u = std::get_if<UserRef>(&from)) {
        node = net.an(u->access_network).node;
        in_port = -1;
    } else {
        node = std::get<SourceRef>(from).node;
        in_port = -2;
    }
    std::vector<int> path = {node};
    std::set<int> visited = {node};
    while (true) {
        const auto it = maps.find(std::make_tuple(node, band, cwdm_nm, in_port));
        if (it == maps.end())
            throw Error("no route for channel: the configuration does not switch C" +
                        std::to_string(cwdm_nm) + " at N" + std::to_string(node + 1));
        const int out = it->second;
        if (out == -1) {
            if (net.nodes.at(node).access_network != to.access_network)
                throw Error("no route for channel: it exits at " +
                            net.an(net.nodes.at(node).access_network).name());
            return make_mesh_path_route(net, cls, from, to, path);
        }
        if (!visited.insert(out).second) throw Error("configuration loops channel C" + std::to_string(cwdm_nm));
        in_port = node;
        node = out;
        path.push_back(node);
    }
}

// ---------------------------------------------------------------------------
// Configuration validation

struct ConfigurationVerdict {
    bool ok = true;
    std::vector<std::string> violations;
    std::vector<PathLossReport> reports;
};

/// Checks one configuration: well-formed routes, per-node port-map
/// injectivity, per-direction link-channel disjointness, and per-demand
/// budgets (reports attached).
inline ConfigurationVerdict validate_configuration(const Pricing& pricing, const NetworkModel& net,
                                                   const MeshConfiguration& conf) {
    ConfigurationVerdict verdict;
    auto fail = [&](const std::string& msg) {
        verdict.ok = false;
        verdict.violations.push_back(msg);
    };

    // Port map per (node, band, channel): in-port -> out-port. Ports are
    // encoded as neighbor node id, -1 for the access port, -2 for a source.
    std::map<std::tuple<int, int, int, int>, int> port_map;
    std::set<std::tuple<int, int, int, int>> out_used;
    auto walk = [&](const std::vector<int>& route, int nm, int band, bool reverse_too, int dest_an,
                    bool from_source, const std::string& who) {
        auto add = [&](int node, int in_port, int out_port) {
            const auto key = std::make_tuple(node, band, nm, in_port);
            auto it = port_map.find(key);
            if (it != port_map.end() && it->second != out_port)
                fail(who + ": N" + std::to_string(node + 1) + " routes channel " + std::to_string(nm) +
                     " from one input to two outputs");
            port_map[key] = out_port;
            if (!out_used.insert(std::make_tuple(node, band, nm, out_port)).second) {
                // Re-inserting the same mapping is fine; merging two inputs
                // into one output is not.
                bool same = it != port_map.end() && it->second == out_port;
                if (!same)
                    fail(who + ": N" + std::to_string(node + 1) + " merges channel " + std::to_string(nm) +
                         " from two inputs into one output");
            }
        };
        for (std::size_t i = 0; i < route.size(); ++i) {
            const int in_port = i == 0 ? (from_source ? -2 : -1) : route[i - 1];
            const int out_port = i + 1 < route.size() ? route[i + 1] : -1;
            add(route[i], in_port, out_port);
        }
        if (reverse_too) {
            for (std::size_t i = route.size(); i-- > 0;) {
                const int in_port = i + 1 < route.size() ? route[i + 1] : -1;
                const int out_port = i == 0 ? -1 : route[i - 1];
                add(route[i], in_port, out_port);
            }
        }
        (void)dest_an;
    };

    std::set<std::tuple<int, int, int, int>> seen;
    auto claim_all = [&](const ServedPath& p, const std::string& who) {
        for (const auto& e : mesh_detail::path_entries(net, p)) {
            if (!seen.insert(e).second) {
                const auto [edge, dir, band, nm] = e;
                std::string where;
                if (edge < static_cast<int>(net.links.size())) {
                    const Link& l = net.links[edge];
                    const int from = dir == 0 ? l.a : l.b;
                    const int to = dir == 0 ? l.b : l.a;
                    where = "link N" + std::to_string(from + 1) + "->N" + std::to_string(to + 1);
                } else {
                    where = "feeder of A" + std::to_string(edge - static_cast<int>(net.links.size()) + 1) +
                            (dir == 0 ? " (downstream)" : " (upstream)");
                }
                fail(who + ": " + where + " carries channel " + std::to_string(nm) + " twice");
            }
        }
    };

    for (const ServedPath& p : conf.served) {
        const std::string who = p.demand.id();
        try {
            if (p.route_a.empty()) {
                fail(who + ": empty route");
                continue;
            }
            for (const auto* route : {&p.route_a, &p.route_b}) {
                for (std::size_t i = 0; i + 1 < route->size(); ++i)
                    if (!net.link_between((*route)[i], (*route)[i + 1]))
                        fail(who + ": route uses a missing link N" + std::to_string((*route)[i] + 1) + "-N" +
                             std::to_string((*route)[i + 1] + 1));
            }
            if (p.demand.type == DemandType::direct_path) {
                if (p.route_a.front() != net.an(p.demand.an_a).node ||
                    p.route_a.back() != net.an(p.demand.an_b).node)
                    fail(who + ": route does not join the two access networks");
                walk(p.route_a, p.quantum_a_nm, 0, true, p.demand.an_b, false, who);
                walk(p.route_a, p.conventional_nm, 1, true, p.demand.an_b, false, who);
                PathLossReport r = mesh_detail::direct_report(pricing, net, p);
                if (!r.feasible) fail(who + ": routed loss " + r.total_db.str() + " dB exceeds the budget");
                verdict.reports.push_back(std::move(r));
            } else {
                if (p.source_node < 0 || !net.nodes.at(p.source_node).source_site) {
                    fail(who + ": no source at the chosen node");
                    continue;
                }
                if (p.demand.an_a == p.demand.an_b && p.source_node != net.an(p.demand.an_a).node)
                    fail(who + ": self pairs are served by the own node's source");
                if (p.demand.an_a != p.demand.an_b && p.quantum_a_nm == p.quantum_b_nm)
                    fail(who + ": both arms use one CWDM channel");
                walk(p.route_a, p.quantum_a_nm, 0, false, p.demand.an_a, true, who);
                if (p.demand.an_a != p.demand.an_b)
                    walk(p.route_b, p.quantum_b_nm, 0, false, p.demand.an_b, true, who);
                PathLossReport r = mesh_detail::entangled_report(pricing, net, p);
                if (!r.feasible) fail(who + ": routed loss " + r.total_db.str() + " dB exceeds the budget");
                verdict.reports.push_back(std::move(r));
            }
            claim_all(p, who);
        } catch (const Error& e) {
            fail(who + ": " + e.what());
        }
    }
    return verdict;
}

/// Cyclic channel rotation for designs with more access networks than CWDM
/// channels: step t assigns channel (i + t) mod k to network i, so over k
/// steps every network uses every channel. With enough channels a single
/// one-to-one step suffices.
inline std::vector<std::vector<int>> rotate_channel_assignment(int n_access, int n_channels) {
    if (n_access < 1 || n_channels < 1) throw Error("need at least one access network and one channel");
    const int steps = n_channels < n_access ? n_channels : 1;
    std::vector<std::vector<int>> out(steps, std::vector<int>(n_access, 0));
    for (int t = 0; t < steps; ++t)
        for (int i = 0; i < n_access; ++i) out[t][i] = (i + t) % n_channels;
    return out;
}

}  // namespace qmon
