#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmon/bands.hpp"
#include "qmon/units.hpp"

namespace qmon {

/// Cataloged component families. `fiber` carries per-band per-km rates; the
/// two splitter entries differ only in fan-out.
enum class Part {
    fiber,
    splitter_1x2,
    splitter_1x32,
    cwdm_oadm_1ch,
    dwdm_oadm_1ch,
    cwdm_mux4,
    wdm_mux_1310_1550,
    bandpass_filter,
    circulator,
    awg32,
    optical_switch,
};

inline const std::vector<Part>& all_parts() {
    static const std::vector<Part> parts = {
        Part::fiber,          Part::splitter_1x2,     Part::splitter_1x32,   Part::cwdm_oadm_1ch,
        Part::dwdm_oadm_1ch,  Part::cwdm_mux4,        Part::wdm_mux_1310_1550, Part::bandpass_filter,
        Part::circulator,     Part::awg32,            Part::optical_switch,
    };
    return parts;
}

struct WavelengthWindow {
    double lo_nm;
    double hi_nm;
};

/// Datasheet entry for one component: insertion loss per band (per km for
/// fiber), the published operating window(s), and, where the datasheet gives
/// a min-max range, both endpoints next to the default midpoint in use.
struct ComponentSpec {
    Part part;
    std::string name;
    std::map<BandName, LossDb> loss_db;
    bool per_km = false;
    std::optional<std::pair<LossDb, LossDb>> datasheet_range_db;
    std::vector<WavelengthWindow> windows_nm;
};

/// Immutable after construction/override; concurrent reads are safe.
class Catalog {
  public:
    Catalog() {
        auto add = [this](Part p, std::string name, std::map<BandName, LossDb> loss, bool per_km,
                          std::optional<std::pair<LossDb, LossDb>> range, std::vector<WavelengthWindow> win) {
            specs_[p] = ComponentSpec{p, std::move(name), std::move(loss), per_km, range, std::move(win)};
        };
        const auto cd = [](std::int64_t c) { return LossDb::from_centidb(c); };
        const std::pair<LossDb, LossDb> narrow_range{cd(40), cd(60)};

        add(Part::fiber, "single-mode fibre ITU-T G.652",
            {{BandName::c_quantum, cd(20)}, {BandName::o_conventional, cd(32)}}, true, std::nullopt,
            {{1550, 1550}, {1310, 1310}});
        add(Part::splitter_1x2, "1:2 splitter",
            {{BandName::o_conventional, cd(360)}, {BandName::c_quantum, cd(360)}}, false, std::nullopt,
            {{1260, 1610}});
        add(Part::splitter_1x32, "1:32 splitter",
            {{BandName::o_conventional, cd(1650)}, {BandName::c_quantum, cd(1650)}}, false, std::nullopt,
            {{1260, 1610}});
        add(Part::cwdm_oadm_1ch, "1-channel CWDM OADM",
            {{BandName::o_conventional, cd(50)}, {BandName::c_quantum, cd(50)}}, false, narrow_range,
            {{1270, 1610}});
        add(Part::dwdm_oadm_1ch, "1-channel DWDM OADM", {{BandName::c_quantum, cd(50)}}, false, narrow_range,
            {{1525, 1610}});
        add(Part::cwdm_mux4, "4-channels CWDM mux",
            {{BandName::o_conventional, cd(100)}, {BandName::c_quantum, cd(100)}}, false, std::nullopt,
            {{1270, 1610}});
        add(Part::wdm_mux_1310_1550, "1310/1550 WDM mux",
            {{BandName::o_conventional, cd(50)}, {BandName::c_quantum, cd(50)}}, false, std::nullopt,
            {{1260, 1360}, {1500, 1600}});
        add(Part::bandpass_filter, "bandpass filter",
            {{BandName::o_conventional, cd(50)}, {BandName::c_quantum, cd(50)}}, false, narrow_range, {});
        add(Part::circulator, "circulator",
            {{BandName::o_conventional, cd(80)}, {BandName::c_quantum, cd(80)}}, false, std::nullopt, {});
        // 32-channel AWGs are cyclic: the O-band image of the C-band window
        // demultiplexes with the same insertion loss.
        add(Part::awg32, "32-channels AWG (100 GHz)",
            {{BandName::o_conventional, cd(300)}, {BandName::c_quantum, cd(300)}}, false, std::nullopt,
            {{1533, 1558}});
        add(Part::optical_switch, "4x4 to 192x192 switch",
            {{BandName::o_conventional, cd(100)}, {BandName::c_quantum, cd(100)}}, false, std::nullopt,
            {{1270, 1675}});
    }

    const ComponentSpec& spec(Part p) const { return specs_.at(p); }

    /// Insertion loss of a part in a band; per-km rate for fiber. Throws,
    /// naming the component, when the part does not operate in the band.
    LossDb loss(Part p, BandName b) const {
        const ComponentSpec& s = specs_.at(p);
        auto it = s.loss_db.find(b);
        if (it == s.loss_db.end())
            throw Error(s.name + " does not operate in the " + to_string(b) + " band");
        return it->second;
    }

    void set_loss(Part p, BandName b, LossDb v) { specs_.at(p).loss_db[b] = v; }
    void set_loss(Part p, LossDb v) {
        for (auto& [b, l] : specs_.at(p).loss_db) l = v;
    }

  private:
    std::map<Part, ComponentSpec> specs_;
};

/// One element of a concrete component chain; length applies to fiber only.
struct ChainElement {
    Part part;
    double length_km = 0.0;
};

using ComponentChain = std::vector<ChainElement>;

/// Sum of member losses in one band, fiber scaled by length. Deterministic
/// and additive by construction.
inline LossDb chain_loss(const Catalog& catalog, const ComponentChain& chain, BandName b) {
    LossDb total;
    for (const ChainElement& e : chain) {
        const LossDb l = catalog.loss(e.part, b);
        if (catalog.spec(e.part).per_km) {
            total += span_loss(l, static_cast<std::int64_t>(std::llround(e.length_km * 1000.0)));
        } else {
            total += l;
        }
    }
    return total;
}

/// Backbone node families: the fixed OADM of the ring designs, the
/// reconfigurable cross-connect of the mesh design, and the single-channel
/// OADM used by the entanglement-only network.
enum class BackboneKind { passive_oadm, active_pxc, cwdm_oadm_simple };

inline std::string to_string(BackboneKind k) {
    switch (k) {
        case BackboneKind::passive_oadm: return "passive_oadm";
        case BackboneKind::active_pxc: return "active_pxc";
        case BackboneKind::cwdm_oadm_simple: return "cwdm_oadm_simple";
    }
    return "?";
}

enum class NodeAction { add, pass, drop, cross };

inline std::string to_string(NodeAction a) {
    switch (a) {
        case NodeAction::add: return "add";
        case NodeAction::pass: return "pass";
        case NodeAction::drop: return "drop";
        case NodeAction::cross: return "cross";
    }
    return "?";
}

/// Per-action, per-class losses of the backbone node designs.
///
/// For the cross-connect the entangled entry is the injection loss of a
/// source that enters at the switch stage; entangled signals transiting a
/// cross-connect are priced as quantum signals (see loss_engine).
class NodeLossTable {
  public:
    NodeLossTable() {
        const auto cd = [](std::int64_t c) { return LossDb::from_centidb(c); };
        auto set3 = [this, cd](BackboneKind k, NodeAction a, std::int64_t conv, std::int64_t quant,
                               std::int64_t ent) {
            set(k, a, SignalClass::conventional, cd(conv));
            set(k, a, SignalClass::quantum_oneway, cd(quant));
            set(k, a, SignalClass::entangled, cd(ent));
        };
        set3(BackboneKind::passive_oadm, NodeAction::add, 620, 620, 360);
        set3(BackboneKind::passive_oadm, NodeAction::pass, 480, 480, 480);
        set3(BackboneKind::passive_oadm, NodeAction::drop, 230, 170, 170);
        set3(BackboneKind::active_pxc, NodeAction::cross, 400, 400, 250);
        // Single-channel CWDM OADM, datasheet midpoint of 0.4-0.6 dB.
        set3(BackboneKind::cwdm_oadm_simple, NodeAction::pass, 50, 50, 50);
        set3(BackboneKind::cwdm_oadm_simple, NodeAction::drop, 50, 50, 50);
    }

    bool defined(BackboneKind k, NodeAction a, SignalClass c) const { return losses_.count(key(k, a, c)) > 0; }

    LossDb node_loss(BackboneKind k, NodeAction a, SignalClass c) const {
        auto it = losses_.find(key(k, a, c));
        if (it == losses_.end())
            throw Error("action '" + to_string(a) + "' (" + to_string(c) + ") is not defined for " + to_string(k));
        return it->second;
    }

    void set(BackboneKind k, NodeAction a, SignalClass c, LossDb v) { losses_[key(k, a, c)] = v; }

  private:
    static int key(BackboneKind k, NodeAction a, SignalClass c) {
        return (static_cast<int>(k) << 8) | (static_cast<int>(a) << 4) | static_cast<int>(c);
    }
    std::map<int, LossDb> losses_;
};

/// Cross-connect internals: WDM band demux, per-band CWDM mux stage, switch,
/// then the mirror on the way out. The CWDM mux loss depends on the channel
/// count per band; only counts present in the map can be priced.
struct PxcParts {
    LossDb wdm_mux = LossDb::from_centidb(50);
    LossDb switch_db = LossDb::from_centidb(100);
    std::map<int, LossDb> cwdm_mux_by_count = {{4, LossDb::from_centidb(100)}};

    LossDb cwdm_mux(int n_channels) const {
        auto it = cwdm_mux_by_count.find(n_channels);
        if (it == cwdm_mux_by_count.end())
            throw Error("no CWDM mux loss configured for " + std::to_string(n_channels) + " channels");
        return it->second;
    }
};

/// Port-to-port loss of the cross-connect: mux in, switch, mux out. The
/// result does not depend on the node degree.
inline LossDb derive_pxc_cross_loss(int n_cwdm_channels, const PxcParts& parts = {}) {
    if (n_cwdm_channels < 1 || n_cwdm_channels > 18) throw Error("CWDM channel count must be 1..18");
    const LossDb mux = parts.cwdm_mux(n_cwdm_channels);
    return parts.wdm_mux + mux + parts.switch_db + mux + parts.wdm_mux;
}

/// Loss from a source entering at the switch stage to the node output.
inline LossDb derive_pxc_injection_loss(int n_cwdm_channels = 4, const PxcParts& parts = {}) {
    if (n_cwdm_channels < 1 || n_cwdm_channels > 18) throw Error("CWDM channel count must be 1..18");
    return parts.switch_db + parts.cwdm_mux(n_cwdm_channels) + parts.wdm_mux;
}

/// Internals of the fixed OADM node. The published per-action losses are
/// authoritative; this decomposition is one consistent reading of the node
/// schematic (the filter losses are datasheet ranges, so the exact split is
/// not unique) and is kept as a cross-check with configurable values.
struct PassiveOadmParts {
    LossDb wdm_mux = LossDb::from_centidb(50);
    LossDb circulator = LossDb::from_centidb(80);
    LossDb splitter = LossDb::from_centidb(360);
    // Through-path penalty of the unbalanced 90:10 source splitter.
    LossDb unbalanced_through = LossDb::from_centidb(80);
    LossDb filter_drop = LossDb::from_centidb(40);
    LossDb filter_reflect = LossDb::from_centidb(60);
};

inline NodeLossTable derive_passive_oadm_losses(const PassiveOadmParts& p = {}) {
    NodeLossTable t;
    const LossDb add_through = p.wdm_mux + p.circulator + p.wdm_mux + p.unbalanced_through + p.splitter;
    t.set(BackboneKind::passive_oadm, NodeAction::add, SignalClass::conventional, add_through);
    t.set(BackboneKind::passive_oadm, NodeAction::add, SignalClass::quantum_oneway, add_through);
    t.set(BackboneKind::passive_oadm, NodeAction::add, SignalClass::entangled, p.splitter);
    const LossDb pass = p.filter_reflect + p.filter_reflect + p.splitter;
    t.set(BackboneKind::passive_oadm, NodeAction::pass, SignalClass::conventional, pass);
    t.set(BackboneKind::passive_oadm, NodeAction::pass, SignalClass::quantum_oneway, pass);
    t.set(BackboneKind::passive_oadm, NodeAction::pass, SignalClass::entangled, pass);
    const LossDb drop_q = p.filter_drop + p.circulator + p.wdm_mux;
    t.set(BackboneKind::passive_oadm, NodeAction::drop, SignalClass::quantum_oneway, drop_q);
    t.set(BackboneKind::passive_oadm, NodeAction::drop, SignalClass::entangled, drop_q);
    t.set(BackboneKind::passive_oadm, NodeAction::drop, SignalClass::conventional,
          p.filter_reflect + p.filter_drop + p.circulator + p.wdm_mux);
    return t;
}

}  // namespace qmon
