#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qmon/capacity_planner.hpp"
#include "qmon/loss_engine.hpp"
#include "qmon/mesh_scheduler.hpp"
#include "qmon/topology.hpp"

namespace qmon {

/// Parse failure with the offending line number.
struct ConfigError : Error {
    int line;
    ConfigError(int line_no, const std::string& msg)
        : Error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

/// Declarative description of a network study: grid, topology, budgets,
/// planning knobs, catalog overrides, and demands. Missing sections fall
/// back to the reference network of the requested kind.
struct ConfigDocument {
    struct EdgeDecl {
        int a = 0;
        int b = 1;
        double length_km = 4.0;
        friend bool operator==(const EdgeDecl&, const EdgeDecl&) = default;
    };
    struct DemandDecl {
        std::string type = "direct";  // direct | entangled
        int a = 1;
        int b = 2;
        friend bool operator==(const DemandDecl&, const DemandDecl&) = default;
    };

    // [grid]
    int dwdm_spacing_ghz = 100;
    double cwdm_passband_nm = 13.0;

    // [topology]
    TopologyKind kind = TopologyKind::ring;
    BackboneKind node_kind = BackboneKind::passive_oadm;
    int access_networks = 3;
    int users_per_an = 16;
    double user_span_km = 1.0;
    double feeder_span_km = 3.5;
    double backbone_span_km = 4.0;
    std::vector<EdgeDecl> edges;

    // [budget]
    std::optional<double> conventional_budget_db;
    double quantum_budget_db = 30.0;
    double entangled_budget_db = 30.0;

    // [plan]
    double one_way_fraction = 0.5;
    bool overlap_optimization = false;
    double source_width_nm = 160.0;
    int max_quantum_cwdm = 8;
    int quantum_base_nm = 1510;
    int entanglement_only_base_nm = 1450;

    // [catalog]
    std::map<std::string, double> catalog_overrides;  // validated keys only

    // [[demand]]
    std::vector<DemandDecl> demand_decls;

    friend bool operator==(const ConfigDocument&, const ConfigDocument&) = default;
};

namespace config_detail {

inline const std::vector<std::string>& catalog_keys() {
    static const std::vector<std::string> keys = {
        "fiber_1550_db_per_km", "fiber_1310_db_per_km", "splitter_1x2_db", "splitter_1x32_db",
        "cwdm_oadm_db",         "dwdm_oadm_db",         "cwdm_mux4_db",    "wdm_mux_db",
        "bandpass_filter_db",   "circulator_db",        "awg32_db",        "switch_db",
        "passive_add_conventional_db", "passive_add_quantum_db", "passive_add_entangled_db",
        "passive_pass_db",      "passive_drop_conventional_db", "passive_drop_quantum_db",
        "pxc_cross_db",         "pxc_injection_db",     "simple_oadm_db",
    };
    return keys;
}

inline double parse_number(int line, const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(line, "value of '" + key + "' is not a number: '" + value + "'");
    }
}

inline int parse_int(int line, const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ConfigError(line, "value of '" + key + "' is not an integer: '" + value + "'");
    }
}

inline bool parse_bool(int line, const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError(line, "value of '" + key + "' must be true or false, got '" + value + "'");
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    return std::string(s.substr(b, e - b + 1));
}

inline std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace config_detail

/// Parses the sectioned key-value format: `[section]` headers, `key = value`
/// lines, `#` comments, and repeated `[[edge]]` / `[[demand]]` blocks for
/// lists. Unknown sections or keys and duplicate keys are errors.
inline ConfigDocument parse_config(std::string_view text) {
    using namespace config_detail;
    ConfigDocument doc;
    std::string section;
    std::set<std::string> seen_keys;
    ConfigDocument::EdgeDecl* edge = nullptr;
    ConfigDocument::DemandDecl* demand = nullptr;

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.size() > 3 && line.substr(0, 2) == "[[" && line.substr(line.size() - 2) == "]]") {
            const std::string name = trim(line.substr(2, line.size() - 4));
            if (name == "edge") {
                doc.edges.push_back({});
                edge = &doc.edges.back();
                demand = nullptr;
            } else if (name == "demand") {
                doc.demand_decls.push_back({});
                demand = &doc.demand_decls.back();
                edge = nullptr;
            } else {
                throw ConfigError(line_no, "unknown block '[[" + name + "]]'");
            }
            section = "";
            seen_keys.clear();
            continue;
        }
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            if (section != "grid" && section != "topology" && section != "budget" && section != "plan" &&
                section != "catalog")
                throw ConfigError(line_no, "unknown section '[" + section + "]'");
            edge = nullptr;
            demand = nullptr;
            seen_keys.clear();
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "missing key before '='");
        if (!seen_keys.insert(key).second) throw ConfigError(line_no, "duplicate key '" + key + "'");

        if (edge) {
            if (key == "a") edge->a = parse_int(line_no, key, value);
            else if (key == "b") edge->b = parse_int(line_no, key, value);
            else if (key == "length_km") edge->length_km = parse_number(line_no, key, value);
            else throw ConfigError(line_no, "unknown key '" + key + "' in [[edge]]");
            continue;
        }
        if (demand) {
            if (key == "type") {
                if (value != "direct" && value != "entangled")
                    throw ConfigError(line_no, "demand type must be direct or entangled, got '" + value + "'");
                demand->type = value;
            } else if (key == "a") demand->a = parse_int(line_no, key, value);
            else if (key == "b") demand->b = parse_int(line_no, key, value);
            else throw ConfigError(line_no, "unknown key '" + key + "' in [[demand]]");
            continue;
        }

        if (section == "grid") {
            if (key == "dwdm_spacing_ghz") doc.dwdm_spacing_ghz = parse_int(line_no, key, value);
            else if (key == "cwdm_passband_nm") doc.cwdm_passband_nm = parse_number(line_no, key, value);
            else throw ConfigError(line_no, "unknown key '" + key + "' in [grid]");
        } else if (section == "topology") {
            if (key == "kind") {
                if (value == "star") doc.kind = TopologyKind::star;
                else if (value == "open_ring") doc.kind = TopologyKind::open_ring;
                else if (value == "ring") doc.kind = TopologyKind::ring;
                else if (value == "mesh") doc.kind = TopologyKind::mesh;
                else throw ConfigError(line_no, "unknown topology kind '" + value + "'");
            } else if (key == "node_kind") {
                if (value == "passive_oadm") doc.node_kind = BackboneKind::passive_oadm;
                else if (value == "active_pxc") doc.node_kind = BackboneKind::active_pxc;
                else if (value == "cwdm_oadm_simple") doc.node_kind = BackboneKind::cwdm_oadm_simple;
                else throw ConfigError(line_no, "unknown node kind '" + value + "'");
            } else if (key == "access_networks") doc.access_networks = parse_int(line_no, key, value);
            else if (key == "users_per_an") doc.users_per_an = parse_int(line_no, key, value);
            else if (key == "user_span_km") doc.user_span_km = parse_number(line_no, key, value);
            else if (key == "feeder_span_km") doc.feeder_span_km = parse_number(line_no, key, value);
            else if (key == "backbone_span_km") doc.backbone_span_km = parse_number(line_no, key, value);
            else throw ConfigError(line_no, "unknown key '" + key + "' in [topology]");
        } else if (section == "budget") {
            if (key == "budget_db") {
                const double v = parse_number(line_no, key, value);
                doc.quantum_budget_db = v;
                doc.entangled_budget_db = v;
            } else if (key == "quantum_db") doc.quantum_budget_db = parse_number(line_no, key, value);
            else if (key == "entangled_db") doc.entangled_budget_db = parse_number(line_no, key, value);
            else if (key == "conventional_db") {
                if (value == "none") doc.conventional_budget_db.reset();
                else doc.conventional_budget_db = parse_number(line_no, key, value);
            } else throw ConfigError(line_no, "unknown key '" + key + "' in [budget]");
        } else if (section == "plan") {
            if (key == "one_way_fraction") doc.one_way_fraction = parse_number(line_no, key, value);
            else if (key == "overlap_optimization") doc.overlap_optimization = parse_bool(line_no, key, value);
            else if (key == "source_width_nm") doc.source_width_nm = parse_number(line_no, key, value);
            else if (key == "max_quantum_cwdm") doc.max_quantum_cwdm = parse_int(line_no, key, value);
            else if (key == "quantum_base_nm") doc.quantum_base_nm = parse_int(line_no, key, value);
            else if (key == "entanglement_only_base_nm")
                doc.entanglement_only_base_nm = parse_int(line_no, key, value);
            else throw ConfigError(line_no, "unknown key '" + key + "' in [plan]");
        } else if (section == "catalog") {
            const auto& keys = config_detail::catalog_keys();
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                throw ConfigError(line_no, "unknown key '" + key + "' in [catalog]");
            doc.catalog_overrides[key] = parse_number(line_no, key, value);
        } else {
            throw ConfigError(line_no, "key '" + key + "' outside any section");
        }
    }
    return doc;
}

/// Canonical serialization; parse(serialize(parse(x))) == parse(x).
inline std::string serialize_config(const ConfigDocument& doc) {
    using config_detail::format_number;
    std::ostringstream os;
    os << "[grid]\n";
    os << "dwdm_spacing_ghz = " << doc.dwdm_spacing_ghz << "\n";
    os << "cwdm_passband_nm = " << format_number(doc.cwdm_passband_nm) << "\n";
    os << "\n[topology]\n";
    os << "kind = " << to_string(doc.kind) << "\n";
    os << "node_kind = " << to_string(doc.node_kind) << "\n";
    os << "access_networks = " << doc.access_networks << "\n";
    os << "users_per_an = " << doc.users_per_an << "\n";
    os << "user_span_km = " << format_number(doc.user_span_km) << "\n";
    os << "feeder_span_km = " << format_number(doc.feeder_span_km) << "\n";
    os << "backbone_span_km = " << format_number(doc.backbone_span_km) << "\n";
    os << "\n[budget]\n";
    os << "quantum_db = " << format_number(doc.quantum_budget_db) << "\n";
    os << "entangled_db = " << format_number(doc.entangled_budget_db) << "\n";
    os << "conventional_db = "
       << (doc.conventional_budget_db ? format_number(*doc.conventional_budget_db) : "none") << "\n";
    os << "\n[plan]\n";
    os << "one_way_fraction = " << format_number(doc.one_way_fraction) << "\n";
    os << "overlap_optimization = " << (doc.overlap_optimization ? "true" : "false") << "\n";
    os << "source_width_nm = " << format_number(doc.source_width_nm) << "\n";
    os << "max_quantum_cwdm = " << doc.max_quantum_cwdm << "\n";
    os << "quantum_base_nm = " << doc.quantum_base_nm << "\n";
    os << "entanglement_only_base_nm = " << doc.entanglement_only_base_nm << "\n";
    if (!doc.catalog_overrides.empty()) {
        os << "\n[catalog]\n";
        for (const auto& [k, v] : doc.catalog_overrides) os << k << " = " << format_number(v) << "\n";
    }
    for (const auto& e : doc.edges) {
        os << "\n[[edge]]\n";
        os << "a = " << e.a << "\n";
        os << "b = " << e.b << "\n";
        os << "length_km = " << format_number(e.length_km) << "\n";
    }
    for (const auto& d : doc.demand_decls) {
        os << "\n[[demand]]\n";
        os << "type = " << d.type << "\n";
        os << "a = " << d.a << "\n";
        os << "b = " << d.b << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Materialization

inline Pricing pricing_from_config(const ConfigDocument& doc) {
    Pricing p;
    p.budgets.quantum_oneway = LossDb::from_db(doc.quantum_budget_db);
    p.budgets.entangled = LossDb::from_db(doc.entangled_budget_db);
    p.budgets.conventional =
        doc.conventional_budget_db ? std::optional<LossDb>(LossDb::from_db(*doc.conventional_budget_db))
                                   : std::nullopt;
    for (const auto& [key, v] : doc.catalog_overrides) {
        const LossDb db = LossDb::from_db(v);
        if (key == "fiber_1550_db_per_km") p.catalog.set_loss(Part::fiber, BandName::c_quantum, db);
        else if (key == "fiber_1310_db_per_km") p.catalog.set_loss(Part::fiber, BandName::o_conventional, db);
        else if (key == "splitter_1x2_db") p.catalog.set_loss(Part::splitter_1x2, db);
        else if (key == "splitter_1x32_db") p.catalog.set_loss(Part::splitter_1x32, db);
        else if (key == "cwdm_oadm_db") p.catalog.set_loss(Part::cwdm_oadm_1ch, db);
        else if (key == "dwdm_oadm_db") p.catalog.set_loss(Part::dwdm_oadm_1ch, db);
        else if (key == "cwdm_mux4_db") p.catalog.set_loss(Part::cwdm_mux4, db);
        else if (key == "wdm_mux_db") p.catalog.set_loss(Part::wdm_mux_1310_1550, db);
        else if (key == "bandpass_filter_db") p.catalog.set_loss(Part::bandpass_filter, db);
        else if (key == "circulator_db") p.catalog.set_loss(Part::circulator, db);
        else if (key == "awg32_db") p.catalog.set_loss(Part::awg32, db);
        else if (key == "switch_db") p.catalog.set_loss(Part::optical_switch, db);
        else if (key == "passive_add_conventional_db")
            p.nodes.set(BackboneKind::passive_oadm, NodeAction::add, SignalClass::conventional, db);
        else if (key == "passive_add_quantum_db")
            p.nodes.set(BackboneKind::passive_oadm, NodeAction::add, SignalClass::quantum_oneway, db);
        else if (key == "passive_add_entangled_db")
            p.nodes.set(BackboneKind::passive_oadm, NodeAction::add, SignalClass::entangled, db);
        else if (key == "passive_pass_db")
            for (SignalClass c : {SignalClass::conventional, SignalClass::quantum_oneway, SignalClass::entangled})
                p.nodes.set(BackboneKind::passive_oadm, NodeAction::pass, c, db);
        else if (key == "passive_drop_conventional_db")
            p.nodes.set(BackboneKind::passive_oadm, NodeAction::drop, SignalClass::conventional, db);
        else if (key == "passive_drop_quantum_db") {
            p.nodes.set(BackboneKind::passive_oadm, NodeAction::drop, SignalClass::quantum_oneway, db);
            p.nodes.set(BackboneKind::passive_oadm, NodeAction::drop, SignalClass::entangled, db);
        } else if (key == "pxc_cross_db") {
            p.nodes.set(BackboneKind::active_pxc, NodeAction::cross, SignalClass::conventional, db);
            p.nodes.set(BackboneKind::active_pxc, NodeAction::cross, SignalClass::quantum_oneway, db);
        } else if (key == "pxc_injection_db")
            p.nodes.set(BackboneKind::active_pxc, NodeAction::cross, SignalClass::entangled, db);
        else if (key == "simple_oadm_db")
            for (SignalClass c : {SignalClass::conventional, SignalClass::quantum_oneway, SignalClass::entangled})
                for (NodeAction a : {NodeAction::pass, NodeAction::drop})
                    p.nodes.set(BackboneKind::cwdm_oadm_simple, a, c, db);
    }
    return p;
}

inline NetworkModel network_from_config(const ConfigDocument& doc) {
    BuildOptions opt;
    opt.users_per_an = doc.users_per_an;
    opt.quantum_base_nm = doc.quantum_base_nm;
    opt.entanglement_only_base_nm = doc.entanglement_only_base_nm;
    opt.spans.user_m = static_cast<int>(std::llround(doc.user_span_km * 1000.0));
    opt.spans.feeder_m = static_cast<int>(std::llround(doc.feeder_span_km * 1000.0));
    opt.spans.backbone_m = static_cast<int>(std::llround(doc.backbone_span_km * 1000.0));
    for (const auto& e : doc.edges) opt.mesh_edges.emplace_back(e.a - 1, e.b - 1);
    NetworkModel net = build_reference_network(doc.kind, doc.access_networks, doc.node_kind, opt);
    if (!doc.edges.empty() && doc.kind == TopologyKind::mesh) {
        for (std::size_t i = 0; i < doc.edges.size(); ++i) {
            if (auto l = net.link_between(doc.edges[i].a - 1, doc.edges[i].b - 1))
                net.links[*l].length_m = static_cast<int>(std::llround(doc.edges[i].length_km * 1000.0));
        }
    }
    return net;
}

inline PlanOptions plan_options_from_config(const ConfigDocument& doc) {
    PlanOptions opt;
    opt.dwdm_spacing_ghz = doc.dwdm_spacing_ghz;
    opt.cwdm_passband_nm = doc.cwdm_passband_nm;
    opt.one_way_fraction = doc.one_way_fraction;
    opt.quantum_base_nm = doc.quantum_base_nm;
    opt.entanglement_only_base_nm = doc.entanglement_only_base_nm;
    opt.source_max_width_nm = doc.source_width_nm;
    opt.max_quantum_cwdm = doc.max_quantum_cwdm;
    return opt;
}

inline DemandSet demands_from_config(const ConfigDocument& doc, int n_access) {
    DemandSet set;
    if (doc.demand_decls.empty()) {
        set = DemandSet::any_to_any(n_access);
    } else {
        for (const auto& d : doc.demand_decls) {
            if (d.a < 1 || d.a > n_access || d.b < 1 || d.b > n_access)
                throw Error("demand references an unknown access network");
            set.demands.emplace_back(
                d.type == "direct" ? DemandType::direct_path : DemandType::entangled_pair, d.a - 1, d.b - 1);
        }
        std::sort(set.demands.begin(), set.demands.end());
    }
    return set;
}

}  // namespace qmon
