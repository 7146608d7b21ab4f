#pragma once

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "qmon/capacity_planner.hpp"
#include "qmon/loss_engine.hpp"
#include "qmon/mesh_scheduler.hpp"

namespace qmon {

enum class ReportKind { loss_table, capacity, channel_plan, schedule, validation };

/// Rendered table plus the matching machine-readable records; every number
/// in the table appears verbatim in a record.
struct ReportDocument {
    ReportKind kind = ReportKind::loss_table;
    std::string rendered;
    std::vector<std::string> records;
};

namespace report_detail {

inline std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

inline std::string cell(const std::optional<LossDb>& v) { return v ? v->str() + " dB" : "-"; }

}  // namespace report_detail

inline ReportDocument loss_table_report(const WorstCaseTable& table) {
    using report_detail::cell;
    using report_detail::pad;
    ReportDocument doc;
    doc.kind = ReportKind::loss_table;
    std::ostringstream os;
    os << pad("Path to", 28) << pad("Conv.", 12) << pad("Quant.", 12) << "Ent.\n";
    for (const auto& row : table.rows) {
        os << pad(std::to_string(row.x) + "-closest access network", 28) << pad(cell(row.conventional), 12)
           << pad(cell(row.quantum), 12) << cell(row.entangled) << "\n";
        auto rec = [&](const char* cls, const std::optional<LossDb>& v) {
            if (v)
                doc.records.push_back("loss_cell x=" + std::to_string(row.x) + " class=" + cls +
                                      " db=" + v->str());
        };
        rec("conventional", row.conventional);
        rec("quantum", row.quantum);
        rec("entangled", row.entangled);
    }
    if (table.ring_self_entangled_via_backbone) {
        os << "entangled to the own access network via the full backbone: "
           << table.ring_self_entangled_via_backbone->str() << " dB per arm\n";
        doc.records.push_back("loss_cell x=full_backbone class=entangled db=" +
                              table.ring_self_entangled_via_backbone->str());
    }
    auto boundary = [&](const char* cls, const std::optional<int>& b) {
        if (b) {
            os << "budget boundary (" << cls << "): " << (*b < 0 ? "none feasible" : std::to_string(*b) + "-closest")
               << "\n";
            doc.records.push_back("boundary class=" + std::string(cls) + " x=" + std::to_string(*b));
        }
    };
    boundary("conventional", table.conventional_boundary);
    boundary("quantum", table.quantum_boundary);
    boundary("entangled", table.entangled_boundary);
    doc.rendered = os.str();
    return doc;
}

inline ReportDocument capacity_report_doc(const CapacityReport& r) {
    ReportDocument doc;
    doc.kind = ReportKind::capacity;
    std::ostringstream os;
    if (r.unbounded) {
        os << "capacity: unlimited access networks (" << r.note << ")\n";
        os << "users per access network: " << r.users_per_an << "\n";
        doc.records.push_back("capacity n=unbounded users_per_an=" + std::to_string(r.users_per_an));
    } else {
        os << "capacity: N=" << r.max_access_networks << ", " << r.total_users << " users ("
           << r.users_per_an << " per access network)\n";
        os << "limiting factor: " << to_string(r.limiting) << "\n";
        doc.records.push_back("capacity n=" + std::to_string(r.max_access_networks) +
                              " users=" + std::to_string(r.total_users) +
                              " users_per_an=" + std::to_string(r.users_per_an) +
                              " limiting=" + to_string(r.limiting));
    }
    for (const PathLossReport& w : r.witnesses) {
        os << "witness " << to_string(w.cls) << ": " << w.total_db.str() << " dB";
        if (w.arm_backbone_hops.size() == 2) {
            LossDb arm1, arm2;
            // Arms were concatenated in order; recover their subtotals.
            std::size_t i = 0;
            for (const Segment& s : w.per_segment) {
                if (s.label.rfind("arm 1", 0) == 0) arm1 += s.db;
                else arm2 += s.db;
                ++i;
            }
            os << " (arms " << arm1.str() << " + " << arm2.str() << ")";
            doc.records.push_back("witness class=" + to_string(w.cls) + " db=" + w.total_db.str() +
                                  " arm1=" + arm1.str() + " arm2=" + arm2.str());
        } else {
            doc.records.push_back("witness class=" + to_string(w.cls) + " db=" + w.total_db.str());
        }
        os << (w.feasible ? " [within budget]" : " [over budget]") << "\n";
    }
    doc.rendered = os.str();
    return doc;
}

inline ReportDocument channel_plan_report(const ChannelPlan& plan) {
    ReportDocument doc;
    doc.kind = ReportKind::channel_plan;
    std::ostringstream os;
    os << "channel plan for " << plan.n_access << " access networks ("
       << plan.spacing_ghz << " GHz grid)\n";
    for (const auto& a : plan.assignments) {
        os << "A" << a.an + 1 << ": conventional " << a.conventional.name() << ", quantum " << a.quantum.name()
           << "\n";
        doc.records.push_back("assignment an=A" + std::to_string(a.an + 1) +
                              " conventional=" + a.conventional.name() + " quantum=" + a.quantum.name());
    }
    for (const EntangledSourceSpec& s : plan.sources) {
        std::ostringstream center;
        center << s.center_nm;
        os << "S" << s.id + 1 << ": center " << center.str() << " nm, serves";
        std::string pairs;
        for (auto [x, y] : s.serves) {
            pairs += " (A" + std::to_string(x + 1) + ",A" + std::to_string(y + 1) + ")";
        }
        os << pairs << ", " << s.connected_channels.size() << " DWDM channels\n";
        doc.records.push_back("source id=S" + std::to_string(s.id + 1) + " center_nm=" + center.str() +
                              " serves=" + (pairs.empty() ? "" : pairs.substr(1)) +
                              " channels=" + std::to_string(s.connected_channels.size()));
    }
    for (const auto& block : plan.blocks) {
        int one_way = 0, entangled = 0, reserved = 0;
        for (const auto& use : block.channels) {
            if (use.role == ChannelRole::one_way) ++one_way;
            else if (use.role == ChannelRole::entangled) ++entangled;
            else ++reserved;
        }
        os << "A" << block.an + 1 << " " << block.cwdm.name() << ": " << entangled << " entangled, " << one_way
           << " one-way, " << reserved << " reserved\n";
        doc.records.push_back("block an=A" + std::to_string(block.an + 1) + " cwdm=" + block.cwdm.name() +
                              " entangled=" + std::to_string(entangled) +
                              " one_way=" + std::to_string(one_way) +
                              " reserved=" + std::to_string(reserved));
    }
    doc.rendered = os.str();
    return doc;
}

inline ReportDocument schedule_report(const Schedule& s, const NetworkModel& net) {
    ReportDocument doc;
    doc.kind = ReportKind::schedule;
    std::ostringstream os;
    os << s.configurations.size() << " configuration" << (s.configurations.size() == 1 ? "" : "s");
    if (s.minimal_certified) os << " (minimal)";
    if (s.possibly_non_minimal) os << " (greedy; a shorter schedule may exist)";
    os << "\n";
    doc.records.push_back("schedule configurations=" + std::to_string(s.configurations.size()) +
                          " minimal=" + (s.minimal_certified ? "yes" : "unknown"));
    for (std::size_t i = 0; i < s.configurations.size(); ++i) {
        os << "configuration " << i + 1 << ":\n";
        for (const ServedPath& p : s.configurations[i].served) {
            auto route_str = [&](const std::vector<int>& r) {
                std::string out;
                for (std::size_t k = 0; k < r.size(); ++k) out += (k ? "-" : "") + net.nodes[r[k]].name();
                return out;
            };
            if (p.demand.type == DemandType::direct_path) {
                os << "  direct " << p.demand.id() << " via " << route_str(p.route_a) << " on C"
                   << p.quantum_a_nm << " / C" << p.conventional_nm << "\n";
                doc.records.push_back("served config=" + std::to_string(i + 1) + " demand=" + p.demand.id() +
                                      " route=" + route_str(p.route_a) + " quantum=C" +
                                      std::to_string(p.quantum_a_nm) + " conventional=C" +
                                      std::to_string(p.conventional_nm));
            } else if (p.demand.an_a == p.demand.an_b) {
                os << "  entangled " << p.demand.id() << " from source at " << net.nodes[p.source_node].name()
                   << " on C" << p.quantum_a_nm << " (local)\n";
                doc.records.push_back("served config=" + std::to_string(i + 1) + " demand=" + p.demand.id() +
                                      " source=" + net.nodes[p.source_node].name() + " quantum=C" +
                                      std::to_string(p.quantum_a_nm));
            } else {
                os << "  entangled " << p.demand.id() << " from source at " << net.nodes[p.source_node].name()
                   << ": arm " << route_str(p.route_a) << " on C" << p.quantum_a_nm << ", arm "
                   << route_str(p.route_b) << " on C" << p.quantum_b_nm << "\n";
                doc.records.push_back("served config=" + std::to_string(i + 1) + " demand=" + p.demand.id() +
                                      " source=" + net.nodes[p.source_node].name() + " arm_a=" +
                                      route_str(p.route_a) + " quantum_a=C" + std::to_string(p.quantum_a_nm) +
                                      " arm_b=" + route_str(p.route_b) + " quantum_b=C" +
                                      std::to_string(p.quantum_b_nm));
            }
        }
    }
    doc.rendered = os.str();
    return doc;
}

inline ReportDocument validation_report(const std::vector<std::string>& issues) {
    ReportDocument doc;
    doc.kind = ReportKind::validation;
    std::ostringstream os;
    if (issues.empty()) {
        os << "network model valid\n";
        doc.records.push_back("validation ok=yes");
    } else {
        os << issues.size() << " issue" << (issues.size() == 1 ? "" : "s") << ":\n";
        doc.records.push_back("validation ok=no issues=" + std::to_string(issues.size()));
        for (const std::string& issue : issues) {
            os << "  " << issue << "\n";
            doc.records.push_back("issue text=" + issue);
        }
    }
    doc.rendered = os.str();
    return doc;
}

}  // namespace qmon
