#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qmon/config.hpp"
#include "qmon/reports.hpp"

namespace qmon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;
inline constexpr int kExitBadConfig = 2;

inline const char* kUsage =
    "usage: qmon <command> [config-file] [--records]\n"
    "\n"
    "commands:\n"
    "  validate     check the network description and report issues\n"
    "  loss-report  per-class path losses over backbone distance\n"
    "  capacity     maximum access networks and users under the budget\n"
    "  plan         channel plan: assignments, sources, DWDM roles\n"
    "  schedule     configuration cover for a reconfigurable mesh\n"
    "\n"
    "Without a config file the reference network of each command's\n"
    "default topology is used. --records switches the output to\n"
    "machine-readable records.\n";

/// Runs one command. Reports go to `out`, diagnostics to `err`.
/// Exit status: 0 ok, 1 infeasibility (report still emitted), 2 bad config.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::string command;
    std::string config_path;
    bool records = false;
    for (const std::string& a : args) {
        if (a == "--records") records = true;
        else if (a == "--help" || a == "-h") {
            out << kUsage;
            return kExitOk;
        } else if (command.empty()) command = a;
        else if (config_path.empty()) config_path = a;
        else {
            err << "unexpected argument '" << a << "'\n" << kUsage;
            return kExitBadConfig;
        }
    }
    if (command.empty()) {
        err << kUsage;
        return kExitBadConfig;
    }
    if (command != "validate" && command != "loss-report" && command != "capacity" && command != "plan" &&
        command != "schedule") {
        err << "unknown command '" << command << "'\n" << kUsage;
        return kExitBadConfig;
    }

    ConfigDocument doc;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            err << "cannot open '" << config_path << "'\n";
            return kExitBadConfig;
        }
        std::ostringstream text;
        text << in.rdbuf();
        try {
            doc = parse_config(text.str());
        } catch (const ConfigError& e) {
            err << config_path << ": " << e.what() << "\n";
            return kExitBadConfig;
        }
    }

    auto emit = [&](const ReportDocument& report) {
        if (records)
            for (const std::string& r : report.records) out << r << "\n";
        else
            out << report.rendered;
    };

    try {
        const Pricing pricing = pricing_from_config(doc);

        if (command == "validate") {
            const NetworkModel net = network_from_config(doc);
            std::vector<std::string> issues = validate_network(net);
            for (const std::string& w : net.warnings) issues.push_back("warning: " + w);
            emit(validation_report(issues));
            const bool hard = std::any_of(issues.begin(), issues.end(), [](const std::string& s) {
                return s.rfind("warning:", 0) != 0;
            });
            return hard ? kExitInfeasible : kExitOk;
        }
        if (command == "loss-report") {
            const NetworkModel net = network_from_config(doc);
            const int max_x = net.head_end_source ? net.n_access() : 3;
            emit(loss_table_report(worst_case_analysis(pricing, net, max_x)));
            return kExitOk;
        }
        if (command == "capacity") {
            const CapacityReport report =
                max_access_networks(doc.node_kind, pricing, doc.source_width_nm, plan_options_from_config(doc));
            emit(capacity_report_doc(report));
            return kExitOk;
        }
        if (command == "plan") {
            emit(channel_plan_report(synthesize_channel_plan(doc.access_networks, plan_options_from_config(doc))));
            return kExitOk;
        }
        // schedule
        NetworkModel net = network_from_config(doc);
        if (net.kind != TopologyKind::mesh) {
            // The schedule command studies the reconfigurable design; fall
            // back to the reference mesh when the config asks for nothing
            // specific.
            if (config_path.empty()) {
                net = build_reference_network(TopologyKind::mesh, 4, BackboneKind::active_pxc);
            } else {
                err << "schedule requires a mesh topology with active nodes\n";
                return kExitBadConfig;
            }
        }
        const Schedule s = schedule(pricing, net, demands_from_config(doc, net.n_access()),
                                    net.quantum_pool, net.conventional_pool);
        emit(schedule_report(s, net));
        return kExitOk;
    } catch (const Error& e) {
        err << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadConfig;
    }
}

}  // namespace qmon::cli
