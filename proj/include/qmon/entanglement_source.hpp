#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qmon/wdm_grid.hpp"

namespace qmon {

/// Broadband SPDC pair source. A CW pump at pump_nm down-converts to a flat
/// spectrum centered at twice the pump wavelength; photons mirror-paired
/// about the center are frequency correlated.
struct EntangledSourceSpec {
    int id = 0;
    double pump_nm = 775.0;
    double center_nm = 1550.0;
    double spectral_width_nm = 70.0;
    double pair_rate_density = 4.5e5;  // pairs/s/mW/GHz
    double pump_power_mw = 1.0;
    std::optional<PairingCenter> grid_center;
    std::vector<DwdmChannel> connected_channels;  // pairing-closed
    // Access-network pairs this source serves; (i,i) is a single-network
    // source whose pairs sit inside one CWDM channel.
    std::vector<std::pair<int, int>> serves;
};

inline EntangledSourceSpec make_source(double center_nm, double width_nm = 70.0, double power_mw = 1.0) {
    EntangledSourceSpec s;
    s.center_nm = center_nm;
    s.pump_nm = center_nm / 2.0;
    s.spectral_width_nm = width_nm;
    s.pump_power_mw = power_mw;
    return s;
}

/// Usable output band [center - w/2, center + w/2]. A DWDM channel is
/// reachable iff its slot lies inside.
inline std::pair<double, double> coverage(const EntangledSourceSpec& s) {
    return {s.center_nm - s.spectral_width_nm / 2.0, s.center_nm + s.spectral_width_nm / 2.0};
}

inline bool covers(const EntangledSourceSpec& s, const DwdmChannel& ch) {
    const auto [lo, hi] = coverage(s);
    const double half_slot = dwdm_slot_width_nm(ch.spacing_ghz) / 2.0;
    const double nm = ch.wavelength_nm();
    return nm - half_slot >= lo - 1e-9 && nm + half_slot <= hi + 1e-9;
}

inline bool covers(const EntangledSourceSpec& s, const CwdmChannel& c) {
    const auto [lo, hi] = coverage(s);
    return c.passband_lo_nm() >= lo - 1e-9 && c.passband_hi_nm() <= hi + 1e-9;
}

/// Spectral width a single source needs to pair two CWDM channels from
/// their midpoint: the center distance plus a full passband.
inline double required_width_nm(const CwdmChannel& a, const CwdmChannel& b) {
    return std::abs(a.nominal_nm - b.nominal_nm) + std::max(a.passband_nm, b.passband_nm);
}

/// Pairs per second delivered into one DWDM channel. The spectrum is flat,
/// so the rate depends only on pump power and channel width.
inline PairingCenter pairing_center_of(const EntangledSourceSpec& s, int spacing_ghz) {
    if (s.grid_center) return *s.grid_center;
    return PairingCenter::nearest(kSpeedOfLight / s.center_nm, spacing_ghz);
}

inline double pair_rate_per_channel(const EntangledSourceSpec& s, const DwdmChannel& ch) {
    if (!covers(s, ch)) throw Error("channel outside source spectrum");
    const DwdmChannel partner = entangled_partner(ch, pairing_center_of(s, ch.spacing_ghz));
    if (!covers(s, partner)) throw Error("partner outside source spectrum");
    return s.pair_rate_density * s.pump_power_mw * static_cast<double>(ch.spacing_ghz);
}

/// Partner lookup checked against one source's spectrum.
inline DwdmChannel entangled_partner(const DwdmChannel& ch, const EntangledSourceSpec& s) {
    const DwdmChannel partner = entangled_partner(ch, pairing_center_of(s, ch.spacing_ghz));
    if (!covers(s, ch) || !covers(s, partner)) throw Error("partner outside source spectrum");
    return partner;
}

inline std::vector<std::string> source_warnings(const EntangledSourceSpec& s) {
    std::vector<std::string> w;
    if (s.pump_power_mw > 1.0)
        w.push_back("pump power above 1 mW: multi-pair emission will degrade entanglement");
    if (s.pump_nm < 770.0 || s.pump_nm > 780.0)
        w.push_back("pump wavelength outside the typical 775 +/- 5 nm range");
    return w;
}

/// Construction-time invariants: center relation and pairing closure of the
/// connected channel set.
inline void validate_source(const EntangledSourceSpec& s) {
    if (std::abs(s.center_nm - 2.0 * s.pump_nm) > 1e-9)
        throw Error("source center wavelength must be twice the pump wavelength");
    if (s.spectral_width_nm <= 0.0) throw Error("source spectral width must be positive");
    if (!s.connected_channels.empty()) {
        if (!s.grid_center) throw Error("connected channels require a grid-aligned source center");
        std::set<DwdmChannel> set(s.connected_channels.begin(), s.connected_channels.end());
        for (const DwdmChannel& ch : set)
            if (!set.count(entangled_partner(ch, *s.grid_center)))
                throw Error("connected channel set is not pairing-closed");
    }
}

// ---------------------------------------------------------------------------
// Source connection schemes

/// How grouped sources share the spectrum: a switch per CWDM channel, a
/// switch per DWDM channel, or a fixed split of DWDM channels per source.
/// Full network designs use the fixed split.
enum class SchemeKind { switched_cwdm, switched_dwdm, fixed_split };

struct ConnectionScheme {
    SchemeKind kind = SchemeKind::fixed_split;
    std::map<int, std::vector<DwdmChannel>> allocation;  // source id -> channels
};

/// CWDM channel a DWDM channel falls into (nearest 20 nm grid nominal).
inline int cwdm_nominal_of(const DwdmChannel& ch) {
    const int k = static_cast<int>(std::lround((ch.wavelength_nm() - 1270.0) / 20.0));
    return 1270 + 20 * std::clamp(k, 0, 17);
}

inline void validate_scheme(const ConnectionScheme& s) {
    if (s.kind == SchemeKind::fixed_split) {
        std::set<DwdmChannel> seen;
        for (const auto& [id, channels] : s.allocation)
            for (const DwdmChannel& ch : channels)
                if (!seen.insert(ch).second)
                    throw Error("fixed split assigns a DWDM channel to more than one source");
    } else if (s.kind == SchemeKind::switched_cwdm) {
        // The switch hands whole CWDM channels to sources: one driver each.
        std::map<int, int> driver;
        for (const auto& [id, channels] : s.allocation)
            for (const DwdmChannel& ch : channels) {
                const int nominal = cwdm_nominal_of(ch);
                const auto [it, inserted] = driver.emplace(nominal, id);
                if (!inserted && it->second != id)
                    throw Error("CWDM channel C" + std::to_string(nominal) +
                                " is driven by two sources at once");
            }
    }
}

// ---------------------------------------------------------------------------
// Source planning

struct SourcePlan {
    std::vector<EntangledSourceSpec> sources;
    struct Infeasible {
        int an_a;
        int an_b;
        double required_width_nm;
    };
    std::vector<Infeasible> infeasible;
};

/// One source per unordered access-network pair (self-pairs included),
/// centered on the midpoint of the two CWDM channels. With overlap
/// optimization, a pair source whose midpoint lands exactly on a CWDM
/// channel of the set also serves that channel's self-pair, dropping the
/// dedicated source.
inline SourcePlan plan_sources_for_pairs(const std::vector<CwdmChannel>& an_channels, double max_width_nm,
                                         bool overlap_optimization = false) {
    const int n = static_cast<int>(an_channels.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (an_channels[i].nominal_nm == an_channels[j].nominal_nm)
                throw Error("access networks must use distinct CWDM channels");

    SourcePlan plan;
    std::set<int> self_covered;
    if (overlap_optimization) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (required_width_nm(an_channels[i], an_channels[j]) > max_width_nm) continue;
                const double mid = (an_channels[i].nominal_nm + an_channels[j].nominal_nm) / 2.0;
                for (int k = 0; k < n; ++k)
                    if (std::abs(mid - an_channels[k].nominal_nm) < 1e-9) self_covered.insert(k);
            }
    }

    int next_id = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double width = required_width_nm(an_channels[i], an_channels[j]);
            if (width > max_width_nm) {
                plan.infeasible.push_back({i, j, width});
                continue;
            }
            if (i == j && self_covered.count(i)) continue;  // folded into a pair source
            EntangledSourceSpec s =
                make_source((an_channels[i].nominal_nm + an_channels[j].nominal_nm) / 2.0, width);
            s.id = next_id++;
            s.serves.push_back({i, j});
            if (overlap_optimization && i != j) {
                const double mid = s.center_nm;
                for (int k = 0; k < n; ++k)
                    if (std::abs(mid - an_channels[k].nominal_nm) < 1e-9) s.serves.push_back({k, k});
            }
            plan.sources.push_back(std::move(s));
        }
    }
    return plan;
}

}  // namespace qmon
