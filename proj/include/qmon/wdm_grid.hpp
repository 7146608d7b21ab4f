#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qmon/bands.hpp"
#include "qmon/units.hpp"

namespace qmon {

// ITU-T G.694.1 anchor: channel index 0 sits at 193.1 THz.
inline constexpr std::int64_t kDwdmAnchorGhz = 193100;

/// One channel of the fixed DWDM grid. All equality and pairing arithmetic
/// is done on the integer grid index; frequencies and wavelengths are
/// derived on demand so reflections stay exact.
struct DwdmChannel {
    std::int64_t index = 0;
    int spacing_ghz = 100;

    double center_frequency_ghz() const { return static_cast<double>(kDwdmAnchorGhz + index * spacing_ghz); }
    double center_frequency_thz() const { return center_frequency_ghz() / 1000.0; }
    double wavelength_nm() const { return kSpeedOfLight / center_frequency_ghz(); }

    friend bool operator==(const DwdmChannel& a, const DwdmChannel& b) {
        return a.index == b.index && a.spacing_ghz == b.spacing_ghz;
    }
    friend bool operator!=(const DwdmChannel& a, const DwdmChannel& b) { return !(a == b); }
    friend bool operator<(const DwdmChannel& a, const DwdmChannel& b) {
        return a.index != b.index ? a.index < b.index : a.spacing_ghz < b.spacing_ghz;
    }
};

/// Wavelength of a grid channel in nm. Inverse of `dwdm_channel_at` up to
/// 1e-9 relative error.
inline double wavelength_of(const DwdmChannel& ch) { return ch.wavelength_nm(); }

/// Grid channel whose center is closest to the given frequency.
inline DwdmChannel dwdm_channel_at(double frequency_ghz, int spacing_ghz = 100) {
    if (spacing_ghz <= 0) throw Error("DWDM grid spacing must be positive");
    const double idx = (frequency_ghz - static_cast<double>(kDwdmAnchorGhz)) / spacing_ghz;
    return DwdmChannel{std::llround(idx), spacing_ghz};
}

/// A channel of the 20 nm CWDM grid (ITU-T G.694.2), named CX for nominal
/// wavelength X. The passband is centered on the nominal wavelength.
struct CwdmChannel {
    int nominal_nm = 1550;
    double passband_nm = 13.0;

    CwdmChannel() = default;
    CwdmChannel(int nominal, double passband = 13.0) : nominal_nm(nominal), passband_nm(passband) {
        if (nominal < 1270 || nominal > 1610 || (nominal - 1270) % 20 != 0)
            throw Error("CWDM nominal wavelength must be one of 1270..1610 nm in 20 nm steps");
        if (passband <= 0.0) throw Error("CWDM passband must be positive");
        if (passband > 20.0) throw Error("CWDM passband would overlap the adjacent channel");
    }

    double passband_lo_nm() const { return nominal_nm - passband_nm / 2.0; }
    double passband_hi_nm() const { return nominal_nm + passband_nm / 2.0; }
    double center_frequency_ghz() const { return kSpeedOfLight / nominal_nm; }
    std::string name() const { return "C" + std::to_string(nominal_nm); }

    friend bool operator==(const CwdmChannel& a, const CwdmChannel& b) {
        return a.nominal_nm == b.nominal_nm && a.passband_nm == b.passband_nm;
    }
    friend bool operator!=(const CwdmChannel& a, const CwdmChannel& b) { return !(a == b); }
    friend bool operator<(const CwdmChannel& a, const CwdmChannel& b) { return a.nominal_nm < b.nominal_nm; }
};

/// Width of one DWDM slot expressed in wavelength. The conversion is fixed
/// at the 1550 nm region (0.8 nm per 100 GHz), the figure used for channel
/// budgeting throughout, so every CWDM channel holds the same user count.
inline double dwdm_slot_width_nm(int spacing_ghz) {
    return spacing_ghz * (1550.0 * 1550.0 / kSpeedOfLight);
}

/// DWDM channels that fit inside a CWDM passband: floor(passband / slot)
/// slots, materialized as the contiguous run of grid channels centered on
/// the CWDM channel. Empty when the passband is narrower than one slot.
inline std::vector<DwdmChannel> dwdm_channels_in(const CwdmChannel& c, int spacing_ghz = 100) {
    if (spacing_ghz <= 0) throw Error("DWDM grid spacing must be positive");
    const double slot = dwdm_slot_width_nm(spacing_ghz);
    const int count = static_cast<int>(std::floor(c.passband_nm / slot + 1e-9));
    if (count <= 0) return {};
    const double center_idx = (c.center_frequency_ghz() - kDwdmAnchorGhz) / spacing_ghz;
    const std::int64_t first = std::llround(center_idx - (count - 1) / 2.0);
    std::vector<DwdmChannel> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(DwdmChannel{first + i, spacing_ghz});
    return out;
}

/// Reflection axis for entangled-channel pairing. Stored in half-slot units
/// so that a center on or between grid channels is represented exactly:
/// frequency = anchor + twice_index * spacing / 2.
struct PairingCenter {
    std::int64_t twice_index = 0;
    int spacing_ghz = 100;

    double frequency_ghz() const {
        return static_cast<double>(kDwdmAnchorGhz) + static_cast<double>(twice_index) * spacing_ghz / 2.0;
    }
    double wavelength_nm() const { return kSpeedOfLight / frequency_ghz(); }

    /// Center aligned with the grid from an arbitrary frequency; rejects
    /// frequencies that sit on neither a channel nor a midpoint.
    static PairingCenter from_frequency_ghz(double frequency_ghz, int spacing_ghz = 100) {
        if (spacing_ghz <= 0) throw Error("DWDM grid spacing must be positive");
        const double t = (frequency_ghz - static_cast<double>(kDwdmAnchorGhz)) * 2.0 / spacing_ghz;
        const std::int64_t r = std::llround(t);
        if (std::abs(t - static_cast<double>(r)) > 1e-6) throw Error("pairing not grid-aligned");
        return PairingCenter{r, spacing_ghz};
    }

    /// Mirror axis of two grid channels (their frequency midpoint).
    static PairingCenter between(const DwdmChannel& a, const DwdmChannel& b) {
        if (a.spacing_ghz != b.spacing_ghz) throw Error("pairing requires a common grid spacing");
        return PairingCenter{a.index + b.index, a.spacing_ghz};
    }

    /// Closest aligned center; for spectral checks on free-running sources.
    static PairingCenter nearest(double frequency_ghz, int spacing_ghz = 100) {
        if (spacing_ghz <= 0) throw Error("DWDM grid spacing must be positive");
        const double t = (frequency_ghz - static_cast<double>(kDwdmAnchorGhz)) * 2.0 / spacing_ghz;
        return PairingCenter{std::llround(t), spacing_ghz};
    }

    friend bool operator==(const PairingCenter& a, const PairingCenter& b) {
        return a.twice_index == b.twice_index && a.spacing_ghz == b.spacing_ghz;
    }
};

/// The channel frequency-correlated with `ch` for a source centered on
/// `center`: an exact reflection, so it is an involution and the two
/// frequencies sum to twice the center with no floating drift.
inline DwdmChannel entangled_partner(const DwdmChannel& ch, const PairingCenter& center) {
    if (ch.spacing_ghz != center.spacing_ghz) throw Error("pairing requires a common grid spacing");
    return DwdmChannel{center.twice_index - ch.index, ch.spacing_ghz};
}

inline DwdmChannel entangled_partner(const DwdmChannel& ch, double source_center_thz) {
    return entangled_partner(ch, PairingCenter::from_frequency_ghz(source_center_thz * 1000.0, ch.spacing_ghz));
}

}  // namespace qmon
