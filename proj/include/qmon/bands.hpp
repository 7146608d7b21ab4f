#pragma once

#include <optional>
#include <string>

#include "qmon/units.hpp"

namespace qmon {

/// The three kinds of traffic the network carries. Entangled photons are
/// priced like quantum signals on most elements but have their own add /
/// injection losses at backbone nodes.
enum class SignalClass { conventional, quantum_oneway, entangled };

inline std::string to_string(SignalClass c) {
    switch (c) {
        case SignalClass::conventional: return "conventional";
        case SignalClass::quantum_oneway: return "quantum";
        case SignalClass::entangled: return "entangled";
    }
    return "?";
}

enum class BandName { o_conventional, c_quantum };

inline std::string to_string(BandName b) {
    return b == BandName::o_conventional ? "O" : "C";
}

/// A spectral band. Conventional traffic lives in the O band, quantum
/// traffic (one-way and entangled) in the C band and its vicinity; the wide
/// separation keeps conventional-to-quantum crosstalk out of scope.
struct Band {
    BandName name;
    double lo_nm;
    double hi_nm;

    bool contains(double nm) const { return lo_nm <= nm && nm <= hi_nm; }
};

inline constexpr Band kOBand{BandName::o_conventional, 1260.0, 1360.0};
inline constexpr Band kCBand{BandName::c_quantum, 1500.0, 1600.0};

inline const Band& band(BandName name) { return name == BandName::o_conventional ? kOBand : kCBand; }

/// Band a signal class is carried in (also selects the fiber loss rate).
inline BandName band_of(SignalClass c) {
    return c == SignalClass::conventional ? BandName::o_conventional : BandName::c_quantum;
}

inline std::optional<BandName> band_containing(double nm) {
    if (kOBand.contains(nm)) return BandName::o_conventional;
    if (kCBand.contains(nm)) return BandName::c_quantum;
    return std::nullopt;
}

/// Bands must be disjoint with a wide guard interval between them.
inline void validate_bands(const Band& o, const Band& c, double min_separation_nm = 140.0) {
    if (o.lo_nm >= o.hi_nm || c.lo_nm >= c.hi_nm) throw Error("band range is empty");
    const double gap = c.lo_nm - o.hi_nm;
    if (gap < min_separation_nm)
        throw Error("bands must be separated by at least " + std::to_string(min_separation_nm) + " nm");
}

}  // namespace qmon
