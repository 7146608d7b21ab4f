#pragma once

// Hand-enumerated component chains for the reference networks, priced with
// plain doubles straight from the datasheet numbers. Kept independent of
// the route machinery on purpose: these are the expected values the engine
// has to reproduce.

namespace refchains {

// Datasheet constants.
inline constexpr double kFiberCPerKm = 0.2;
inline constexpr double kFiberOPerKm = 0.32;
inline constexpr double kSwitch = 1.0;
inline constexpr double kAwg = 3.0;
inline constexpr double kUserKm = 1.0;
inline constexpr double kFeederKm = 3.5;
inline constexpr double kSpanKm = 4.0;

// Fixed OADM node actions.
inline constexpr double kAddConv = 6.2;
inline constexpr double kAddQuant = 6.2;
inline constexpr double kAddEnt = 3.6;
inline constexpr double kPass = 4.8;
inline constexpr double kDropConv = 2.3;
inline constexpr double kDropQuant = 1.7;
inline constexpr double kDropEnt = 1.7;

// Cross-connect node.
inline constexpr double kCross = 4.0;
inline constexpr double kInject = 2.5;

// Single-channel CWDM OADM of the entanglement-only design.
inline constexpr double kSimplePass = 0.5;
inline constexpr double kSimpleDrop = 0.5;

inline double access_tail(double fiber_per_km) {
    return kFeederKm * fiber_per_km + kAwg + kSwitch + kUserKm * fiber_per_km;
}

inline double return_path(double fiber_per_km) {
    return kUserKm * fiber_per_km + kSwitch + kSwitch + kUserKm * fiber_per_km;
}

/// Fixed ring, one-way signal from a user to the x-closest access network.
inline double ring_one_way(int x, bool conventional) {
    const double f = conventional ? kFiberOPerKm : kFiberCPerKm;
    if (x == 0) return return_path(f);
    double total = access_tail(f);  // egress mirrors the ingress tail
    total += conventional ? kAddConv : kAddQuant;
    for (int i = 1; i < x; ++i) total += kSpanKm * f + kPass;
    total += kSpanKm * f + (conventional ? kDropConv : kDropQuant);
    total += access_tail(f);
    return total;
}

/// Fixed ring, one entangled arm from a node's source to the x-closest
/// access network (x = 1..N; x = N is the own network via the full ring).
inline double ring_entangled_arm(int x) {
    double total = kAddEnt;
    for (int i = 1; i < x; ++i) total += kSpanKm * kFiberCPerKm + kPass;
    total += kSpanKm * kFiberCPerKm + kDropEnt;
    total += access_tail(kFiberCPerKm);
    return total;
}

/// Reconfigurable mesh, one-way over x backbone spans (x + 1 node crossings).
inline double mesh_one_way(int x, bool conventional) {
    const double f = conventional ? kFiberOPerKm : kFiberCPerKm;
    if (x == 0) return return_path(f);
    double total = access_tail(f) + kCross;
    for (int i = 0; i < x; ++i) total += kSpanKm * f + kCross;
    total += access_tail(f);
    return total;
}

/// Reconfigurable mesh, one entangled arm over x backbone spans.
inline double mesh_entangled_arm(int x) {
    double total = kInject;
    for (int i = 0; i < x; ++i) total += kSpanKm * kFiberCPerKm + kCross;
    total += access_tail(kFiberCPerKm);
    return total;
}

/// Entanglement-only ring, arm from the head-end sources to access network
/// k (1-based position along the chain).
inline double ent_only_arm(int k) {
    double total = 0.0;
    for (int i = 1; i < k; ++i) total += kSpanKm * kFiberCPerKm + kSimplePass;
    total += kSpanKm * kFiberCPerKm + kSimpleDrop;
    total += access_tail(kFiberCPerKm);
    return total;
}

}  // namespace refchains
