#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qmon {

/// Domain error for infeasible requests (bad channel, unroutable demand, ...).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Speed of light as nm*GHz, so wavelength_nm = kSpeedOfLight / frequency_ghz.
inline constexpr double kSpeedOfLight = 299792458.0;

/// Attenuation value held at 0.01 dB resolution.
///
/// All catalog values, node-action losses and path sums are multiples of
/// 0.01 dB, so integer centi-dB arithmetic keeps table reproduction exact
/// and makes equality tests meaningful.
class LossDb {
  public:
    constexpr LossDb() = default;

    static constexpr LossDb from_centidb(std::int64_t centidb) {
        LossDb l;
        l.centidb_ = centidb;
        return l;
    }

    static LossDb from_db(double db) { return from_centidb(std::llround(db * 100.0)); }

    constexpr std::int64_t centidb() const { return centidb_; }
    constexpr double db() const { return static_cast<double>(centidb_) / 100.0; }

    constexpr LossDb& operator+=(LossDb other) {
        centidb_ += other.centidb_;
        return *this;
    }
    friend constexpr LossDb operator+(LossDb a, LossDb b) { return from_centidb(a.centidb_ + b.centidb_); }
    friend constexpr LossDb operator-(LossDb a, LossDb b) { return from_centidb(a.centidb_ - b.centidb_); }
    friend constexpr LossDb operator*(LossDb a, std::int64_t n) { return from_centidb(a.centidb_ * n); }

    friend constexpr bool operator==(LossDb a, LossDb b) { return a.centidb_ == b.centidb_; }
    friend constexpr bool operator!=(LossDb a, LossDb b) { return a.centidb_ != b.centidb_; }
    friend constexpr bool operator<(LossDb a, LossDb b) { return a.centidb_ < b.centidb_; }
    friend constexpr bool operator<=(LossDb a, LossDb b) { return a.centidb_ <= b.centidb_; }
    friend constexpr bool operator>(LossDb a, LossDb b) { return a.centidb_ > b.centidb_; }
    friend constexpr bool operator>=(LossDb a, LossDb b) { return a.centidb_ >= b.centidb_; }

    /// Renders with the fewest decimals that lose nothing: "4", "4.8", "2.64".
    std::string str() const {
        std::int64_t v = centidb_;
        std::string sign;
        if (v < 0) {
            sign = "-";
            v = -v;
        }
        const std::int64_t whole = v / 100;
        const std::int64_t frac = v % 100;
        if (frac == 0) return sign + std::to_string(whole);
        if (frac % 10 == 0) return sign + std::to_string(whole) + "." + std::to_string(frac / 10);
        std::string f = std::to_string(frac);
        if (f.size() == 1) f = "0" + f;
        return sign + std::to_string(whole) + "." + f;
    }

  private:
    std::int64_t centidb_ = 0;
};

/// Fiber attenuation over a span: per-km rate applied to a metre-resolution
/// length, rounded to the nearest 0.01 dB.
inline LossDb span_loss(LossDb per_km, std::int64_t length_m) {
    const std::int64_t num = per_km.centidb() * length_m;
    const std::int64_t rounded = (num >= 0 ? num + 500 : num - 500) / 1000;
    return LossDb::from_centidb(rounded);
}

}  // namespace qmon
