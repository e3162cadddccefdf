#pragma once

#include <cmath>
#include <limits>
#include <ostream>

namespace dualprox {

/// Scalar on (-inf, +inf]. Addition saturates at +inf and never produces NaN,
/// which is what extended-real-valued objectives (indicators) need.
class ExtendedReal {
public:
    constexpr ExtendedReal() = default;
    constexpr ExtendedReal(double v) : value_(v), finite_(true) {}  // NOLINT(implicit)

    static constexpr ExtendedReal infinity() {
        ExtendedReal r;
        r.finite_ = false;
        r.value_ = std::numeric_limits<double>::infinity();
        return r;
    }

    [[nodiscard]] constexpr bool is_finite() const { return finite_; }
    [[nodiscard]] constexpr double value() const { return value_; }

    friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
        if (!a.finite_ || !b.finite_) return infinity();
        return ExtendedReal(a.value_ + b.value_);
    }
    friend constexpr ExtendedReal operator+(ExtendedReal a, double b) { return a + ExtendedReal(b); }
    friend constexpr ExtendedReal operator+(double a, ExtendedReal b) { return ExtendedReal(a) + b; }
    // Subtracting a finite quantity keeps +inf at +inf.
    friend constexpr ExtendedReal operator-(ExtendedReal a, double b) { return a + ExtendedReal(-b); }
    constexpr ExtendedReal& operator+=(ExtendedReal o) { return *this = *this + o; }

    friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
        if (!a.finite_ || !b.finite_) return a.finite_ == b.finite_;
        return a.value_ == b.value_;
    }
    friend constexpr bool operator<=(ExtendedReal a, ExtendedReal b) {
        if (!b.finite_) return true;
        if (!a.finite_) return false;
        return a.value_ <= b.value_;
    }
    friend constexpr bool operator<(ExtendedReal a, ExtendedReal b) {
        if (!a.finite_) return false;
        if (!b.finite_) return true;
        return a.value_ < b.value_;
    }
    friend constexpr bool operator>=(ExtendedReal a, ExtendedReal b) { return b <= a; }
    friend constexpr bool operator>(ExtendedReal a, ExtendedReal b) { return b < a; }

    friend std::ostream& operator<<(std::ostream& os, ExtendedReal x) {
        if (!x.finite_) return os << "inf";
        return os << x.value_;
    }

private:
    double value_ = 0.0;
    bool finite_ = true;
};

}  // namespace dualprox
