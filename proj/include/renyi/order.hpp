#pragma once

namespace renyi {

/// A Rényi order r > 0. r = 1 is the Shannon limit and has no conjugate.
class RenyiOrder {
public:
    explicit RenyiOrder(double r);

    static RenyiOrder shannon() { return RenyiOrder(1.0); }

    [[nodiscard]] double value() const noexcept { return r_; }
    [[nodiscard]] bool is_limit_one() const noexcept { return limit_one_; }

    /// r' = r / (r - 1); throws OrderError at the Shannon limit.
    [[nodiscard]] double conjugate() const;

private:
    double r_;
    bool limit_one_;
};

/// r' = r / (r - 1) for r > 0, r != 1.
[[nodiscard]] double conjugate(double r);

} // namespace renyi
