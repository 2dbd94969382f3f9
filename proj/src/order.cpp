#include "renyi/order.hpp"

#include <cmath>
#include <string>

#include "renyi/error.hpp"

namespace renyi {

RenyiOrder::RenyiOrder(double r) : r_(r), limit_one_(r == 1.0) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw OrderError("Renyi order must be finite and > 0, got " + std::to_string(r));
}

double RenyiOrder::conjugate() const {
    if (limit_one_) throw OrderError("conjugate exponent undefined at r = 1");
    return r_ / (r_ - 1.0);
}

double conjugate(double r) { return RenyiOrder(r).conjugate(); }

} // namespace renyi
