#include "zetacrit/precision.hpp"

#include <cstdlib>

namespace zetacrit {

Real Real::from_string(const std::string& s, mpfr_prec_t prec) {
    Real r(prec);
    if (s.empty() || mpfr_set_str(r.raw(), s.c_str(), 10, MPFR_RNDN) != 0)
        throw UsageError("unparseable numeric literal '" + s + "'");
    return r;
}

std::string Real::str(size_t digits) const {
    if (digits == 0) digits = 1;
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", static_cast<int>(digits - 1), v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

} // namespace zetacrit
