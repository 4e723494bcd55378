#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace zetacrit {

// All structured failures derive from Error and carry a stable machine-readable
// kind string alongside the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define ZETACRIT_DEFINE_ERROR(ClassName, kind_string)                  \
    class ClassName : public Error {                                   \
    public:                                                            \
        explicit ClassName(const std::string& msg)                     \
            : Error(kind_string, msg) {}                               \
    }

ZETACRIT_DEFINE_ERROR(PoleAtOne, "pole-at-one");
ZETACRIT_DEFINE_ERROR(EtaFactorZero, "eta-factor-zero");
ZETACRIT_DEFINE_ERROR(PoleAtNonpositiveInteger, "pole-at-nonpositive-integer");
ZETACRIT_DEFINE_ERROR(PrecisionEscalationExhausted, "precision-escalation-exhausted");
ZETACRIT_DEFINE_ERROR(InternalMismatch, "internal-mismatch");
ZETACRIT_DEFINE_ERROR(UnknownSeriesName, "unknown-series-name");
ZETACRIT_DEFINE_ERROR(QuadratureNonconvergence, "quadrature-nonconvergence");
ZETACRIT_DEFINE_ERROR(NonconvergenceAtMaxLevels, "nonconvergence-at-max-levels");
ZETACRIT_DEFINE_ERROR(PoleArgument, "pole-argument");
ZETACRIT_DEFINE_ERROR(MethodDisagreement, "method-disagreement");
ZETACRIT_DEFINE_ERROR(EtaZero, "eta-zero");
ZETACRIT_DEFINE_ERROR(U1Zero, "u1-zero");
ZETACRIT_DEFINE_ERROR(MissingS, "missing-s");
ZETACRIT_DEFINE_ERROR(IoError, "io-error");
ZETACRIT_DEFINE_ERROR(UsageError, "usage-error");

#undef ZETACRIT_DEFINE_ERROR

} // namespace zetacrit
