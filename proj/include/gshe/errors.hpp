#pragma once

#include <stdexcept>
#include <string>

namespace gshe {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define GSHE_DEFINE_ERROR(Name)                                          \
    struct Name : Error {                                                \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
    }

GSHE_DEFINE_ERROR(SingularMatrix);
GSHE_DEFINE_ERROR(RankDeficient);
GSHE_DEFINE_ERROR(DuplicateAbscissa);
GSHE_DEFINE_ERROR(DegenerateJet);
GSHE_DEFINE_ERROR(StepUnderflow);
GSHE_DEFINE_ERROR(ResonanceClosureFailure);
GSHE_DEFINE_ERROR(NearResonantSymbol);
GSHE_DEFINE_ERROR(NewtonDiverged);
GSHE_DEFINE_ERROR(NonincreasingWeight);
GSHE_DEFINE_ERROR(NormalizationMismatch);
GSHE_DEFINE_ERROR(NotSymplectic);
GSHE_DEFINE_ERROR(InsufficientSpan);
GSHE_DEFINE_ERROR(CacheFormat);

#undef GSHE_DEFINE_ERROR

} // namespace gshe
