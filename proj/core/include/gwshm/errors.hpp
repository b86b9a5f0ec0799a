#pragma once

#include <stdexcept>
#include <string>

namespace gwshm {

// Base of every error this library throws. `category()` is a stable,
// machine-parseable tag the CLI prints as its error prefix.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(category + ": " + message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

#define GWSHM_DEFINE_ERROR(ClassName, tag)                                  \
    class ClassName : public Error {                                        \
    public:                                                                 \
        explicit ClassName(const std::string& message) : Error(tag, message) {} \
    }

GWSHM_DEFINE_ERROR(InvalidArgument, "invalid-argument");
GWSHM_DEFINE_ERROR(DegenerateInput, "degenerate-input");
GWSHM_DEFINE_ERROR(DimensionMismatch, "dimension-mismatch");
GWSHM_DEFINE_ERROR(TooFewSamples, "too-few-samples");
GWSHM_DEFINE_ERROR(EmptyDataset, "empty-dataset");
GWSHM_DEFINE_ERROR(MissingBaseline, "missing-baseline");
GWSHM_DEFINE_ERROR(NoBaselineRows, "no-baseline-rows");
GWSHM_DEFINE_ERROR(SchemaMismatch, "schema-mismatch");
GWSHM_DEFINE_ERROR(IoError, "io-error");
GWSHM_DEFINE_ERROR(ConfigError, "config-error");

// Edge model image loading failures. Kept as a distinct branch so callers
// can map any image problem to one exit code.
class EdgeImageError : public Error {
public:
    using Error::Error;
};

#define GWSHM_DEFINE_EDGE_ERROR(ClassName, tag)                             \
    class ClassName : public EdgeImageError {                               \
    public:                                                                 \
        explicit ClassName(const std::string& message)                      \
            : EdgeImageError(tag, message) {}                               \
    }

GWSHM_DEFINE_EDGE_ERROR(BadMagic, "bad-magic");
GWSHM_DEFINE_EDGE_ERROR(BadVersion, "bad-version");
GWSHM_DEFINE_EDGE_ERROR(BadCrc, "bad-crc");
GWSHM_DEFINE_EDGE_ERROR(InconsistentDimensions, "inconsistent-dimensions");

#undef GWSHM_DEFINE_ERROR
#undef GWSHM_DEFINE_EDGE_ERROR

}  // namespace gwshm
