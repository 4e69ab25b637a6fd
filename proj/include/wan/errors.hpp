#pragma once

#include <stdexcept>
#include <string>

namespace wan {

// Base class for every error raised by the library. `code()` is a stable
// machine-readable tag; the CLI serializes it into its error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define WAN_DEFINE_ERROR(Name, tag)                                   \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& message)                     \
            : Error(tag, message) {}                                  \
    }

WAN_DEFINE_ERROR(IoError, "io");
WAN_DEFINE_ERROR(EncodingError, "encoding");
WAN_DEFINE_ERROR(ParseError, "parse");
WAN_DEFINE_ERROR(DuplicateIdError, "duplicate_id");
WAN_DEFINE_ERROR(SegmentationError, "segmentation");
WAN_DEFINE_ERROR(EmptyStreamError, "empty_stream");
WAN_DEFINE_ERROR(VocabularyExhaustedError, "vocabulary_exhausted");
WAN_DEFINE_ERROR(DisconnectedError, "disconnected");
WAN_DEFINE_ERROR(InsufficientTailError, "insufficient_tail");
WAN_DEFINE_ERROR(TooSmallVocabularyError, "too_small_vocabulary");
WAN_DEFINE_ERROR(PoleError, "pole");
WAN_DEFINE_ERROR(FitDivergedError, "fit_diverged");
WAN_DEFINE_ERROR(SaturationError, "saturation");
WAN_DEFINE_ERROR(EmptyGroupError, "empty_group");
WAN_DEFINE_ERROR(ConfigError, "config");

#undef WAN_DEFINE_ERROR

} // namespace wan
