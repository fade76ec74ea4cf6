#pragma once

#include <stdexcept>
#include <string>

namespace latentpack {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument, precondition violation.
struct ParamError : Error {
    explicit ParamError(const std::string& msg) : Error(msg) {}
};

// Instance too large for an exhaustive oracle.
struct CapacityError : Error {
    explicit CapacityError(const std::string& msg) : Error(msg) {}
};

// Decoder errors; kept distinct so callers can tell them apart.
struct CorruptStreamError : Error {
    explicit CorruptStreamError(const std::string& msg) : Error(msg) {}
};

struct TruncatedStreamError : CorruptStreamError {
    explicit TruncatedStreamError(const std::string& msg) : CorruptStreamError(msg) {}
};

struct PointerRangeError : CorruptStreamError {
    explicit PointerRangeError(const std::string& msg) : CorruptStreamError(msg) {}
};

// Container framing: bad magic, segment length mismatch.
struct FramingError : Error {
    explicit FramingError(const std::string& msg) : Error(msg) {}
};

struct UnsupportedVersionError : FramingError {
    explicit UnsupportedVersionError(const std::string& msg) : FramingError(msg) {}
};

struct IngestError : Error {
    explicit IngestError(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace latentpack
