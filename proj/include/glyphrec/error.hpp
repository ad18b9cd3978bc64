#pragma once

#include <stdexcept>
#include <string>

namespace glyphrec {

/// Base class for all library errors. `name()` is the stable identifier
/// that the CLI prints and callers can match on.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(name + ": " + message), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

struct NoForeground : Error {
    explicit NoForeground(const std::string& message) : Error("NoForeground", message) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& message) : Error("DimensionMismatch", message) {}
};

struct NonFiniteLoss : Error {
    explicit NonFiniteLoss(const std::string& message) : Error("NonFiniteLoss", message) {}
};

struct NonPositiveAccuracy : Error {
    explicit NonPositiveAccuracy(const std::string& message) : Error("NonPositiveAccuracy", message) {}
};

struct BadK : Error {
    explicit BadK(const std::string& message) : Error("BadK", message) {}
};

struct EmptyDataset : Error {
    explicit EmptyDataset(const std::string& message) : Error("EmptyDataset", message) {}
};

struct UnreadableImage : Error {
    explicit UnreadableImage(const std::string& message) : Error("UnreadableImage", message) {}
};

struct TooFewSamples : Error {
    explicit TooFewSamples(const std::string& message) : Error("TooFewSamples", message) {}
};

struct EmptyTrainingSet : Error {
    explicit EmptyTrainingSet(const std::string& message) : Error("EmptyTrainingSet", message) {}
};

}  // namespace glyphrec
