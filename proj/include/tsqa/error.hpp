#pragma once

#include <stdexcept>
#include <string>

namespace tsqa {

// Broad failure classes; the CLI maps these onto exit codes.
enum class ErrorKind {
    usage,      // bad flags / bad arguments to an operation
    data,       // malformed files, invariant violations, unknown instruments
    tool,       // a grounding function rejected its inputs
    transport,  // backend unreachable or protocol failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline Error usage_error(std::string msg) { return Error(ErrorKind::usage, std::move(msg)); }
inline Error data_error(std::string msg) { return Error(ErrorKind::data, std::move(msg)); }
inline Error tool_error(std::string msg) { return Error(ErrorKind::tool, std::move(msg)); }
inline Error transport_error(std::string msg) { return Error(ErrorKind::transport, std::move(msg)); }

}  // namespace tsqa
