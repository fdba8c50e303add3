#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semre {

/// Malformed pattern text. `offset` is the byte position of the problem.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// An oracle backend failed (spawn error, protocol violation, child exit...).
/// Never converted into a `false` answer.
class OracleError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad oracle configuration or an unbound query.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A match exceeded its deadline.
class TimeoutError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A reference evaluator refused an instance above its size guard.
class TooLargeError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace semre
