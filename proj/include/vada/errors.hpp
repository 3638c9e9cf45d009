#pragma once

#include <stdexcept>
#include <string>

namespace vada {

enum class ErrorKind { usage, data, size, domain };

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Malformed or invalid input data (bad CSV cells, degenerate groups, schema mismatch).
struct DataError : Error
{
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

// Problem too large for an exact computation.
struct SizeError : Error
{
    explicit SizeError(const std::string& what) : Error(ErrorKind::size, what) {}
};

// Argument outside the domain of a mathematical function or invalid configuration.
struct DomainError : Error
{
    explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

} // namespace vada
