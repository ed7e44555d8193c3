#pragma once

#include <stdexcept>
#include <string>

namespace imab {

// Thrown when an argument lies outside an operation's domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Thrown for malformed input files. `where` carries a line:column or JSON path.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::string where)
        : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

}  // namespace imab
