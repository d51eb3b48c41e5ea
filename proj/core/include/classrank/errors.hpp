#ifndef CLASSRANK_ERRORS_HPP
#define CLASSRANK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace classrank {

/// An input violated an operation's contract (CLI exit code 2).
class contract_error : public std::invalid_argument {
public:
    explicit contract_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A configured resource bound was exceeded (CLI exit code 3).
class resource_limit_error : public std::runtime_error {
public:
    explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

/// An exact algebraic identity failed to hold. This never indicates bad
/// input; it indicates a bug in the arithmetic (CLI exit code 4).
class internal_inconsistency_error : public std::logic_error {
public:
    explicit internal_inconsistency_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace classrank

#endif
