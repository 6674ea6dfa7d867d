#pragma once

#include <stdexcept>
#include <string>

namespace okb {

// Malformed input: bad rationals, wrong dimensions, empty families.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Well-formed input outside an operation's domain (degenerate bodies,
// m out of range, k outside the levels of a model, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace okb
