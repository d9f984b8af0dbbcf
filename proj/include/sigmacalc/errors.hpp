#pragma once

#include <stdexcept>
#include <string>

namespace sigmacalc {

// Argument outside the domain of a function (pole, x <= 0, duplicated nodes).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class InvalidParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnknownFunctionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace sigmacalc
