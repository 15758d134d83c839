#ifndef COOPMIMO_ERRORS_HPP
#define COOPMIMO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coopmimo {

// Invalid scenario, scheme/relay pairing, or out-of-range parameter.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input length does not match the block/constellation framing.
class FramingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation (distance <= 0, negative variance).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A link whose received power and noise are both zero cannot be normalized.
class DegenerateLinkError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Both detection phases report zero SNR for a codeword.
class NoSignalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace coopmimo

#endif // COOPMIMO_ERRORS_HPP
