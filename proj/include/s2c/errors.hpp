#pragma once

#include <stdexcept>

namespace s2c {

/// Base class for all recoverable pipeline errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Key-value text (calibration, config, scene) could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A calibration bundle violates one of its structural invariants.
class InvalidCalibrationError : public Error {
public:
    using Error::Error;
};

/// Raw scan byte stream is not a whole number of point records.
class MalformedScanError : public Error {
public:
    using Error::Error;
};

/// An operation that requires data received an empty input.
class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// Training was requested with samples of a single class only.
class DegenerateTrainingError : public Error {
public:
    using Error::Error;
};

/// A loss or metric was evaluated over a mask with zero valid pixels.
class EmptyMaskError : public Error {
public:
    using Error::Error;
};

/// A value lies outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Image dimensions do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Reports produced under incompatible evaluation settings were mixed.
class ProtocolError : public Error {
public:
    using Error::Error;
};

/// A depth value exceeds what the file codec can represent.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A file exists but is not in the expected container format.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level read or write failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace s2c
