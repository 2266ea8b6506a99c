#pragma once

#include <stdexcept>
#include <string>

namespace colobench {

/// Base class for all toolkit errors. Everything derived from this is an
/// input/validation problem (CLI exit code 2); anything else escaping to
/// main is treated as an internal error (exit code 1).
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
   public:
    using Error::Error;
};

class FormatError : public Error {
   public:
    using Error::Error;
};

class RangeError : public Error {
   public:
    using Error::Error;
};

class SubmissionError : public Error {
   public:
    using Error::Error;
};

class MissingDataError : public Error {
   public:
    using Error::Error;
};

class ConsistencyError : public Error {
   public:
    using Error::Error;
};

class DegenerateScale : public Error {
   public:
    using Error::Error;
};

class NoValidPixels : public Error {
   public:
    using Error::Error;
};

class TooShort : public Error {
   public:
    using Error::Error;
};

class InvalidQuaternion : public Error {
   public:
    using Error::Error;
};

class GeometryError : public Error {
   public:
    using Error::Error;
};

class PlanError : public Error {
   public:
    using Error::Error;
};

}  // namespace colobench
