#pragma once

#include <stdexcept>
#include <string>

namespace drinf {

// Base for every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Sample covariance (or one of its diagonal entries) is numerically singular.
class SingularCovariance : public Error {
  public:
    using Error::Error;
};

// Argument outside the mathematical domain of a function (e.g. p outside (0,1)).
class DomainError : public Error {
  public:
    using Error::Error;
};

class BadSize : public Error {
  public:
    using Error::Error;
};

class BadConfig : public Error {
  public:
    using Error::Error;
};

class RankDeficient : public Error {
  public:
    using Error::Error;
};

class EmptyCell : public Error {
  public:
    using Error::Error;
};

class DegenerateSample : public Error {
  public:
    using Error::Error;
};

class BadSpec : public Error {
  public:
    using Error::Error;
};

// Malformed input file (CSV, edge list).
class ParseError : public Error {
  public:
    using Error::Error;
};

}  // namespace drinf
