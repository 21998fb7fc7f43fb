#pragma once

#include <stdexcept>
#include <string>

namespace fluidiqr {

/** Base class for all recoverable errors raised by this library. */
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/** A required CSV column is absent from the header. */
class MissingColumn : public Error {
  public:
    MissingColumn(const std::string& file, const std::string& column)
        : Error(file + ": missing required column '" + column + "'"), column(column) {}
    std::string column;
};

/** Consecutive timestamps are not exactly one hour apart. */
class NonHourlyGap : public Error {
  public:
    NonHourlyGap(const std::string& file, std::size_t row)
        : Error(file + ": row " + std::to_string(row) +
                ": timestamp is not one hour after the previous row"),
          row(row) {}
    std::size_t row;
};

/** A CSV field could not be parsed as its expected type. */
class UnparsableValue : public Error {
  public:
    UnparsableValue(const std::string& file, std::size_t row, const std::string& column)
        : Error(file + ": row " + std::to_string(row) + ", column '" + column +
                "': unparsable value"),
          row(row), column(column) {}
    std::size_t row;
    std::string column;
};

/** A count or amount that must be non-negative is negative. */
class NegativeCount : public Error {
  public:
    NegativeCount(const std::string& file, std::size_t row, const std::string& column)
        : Error(file + ": row " + std::to_string(row) + ", column '" + column +
                "': negative value"),
          row(row), column(column) {}
    std::size_t row;
    std::string column;
};

/** Not enough observations for the requested statistic. */
class TooFewPoints : public Error {
  public:
    explicit TooFewPoints(const std::string& msg) : Error(msg) {}
};

/** An operation received an empty series. */
class EmptyInput : public Error {
  public:
    explicit EmptyInput(const std::string& msg) : Error(msg) {}
};

/** The series is shorter than the decomposition requires. */
class SeriesTooShort : public Error {
  public:
    SeriesTooShort(std::size_t length, std::size_t required)
        : Error("series has " + std::to_string(length) + " points, need at least " +
                std::to_string(required)) {}
};

/** Two aligned vectors differ in length. */
class LengthMismatch : public Error {
  public:
    LengthMismatch(const std::string& what, std::size_t a, std::size_t b)
        : Error(what + ": lengths differ (" + std::to_string(a) + " vs " +
                std::to_string(b) + ")") {}
};

/** Seasonal periods must be given in strictly ascending order. */
class PeriodsNotAscending : public Error {
  public:
    PeriodsNotAscending() : Error("seasonal periods must be strictly ascending") {}
};

}  // namespace fluidiqr
