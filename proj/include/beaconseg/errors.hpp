#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace beaconseg {

// Base of every data error raised by the library. The CLI maps these to
// exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonFiniteTime : public Error {
public:
    using Error::Error;
};

class TimeOutOfWindow : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class NonPositivePeriod : public Error {
public:
    using Error::Error;
};

class EmptySample : public Error {
public:
    using Error::Error;
};

// Mean direction is undefined because the resultant length vanished.
class DegenerateMean : public Error {
public:
    using Error::Error;
};

class DegenerateBinning : public Error {
public:
    using Error::Error;
};

class TooFewEvents : public Error {
public:
    using Error::Error;
};

class EmptySegment : public Error {
public:
    using Error::Error;
};

class NoEvents : public Error {
public:
    using Error::Error;
};

class MalformedLine : public Error {
public:
    MalformedLine(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), m_Line{line} {}

    std::size_t line() const { return m_Line; }

private:
    std::size_t m_Line;
};

} // namespace beaconseg
