#pragma once

#include <stdexcept>
#include <string>

namespace cyclebound {

// Every failure the library reports derives from Error. The kind() string is
// the stable name used in reports and CLI diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error("InvalidArgument", what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error("ParseError", std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column), message_(msg) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    int line_;
    int column_;
    std::string message_;
};

// critfind
class DepthLimitExceeded : public Error {
public:
    explicit DepthLimitExceeded(const std::string& what) : Error("DepthLimitExceeded", what) {}
};

class AmbiguousCluster : public Error {
public:
    explicit AmbiguousCluster(const std::string& what) : Error("AmbiguousCluster", what) {}
};

class ZeroOnCircle : public Error {
public:
    explicit ZeroOnCircle(const std::string& what) : Error("ZeroOnCircle", what) {}
};

class StepTooCoarse : public Error {
public:
    explicit StepTooCoarse(const std::string& what) : Error("StepTooCoarse", what) {}
};

// milnorfiber
class DeltaCollapse : public Error {
public:
    explicit DeltaCollapse(const std::string& what) : Error("DeltaCollapse", what) {}
};

class GridTooCoarse : public Error {
public:
    explicit GridTooCoarse(const std::string& what) : Error("GridTooCoarse", what) {}
};

class EtaTooLarge : public Error {
public:
    explicit EtaTooLarge(const std::string& what) : Error("EtaTooLarge", what) {}
};

// cycledetect
class NoReturn : public Error {
public:
    explicit NoReturn(const std::string& what) : Error("NoReturn", what) {}
};

class PointOnCycle : public Error {
public:
    explicit PointOnCycle(const std::string& what) : Error("PointOnCycle", what) {}
};

} // namespace cyclebound
