#pragma once

#include <stdexcept>
#include <string>

namespace qwork {

/// Base of every error raised by the library. `kind()` names the failed
/// contract so callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
  public:
    enum class Kind {
        InvalidState,
        UnsupportedShape,
        InvalidDistribution,
        InvalidUnitary,
        InvalidParameter,
        InvalidConfig,
        Parse,
    };

    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

  private:
    Kind kind_;
};

struct InvalidState : Error {
    explicit InvalidState(const std::string& w) : Error(Kind::InvalidState, w) {}
};
struct UnsupportedShape : Error {
    explicit UnsupportedShape(const std::string& w) : Error(Kind::UnsupportedShape, w) {}
};
struct InvalidDistribution : Error {
    explicit InvalidDistribution(const std::string& w) : Error(Kind::InvalidDistribution, w) {}
};
struct InvalidUnitary : Error {
    explicit InvalidUnitary(const std::string& w) : Error(Kind::InvalidUnitary, w) {}
};
struct InvalidParameter : Error {
    explicit InvalidParameter(const std::string& w) : Error(Kind::InvalidParameter, w) {}
};
struct InvalidConfig : Error {
    explicit InvalidConfig(const std::string& w) : Error(Kind::InvalidConfig, w) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& w) : Error(Kind::Parse, w) {}
};

}  // namespace qwork
