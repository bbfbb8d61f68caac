#pragma once

#include <stdexcept>
#include <string>

namespace tabsae {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingFile : Error { using Error::Error; };

struct MalformedRow : Error {
    MalformedRow(int line_no, const std::string& what)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    int line;
};

struct UnknownLabelColumn : Error { using Error::Error; };
struct SingleClass : Error { using Error::Error; };

struct ConstantFeature : Error {
    explicit ConstantFeature(int feature_index)
        : Error("feature " + std::to_string(feature_index) + " is constant"),
          index(feature_index) {}
    int index;
};

struct DimensionMismatch : Error { using Error::Error; };
struct BadFoldCount : Error { using Error::Error; };
struct BadSpec : Error { using Error::Error; };
struct NonFiniteObjective : Error { using Error::Error; };
struct NonFiniteLoss : Error { using Error::Error; };
struct BadK : Error { using Error::Error; };
struct DegenerateData : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct EmptyList : Error { using Error::Error; };
struct EmptyTable : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct BadConfig : Error { using Error::Error; };

} // namespace tabsae
