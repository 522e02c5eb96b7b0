#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace seizknn {

enum class BinaryLabel : uint8_t { NonSeizure = 0, Seizure = 1 };

inline const char* to_string(BinaryLabel l) {
    return l == BinaryLabel::Seizure ? "Seizure" : "NonSeizure";
}

// One fixed-length window of EEG samples in microvolts.
struct EegWindow {
    std::vector<double> samples;
    double sample_rate_hz = 178.0;
    int channel_id = 0;
    uint64_t timestamp_ms = 0;
};

struct LabeledWindow {
    EegWindow window;
    BinaryLabel binary_label = BinaryLabel::NonSeizure;
    int source_class = 5;  // original dataset class, 1..5
};

inline BinaryLabel label_from_class(int source_class) {
    return source_class == 1 ? BinaryLabel::Seizure : BinaryLabel::NonSeizure;
}

// Error hierarchy. Every named error condition in the library surfaces as a
// subclass so callers can map them to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : Error { using Error::Error; };   // bad parameters / specs
struct DataError : Error { using Error::Error; };    // bad input data / files

struct MissingFile : DataError { using DataError::DataError; };
struct MalformedRow : DataError {
    size_t row;
    MalformedRow(size_t row_, const std::string& reason)
        : DataError("row " + std::to_string(row_) + ": " + reason), row(row_) {}
};
struct UnknownClass : DataError {
    int value;
    explicit UnknownClass(int v)
        : DataError("unknown class " + std::to_string(v)), value(v) {}
};
struct InvalidSpec : UsageError { using UsageError::UsageError; };
struct WindowTooShort : DataError { using DataError::DataError; };
struct OutOfRange : DataError {
    size_t index;
    double value;
    OutOfRange(size_t i, double v)
        : DataError("sample " + std::to_string(i) + " = " + std::to_string(v) +
                    " exceeds representable range"),
          index(i), value(v) {}
};
struct DimensionMismatch : UsageError { using UsageError::UsageError; };
struct EmptyStore : UsageError { using UsageError::UsageError; };
struct EmptyNeighborSet : UsageError { using UsageError::UsageError; };
struct ShapeMismatch : UsageError { using UsageError::UsageError; };
struct NotTrained : UsageError { using UsageError::UsageError; };
struct Io : DataError { using DataError::DataError; };
struct CorruptSnapshot : DataError { using DataError::DataError; };
struct BadSync : DataError { using DataError::DataError; };
struct BadCrc : DataError { using DataError::DataError; };
struct ShortFrame : DataError { using DataError::DataError; };
struct InvalidParams : UsageError { using UsageError::UsageError; };
struct InsufficientClass : UsageError {
    InsufficientClass(BinaryLabel label, size_t have, size_t need)
        : UsageError(std::string("class ") + to_string(label) + " has " +
                     std::to_string(have) + " windows, need " + std::to_string(need)) {}
};

}  // namespace seizknn
