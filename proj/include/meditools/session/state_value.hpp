#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace meditools::session {

/// Reference to binary content held elsewhere (an image path, an upload id).
struct BinaryRef {
    std::string uri;
    std::string media_type;

    bool operator==(const BinaryRef&) const = default;
};

/// Tagged datum stored per session key: text, number, boolean, list,
/// record or binary reference. Serialization through to_json/from_json is
/// lossless, including non-finite numbers and -0.0.
class StateValue {
public:
    using List = std::vector<StateValue>;
    using Record = std::map<std::string, StateValue>;
    using Variant = std::variant<std::string, double, bool, List, Record, BinaryRef>;

    StateValue() : value_(std::string{}) {}
    StateValue(std::string text) : value_(std::move(text)) {}
    StateValue(const char* text) : value_(std::string(text)) {}
    StateValue(double number) : value_(number) {}
    StateValue(int number) : value_(static_cast<double>(number)) {}
    StateValue(bool flag) : value_(flag) {}
    StateValue(List list) : value_(std::move(list)) {}
    StateValue(Record record) : value_(std::move(record)) {}
    StateValue(BinaryRef ref) : value_(std::move(ref)) {}

    const Variant& value() const { return value_; }

    template <typename T>
    bool is() const
    {
        return std::holds_alternative<T>(value_);
    }

    template <typename T>
    const T& as() const
    {
        return std::get<T>(value_);
    }

    const std::string& text() const { return as<std::string>(); }
    double number() const { return as<double>(); }
    bool flag() const { return as<bool>(); }
    const List& list() const { return as<List>(); }
    const Record& record() const { return as<Record>(); }

    /// Field of a record value; throws std::out_of_range when absent.
    const StateValue& at(const std::string& field) const { return record().at(field); }

    /// Bitwise equality for numbers, so NaN equals itself and 0.0 != -0.0.
    friend bool operator==(const StateValue& a, const StateValue& b);

private:
    Variant value_;
};

nlohmann::json to_json(const StateValue& value);
StateValue from_json(const nlohmann::json& json);

} // namespace meditools::session
