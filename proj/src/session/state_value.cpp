#include "meditools/session/state_value.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace meditools::session {

namespace {

// Numbers are written as IEEE-754 bit patterns when JSON cannot carry them
// exactly (non-finite values, negative zero).
nlohmann::json number_to_json(double v)
{
    if (std::isfinite(v) && !(v == 0.0 && std::signbit(v)))
        return {{"t", "number"}, {"v", v}};
    return {{"t", "number"}, {"bits", std::bit_cast<std::uint64_t>(v)}};
}

} // namespace

bool operator==(const StateValue& a, const StateValue& b)
{
    if (a.value_.index() != b.value_.index())
        return false;
    if (a.is<double>())
        return std::bit_cast<std::uint64_t>(a.number()) == std::bit_cast<std::uint64_t>(b.number());
    return a.value_ == b.value_;
}

nlohmann::json to_json(const StateValue& value)
{
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return {{"t", "text"}, {"v", v}};
            } else if constexpr (std::is_same_v<T, double>) {
                return number_to_json(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return {{"t", "bool"}, {"v", v}};
            } else if constexpr (std::is_same_v<T, StateValue::List>) {
                nlohmann::json items = nlohmann::json::array();
                for (const auto& item : v)
                    items.push_back(to_json(item));
                return {{"t", "list"}, {"v", std::move(items)}};
            } else if constexpr (std::is_same_v<T, StateValue::Record>) {
                nlohmann::json fields = nlohmann::json::object();
                for (const auto& [key, item] : v)
                    fields[key] = to_json(item);
                return {{"t", "record"}, {"v", std::move(fields)}};
            } else {
                return {{"t", "binary"}, {"uri", v.uri}, {"media_type", v.media_type}};
            }
        },
        value.value());
}

StateValue from_json(const nlohmann::json& json)
{
    const std::string tag = json.at("t").get<std::string>();
    if (tag == "text")
        return StateValue(json.at("v").get<std::string>());
    if (tag == "number") {
        if (json.contains("bits"))
            return StateValue(std::bit_cast<double>(json.at("bits").get<std::uint64_t>()));
        return StateValue(json.at("v").get<double>());
    }
    if (tag == "bool")
        return StateValue(json.at("v").get<bool>());
    if (tag == "list") {
        StateValue::List items;
        for (const auto& item : json.at("v"))
            items.push_back(from_json(item));
        return StateValue(std::move(items));
    }
    if (tag == "record") {
        StateValue::Record fields;
        for (const auto& [key, item] : json.at("v").items())
            fields.emplace(key, from_json(item));
        return StateValue(std::move(fields));
    }
    if (tag == "binary")
        return StateValue(BinaryRef{json.at("uri").get<std::string>(), json.value("media_type", "")});
    throw std::invalid_argument("unknown state value tag: " + tag);
}

} // namespace meditools::session
