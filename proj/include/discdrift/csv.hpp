#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace discdrift::csv {

/// Shortest round-trip-safe rendering: 17 significant digits.
inline std::string format_number(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value,
                                         std::chars_format::general, 17);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, end);
}

inline std::string format_number(std::size_t value) { return std::to_string(value); }
inline std::string format_number(int value) { return std::to_string(value); }

inline std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// RFC 4180 writer with LF line endings.
class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) out_ << ',';
            out_ << quote(names[i]);
        }
        out_ << '\n';
    }

    template <class... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((out_ << (first ? "" : ",") << render(fields), first = false), ...);
        out_ << '\n';
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

private:
    static std::string render(const std::string& s) { return quote(s); }
    static std::string render(const char* s) { return quote(s); }
    static std::string render(std::string_view s) { return quote(s); }
    template <class T>
    static std::string render(const T& value) {
        return format_number(value);
    }

    std::ostream& out_;
};

} // namespace discdrift::csv
