#include "cqed/text_format.hpp"

#include <cmath>
#include <cstdio>

namespace cqed {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string JsonWriter::str() const { return out_; }

void JsonWriter::comma_if_needed() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!first_in_scope_.empty()) {
        if (!first_in_scope_.back()) out_ += ',';
        first_in_scope_.back() = false;
    }
}

JsonWriter& JsonWriter::begin_object() {
    comma_if_needed();
    out_ += '{';
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    comma_if_needed();
    out_ += '[';
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    comma_if_needed();
    out_ += '"';
    out_ += json_escape(k);
    out_ += "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value_number(double v) {
    comma_if_needed();
    // JSON has no nan/inf tokens; emit them as strings to stay parseable.
    if (std::isnan(v) || std::isinf(v)) {
        out_ += '"';
        out_ += format_double(v);
        out_ += '"';
    } else {
        out_ += format_double(v);
    }
    return *this;
}

JsonWriter& JsonWriter::value_int(long long v) {
    comma_if_needed();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value_string(const std::string& s) {
    comma_if_needed();
    out_ += '"';
    out_ += json_escape(s);
    out_ += '"';
    return *this;
}

JsonWriter& JsonWriter::value_bool(bool b) {
    comma_if_needed();
    out_ += b ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value_null() {
    comma_if_needed();
    out_ += "null";
    return *this;
}

JsonWriter& JsonWriter::value_raw(const std::string& token) {
    comma_if_needed();
    out_ += token;
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, double v) {
    return key(k).value_number(v);
}

JsonWriter& JsonWriter::field(const std::string& k, const std::string& v) {
    return key(k).value_string(v);
}

JsonWriter& JsonWriter::field_int(const std::string& k, long long v) {
    return key(k).value_int(v);
}

JsonWriter& JsonWriter::field_bool(const std::string& k, bool v) {
    return key(k).value_bool(v);
}

JsonWriter& JsonWriter::field_null(const std::string& k) {
    return key(k).value_null();
}

JsonWriter& JsonWriter::field_complex(const std::string& k, Complex z) {
    key(k).begin_object();
    field("re", z.real());
    field("im", z.imag());
    field("abs", std::abs(z));
    return end_object();
}

}  // namespace cqed
