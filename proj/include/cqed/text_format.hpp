#pragma once

// Deterministic text output: every floating-point value is printed with 17
// significant digits in scientific notation, so identical inputs always
// produce byte-identical CSV/JSON.

#include <string>
#include <vector>

#include "cqed/common.hpp"

namespace cqed {

// "%.16e" — 17 significant digits, scientific.
std::string format_double(double v);

// Minimal JSON writer with insertion-ordered keys.  Values are pre-formatted
// by the callers through format_double, keeping the byte-determinism contract
// in one place.
class JsonWriter {
  public:
    std::string str() const;

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value_number(double v);
    JsonWriter& value_int(long long v);
    JsonWriter& value_string(const std::string& s);
    JsonWriter& value_bool(bool b);
    JsonWriter& value_null();
    JsonWriter& value_raw(const std::string& token);

    // key + value in one call
    JsonWriter& field(const std::string& k, double v);
    JsonWriter& field(const std::string& k, const std::string& v);
    JsonWriter& field_int(const std::string& k, long long v);
    JsonWriter& field_bool(const std::string& k, bool v);
    JsonWriter& field_null(const std::string& k);
    JsonWriter& field_complex(const std::string& k, Complex z);  // {re, im, abs}

  private:
    void comma_if_needed();
    std::string out_;
    std::vector<bool> first_in_scope_;
    bool pending_key_ = false;
};

std::string json_escape(const std::string& s);

}  // namespace cqed
