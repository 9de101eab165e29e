#include "seqbell/cli/json_writer.h"

#include <cmath>
#include <cstdio>

namespace seqbell::cli {

std::string json_escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"':
                out += "\\\"";
                break;
            case '\\':
                out += "\\\\";
                break;
            case '\n':
                out += "\\n";
                break;
            case '\t':
                out += "\\t";
                break;
            case '\r':
                out += "\\r";
                break;
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

void JsonWriter::newline() {
    out_ += '\n';
    out_.append(2 * counts_.size(), ' ');
}

void JsonWriter::before_value() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (!counts_.empty()) {
        if (counts_.back()++ > 0) out_ += ',';
        newline();
    }
}

JsonWriter &JsonWriter::begin_object() {
    before_value();
    out_ += '{';
    counts_.push_back(0);
    return *this;
}

JsonWriter &JsonWriter::end_object() {
    const bool empty = counts_.back() == 0;
    counts_.pop_back();
    if (!empty) newline();
    out_ += '}';
    return *this;
}

JsonWriter &JsonWriter::begin_array() {
    before_value();
    out_ += '[';
    counts_.push_back(0);
    return *this;
}

JsonWriter &JsonWriter::end_array() {
    const bool empty = counts_.back() == 0;
    counts_.pop_back();
    if (!empty) newline();
    out_ += ']';
    return *this;
}

JsonWriter &JsonWriter::key(const std::string &k) {
    before_value();
    out_ += '"' + json_escape(k) + "\": ";
    after_key_ = true;
    return *this;
}

JsonWriter &JsonWriter::value(double v) {
    if (!std::isfinite(v)) return null();
    before_value();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out_ += buf;
    return *this;
}

JsonWriter &JsonWriter::value(std::int64_t v) {
    before_value();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter &JsonWriter::value(std::uint64_t v) {
    before_value();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter &JsonWriter::value(bool v) {
    before_value();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter &JsonWriter::value(const std::string &v) {
    before_value();
    out_ += '"' + json_escape(v) + '"';
    return *this;
}

JsonWriter &JsonWriter::null() {
    before_value();
    out_ += "null";
    return *this;
}

}  // namespace seqbell::cli
