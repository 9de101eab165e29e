#ifndef SEQBELL_CLI_JSON_WRITER_H
#define SEQBELL_CLI_JSON_WRITER_H

#include <cstdint>
#include <string>
#include <vector>

namespace seqbell::cli {

/// Streaming JSON emitter. Keys appear in call order; doubles use 17
/// significant digits. Non-finite doubles are written as null.
class JsonWriter {
  public:
    JsonWriter &begin_object();
    JsonWriter &end_object();
    JsonWriter &begin_array();
    JsonWriter &end_array();
    JsonWriter &key(const std::string &k);

    JsonWriter &value(double v);
    JsonWriter &value(std::int64_t v);
    JsonWriter &value(std::uint64_t v);
    JsonWriter &value(int v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter &value(bool v);
    JsonWriter &value(const std::string &v);
    JsonWriter &value(const char *v) { return value(std::string(v)); }
    JsonWriter &null();

    /// Finished document with a trailing newline.
    std::string str() const { return out_ + "\n"; }

  private:
    void before_value();
    void newline();

    std::string out_;
    // Per open container: number of elements written so far.
    std::vector<int> counts_;
    bool after_key_ = false;
};

std::string json_escape(const std::string &s);

}  // namespace seqbell::cli

#endif
