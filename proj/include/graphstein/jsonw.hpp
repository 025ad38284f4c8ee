#ifndef GRAPHSTEIN_JSONW_HPP
#define GRAPHSTEIN_JSONW_HPP

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphstein {

// Streaming JSON writer for the report formats. Key order follows insertion
// order and floating-point values are emitted with 17 significant digits, so
// equal inputs produce byte-identical documents.
class JsonWriter {
  public:
    JsonWriter& begin_object() {
        prefix();
        out_ += '{';
        stack_.push_back('o');
        first_.push_back(true);
        return *this;
    }
    JsonWriter& end_object() {
        pop('o');
        out_ += '}';
        return *this;
    }
    JsonWriter& begin_array() {
        prefix();
        out_ += '[';
        stack_.push_back('a');
        first_.push_back(true);
        return *this;
    }
    JsonWriter& end_array() {
        pop('a');
        out_ += ']';
        return *this;
    }
    JsonWriter& key(const std::string& k) {
        prefix();
        append_string(k);
        out_ += ':';
        pending_key_ = true;
        return *this;
    }
    JsonWriter& value(double v) {
        prefix();
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out_ += buf;
        return *this;
    }
    JsonWriter& value(int64_t v) {
        prefix();
        out_ += std::to_string(v);
        return *this;
    }
    JsonWriter& value(int v) { return value(static_cast<int64_t>(v)); }
    JsonWriter& value(uint64_t v) {
        prefix();
        out_ += std::to_string(v);
        return *this;
    }
    JsonWriter& value(bool v) {
        prefix();
        out_ += v ? "true" : "false";
        return *this;
    }
    JsonWriter& value(const std::string& v) {
        prefix();
        append_string(v);
        return *this;
    }
    JsonWriter& value(const char* v) { return value(std::string(v)); }

    const std::string& str() const {
        if (!stack_.empty()) throw std::logic_error("JsonWriter: unbalanced document");
        return out_;
    }

  private:
    void prefix() {
        if (pending_key_) {
            pending_key_ = false;
            return;
        }
        if (!first_.empty()) {
            if (!first_.back()) out_ += ',';
            first_.back() = false;
        }
    }
    void pop(char what) {
        if (stack_.empty() || stack_.back() != what) throw std::logic_error("JsonWriter: mismatched close");
        stack_.pop_back();
        first_.pop_back();
    }
    void append_string(const std::string& s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\t': out_ += "\\t"; break;
                case '\r': out_ += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out_ += buf;
                    } else {
                        out_ += c;
                    }
            }
        }
        out_ += '"';
    }

    std::string out_;
    std::vector<char> stack_;
    std::vector<bool> first_;
    bool pending_key_ = false;
};

}  // namespace graphstein

#endif
