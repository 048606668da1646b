// Small deterministic JSON emitter for verdict files: insertion-ordered keys,
// floats rendered with fixed 17-significant-digit formatting, exact rationals
// as "num/den" strings. Identical inputs give byte-identical output.
#pragma once

#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dbarlab/rational.hpp"

namespace dbarlab {

class JValue {
 public:
  enum class Kind { Null, Bool, Int, Float, String, Array, Object };

  JValue() : kind_(Kind::Null) {}

  static JValue boolean(bool v) {
    JValue j(Kind::Bool);
    j.bool_ = v;
    return j;
  }
  static JValue integer(long long v) {
    JValue j(Kind::Int);
    j.int_ = v;
    return j;
  }
  static JValue number(double v) {
    JValue j(Kind::Float);
    j.float_ = v;
    return j;
  }
  static JValue string(std::string v) {
    JValue j(Kind::String);
    j.str_ = std::move(v);
    return j;
  }
  static JValue rational(const Rational& r) { return string(rational_string(r)); }
  static JValue array() { return JValue(Kind::Array); }
  static JValue object() { return JValue(Kind::Object); }

  JValue& push(JValue v) {
    items_.push_back(std::move(v));
    return *this;
  }
  JValue& set(std::string key, JValue v) {
    keys_.push_back(std::move(key));
    items_.push_back(std::move(v));
    return *this;
  }
  JValue& set(std::string key, bool v) { return set(std::move(key), boolean(v)); }
  JValue& set(std::string key, long long v) { return set(std::move(key), integer(v)); }
  JValue& set(std::string key, std::size_t v) {
    return set(std::move(key), integer(static_cast<long long>(v)));
  }
  JValue& set(std::string key, int v) { return set(std::move(key), integer(v)); }
  JValue& set(std::string key, unsigned v) { return set(std::move(key), integer(v)); }
  JValue& set(std::string key, double v) { return set(std::move(key), number(v)); }
  JValue& set(std::string key, const char* v) { return set(std::move(key), string(v)); }
  JValue& set(std::string key, std::string v) { return set(std::move(key), string(std::move(v))); }
  JValue& set(std::string key, const Rational& v) { return set(std::move(key), rational(v)); }

  std::string dump(int indent = 2) const {
    std::string out;
    write(out, indent, 0);
    out.push_back('\n');
    return out;
  }

 private:
  explicit JValue(Kind k) : kind_(k) {}

  static std::string escape(const std::string& s) {
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
            out.push_back(c);
          }
      }
    }
    return out;
  }

  static std::string float_text(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  void write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (kind_) {
      case Kind::Null: out += "null"; break;
      case Kind::Bool: out += bool_ ? "true" : "false"; break;
      case Kind::Int: out += std::to_string(int_); break;
      case Kind::Float: out += float_text(float_); break;
      case Kind::String:
        out += '"';
        out += escape(str_);
        out += '"';
        break;
      case Kind::Array:
        if (items_.empty()) {
          out += "[]";
          break;
        }
        out += "[\n";
        for (std::size_t i = 0; i < items_.size(); ++i) {
          out += pad;
          items_[i].write(out, indent, depth + 1);
          if (i + 1 < items_.size()) out += ',';
          out += '\n';
        }
        out += close_pad + "]";
        break;
      case Kind::Object:
        if (items_.empty()) {
          out += "{}";
          break;
        }
        out += "{\n";
        for (std::size_t i = 0; i < items_.size(); ++i) {
          out += pad + '"' + escape(keys_[i]) + "\": ";
          items_[i].write(out, indent, depth + 1);
          if (i + 1 < items_.size()) out += ',';
          out += '\n';
        }
        out += close_pad + "}";
        break;
    }
  }

  Kind kind_;
  bool bool_ = false;
  long long int_ = 0;
  double float_ = 0.0;
  std::string str_;
  std::vector<std::string> keys_;
  std::vector<JValue> items_;
};

}  // namespace dbarlab
