#include "imputeval/jsonout.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace imputeval {

JVal JVal::boolean(bool b) {
  JVal v;
  v.type_ = Type::Bool;
  v.bool_ = b;
  return v;
}

JVal JVal::integer(long long i) {
  JVal v;
  v.type_ = Type::Int;
  v.int_ = i;
  return v;
}

JVal JVal::real(double r) {
  JVal v;
  v.type_ = Type::Real;
  v.real_ = r;
  return v;
}

JVal JVal::str(std::string s) {
  JVal v;
  v.type_ = Type::Str;
  v.str_ = std::move(s);
  return v;
}

JVal JVal::array() {
  JVal v;
  v.type_ = Type::Arr;
  return v;
}

JVal JVal::object() {
  JVal v;
  v.type_ = Type::Obj;
  return v;
}

void JVal::push(JVal v) {
  if (type_ != Type::Arr) throw std::logic_error("JVal::push on non-array");
  arr_.push_back(std::move(v));
}

void JVal::set(const std::string& key, JVal v) {
  if (type_ != Type::Obj) throw std::logic_error("JVal::set on non-object");
  obj_[key] = std::move(v);
}

namespace {

void write_escaped(std::ostream& out, const std::string& s) {
  out << '"';
  for (char c : s) {
    switch (c) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\n': out << "\\n"; break;
      case '\r': out << "\\r"; break;
      case '\t': out << "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out << buf;
        } else {
          out << c;
        }
    }
  }
  out << '"';
}

}  // namespace

void JVal::write(std::ostream& out) const {
  switch (type_) {
    case Type::Null:
      out << "null";
      break;
    case Type::Bool:
      out << (bool_ ? "true" : "false");
      break;
    case Type::Int:
      out << int_;
      break;
    case Type::Real: {
      if (!std::isfinite(real_)) {
        out << "null";
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", real_);
      out << buf;
      break;
    }
    case Type::Str:
      write_escaped(out, str_);
      break;
    case Type::Arr: {
      out << '[';
      bool first = true;
      for (const auto& v : arr_) {
        if (!first) out << ',';
        first = false;
        v.write(out);
      }
      out << ']';
      break;
    }
    case Type::Obj: {
      out << '{';
      bool first = true;
      for (const auto& [k, v] : obj_) {
        if (!first) out << ',';
        first = false;
        write_escaped(out, k);
        out << ':';
        v.write(out);
      }
      out << '}';
      break;
    }
  }
}

std::string JVal::dump() const {
  std::ostringstream ss;
  write(ss);
  return ss.str();
}

}  // namespace imputeval
