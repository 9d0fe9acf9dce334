#pragma once

#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

namespace imputeval {

// Minimal JSON value for deterministic emission: object keys are sorted
// (std::map), reals are written with 17 significant digits, NaN becomes null.
// Parsing is delegated to nlohmann/json elsewhere; this type only writes.
class JVal {
 public:
  enum class Type { Null, Bool, Int, Real, Str, Arr, Obj };

  JVal() : type_(Type::Null) {}

  static JVal null() { return JVal(); }
  static JVal boolean(bool b);
  static JVal integer(long long v);
  static JVal real(double v);
  static JVal str(std::string s);
  static JVal array();
  static JVal object();

  void push(JVal v);                       // array only
  void set(const std::string& key, JVal v);  // object only

  void write(std::ostream& out) const;
  std::string dump() const;

 private:
  Type type_;
  bool bool_ = false;
  long long int_ = 0;
  double real_ = 0.0;
  std::string str_;
  std::vector<JVal> arr_;
  std::map<std::string, JVal> obj_;
};

}  // namespace imputeval
