#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace stepanov {

// Minimal ordered JSON document builder. Exists because reports must be
// byte-stable with every float printed at 17 significant digits, which the
// usual serializers do not guarantee.
class Json {
  public:
    static Json null();
    static Json boolean(bool v);
    static Json integer(long long v);
    static Json real(double v);
    static Json str(std::string v);
    static Json array();
    static Json object();
    static Json reals(const Eigen::VectorXd& v);

    void push(Json v);                        // array element
    Json& set(const std::string& k, Json v);  // object field, insertion order

    std::string dump(int indent = 2) const;

  private:
    enum class Kind { Null, Bool, Int, Real, Str, Arr, Obj };
    Kind kind_ = Kind::Null;
    bool b_ = false;
    long long i_ = 0;
    double d_ = 0.0;
    std::string s_;
    std::vector<Json> items_;
    std::vector<std::pair<std::string, Json>> fields_;
    void write(std::string& out, int indent, int depth) const;
};

// %.17g
std::string format_real(double v);

} // namespace stepanov
