#ifndef DEGWAVE_JSON_WRITER_HPP
#define DEGWAVE_JSON_WRITER_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace degwave {
namespace jsonw {

// Deterministic JSON writer: object keys keep insertion order and every
// number is formatted with 12 significant digits, so identical inputs give
// byte-identical output. Non-finite values are encoded as strings ("inf",
// "-inf", "nan").
class Value {
public:
    enum class Kind { Null, Bool, Number, Int, String, Array, Object };

    Value() : kind_(Kind::Null) {}
    static Value boolean(bool b);
    static Value number(double x);
    static Value integer(long long i);
    static Value string(std::string s);
    static Value array();
    static Value object();

    Kind kind() const { return kind_; }

    void push_back(Value v);                     // array
    void set(const std::string& key, Value v);   // object

    std::string dump(int indent = 2) const;

private:
    Kind kind_;
    bool b_ = false;
    double num_ = 0.0;
    long long int_ = 0;
    std::string str_;
    std::vector<Value> arr_;
    std::vector<std::pair<std::string, Value>> obj_;

    void write(std::string& out, int indent, int depth) const;
};

std::string format_number(double x);  // %.12g with inf/nan as strings

} // namespace jsonw
} // namespace degwave

#endif
