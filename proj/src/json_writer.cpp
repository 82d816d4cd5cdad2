#include "degwave/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace degwave {
namespace jsonw {

std::string format_number(double x) {
    if (std::isnan(x)) return "\"nan\"";
    if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Value Value::boolean(bool b) {
    Value v;
    v.kind_ = Kind::Bool;
    v.b_ = b;
    return v;
}

Value Value::number(double x) {
    Value v;
    v.kind_ = Kind::Number;
    v.num_ = x;
    return v;
}

Value Value::integer(long long i) {
    Value v;
    v.kind_ = Kind::Int;
    v.int_ = i;
    return v;
}

Value Value::string(std::string s) {
    Value v;
    v.kind_ = Kind::String;
    v.str_ = std::move(s);
    return v;
}

Value Value::array() {
    Value v;
    v.kind_ = Kind::Array;
    return v;
}

Value Value::object() {
    Value v;
    v.kind_ = Kind::Object;
    return v;
}

void Value::push_back(Value v) {
    if (kind_ != Kind::Array) throw std::logic_error("json: push_back on non-array");
    arr_.push_back(std::move(v));
}

void Value::set(const std::string& key, Value v) {
    if (kind_ != Kind::Object) throw std::logic_error("json: set on non-object");
    for (auto& kv : obj_) {
        if (kv.first == key) {
            kv.second = std::move(v);
            return;
        }
    }
    obj_.emplace_back(key, std::move(v));
}

namespace {

void escape_into(std::string& out, const std::string& s) {
    out += '"';
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
    out += '"';
}

void pad(std::string& out, int indent, int depth) {
    if (indent > 0) {
        out += '\n';
        out.append(static_cast<std::size_t>(indent) * depth, ' ');
    }
}

} // namespace

void Value::write(std::string& out, int indent, int depth) const {
    switch (kind_) {
        case Kind::Null: out += "null"; break;
        case Kind::Bool: out += b_ ? "true" : "false"; break;
        case Kind::Number: out += format_number(num_); break;
        case Kind::Int: out += std::to_string(int_); break;
        case Kind::String: escape_into(out, str_); break;
        case Kind::Array: {
            if (arr_.empty()) {
                out += "[]";
                break;
            }
            out += '[';
            for (std::size_t i = 0; i < arr_.size(); ++i) {
                if (i) out += ',';
                pad(out, indent, depth + 1);
                arr_[i].write(out, indent, depth + 1);
            }
            pad(out, indent, depth);
            out += ']';
            break;
        }
        case Kind::Object: {
            if (obj_.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            for (std::size_t i = 0; i < obj_.size(); ++i) {
                if (i) out += ',';
                pad(out, indent, depth + 1);
                escape_into(out, obj_[i].first);
                out += indent > 0 ? ": " : ":";
                obj_[i].second.write(out, indent, depth + 1);
            }
            pad(out, indent, depth);
            out += '}';
            break;
        }
    }
}

std::string Value::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

} // namespace jsonw
} // namespace degwave
