#include "stepanov/report.hpp"

#include <cstdio>

namespace stepanov {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Json Json::null() { return Json(); }

Json Json::boolean(bool v) {
    Json j;
    j.kind_ = Kind::Bool;
    j.b_ = v;
    return j;
}

Json Json::integer(long long v) {
    Json j;
    j.kind_ = Kind::Int;
    j.i_ = v;
    return j;
}

Json Json::real(double v) {
    Json j;
    j.kind_ = Kind::Real;
    j.d_ = v;
    return j;
}

Json Json::str(std::string v) {
    Json j;
    j.kind_ = Kind::Str;
    j.s_ = std::move(v);
    return j;
}

Json Json::array() {
    Json j;
    j.kind_ = Kind::Arr;
    return j;
}

Json Json::object() {
    Json j;
    j.kind_ = Kind::Obj;
    return j;
}

Json Json::reals(const Eigen::VectorXd& v) {
    Json j = array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push(real(v(i)));
    return j;
}

void Json::push(Json v) { items_.push_back(std::move(v)); }

Json& Json::set(const std::string& k, Json v) {
    fields_.emplace_back(k, std::move(v));
    return *this;
}

namespace {

void escape(const std::string& s, std::string& out) {
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
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void newline(std::string& out, int indent, int depth) {
    out += '\n';
    out.append(static_cast<std::size_t>(indent * depth), ' ');
}

} // namespace

void Json::write(std::string& out, int indent, int depth) const {
    switch (kind_) {
        case Kind::Null: out += "null"; break;
        case Kind::Bool: out += b_ ? "true" : "false"; break;
        case Kind::Int: out += std::to_string(i_); break;
        case Kind::Real: out += format_real(d_); break;
        case Kind::Str: escape(s_, out); break;
        case Kind::Arr: {
            if (items_.empty()) {
                out += "[]";
                break;
            }
            out += '[';
            for (std::size_t i = 0; i < items_.size(); ++i) {
                if (i) out += ',';
                newline(out, indent, depth + 1);
                items_[i].write(out, indent, depth + 1);
            }
            newline(out, indent, depth);
            out += ']';
            break;
        }
        case Kind::Obj: {
            if (fields_.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            for (std::size_t i = 0; i < fields_.size(); ++i) {
                if (i) out += ',';
                newline(out, indent, depth + 1);
                escape(fields_[i].first, out);
                out += ": ";
                fields_[i].second.write(out, indent, depth + 1);
            }
            newline(out, indent, depth);
            out += '}';
            break;
        }
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

} // namespace stepanov
