#include "finsler/json_out.hpp"

#include <cmath>
#include <cstdio>

namespace finsler {

std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

void JVal::emit(std::string& out, int indent, int depth) const {
    auto pad = [&](int d) {
        if (indent >= 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent) * d, ' ');
        }
    };
    switch (type_) {
    case Type::Null: out += "null"; break;
    case Type::Bool: out += bool_ ? "true" : "false"; break;
    case Type::Int: out += std::to_string(int_); break;
    case Type::Double: out += format_double(dbl_); break;
    case Type::String:
        out += '"';
        out += json_escape(str_);
        out += '"';
        break;
    case Type::Array:
        out += '[';
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (i) out += indent >= 0 ? ", " : ",";
            items_[i].emit(out, -1, depth + 1); // arrays stay on one line
        }
        out += ']';
        break;
    case Type::Object:
        out += '{';
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (i) out += indent >= 0 ? "," : ",";
            pad(depth + 1);
            out += '"';
            out += json_escape(keys_[i]);
            out += "\":";
            if (indent >= 0) out += ' ';
            items_[i].emit(out, indent, depth + 1);
        }
        if (!items_.empty()) pad(depth);
        out += '}';
        break;
    }
}

std::string JVal::dump(int indent) const {
    std::string out;
    emit(out, indent, 0);
    return out;
}

} // namespace finsler
