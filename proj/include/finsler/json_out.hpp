#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace finsler {

// Minimal ordered JSON emitter. Doubles print with 17 significant digits so
// every value round-trips; object keys keep insertion order so output is
// byte-stable for identical inputs.
class JVal {
public:
    enum class Type { Null, Bool, Int, Double, String, Array, Object };

    JVal() : type_(Type::Null) {}
    JVal(bool b) : type_(Type::Bool), bool_(b) {}                       // NOLINT
    JVal(long long i) : type_(Type::Int), int_(i) {}                    // NOLINT
    JVal(int i) : type_(Type::Int), int_(i) {}                          // NOLINT
    JVal(std::uint64_t i) : type_(Type::Int), int_(static_cast<long long>(i)) {} // NOLINT
    JVal(long i) : type_(Type::Int), int_(i) {}                         // NOLINT
    JVal(double d) : type_(Type::Double), dbl_(d) {}                    // NOLINT
    JVal(std::string s) : type_(Type::String), str_(std::move(s)) {}    // NOLINT
    JVal(const char* s) : type_(Type::String), str_(s) {}               // NOLINT

    static JVal array() {
        JVal v;
        v.type_ = Type::Array;
        return v;
    }
    static JVal object() {
        JVal v;
        v.type_ = Type::Object;
        return v;
    }
    template <class It>
    static JVal array_of(It begin, It end) {
        JVal v = array();
        for (It it = begin; it != end; ++it) v.push(JVal(*it));
        return v;
    }
    static JVal vec(const std::vector<double>& xs) { return array_of(xs.begin(), xs.end()); }

    JVal& push(JVal v) {
        items_.push_back(std::move(v));
        return items_.back();
    }
    JVal& set(std::string key, JVal v) {
        keys_.push_back(std::move(key));
        items_.push_back(std::move(v));
        return items_.back();
    }

    // indent < 0: compact single line
    std::string dump(int indent = 2) const;

private:
    void emit(std::string& out, int indent, int depth) const;

    Type type_;
    bool bool_ = false;
    long long int_ = 0;
    double dbl_ = 0.0;
    std::string str_;
    std::vector<std::string> keys_;
    std::vector<JVal> items_;
};

std::string json_escape(const std::string& s);

// RFC 4180 field quoting: wraps when the field contains comma, quote or
// newline, doubling embedded quotes.
std::string csv_field(const std::string& s);

std::string format_double(double v); // %.17g

} // namespace finsler
