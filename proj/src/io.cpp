#include "lieexp/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace lieexp::io {

namespace {

void emit(const nlohmann::json& j, std::ostream& out, int indent, int level) {
    const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * level), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << "{" << nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out << "," << nl;
                first = false;
                out << pad << nlohmann::json(it.key()).dump() << (indent > 0 ? ": " : ":");
                emit(it.value(), out, indent, level + 1);
            }
            out << nl << close << "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            out << "[" << nl;
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out << "," << nl;
                out << pad;
                emit(j[i], out, indent, level + 1);
            }
            out << nl << close << "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            out << format_double(j.get<double>());
            return;
        default:
            out << j.dump();
    }
}

}  // namespace

std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s = buf;
    // keep it a JSON float
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

void write_json(const nlohmann::json& j, std::ostream& out, int indent) {
    emit(j, out, indent, 0);
    out << "\n";
}

std::string dump_json(const nlohmann::json& j, int indent) {
    std::ostringstream s;
    write_json(j, s, indent);
    return s.str();
}

}  // namespace lieexp::io
