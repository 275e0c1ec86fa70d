#include "egoflow/report.hpp"

#include <cstdio>
#include <sstream>

#include "egoflow/errors.hpp"

namespace egoflow {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw FormatError("key=value line " + std::to_string(line_no) + ": missing '='");
        std::string key = trimmed(t.substr(0, eq));
        if (key.empty())
            throw FormatError("key=value line " + std::to_string(line_no) + ": empty key");
        kv[key] = trimmed(t.substr(eq + 1));
    }
    return kv;
}

std::string format_key_values(const KeyValues& kv) {
    std::string out;
    for (const auto& [key, value] : kv) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    }
    return out;
}

std::string format_report_text(const EvalReport& r) {
    std::ostringstream out;
    out << "segmentation report\n";
    out << "  moving IoU : " << fmt_double(r.moving_iou) << "\n";
    out << "  static IoU : " << fmt_double(r.static_iou) << "\n";
    out << "  mean IoU   : " << fmt_double(r.mean_iou) << "\n";
    out << "  moving px  : tp=" << r.moving_tp << " fp=" << r.moving_fp
        << " fn=" << r.moving_fn << "\n";
    out << "  static px  : tp=" << r.static_tp << " fp=" << r.static_fp
        << " fn=" << r.static_fn << "\n";
    return out.str();
}

std::string format_report_kv(const EvalReport& r) {
    KeyValues kv;
    kv["moving_iou"] = fmt_double(r.moving_iou);
    kv["static_iou"] = fmt_double(r.static_iou);
    kv["mean_iou"] = fmt_double(r.mean_iou);
    kv["moving_tp"] = std::to_string(r.moving_tp);
    kv["moving_fp"] = std::to_string(r.moving_fp);
    kv["moving_fn"] = std::to_string(r.moving_fn);
    kv["static_tp"] = std::to_string(r.static_tp);
    kv["static_fp"] = std::to_string(r.static_fp);
    kv["static_fn"] = std::to_string(r.static_fn);
    return format_key_values(kv);
}

EvalReport parse_report_kv(const std::string& text) {
    KeyValues kv = parse_key_values(text);
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw FormatError("report: missing key " + key);
        return it->second;
    };
    EvalReport r;
    r.moving_iou = std::stod(need("moving_iou"));
    r.static_iou = std::stod(need("static_iou"));
    r.mean_iou = std::stod(need("mean_iou"));
    r.moving_tp = std::stoull(need("moving_tp"));
    r.moving_fp = std::stoull(need("moving_fp"));
    r.moving_fn = std::stoull(need("moving_fn"));
    r.static_tp = std::stoull(need("static_tp"));
    r.static_fp = std::stoull(need("static_fp"));
    r.static_fn = std::stoull(need("static_fn"));
    return r;
}

}  // namespace egoflow
