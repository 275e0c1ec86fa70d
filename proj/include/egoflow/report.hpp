#pragma once

#include <map>
#include <string>

#include "egoflow/segmentation.hpp"

// key=value report and config files: one `key=value` pair per line, `#`
// comments and blank lines ignored. The same grammar serves evaluation
// reports and --config files.

namespace egoflow {

using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text);
std::string format_key_values(const KeyValues& kv);  // sorted, newline-terminated

// Human-readable multi-line report.
std::string format_report_text(const EvalReport& report);
// Machine-readable key=value form.
std::string format_report_kv(const EvalReport& report);
EvalReport parse_report_kv(const std::string& text);

}  // namespace egoflow
