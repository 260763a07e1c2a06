#include "qsusy/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace qsusy {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        default: return "skipped";
    }
}

Summary Report::summary() const {
    Summary s;
    for (const auto& c : checks) {
        if (c.outcome == Outcome::Pass) ++s.pass;
        else if (c.outcome == Outcome::Fail) ++s.fail;
        else ++s.skipped;
    }
    return s;
}

int Report::exit_code() const { return summary().fail == 0 ? 0 : 1; }

void Report::sort() {
    std::stable_sort(checks.begin(), checks.end(), [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
}

nlohmann::json to_json(const Report& r, bool timing) {
    Report sorted = r;
    sorted.sort();
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : sorted.checks) {
        nlohmann::json j{{"id", c.id}, {"anchor", c.anchor}, {"verdict", to_string(c.outcome)}, {"residual", c.residual}};
        if (timing) j["millis"] = c.millis;
        if (!c.detail.empty()) j["detail"] = c.detail;
        checks.push_back(std::move(j));
    }
    const Summary s = r.summary();
    return {{"meta", {{"seed", r.seed}, {"version", kVersion}, {"config", r.config}}},
            {"checks", checks},
            {"summary", {{"pass", s.pass}, {"fail", s.fail}, {"skipped", s.skipped}, {"total", s.total()}}}};
}

std::string emit_json(const Report& r, bool timing) { return to_json(r, timing).dump(2) + "\n"; }

namespace {

std::string cell(std::string s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += "\\|";
        else if (c == '\n') out += ' ';
        else out += c;
    }
    return out;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::string emit_markdown(const Report& r) {
    Report sorted = r;
    sorted.sort();
    const Summary s = r.summary();
    std::ostringstream out;
    out << "# qsusy report\n\n";
    out << "| seed | version | pass | fail | skipped | total |\n|---|---|---|---|---|---|\n";
    out << "| " << r.seed << " | " << kVersion << " | " << s.pass << " | " << s.fail << " | " << s.skipped << " | "
        << s.total() << " |\n\n";
    out << "| id | anchor | verdict | residual | ms | detail |\n|---|---|---|---|---|---|\n";
    for (const auto& c : sorted.checks) {
        out << "| " << cell(c.id) << " | " << cell(c.anchor) << " | " << to_string(c.outcome) << " | " << sci(c.residual)
            << " | " << sci(c.millis) << " | " << cell(c.detail) << " |\n";
    }
    return out.str();
}

}  // namespace qsusy
