#include <charconv>
#include <sstream>

#include "opfimb/evaluation.hpp"

namespace opfimb {

namespace {

std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw OpfError("bad number '" + s + "' in report");
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw OpfError("bad integer '" + s + "' in report");
    return v;
}

}  // namespace

std::string format_report(const ExperimentReport& report) {
    std::ostringstream out;
    out << "# opfimb experiment report v1\n";
    out << "dataset = " << report.dataset << '\n';
    out << "header = " << report.header << '\n';
    out << "runs = " << report.runs << '\n';
    out << "base_seed = " << report.base_seed << '\n';
    for (const auto& r : report.results) {
        out << "\n[run]\n";
        out << "method = " << r.method << '\n';
        out << "run = " << r.run << '\n';
        out << "seed = " << r.seed << '\n';
        out << "f1 = " << num(r.f1) << '\n';
        out << "elapsed = " << num(r.elapsed) << '\n';
        out << "param = " << (r.param ? std::to_string(*r.param) : std::string("-")) << '\n';
    }
    for (const auto& s : report.summary) {
        out << "\n[summary]\n";
        out << "method = " << s.method << '\n';
        out << "mean_f1 = " << num(s.mean) << '\n';
        out << "std_f1 = " << num(s.std) << '\n';
    }
    for (const auto& t : report.tests) {
        out << "\n[wilcoxon]\n";
        out << "a = " << t.a << '\n';
        out << "b = " << t.b << '\n';
        out << "p = " << num(t.p) << '\n';
        out << "significant = " << (t.significant ? "true" : "false") << '\n';
    }
    return out.str();
}

ExperimentReport parse_report(const std::string& text) {
    ExperimentReport rep;
    std::istringstream in(text);
    std::string line, section;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            section = line;
            if (section == "[run]") rep.results.emplace_back();
            else if (section == "[summary]") rep.summary.emplace_back();
            else if (section == "[wilcoxon]") rep.tests.emplace_back();
            else throw OpfError("unknown report section " + section);
            continue;
        }
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) throw OpfError("malformed report line '" + line + "'");
        const std::string key = line.substr(0, eq), value = line.substr(eq + 3);
        if (section.empty()) {
            if (key == "dataset") rep.dataset = value;
            else if (key == "header") rep.header = value;
            else if (key == "runs") rep.runs = parse_u64(value);
            else if (key == "base_seed") rep.base_seed = parse_u64(value);
        } else if (section == "[run]") {
            auto& r = rep.results.back();
            if (key == "method") r.method = value;
            else if (key == "run") r.run = parse_u64(value);
            else if (key == "seed") r.seed = parse_u64(value);
            else if (key == "f1") r.f1 = parse_double(value);
            else if (key == "elapsed") r.elapsed = parse_double(value);
            else if (key == "param" && value != "-") r.param = parse_u64(value);
        } else if (section == "[summary]") {
            auto& s = rep.summary.back();
            if (key == "method") s.method = value;
            else if (key == "mean_f1") s.mean = parse_double(value);
            else if (key == "std_f1") s.std = parse_double(value);
        } else {
            auto& t = rep.tests.back();
            if (key == "a") t.a = value;
            else if (key == "b") t.b = value;
            else if (key == "p") t.p = parse_double(value);
            else if (key == "significant") t.significant = value == "true";
        }
    }
    return rep;
}

std::string format_results_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "method,run,seed,f1,elapsed\n";
    for (const auto& r : report.results)
        out << r.method << ',' << r.run << ',' << r.seed << ',' << num(r.f1) << ','
            << num(r.elapsed) << '\n';
    return out.str();
}

}  // namespace opfimb
