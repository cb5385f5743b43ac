// Runs the eleven acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status 1 when any criterion fails. An optional argument writes the reports
// as a JSON array.

#include <cstdio>
#include <exception>
#include <fstream>
#include <string>

#include "layered_elastica/verify.hpp"

namespace {

std::string metric_text(const le::Metric& m) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.3g%s%.3g%s", m.name.c_str(), m.value, m.upper ? "<=" : ">=", m.threshold,
                  m.pass ? "" : "(x)");
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    const auto& names = le::suite_names();
    int failed = 0;
    std::string json = "[";
    for (std::size_t i = 0; i < names.size(); ++i) {
        std::string line;
        bool pass = false;
        try {
            le::SuiteReport r = le::run_suite(names[i]);
            pass = r.pass;
            char t[96];
            std::snprintf(t, sizeof t, " runtime=%.1fs<=%.0fs", r.runtime, r.runtime_limit);
            line = t;
            for (const auto& m : r.metrics) line += " " + metric_text(m);
            json += (i ? "," : "") + r.to_json();
            for (const auto& n : r.notes) line += "\n    note: " + n;
        } catch (const std::exception& e) {
            line = std::string(" error: ") + e.what();
        }
        if (!pass) ++failed;
        std::printf("%s criterion %zu (%s):%s\n", pass ? "PASS" : "FAIL", i + 1, names[i].c_str(), line.c_str());
        std::fflush(stdout);
    }
    json += "]\n";
    if (argc > 1) std::ofstream(argv[1]) << json;
    std::printf("%zu/%zu criteria passed\n", names.size() - failed, names.size());
    return failed ? 1 : 0;
}
