#include "driftwatch/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "driftwatch/errors.hpp"

namespace driftwatch {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string rstrip(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ')) s.pop_back();
    return s;
}

}  // namespace

CsvParseResult parse_event_csv(std::istream& stream, std::size_t error_budget) {
    CsvParseResult result;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(stream, line)) {
        throw CsvError("empty stream: expected header '" + kCsvHeader + "'");
    }
    ++line_no;
    if (rstrip(line) != kCsvHeader) {
        throw CsvError("bad header at line 1: expected '" + kCsvHeader + "'");
    }

    auto fail = [&](std::size_t at, std::string message) {
        result.errors.push_back({at, std::move(message)});
        if (result.errors.size() > error_budget) {
            throw CsvError("error budget exceeded: more than " + std::to_string(error_budget) +
                           " bad rows (first: line " + std::to_string(result.errors.front().line) +
                           ", " + result.errors.front().message + ")");
        }
    };

    while (std::getline(stream, line)) {
        ++line_no;
        line = rstrip(line);
        if (line.empty()) continue;

        std::vector<std::string> fields = split_fields(line);
        if (fields.size() != 5) {
            fail(line_no, "expected 5 columns, got " + std::to_string(fields.size()));
            continue;
        }
        if (fields[0].empty() || fields[2].empty() || fields[3].empty()) {
            fail(line_no, "study_id, model_id, and class_label must be non-empty");
            continue;
        }

        auto ts = parse_iso8601(fields[1]);
        if (!ts) {
            fail(line_no, "unparsable timestamp '" + fields[1] + "'");
            continue;
        }

        char* end = nullptr;
        double score = std::strtod(fields[4].c_str(), &end);
        if (end == fields[4].c_str() || *end != '\0') {
            fail(line_no, "unparsable score '" + fields[4] + "'");
            continue;
        }
        if (!(score >= 0.0 && score <= 1.0)) {
            fail(line_no, "score out of range: " + fields[4] + " not in [0, 1]");
            continue;
        }

        result.events.push_back({fields[0], *ts, fields[2], fields[3], score});
    }
    return result;
}

void write_event_csv(std::ostream& stream, const std::vector<PredictionEvent>& events) {
    stream << kCsvHeader << '\n';
    char score_buf[32];
    for (const auto& e : events) {
        std::snprintf(score_buf, sizeof score_buf, "%.9f", e.score);
        stream << e.study_id << ',' << format_iso8601(e.timestamp) << ',' << e.model_id << ','
               << e.class_label << ',' << score_buf << '\n';
    }
}

}  // namespace driftwatch
