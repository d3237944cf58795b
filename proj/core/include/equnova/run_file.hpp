#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "equnova/corpus.hpp"

namespace equnova {

/// `question_id Q0 <context_id>:<first>-<last> rank score run_tag`
struct RunLine {
    std::string question_id;
    AnswerSpan answer;
    int rank = 0;  // 1-based
    double score = 0.0;
    std::string run_tag;
};

/// Score printed with six fixed decimals.
std::string format_run_line(const RunLine& line);
void write_run(std::ostream& out, const std::vector<RunLine>& lines);
/// Blank lines and `#` comments are skipped. Throws parse_error with the line number.
std::vector<RunLine> parse_run(std::istream& in);

}  // namespace equnova
