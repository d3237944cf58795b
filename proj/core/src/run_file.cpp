#include "equnova/run_file.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "equnova/error.hpp"

namespace equnova {

std::string format_run_line(const RunLine& line)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), line.score, std::chars_format::fixed, 6);
    if (ec != std::errc{}) {
        throw invalid_argument_error("score not representable");
    }
    std::string out = line.question_id;
    out += " Q0 ";
    out += to_string(line.answer);
    out += ' ';
    out += std::to_string(line.rank);
    out += ' ';
    out.append(buf, end);
    out += ' ';
    out += line.run_tag;
    return out;
}

void write_run(std::ostream& out, const std::vector<RunLine>& lines)
{
    for (const auto& line : lines) {
        out << format_run_line(line) << '\n';
    }
}

std::vector<RunLine> parse_run(std::istream& in)
{
    std::vector<RunLine> lines;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto first = raw.find_first_not_of(" \t\r");
        if (first == std::string::npos || raw[first] == '#') {
            continue;
        }
        std::istringstream fields(raw);
        std::string qid, q0, answer, rank, score, tag, extra;
        if (!(fields >> qid >> q0 >> answer >> rank >> score >> tag) || (fields >> extra)) {
            throw parse_error(line_no, "expected 6 fields");
        }
        RunLine line;
        line.question_id = qid;
        line.run_tag = tag;
        try {
            line.answer = parse_answer_span(answer);
        } catch (const parse_error& e) {
            throw parse_error(line_no, e.what());
        }
        auto [rp, rec] = std::from_chars(rank.data(), rank.data() + rank.size(), line.rank);
        if (rec != std::errc{} || rp != rank.data() + rank.size() || line.rank < 1) {
            throw parse_error(line_no, "bad rank '" + rank + "'");
        }
        auto [sp, sec] = std::from_chars(score.data(), score.data() + score.size(), line.score);
        if (sec != std::errc{} || sp != score.data() + score.size()) {
            throw parse_error(line_no, "bad score '" + score + "'");
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

}  // namespace equnova
