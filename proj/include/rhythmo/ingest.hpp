#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "rhythmo/error.hpp"
#include "rhythmo/types.hpp"

namespace rhythmo {

// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string> split_csv_row(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    for (auto& f : out) {
        while (!f.empty() && (f.back() == '\r' || f.back() == '\n' || f.back() == ' '))
            f.pop_back();
        std::size_t i = 0;
        while (i < f.size() && f[i] == ' ') ++i;
        f.erase(0, i);
    }
    return out;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string file;
};

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw data_error("MissingFile", "cannot open " + path.string());
    CsvTable t;
    t.file = path.string();
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_row(line);
        if (first) {
            t.header = std::move(fields);
            first = false;
        } else {
            t.rows.push_back(std::move(fields));
        }
    }
    if (first)
        throw data_error("MalformedRow", path.string() + ": missing header row");
    return t;
}

inline long long parse_int(const std::string& s, const std::string& file, std::size_t line_no) {
    long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw data_error("MalformedRow",
                         file + " line " + std::to_string(line_no) + ": bad integer '" + s + "'");
    return v;
}

inline double parse_real(const std::string& s, const std::string& file, std::size_t line_no) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
        throw data_error("MalformedRow",
                         file + " line " + std::to_string(line_no) + ": bad number '" + s + "'");
    return v;
}

inline void require_columns(const CsvTable& t, std::size_t n) {
    if (t.header.size() != n)
        throw data_error("MalformedRow",
                         t.file + ": expected " + std::to_string(n) + " columns, got " +
                             std::to_string(t.header.size()));
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (t.rows[i].size() != n)
            throw data_error("MalformedRow", t.file + " line " + std::to_string(i + 2) +
                                                 ": expected " + std::to_string(n) + " fields");
}

} // namespace detail

// Mean of the four need scores and the derived disadaptation level
// (half-up rounding of the mean).
struct LevelResult {
    double mean_score;
    int level;
};

inline LevelResult disadaptation_level(const std::array<int, 4>& need_scores) {
    for (int s : need_scores)
        if (s < 0 || s > 3)
            throw data_error("ScoreOutOfRange",
                             "need score " + std::to_string(s) + " outside {0,1,2,3}");
    double mean = (need_scores[0] + need_scores[1] + need_scores[2] + need_scores[3]) / 4.0;
    int level = static_cast<int>(std::floor(mean + 0.5));
    return {mean, level};
}

inline ClassLabel class_label(int level) {
    if (level < 0 || level > 3)
        throw data_error("LevelOutOfRange", "level " + std::to_string(level) + " outside {0..3}");
    return level <= 1 ? 0 : 1;
}

inline ClassLabel record_label(const RhythmogramRecord& rec) {
    return class_label(rec.questionnaire.level);
}

inline Gender parse_gender(const std::string& s) {
    std::string g = s;
    std::transform(g.begin(), g.end(), g.begin(), [](unsigned char c) { return std::tolower(c); });
    if (g == "male" || g == "m") return Gender::male;
    if (g == "female" || g == "f") return Gender::female;
    return Gender::unspecified;
}

inline const char* gender_name(Gender g) {
    switch (g) {
        case Gender::male: return "male";
        case Gender::female: return "female";
        default: return "unspecified";
    }
}

// Reads rr_filter.csv, info.csv, uad.csv from `dir` and validates every
// record invariant. A "medium" field that disagrees with the recomputed
// mean by more than 1e-9 is reported through `warn` (when given), not fatal.
inline RhythmogramRecord parse_record(const std::filesystem::path& dir,
                                      std::vector<std::string>* warnings = nullptr) {
    namespace fs = std::filesystem;
    for (const char* name : {"rr_filter.csv", "info.csv", "uad.csv"})
        if (!fs::exists(dir / name))
            throw data_error("MissingFile", (dir / name).string() + " not found");

    RhythmogramRecord rec;

    auto rr = detail::read_csv(dir / "rr_filter.csv");
    detail::require_columns(rr, 2);
    if (rr.rows.empty())
        throw data_error("InvariantViolation", rr.file + ": empty RR series");
    rec.rr_series.reserve(rr.rows.size());
    long long prev_time = -1;
    for (std::size_t i = 0; i < rr.rows.size(); ++i) {
        std::size_t line_no = i + 2;
        RrSample s;
        s.time_ms = detail::parse_int(rr.rows[i][0], rr.file, line_no);
        s.rr_ms = detail::parse_real(rr.rows[i][1], rr.file, line_no);
        if (s.rr_ms <= 0.0)
            throw data_error("InvariantViolation", rr.file + " line " + std::to_string(line_no) +
                                                       ": RR value must be positive");
        if (s.time_ms <= prev_time)
            throw data_error("InvariantViolation", rr.file + " line " + std::to_string(line_no) +
                                                       ": time not strictly increasing");
        prev_time = s.time_ms;
        rec.rr_series.push_back(s);
    }

    auto info = detail::read_csv(dir / "info.csv");
    detail::require_columns(info, 5);
    if (info.rows.size() != 1)
        throw data_error("MalformedRow", info.file + ": expected exactly one data row");
    rec.meta.start_time = info.rows[0][0];
    rec.meta.session_id = info.rows[0][1];
    rec.meta.person_id = info.rows[0][2];
    long long age = detail::parse_int(info.rows[0][3], info.file, 2);
    if (age < 0)
        throw data_error("InvariantViolation", info.file + ": negative age");
    rec.meta.age = static_cast<int>(age);
    rec.meta.gender = parse_gender(info.rows[0][4]);
    if (rec.meta.session_id.empty() || rec.meta.person_id.empty())
        throw data_error("InvariantViolation", info.file + ": empty session_id or person_id");

    auto uad = detail::read_csv(dir / "uad.csv");
    detail::require_columns(uad, 8);
    if (uad.rows.size() != 1)
        throw data_error("MalformedRow", uad.file + ": expected exactly one data row");
    const auto& row = uad.rows[0];
    rec.questionnaire.ms_begin = detail::parse_int(row[0], uad.file, 2);
    rec.questionnaire.ms_end = detail::parse_int(row[1], uad.file, 2);
    if (rec.questionnaire.ms_begin >= rec.questionnaire.ms_end)
        throw data_error("InvariantViolation", uad.file + ": ms_begin must precede ms_end");
    for (int i = 0; i < 4; ++i) {
        long long u = detail::parse_int(row[2 + i], uad.file, 2);
        if (u < 0 || u > 3)
            throw data_error("InvariantViolation",
                             uad.file + ": U" + std::to_string(i + 1) + " outside {0,1,2,3}");
        rec.questionnaire.need_scores[static_cast<std::size_t>(i)] = static_cast<int>(u);
    }
    long long level = detail::parse_int(row[6], uad.file, 2);
    if (level < 0 || level > 3)
        throw data_error("InvariantViolation", uad.file + ": level outside {0..3}");
    rec.questionnaire.level = static_cast<int>(level);
    rec.questionnaire.mean_score = detail::parse_real(row[7], uad.file, 2);

    double recomputed = disadaptation_level(rec.questionnaire.need_scores).mean_score;
    if (std::abs(recomputed - rec.questionnaire.mean_score) > 1e-9 && warnings)
        warnings->push_back(uad.file + ": medium " + format_double(rec.questionnaire.mean_score) +
                            " differs from recomputed mean " + format_double(recomputed));

    return rec;
}

// Emits the three-file record format; parse_record(write_record(r)) == r.
inline void write_record(const RhythmogramRecord& rec, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw data_error("IoFailure", "cannot create " + dir.string() + ": " + ec.message());

    {
        std::ofstream out(dir / "rr_filter.csv");
        if (!out) throw data_error("IoFailure", "cannot write " + (dir / "rr_filter.csv").string());
        out << "time,RR_filter\n";
        for (const auto& s : rec.rr_series)
            out << s.time_ms << ',' << format_double(s.rr_ms) << '\n';
    }
    {
        std::ofstream out(dir / "info.csv");
        if (!out) throw data_error("IoFailure", "cannot write " + (dir / "info.csv").string());
        out << "time,session_id,person_id,old,gender\n";
        out << rec.meta.start_time << ',' << rec.meta.session_id << ',' << rec.meta.person_id
            << ',' << rec.meta.age << ',' << gender_name(rec.meta.gender) << '\n';
    }
    {
        std::ofstream out(dir / "uad.csv");
        if (!out) throw data_error("IoFailure", "cannot write " + (dir / "uad.csv").string());
        out << "ms_begin,ms_end,U1,U2,U3,U4,level,medium\n";
        const auto& q = rec.questionnaire;
        out << q.ms_begin << ',' << q.ms_end << ',' << q.need_scores[0] << ',' << q.need_scores[1]
            << ',' << q.need_scores[2] << ',' << q.need_scores[3] << ',' << q.level << ','
            << format_double(q.mean_score) << '\n';
    }
}

// All record subdirectories under `corpus_dir`, sorted by path for
// deterministic ordering.
inline std::vector<std::filesystem::path> list_record_dirs(const std::filesystem::path& corpus_dir) {
    namespace fs = std::filesystem;
    if (!fs::exists(corpus_dir))
        throw data_error("MissingFile", "corpus directory " + corpus_dir.string() + " not found");
    std::vector<fs::path> dirs;
    if (fs::exists(corpus_dir / "rr_filter.csv")) {
        dirs.push_back(corpus_dir);
        return dirs;
    }
    for (const auto& entry : fs::directory_iterator(corpus_dir))
        if (entry.is_directory() && fs::exists(entry.path() / "rr_filter.csv"))
            dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty())
        throw data_error("MissingFile", "no record directories under " + corpus_dir.string());
    return dirs;
}

} // namespace rhythmo
