#ifndef NLPOLY_RECORD_HPP
#define NLPOLY_RECORD_HPP

// Line-oriented candidate file format. One record is a block of
// `key: value` lines; blocks are separated by blank lines; lines starting
// with '#' carry `# key: value` score annotations.

#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nlpoly/error.hpp"
#include "nlpoly/generate.hpp"
#include "nlpoly/gp.hpp"
#include "nlpoly/integer.hpp"
#include "nlpoly/poly.hpp"

namespace nlpoly {

struct CandidateRecord {
    Integer N;
    unsigned d = 0;
    Family family = Family::d1;
    Integer a, p, m, k, s;
    IntVector f1, f2; // length d + 1, index i is the x^i coefficient
    std::vector<std::pair<std::string, std::string>> notes;

    [[nodiscard]] GpParams params() const { return {d, a, p, m, k, N}; }
    [[nodiscard]] IntPoly poly1() const { return IntPoly(f1); }
    [[nodiscard]] IntPoly poly2() const { return IntPoly(f2); }

    [[nodiscard]] std::optional<std::string> note(const std::string& key) const
    {
        for (const auto& [k2, v] : notes)
            if (k2 == key) return v;
        return std::nullopt;
    }

    friend bool operator==(const CandidateRecord&, const CandidateRecord&) = default;
};

/// Parse error carrying the 1-based line number.
struct ParseError : InputError {
    ParseError(std::size_t line_no, const std::string& what)
        : InputError("line " + std::to_string(line_no) + ": " + what), line(line_no)
    {
    }
    std::size_t line;
};

inline std::string format_exponent(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

/// Score annotations for a pair: exponents with 6 decimals, exact values when verbose.
inline std::vector<std::pair<std::string, std::string>> score_notes(const PairScores& sc, bool verbose)
{
    std::vector<std::pair<std::string, std::string>> n{
        {"norm1_exp", format_exponent(sc.norm1_exp)},
        {"norm2_exp", format_exponent(sc.norm2_exp)},
        {"product_exponent", format_exponent(sc.product_exponent)},
        {"sin_sq_theta", format_exponent(sc.sin_sq_theta.get_d())},
        {"resultant_ok", sc.resultant_ok ? (*sc.resultant_ok ? "true" : "false") : "not-coprime"},
    };
    if (verbose) {
        n.emplace_back("norm1_sq", to_string(sc.norm1_sq));
        n.emplace_back("norm2_sq", to_string(sc.norm2_sq));
        n.emplace_back("sin_sq_theta_exact", to_string(sc.sin_sq_theta));
    }
    return n;
}

inline CandidateRecord make_record(const CandidatePair& pair, unsigned d, bool verbose)
{
    if (!pair.params) throw InputError("records need the generating parameters");
    CandidateRecord r;
    r.N = pair.params->N;
    r.d = d;
    r.family = pair.family;
    r.a = pair.params->a;
    r.p = pair.params->p;
    r.m = pair.params->m;
    r.k = pair.params->k;
    r.s = pair.skew;
    r.f1 = pair.f1.padded(d + 1);
    r.f2 = pair.f2.padded(d + 1);
    r.notes = score_notes(pair.scores, verbose);
    if (pair.degree_fixed_up) r.notes.emplace_back("degree_fixup", "f2 := f1 + f2");
    return r;
}

inline void write_record(std::ostream& os, const CandidateRecord& r)
{
    os << "n: " << r.N << '\n'
       << "d: " << r.d << '\n'
       << "family: " << to_string(r.family) << '\n'
       << "a: " << r.a << '\n'
       << "p: " << r.p << '\n'
       << "m: " << r.m << '\n'
       << "k: " << r.k << '\n'
       << "skew: " << r.s << '\n';
    for (std::size_t i = 0; i < r.f1.size(); ++i) os << 'c' << i << ": " << r.f1[i] << '\n';
    for (std::size_t i = 0; i < r.f2.size(); ++i) os << 'e' << i << ": " << r.f2[i] << '\n';
    for (const auto& [k, v] : r.notes) os << "# " << k << ": " << v << '\n';
}

inline void write_records(std::ostream& os, const std::vector<CandidateRecord>& rs)
{
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (i) os << '\n';
        write_record(os, rs[i]);
    }
}

inline std::string serialize(const CandidateRecord& r)
{
    std::ostringstream os;
    write_record(os, r);
    return os.str();
}

namespace detail {

inline std::pair<std::string, std::string> split_key_value(const std::string& line, std::size_t line_no)
{
    const auto colon = line.find(':');
    if (colon == std::string::npos || colon + 1 >= line.size() || line[colon + 1] != ' ')
        throw ParseError(line_no, "expected 'key: value'");
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 2);
    if (key.empty() || value.empty()) throw ParseError(line_no, "empty key or value");
    return {std::move(key), std::move(value)};
}

struct PendingRecord {
    std::map<std::string, std::pair<std::string, std::size_t>> fields;
    std::vector<std::pair<std::string, std::string>> notes;
    std::size_t first_line = 0;
};

inline Integer field_integer(const PendingRecord& pr, const std::string& key)
{
    auto it = pr.fields.find(key);
    if (it == pr.fields.end()) throw ParseError(pr.first_line, "missing key '" + key + "'");
    try {
        return parse_integer(it->second.first);
    } catch (const InputError&) {
        throw ParseError(it->second.second, "malformed integer for '" + key + "'");
    }
}

inline CandidateRecord finish_record(const PendingRecord& pr)
{
    CandidateRecord r;
    r.N = field_integer(pr, "n");
    const Integer d = field_integer(pr, "d");
    if (d < 1 || d > 64) throw ParseError(pr.fields.at("d").second, "degree out of range");
    r.d = static_cast<unsigned>(d.get_ui());
    auto fam = pr.fields.find("family");
    if (fam == pr.fields.end()) throw ParseError(pr.first_line, "missing key 'family'");
    try {
        r.family = parse_family(fam->second.first);
    } catch (const Error&) {
        throw ParseError(fam->second.second, "unknown family '" + fam->second.first + "'");
    }
    r.a = field_integer(pr, "a");
    r.p = field_integer(pr, "p");
    r.m = field_integer(pr, "m");
    r.k = field_integer(pr, "k");
    r.s = field_integer(pr, "skew");
    std::set<std::string> known{"n", "d", "family", "a", "p", "m", "k", "skew"};
    for (unsigned i = 0; i <= r.d; ++i) {
        r.f1.push_back(field_integer(pr, "c" + std::to_string(i)));
        r.f2.push_back(field_integer(pr, "e" + std::to_string(i)));
        known.insert("c" + std::to_string(i));
        known.insert("e" + std::to_string(i));
    }
    for (const auto& [key, val] : pr.fields)
        if (!known.count(key)) throw ParseError(val.second, "unexpected key '" + key + "'");
    r.notes = pr.notes;
    return r;
}

} // namespace detail

inline std::vector<CandidateRecord> read_records(std::istream& is)
{
    std::vector<CandidateRecord> out;
    std::optional<detail::PendingRecord> cur;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) {
            if (cur) out.push_back(detail::finish_record(*cur));
            cur.reset();
            continue;
        }
        if (!cur) {
            cur.emplace();
            cur->first_line = line_no;
        }
        if (line[0] == '#') {
            if (line.size() < 2 || line[1] != ' ') throw ParseError(line_no, "annotation must start with '# '");
            cur->notes.push_back(detail::split_key_value(line.substr(2), line_no));
            continue;
        }
        auto [key, value] = detail::split_key_value(line, line_no);
        if (cur->fields.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
        cur->fields.emplace(std::move(key), std::make_pair(std::move(value), line_no));
    }
    if (cur) out.push_back(detail::finish_record(*cur));
    return out;
}

inline CandidateRecord parse_record(const std::string& text)
{
    std::istringstream is(text);
    auto rs = read_records(is);
    if (rs.size() != 1) throw InputError("expected exactly one record");
    return rs.front();
}

} // namespace nlpoly

#endif // NLPOLY_RECORD_HPP
