#ifndef NLPOLY_CLI_HPP
#define NLPOLY_CLI_HPP

// Command implementations behind the polysel tool. Each returns the process
// exit code: 0 success, 1 parse or internal error, 2 validation rejection.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "nlpoly/error.hpp"
#include "nlpoly/generate.hpp"
#include "nlpoly/gp.hpp"
#include "nlpoly/integer.hpp"
#include "nlpoly/params.hpp"
#include "nlpoly/record.hpp"

namespace nlpoly::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRejected = 2;

/// Accepts "p/q", an integer, or a plain decimal such as 0.99.
inline Rational parse_rational(const std::string& text)
{
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const Integer num = parse_integer(text.substr(0, slash));
        const Integer den = parse_integer(text.substr(slash + 1));
        if (den == 0) throw InputError("zero denominator in '" + text + "'");
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(parse_integer(text));
    const std::string frac = text.substr(dot + 1);
    std::string whole = text.substr(0, dot);
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
        throw InputError("malformed number '" + text + "'");
    const bool neg = !whole.empty() && whole[0] == '-';
    const Integer w = parse_integer(whole), f = parse_integer(frac);
    const Integer scale = ipow(Integer(10), frac.size());
    Rational q(abs(w) * scale + f, scale);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

/// "i/n" with i < n.
inline Shard parse_shard(const std::string& text)
{
    const auto slash = text.find('/');
    if (slash == std::string::npos) throw InputError("shard must be written i/n");
    const Integer i = parse_integer(text.substr(0, slash)), n = parse_integer(text.substr(slash + 1));
    if (i < 0 || n < 1 || i >= n || n > 1000000) throw InputError("shard must satisfy 0 <= i < n");
    Shard s{static_cast<unsigned>(i.get_ui()), static_cast<unsigned>(n.get_ui())};
    return s;
}

inline std::string violated_constraints(const ConstraintReport& r)
{
    if (!r.params_valid) return "params (" + r.invalid_reason + ")";
    std::string out;
    auto add = [&](bool ok, const char* name) {
        if (ok) return;
        if (!out.empty()) out += ", ";
        out += name;
    };
    add(r.m_at_least_tilde, "m_at_least_tilde");
    add(r.m_within_window, "m_within_window");
    add(r.skew_matches, "skew_formula");
    add(r.ps_le_m, "ps_le_m");
    return out;
}

inline std::string constraint_note(const ConstraintReport& r)
{
    return r.ok() ? "ok" : "violated (" + violated_constraints(r) + ")";
}

/// Runs the family's generator, then the degree fix-up.
inline CandidatePair generate_candidate(const ParamCandidate& c, const Rational& delta)
{
    CandidatePair pair = c.family == Family::d1 ? generate_pair(c.params, c.s, delta)
                                                : generate_pair_zero(c.params, c.s, delta);
    return fixup_degree(std::move(pair), c.params.d);
}

struct GenOptions {
    std::string N;
    unsigned d = 3;
    std::string a = "1", k = "1", p = "1";
    std::optional<std::string> m, s;
    bool zero = false;
    std::string delta = "99/100";
    unsigned long seed = 0;
    bool force = false;
    bool verbose = false;
};

inline int cmd_gen(const GenOptions& o, std::ostream& out, std::ostream& err)
{
    try {
        const Family family = o.zero ? Family::d2_zero : Family::d1;
        if (o.d < 2) throw InputError("degree must be at least 2");
        if (o.zero && o.d < 3) throw InputError("--zero needs d >= 3");
        const Integer N = parse_integer(o.N);
        const SelectionTarget target{o.d, parse_integer(o.a), parse_integer(o.k), N};
        const Integer p = parse_integer(o.p);
        const Rational delta = parse_rational(o.delta);
        Integer m;
        if (o.m) {
            m = parse_integer(*o.m);
        } else {
            const auto ms = find_m_near(target, p, family, std::nullopt, 1, o.seed);
            if (ms.empty()) {
                err << "error: no m in the default window for this p\n";
                return kExitRejected;
            }
            m = ms.front();
        }
        const GpParams params{o.d, target.a, p, m, target.k, N};
        const DerivedParams dp = params.derive(family);
        const Integer s = o.s ? parse_integer(*o.s)
                              : (family == Family::d1 ? skew_formula_d1(o.d, m, dp.a_tilde)
                                                      : skew_formula_d2(o.d, p, dp.a_tilde));
        const ParamCandidate cand{params, s, family};
        const ConstraintReport rep = check_constraints(cand);
        if (!rep.ok() && !o.force) {
            err << "rejected: constraints violated: " << violated_constraints(rep) << "\n";
            return kExitRejected;
        }
        CandidatePair pair = family == Family::d1 ? generate_pair(params, s, delta) : generate_pair_zero(params, s, delta);
        std::string short_note;
        try {
            pair = fixup_degree(std::move(pair), o.d);
        } catch (const ShortVectorError& e) {
            if (!o.force) {
                err << "rejected: " << e.what() << " (short vector " << e.poly << ")\n";
                return kExitRejected;
            }
            short_note = e.poly.to_string();
        }
        CandidateRecord rec = make_record(pair, o.d, o.verbose);
        rec.notes.emplace_back("constraints", constraint_note(rep));
        if (!short_note.empty()) rec.notes.emplace_back("short_first_vector", short_note);
        write_record(out, rec);
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

struct SearchOptions {
    std::string N;
    unsigned d = 3;
    std::string family = "d1";
    std::string p_min = "1", p_max = "64";
    unsigned long a_max = 1, k_max = 1;
    std::size_t limit = 0;
    std::string shard = "0/1";
    unsigned long seed = 0;
    std::string out; // empty: standard output
    unsigned threads = 1;
    unsigned max_factors = 3;
    std::string delta = "99/100";
    bool verbose = false;
};

/// POLYSEL_THREADS if set to a positive integer, else 1.
inline unsigned default_threads()
{
    if (const char* env = std::getenv("POLYSEL_THREADS")) {
        try {
            const Integer v = parse_integer(env);
            if (v >= 1 && v <= 1024) return static_cast<unsigned>(v.get_ui());
        } catch (const InputError&) {
        }
    }
    return 1;
}

namespace detail {

struct ScoredRecord {
    double exponent;
    CandidateRecord record;
};

inline bool scored_order(const ScoredRecord& x, const ScoredRecord& y)
{
    return std::tie(x.exponent, x.record.a, x.record.k, x.record.p, x.record.m) <
           std::tie(y.exponent, y.record.a, y.record.k, y.record.p, y.record.m);
}

} // namespace detail

/// Records of one search, best product exponent first.
inline std::vector<CandidateRecord> run_search(const SearchOptions& o)
{
    const Family family = parse_family(o.family);
    if (o.d < 2 || (family == Family::d2_zero && o.d < 3)) throw InputError("degree too small for the family");
    const Integer N = parse_integer(o.N);
    if (N <= 1) throw InputError("N must exceed 1");
    const Rational delta = parse_rational(o.delta);
    EnumerationOptions eo;
    eo.p_min = parse_integer(o.p_min);
    eo.p_max = parse_integer(o.p_max);
    eo.max_factors = o.max_factors;
    eo.shard = parse_shard(o.shard);
    eo.seed = o.seed;

    std::vector<std::pair<unsigned long, unsigned long>> tasks;
    for (unsigned long a = 1; a <= o.a_max; ++a)
        for (unsigned long k = 1; k <= o.k_max; ++k)
            if (igcd(Integer(a), N) == 1) tasks.emplace_back(a, k);

    std::vector<std::vector<detail::ScoredRecord>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::optional<std::string> failure;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
            try {
                const SelectionTarget t{o.d, Integer(tasks[i].first), Integer(tasks[i].second), N};
                for (const auto& c : enumerate_candidates(t, family, eo)) {
                    CandidatePair pair;
                    try {
                        pair = generate_candidate(c, delta);
                    } catch (const ShortVectorError&) {
                        continue;
                    }
                    CandidateRecord rec = make_record(pair, o.d, o.verbose);
                    rec.notes.emplace_back("constraints", "ok");
                    results[i].push_back({pair.scores.product_exponent, std::move(rec)});
                }
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                if (!failure) failure = e.what();
            }
        }
    };
    const unsigned nthreads = std::max(1u, std::min<unsigned>(o.threads, static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) throw Error(*failure);

    std::vector<detail::ScoredRecord> all;
    for (auto& r : results)
        for (auto& x : r) all.push_back(std::move(x));
    std::sort(all.begin(), all.end(), detail::scored_order);
    if (o.limit && all.size() > o.limit) all.resize(o.limit);
    std::vector<CandidateRecord> out;
    for (auto& x : all) out.push_back(std::move(x.record));
    return out;
}

inline int cmd_search(const SearchOptions& o, std::ostream& out, std::ostream& err)
{
    try {
        const std::vector<CandidateRecord> recs = run_search(o);
        if (o.out.empty()) {
            write_records(out, recs);
        } else {
            std::ofstream f(o.out);
            if (!f) {
                err << "error: cannot write '" << o.out << "'\n";
                return kExitError;
            }
            write_records(f, recs);
            if (!f) {
                err << "error: write to '" << o.out << "' failed\n";
                return kExitError;
            }
        }
        err << "search: " << recs.size() << " record(s)\n";
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

/// Pair view of a record; params are attached when they validate.
inline CandidatePair pair_from_record(const CandidateRecord& r)
{
    CandidatePair pair;
    pair.f1 = r.poly1();
    pair.f2 = r.poly2();
    pair.skew = r.s;
    pair.family = r.family;
    pair.root = {r.m, r.p, r.N};
    try {
        r.params().validate(r.family);
        pair.params = r.params();
    } catch (const Error&) {
    }
    return pair;
}

struct RecordCheck {
    std::string name;
    std::string status; // pass, fail, skipped, n/a
};

/// Per-record checks used by cmd_verify.
inline std::vector<RecordCheck> verify_record(const CandidateRecord& r)
{
    std::vector<RecordCheck> checks;
    auto add = [&](const std::string& name, bool ok) { checks.push_back({name, ok ? "pass" : "fail"}); };
    const IntPoly f1 = r.poly1(), f2 = r.poly2();
    const bool nonzero = !f1.is_zero() && !f2.is_zero();
    add("degree", nonzero && f1.checked_degree() == r.d && f2.checked_degree() <= r.d);
    const RootWitness w{r.m, r.p, r.N};
    add("common_root", nonzero && has_common_root(f1, w) && has_common_root(f2, w));
    if (r.family == Family::d2_zero)
        add("zero_structure", r.d >= 2 && f1.coeff(r.d - 1) == 0 && f2.coeff(r.d - 1) == 0);
    else
        checks.push_back({"zero_structure", "n/a"});
    const CandidatePair pair = pair_from_record(r);
    add("params", pair.params.has_value());
    if (!nonzero || r.s < 1) {
        checks.push_back({"resultant", "skipped"});
        add("norms", false);
        add("constraints", false);
        return checks;
    }
    const PairScores sc = score_pair(pair);
    if (!pair.params || !sc.resultant_ok) checks.push_back({"resultant", "skipped"});
    else add("resultant", *sc.resultant_ok);
    add("constraints", check_constraints({r.params(), r.s, r.family}).ok());
    bool norms_ok = true;
    const std::pair<const char*, double> stored[] = {
        {"norm1_exp", sc.norm1_exp}, {"norm2_exp", sc.norm2_exp}, {"product_exponent", sc.product_exponent}};
    for (const auto& [key, value] : stored)
        if (auto v = r.note(key)) norms_ok = norms_ok && *v == format_exponent(value);
    add("norms", norms_ok);
    return checks;
}

inline int cmd_verify(std::istream& in, std::ostream& out, std::ostream& err)
{
    std::vector<CandidateRecord> recs;
    try {
        recs = read_records(in);
    } catch (const Error& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitError;
    }
    bool all_ok = true;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        bool ok = true;
        out << "record " << i + 1 << ":";
        try {
            for (const auto& c : verify_record(recs[i])) {
                out << ' ' << c.name << '=' << c.status;
                ok = ok && c.status != "fail";
            }
        } catch (const Error& e) {
            out << " error=" << e.what();
            ok = false;
        }
        out << " => " << (ok ? "ok" : "FAIL") << "\n";
        all_ok = all_ok && ok;
    }
    out << recs.size() << " record(s), " << (all_ok ? "all passed" : "failures present") << "\n";
    return all_ok ? kExitOk : kExitRejected;
}

inline int cmd_score(std::istream& in, const std::optional<std::string>& skew, std::ostream& out, std::ostream& err)
{
    try {
        const std::vector<CandidateRecord> recs = read_records(in);
        std::optional<Rational> s;
        if (skew) {
            s = parse_rational(*skew);
            if (*s <= 0) throw InputError("skew must be positive");
        }
        for (std::size_t i = 0; i < recs.size(); ++i) {
            const CandidatePair pair = pair_from_record(recs[i]);
            const Rational used = s ? *s : Rational(recs[i].s);
            const PairScores sc = score_pair(pair, used);
            out << "record " << i + 1 << ": s=" << to_string(used) << " norm1_exp=" << format_exponent(sc.norm1_exp)
                << " norm2_exp=" << format_exponent(sc.norm2_exp)
                << " product_exponent=" << format_exponent(sc.product_exponent) << "\n";
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

} // namespace nlpoly::cli

#endif // NLPOLY_CLI_HPP
