// polysel: nonlinear polynomial pair generation, search, verification and rescoring.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "nlpoly/cli.hpp"

namespace {

int with_input(const std::string& path, auto&& fn)
{
    if (path == "-") return fn(std::cin);
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot read '" << path << "'\n";
        return nlpoly::cli::kExitError;
    }
    return fn(in);
}

} // namespace

int main(int argc, char** argv)
{
    using namespace nlpoly::cli;
    CLI::App app{"Nonlinear NFS polynomial selection via small modular geometric progressions"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* g = app.add_subcommand("gen", "generate one polynomial pair");
    g->add_option("--N", gen.N, "integer to factor")->required();
    g->add_option("--d", gen.d, "degree")->required();
    g->add_option("--a", gen.a, "leading coefficient multiplier a");
    g->add_option("--k", gen.k, "multiplier k of N");
    g->add_option("--p", gen.p, "denominator p of the root m/p");
    g->add_option("--m", gen.m, "numerator m (default: nearest valid m above (kN/a)^(1/d))");
    g->add_option("--s", gen.s, "skew (default: the selection formula)");
    g->add_flag("--zero", gen.zero, "length-(d+2) construction with zero x^(d-1) coefficient");
    g->add_option("--delta", gen.delta, "LLL parameter, e.g. 99/100");
    g->add_option("--seed", gen.seed, "seed for modular root finding");
    g->add_flag("--force", gen.force, "run even when the parameter constraints fail");
    g->add_flag("--verbose", gen.verbose, "add exact rational scores");

    SearchOptions search;
    search.threads = default_threads();
    auto* s = app.add_subcommand("search", "enumerate parameters and write scored candidates");
    s->add_option("--N", search.N, "integer to factor")->required();
    s->add_option("--d", search.d, "degree");
    s->add_option("--family", search.family, "d1 or d2-zero");
    s->add_option("--p-min", search.p_min, "smallest prime-power factor of p");
    s->add_option("--p-max", search.p_max, "largest prime-power factor of p");
    s->add_option("--max-factors", search.max_factors, "distinct primes per p");
    s->add_option("--a-max", search.a_max, "largest a tried");
    s->add_option("--k-max", search.k_max, "largest k tried");
    s->add_option("--limit", search.limit, "keep only the best records (0: all)");
    s->add_option("--shard", search.shard, "work partition i/n");
    s->add_option("--seed", search.seed, "seed for modular root finding");
    s->add_option("--out", search.out, "output file (default: standard output)");
    s->add_option("--threads", search.threads, "worker threads (default: POLYSEL_THREADS or 1)");
    s->add_option("--delta", search.delta, "LLL parameter");
    s->add_flag("--verbose", search.verbose, "add exact rational scores");

    std::string verify_path;
    auto* v = app.add_subcommand("verify", "check every record of a candidate file");
    v->add_option("file", verify_path, "candidate file, or - for standard input")->required();

    std::string score_path;
    std::optional<std::string> score_skew;
    auto* sc = app.add_subcommand("score", "rescore records at another skew");
    sc->add_option("file", score_path, "candidate file, or - for standard input")->required();
    sc->add_option("--s", score_skew, "skew override (integer, p/q or decimal)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitError;
    }

    if (*g) return cmd_gen(gen, std::cout, std::cerr);
    if (*s) return cmd_search(search, std::cout, std::cerr);
    if (*v) return with_input(verify_path, [](std::istream& in) { return cmd_verify(in, std::cout, std::cerr); });
    return with_input(score_path, [&](std::istream& in) { return cmd_score(in, score_skew, std::cout, std::cerr); });
}
