// Command line front end: solve instances, verify certificates, generate
// instance corpora, and benchmark the two solvers against each other.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evf/digraph.hpp"
#include "evf/even_factor.hpp"
#include "evf/fast_augment.hpp"
#include "evf/pap.hpp"
#include "evf/testkit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadInstance = 2;
constexpr int kExitNotSymmetric = 3;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("EVENFACTOR_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring unparsable EVENFACTOR_SEED\n";
        }
    }
    return 1;
}

evf::Digraph load_validated(const std::string& path) {
    evf::Digraph g = evf::read_instance_file(path);
    evf::ValidationResult vr = evf::validate_odd_cycle_symmetric(g);
    if (!vr.valid) {
        std::cerr << "instance rejected: non-symmetric arc " << g.tail(vr.witness) << " -> "
                  << g.head(vr.witness) << " lies on an odd closed walk\n";
        std::exit(kExitNotSymmetric);
    }
    return g;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

int cmd_solve(const std::string& input, const std::string& algo, const std::string& cert_path,
              bool trace) {
    evf::Digraph g = load_validated(input);
    evf::EvenFactor f;
    if (algo == "fast") {
        evf::FastOptions opts;
        if (trace) opts.trace = [](const std::string& line) { std::cerr << line << '\n'; };
        f = evf::solve_fast(g, opts);
    } else {
        f = evf::solve_pap(g);
    }
    std::cout << "size " << f.size() << " deficiency " << evf::deficiency(g, f.matching) << '\n';
    if (!cert_path.empty()) {
        std::ofstream out(cert_path);
        if (!out) {
            std::cerr << "cannot write certificate to " << cert_path << '\n';
            return kExitBadInstance;
        }
        evf::write_certificate(out, g, f.matching);
    }
    return kExitOk;
}

int cmd_verify(const std::string& input, const std::string& cert_path) {
    evf::Digraph g = evf::read_instance_file(input);
    std::ifstream certf(cert_path);
    if (!certf) {
        std::cerr << "cannot open certificate " << cert_path << '\n';
        return kExitBadInstance;
    }
    evf::CertificateData cert = evf::read_certificate(certf);
    std::vector<evf::ArcId> arcs;
    for (auto [u, v] : cert.arcs) {
        evf::ArcId a =
            (u >= 0 && v >= 0 && u < g.node_cap() && v < g.node_cap()) ? g.find_arc(u, v)
                                                                       : evf::kNoArc;
        if (a == evf::kNoArc) {
            std::cout << "INVALID: certificate arc " << u << " -> " << v
                      << " is not in the instance\n";
            return kExitVerifyFailed;
        }
        arcs.push_back(a);
    }
    evf::VerifyResult vr = evf::verify(g, arcs);
    if (!vr.ok()) {
        std::cout << "INVALID: " << vr.violation->describe() << '\n';
        return kExitVerifyFailed;
    }
    if (vr.factor->size() != cert.claimed_size) {
        std::cout << "INVALID: claimed size " << cert.claimed_size << " but certificate has "
                  << vr.factor->size() << " distinct arcs\n";
        return kExitVerifyFailed;
    }
    std::cout << "OK size " << vr.factor->size() << " deficiency "
              << evf::deficiency(g, vr.factor->matching) << '\n';
    return kExitOk;
}

int cmd_check(const std::string& input) {
    evf::Digraph g = evf::read_instance_file(input);
    evf::ValidationResult vr = evf::validate_odd_cycle_symmetric(g);
    if (vr.valid) {
        std::cout << "valid n " << g.num_nodes() << " m " << g.num_arcs() << '\n';
        return kExitOk;
    }
    std::cout << "possibly-invalid witness " << g.tail(vr.witness) << ' ' << g.head(vr.witness)
              << '\n';
    return kExitNotSymmetric;
}

int cmd_gen(const std::string& family, int n, double density, std::uint64_t seed, int count,
            const std::string& out_path, const std::string& corpus_dir) {
    evf::testkit::InstanceFamily fam;
    fam.tag = evf::testkit::family_from_name(family);
    fam.n = n;
    fam.arcs_per_node = density;
    for (int i = 0; i < count; ++i) {
        fam.seed = seed + static_cast<std::uint64_t>(i);
        evf::Digraph g = evf::testkit::gen(fam);
        if (!corpus_dir.empty()) {
            std::filesystem::path dir = std::filesystem::path(corpus_dir) / family;
            std::filesystem::create_directories(dir);
            std::ofstream out(dir / (std::to_string(fam.seed) + ".dg"));
            evf::write_instance(out, g);
        } else if (!out_path.empty()) {
            std::ofstream out(out_path);
            evf::write_instance(out, g);
        } else {
            evf::write_instance(std::cout, g);
        }
    }
    return kExitOk;
}

int cmd_bench(const std::string& family, const std::vector<int>& sizes, int seeds, double density,
              const std::string& algo) {
    const bool run_fast = algo == "both" || algo == "fast";
    const bool run_pap = algo == "both" || algo == "pap";
    std::cout << "n,m,algo,seed,wall_ms,arc_scans,contractions,recoveries,size\n";
    for (int n : sizes) {
        for (int s = 0; s < seeds; ++s) {
            evf::testkit::InstanceFamily fam;
            fam.tag = evf::testkit::family_from_name(family);
            fam.n = n;
            fam.arcs_per_node = density;
            fam.seed = default_seed() + static_cast<std::uint64_t>(s);
            evf::Digraph g = evf::testkit::gen(fam);

            int fast_size = -1, pap_size = -1;
            if (run_fast) {
                evf::FastOptions opts;
                opts.strict_checks = false;
                evf::FastStats stats;
                auto t0 = std::chrono::steady_clock::now();
                evf::EvenFactor f = evf::solve_fast(g, opts, &stats);
                double ms = ms_since(t0);
                fast_size = f.size();
                long long bound = 10 * (g.num_arcs() + static_cast<long long>(g.num_nodes()) *
                                                           g.num_nodes());
                if (stats.max_call_scans > bound) {
                    std::cerr << "scan bound exceeded: " << stats.max_call_scans << " > " << bound
                              << " at n=" << n << " seed=" << fam.seed << '\n';
                    return kExitVerifyFailed;
                }
                std::cout << g.num_nodes() << ',' << g.num_arcs() << ",fast," << fam.seed << ','
                          << ms << ',' << stats.arc_scans << ',' << stats.contractions << ','
                          << stats.recoveries << ',' << fast_size << '\n';
            }
            if (run_pap) {
                evf::PapOptions opts;
                opts.strict_checks = false;
                evf::PapStats stats;
                auto t0 = std::chrono::steady_clock::now();
                evf::EvenFactor f = evf::solve_pap(g, opts, &stats);
                double ms = ms_since(t0);
                pap_size = f.size();
                std::cout << g.num_nodes() << ',' << g.num_arcs() << ",pap," << fam.seed << ','
                          << ms << ',' << stats.arc_scans << ',' << stats.contractions << ",0,"
                          << pap_size << '\n';
            }
            if (run_fast && run_pap && fast_size != pap_size) {
                std::string dump = "disagreement_" + family + "_n" + std::to_string(n) + "_s" +
                                   std::to_string(fam.seed) + ".dg";
                std::ofstream out(dump);
                evf::write_instance(out, g);
                std::cerr << "solver disagreement (fast " << fast_size << ", pap " << pap_size
                          << "); instance dumped to " << dump << '\n';
                return kExitVerifyFailed;
            }
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"maximum even factor solver for odd-cycle symmetric digraphs"};
    app.require_subcommand(1);

    std::string input, certificate, algo = "fast", family = "mixed-symmetric", out_path,
                corpus_dir;
    bool trace = false;
    int n = 12, seeds = 3, count = 1;
    double density = 2.5;
    std::uint64_t seed = default_seed();
    std::vector<int> sizes{50, 100, 200};

    CLI::App* solve = app.add_subcommand("solve", "solve an instance file");
    solve->add_option("--input", input, "instance file")->required();
    solve->add_option("--algo", algo, "fast | pap")->check(CLI::IsMember({"fast", "pap"}));
    solve->add_option("--certificate", certificate, "write the factor here");
    solve->add_flag("--trace", trace, "emit one event line per solver step to stderr");

    CLI::App* verify = app.add_subcommand("verify", "check a certificate against an instance");
    verify->add_option("--input", input, "instance file")->required();
    verify->add_option("--certificate", certificate, "certificate file")->required();

    CLI::App* check = app.add_subcommand("check", "run the odd-cycle symmetry validator");
    check->add_option("--input", input, "instance file")->required();

    CLI::App* gen = app.add_subcommand("gen", "generate instances");
    gen->add_option("--family", family,
                    "symmetrized-undirected | bipartite-digraph | mixed-symmetric | "
                    "exhaustive-small");
    gen->add_option("--n", n, "node count");
    gen->add_option("--density", density, "target arcs per node");
    gen->add_option("--seed", seed, "base seed (default: EVENFACTOR_SEED or 1)");
    gen->add_option("--count", count, "how many instances (seed increments)");
    gen->add_option("--out", out_path, "output file (default stdout)");
    gen->add_option("--corpus", corpus_dir, "write into <dir>/<family>/<seed>.dg");

    CLI::App* bench = app.add_subcommand("bench", "CSV benchmark of both solvers");
    bench->add_option("--family", family, "instance family");
    bench->add_option("--sizes", sizes, "node counts to sweep");
    bench->add_option("--seeds", seeds, "instances per size");
    bench->add_option("--density", density, "target arcs per node");
    bench->add_option("--algo", algo, "fast | pap | both")
        ->check(CLI::IsMember({"fast", "pap", "both"}));

    if (bench->count_all() == 0) algo = "fast"; // solve default
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*solve) return cmd_solve(input, algo, certificate, trace);
        if (*verify) return cmd_verify(input, certificate);
        if (*check) return cmd_check(input);
        if (*gen) return cmd_gen(family, n, density, seed, count, out_path, corpus_dir);
        if (*bench) return cmd_bench(family, sizes, seeds, density, algo == "fast" ? "fast" : algo);
    } catch (const evf::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInstance;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerifyFailed;
    }
    return kExitOk;
}
