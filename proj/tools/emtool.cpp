// emtool: command-line front end for the emach library.
//
// Exit codes: 0 success or affirmative answer, 1 negative answer, 2 usage
// error, 3 data or validation error.

#include <charconv>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emach/axioms.hpp"
#include "emach/examples.hpp"
#include "emach/io.hpp"
#include "emach/isomorphism.hpp"
#include "emach/minimize.hpp"
#include "emach/mixed_state.hpp"
#include "emach/reconstruct.hpp"
#include "emach/simulate.hpp"
#include "emach/topology.hpp"

namespace {

using namespace emach;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kDataError = 3;

/// Raised for argument values CLI11 cannot check by itself.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Machine load_machine(const std::string& path, bool require_validity = true) {
    auto parsed = io::read_machine(path);
    for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << '\n';
    if (require_validity) require_valid(parsed.machine);
    return std::move(parsed.machine);
}

std::string join_states(const std::vector<StateIndex>& states) {
    std::string out = "{";
    for (std::size_t i = 0; i < states.size(); ++i) out += (i ? "," : "") + std::to_string(states[i]);
    return out + "}";
}

std::string format_belief(const RowVector& phi) {
    std::string out;
    for (Eigen::Index i = 0; i < phi.size(); ++i) out += (i ? " " : "") + io::format_double(phi(i), 12);
    return out;
}

Start parse_start(const std::string& text, std::size_t n_states) {
    if (text == "stationary") return StationaryStart{};
    if (text.rfind("state:", 0) == 0) {
        const std::string index = text.substr(6);
        std::size_t value = 0;
        const auto [ptr, ec] = std::from_chars(index.data(), index.data() + index.size(), value);
        if (ec != std::errc() || ptr != index.data() + index.size()) throw UsageError("bad --start state '" + text + "'");
        return StateIndex{value};
    }
    if (text.rfind("dist:", 0) == 0) {
        std::vector<double> values;
        std::stringstream ss(text.substr(5));
        std::string item;
        while (std::getline(ss, item, ',')) values.push_back(io::parse_probability(item));
        if (values.size() != n_states) throw UsageError("--start dist needs one entry per state");
        RowVector rho(static_cast<Eigen::Index>(values.size()));
        for (std::size_t i = 0; i < values.size(); ++i) rho(static_cast<Eigen::Index>(i)) = values[i];
        return rho;
    }
    throw UsageError("--start must be 'stationary', 'state:<i>' or 'dist:<p0>,<p1>,...'");
}

void emit_report(const std::vector<std::string>& lines, const std::string& path) {
    std::string text;
    for (const auto& l : lines) text += l + '\n';
    if (path.empty())
        std::cerr << text;
    else
        io::write_text(path, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Epsilon-machine toolkit: generator axioms, sampling, belief states, history reconstruction, "
                 "minimization, isomorphism and sofic topology.\n'-' stands for standard input or output. "
                 "EMTOOL_THREADS caps internal parallelism."};
    app.require_subcommand(1);
    int status = kOk;

    // validate
    std::string validate_in;
    double validate_tol = kStochasticTolerance;
    auto* validate_cmd = app.add_subcommand("validate", "Check nonnegativity, row sums and useless symbols");
    validate_cmd->add_option("machine", validate_in, "Machine file")->required();
    validate_cmd->add_option("--tol", validate_tol, "Row-sum tolerance")->capture_default_str();
    validate_cmd->callback([&] {
        const Machine m = load_machine(validate_in, false);
        const auto report = validate(m, validate_tol);
        for (const auto& w : report.warnings) std::cout << "warning: " << w << '\n';
        for (const auto& v : report.violations) std::cout << "violation: " << v.message << '\n';
        std::cout << (report.accepted() ? "accepted" : "rejected") << '\n';
        status = report.accepted() ? kOk : kNegative;
    });

    // axioms
    std::string axioms_in;
    double axioms_tol = kDistinctTolerance;
    auto* axioms_cmd = app.add_subcommand("axioms", "Report the three generator axioms; exit 1 when one fails");
    axioms_cmd->add_option("machine", axioms_in, "Machine file")->required();
    axioms_cmd->add_option("--tol", axioms_tol, "Distinctness tolerance")->capture_default_str();
    axioms_cmd->callback([&] {
        const Machine m = load_machine(axioms_in);
        const auto r = is_generator_em(m, axioms_tol);
        std::cout << "irreducible     " << (r.irreducible ? "yes" : "no");
        if (!r.irreducible) std::cout << "  (" << r.components.size() << " components)";
        std::cout << "\nunifilar        " << (r.unifilar ? "yes" : "no");
        if (!r.unifilar) {
            const auto [s, x] = r.unifilar_violations.front();
            std::cout << "  (state " << s << " has several '" << m.alphabet().name(x) << "' edges)";
        }
        std::cout << "\ndistinct        ";
        if (!r.probabilistically_distinct)
            std::cout << "n/a";
        else
            std::cout << (*r.probabilistically_distinct ? "yes" : "no");
        if (r.indistinct_pair)
            std::cout << "  (states " << r.indistinct_pair->first << " and " << r.indistinct_pair->second
                      << " agree on every word)";
        std::cout << "\ngenerator       " << (r.is_generator() ? "yes" : "no") << '\n';
        if (r.unifilar) {
            const auto w = find_sync_word(m, 4 * m.n_states());
            std::cout << "sync word       "
                      << (w ? (w->empty() ? std::string("(empty)") : io::format_word(m.alphabet(), *w))
                            : std::string("none"))
                      << '\n';
        }
        status = r.is_generator() ? kOk : kNegative;
    });

    // minimize
    std::string minimize_in, minimize_out;
    double minimize_tol = kDistinctTolerance;
    auto* minimize_cmd =
        app.add_subcommand("minimize", "Quotient a unifilar machine by its distinctness partition; the state map "
                                       "goes to <out>.map, or to standard error when <out> is '-'");
    minimize_cmd->add_option("in", minimize_in, "Input machine")->required();
    minimize_cmd->add_option("out", minimize_out, "Output machine")->required();
    minimize_cmd->add_option("--tol", minimize_tol, "Distinctness tolerance")->capture_default_str();
    minimize_cmd->callback([&] {
        const auto q = minimize_unifilar(load_machine(minimize_in), minimize_tol);
        std::string map;
        for (std::size_t s = 0; s < q.class_of.size(); ++s)
            map += std::to_string(s) + " -> " + std::to_string(q.class_of[s]) + '\n';
        io::write_text(minimize_out, io::serialize_machine(q.target));
        if (minimize_out == "-")
            std::cerr << map;
        else
            io::write_text(minimize_out + ".map", map);
    });

    // isomorphic
    std::string iso_a, iso_b;
    double iso_tol = kIsomorphismTolerance;
    auto* iso_cmd = app.add_subcommand("isomorphic", "Decide isomorphism of two unifilar irreducible machines");
    iso_cmd->add_option("a", iso_a, "First machine")->required();
    iso_cmd->add_option("b", iso_b, "Second machine")->required();
    iso_cmd->add_option("--tol", iso_tol, "Probability tolerance")->capture_default_str();
    iso_cmd->callback([&] {
        const auto iso = are_isomorphic(load_machine(iso_a), load_machine(iso_b), iso_tol);
        if (!iso) {
            std::cout << "NOT ISOMORPHIC\n";
            status = kNegative;
            return;
        }
        for (std::size_t i = 0; i < iso->mapping.size(); ++i) std::cout << i << " -> " << iso->mapping[i] << '\n';
    });

    // sample
    std::string sample_in, sample_out = "-", sample_start = "stationary";
    std::size_t sample_len = 0;
    std::uint64_t sample_seed = 0;
    bool sample_packed = false, sample_states = false;
    auto* sample_cmd = app.add_subcommand("sample", "Sample a symbol sequence by a weighted random walk");
    sample_cmd->add_option("machine", sample_in, "Machine file")->required();
    sample_cmd->add_option("--len", sample_len, "Number of symbols")->required();
    sample_cmd->add_option("--seed", sample_seed, "RNG seed")->required();
    sample_cmd->add_option("--start", sample_start, "stationary | state:<i> | dist:<p0>,<p1>,...")
        ->capture_default_str();
    sample_cmd->add_option("-o,--out", sample_out, "Output sample file")->capture_default_str();
    sample_cmd->add_flag("--packed", sample_packed, "Write symbols packed, 80 per line");
    sample_cmd->add_flag("--states", sample_states, "Also print the state path to standard error");
    sample_cmd->callback([&] {
        const Machine m = load_machine(sample_in);
        const auto run = sample_path(m, parse_start(sample_start, m.n_states()), sample_len, sample_seed);
        io::write_text(sample_out, io::serialize_sample(m.alphabet(), run.symbols, sample_packed));
        if (sample_states) {
            for (StateIndex s : run.states) std::cerr << s << '\n';
        }
    });

    // words
    std::string words_in;
    std::size_t words_max = 0;
    auto* words_cmd = app.add_subcommand("words", "Empirical word counts as CSV word,count,freq");
    words_cmd->add_option("sample", words_in, "Sample file")->required();
    words_cmd->add_option("--max-len", words_max, "Longest word counted")->required();
    words_cmd->callback([&] {
        const auto sample = io::parse_sample(io::read_text(words_in));
        const auto table = empirical_word_probs(sample.symbols, sample.alphabet.size(), words_max);
        std::cout << "word,count,freq\n";
        for (std::size_t l = 1; l <= words_max; ++l)
            for (const auto& [w, c] : table.observed(l))
                std::cout << io::format_word(sample.alphabet, w) << ',' << c << ','
                          << io::format_double(table.frequency(w), 12) << '\n';
    });

    // belief
    std::string belief_in, belief_word;
    auto* belief_cmd = app.add_subcommand("belief", "Observer belief state after a word, with sync quantities");
    belief_cmd->add_option("machine", belief_in, "Machine file")->required();
    belief_cmd->add_option("word", belief_word, "Observed word (packed or space separated); omit for pi");
    belief_cmd->callback([&] {
        const Machine m = load_machine(belief_in);
        const Word w = io::parse_word(m.alphabet(), belief_word);
        const RowVector phi = belief_of_word(m, w);
        const auto q = sync_quantities(phi);
        const bool in_language = w.empty() || word_prob_stationary(m, w) > 0.0;
        std::cout << "belief      " << format_belief(phi) << '\n'
                  << "best state  " << q.best_state << '\n'
                  << "p_best      " << io::format_double(q.p_best, 12) << '\n'
                  << "doubt       " << io::format_double(q.doubt, 12) << '\n';
        if (!in_language) std::cout << "note        word has probability 0; belief is pi by convention\n";
    });

    // sync-profile
    std::string sync_in;
    DecayOptions decay;
    auto* sync_cmd = app.add_subcommand("sync-profile", "Monte Carlo doubt profile as CSV t,mean_Q,frac_exceed,frac_unsynced");
    sync_cmd->add_option("machine", sync_in, "Generator epsilon-machine")->required();
    sync_cmd->add_option("--horizon", decay.horizon, "Largest t")->capture_default_str();
    sync_cmd->add_option("--chains", decay.n_chains, "Number of independent observers")->capture_default_str();
    sync_cmd->add_option("--seed", decay.seed, "RNG seed")->required();
    sync_cmd->add_option("--alpha", decay.alpha, "Threshold base for frac_exceed (Q_t > alpha^t)")
        ->capture_default_str();
    sync_cmd->callback([&] {
        const auto est = estimate_decay(load_machine(sync_in), decay);
        std::cout << "t,mean_Q,frac_exceed,frac_unsynced\n";
        for (const auto& p : est.points)
            std::cout << p.t << ',' << io::format_double(p.mean_doubt, 12) << ','
                      << io::format_double(p.frac_exceed, 12) << ',' << io::format_double(p.frac_unsynced, 12)
                      << '\n';
        if (est.decay_rate)
            std::cerr << "decay rate " << io::format_double(*est.decay_rate, 8) << ", alpha_hat "
                      << io::format_double(*est.alpha_hat, 8) << '\n';
        else
            std::cerr << "decay rate undefined (fewer than two positive means)\n";
    });

    // reconstruct
    auto* recon_cmd = app.add_subcommand("reconstruct", "Build the history epsilon-machine");
    recon_cmd->require_subcommand(1);
    std::string ra_in, ra_out = "-", ra_report;
    AnalyticOptions ra;
    auto* ra_cmd = recon_cmd->add_subcommand("analytic", "From a machine, by belief-state closure");
    ra_cmd->add_option("machine", ra_in, "Source machine (need not be unifilar)")->required();
    ra_cmd->add_option("--depth", ra.depth, "Word depth explored")->capture_default_str();
    ra_cmd->add_option("--lfut", ra.l_fut, "Future length compared; 0 means 2N+2")->capture_default_str();
    ra_cmd->add_option("--tol", ra.tolerance, "Merge tolerance")->capture_default_str();
    ra_cmd->add_option("--cap", ra.class_cap, "Belief class cap")->capture_default_str();
    ra_cmd->add_option("-o,--out", ra_out, "Output machine")->capture_default_str();
    ra_cmd->add_option("--report", ra_report, "Report file (default: standard error)");
    ra_cmd->callback([&] {
        const auto r = reconstruct_analytic(load_machine(ra_in), ra);
        io::write_text(ra_out, io::serialize_machine(r.machine));
        emit_report(r.report, ra_report);
    });
    std::string re_in, re_out = "-", re_report;
    EmpiricalOptions re;
    auto* re_cmd = recon_cmd->add_subcommand("empirical", "From a sample, by context clustering");
    re_cmd->add_option("sample", re_in, "Sample file")->required();
    re_cmd->add_option("--lctx", re.l_ctx, "Context length")->capture_default_str();
    re_cmd->add_option("--lfut", re.l_fut, "Future length")->capture_default_str();
    re_cmd->add_option("--min-count", re.min_count, "Minimum context occurrences")->capture_default_str();
    re_cmd->add_option("--sig", re.significance, "Significance level of the clustering test")->capture_default_str();
    re_cmd->add_option("-o,--out", re_out, "Output machine")->capture_default_str();
    re_cmd->add_option("--report", re_report, "Report file (default: standard error)");
    re_cmd->callback([&] {
        const auto sample = io::parse_sample(io::read_text(re_in));
        const auto r = reconstruct_empirical(sample.alphabet, sample.symbols, re);
        io::write_text(re_out, io::serialize_machine(r.machine));
        emit_report(r.report, re_report);
    });

    // topology
    std::string topo_in, topo_out = "-", topo_emit = "dfa";
    auto* topo_cmd = app.add_subcommand("topology", "Probability-free presentations as labeled-graph files");
    topo_cmd->add_option("machine", topo_in, "Machine file")->required();
    topo_cmd->add_option("--emit", topo_emit, "essential | dfa | fischer | krieger")
        ->check(CLI::IsMember({"essential", "dfa", "fischer", "krieger"}))
        ->capture_default_str();
    topo_cmd->add_option("-o,--out", topo_out, "Output graph file")->capture_default_str();
    topo_cmd->callback([&] {
        const LabeledGraph essential = trim_essential(strip_probabilities(load_machine(topo_in)));
        LabeledGraph g;
        if (topo_emit == "essential") {
            g = essential;
        } else {
            const Dfa dfa = minimal_dfa(essential);
            if (topo_emit == "dfa")
                g = dfa_graph(dfa);
            else if (topo_emit == "fischer")
                g = fischer_cover(dfa);
            else
                g = krieger_states(dfa).graph;
            std::cerr << "dfa states: " << dfa.n_states << '\n';
            for (std::size_t s = 0; s < dfa.n_states; ++s) std::cerr << "  " << s << " = " << join_states(dfa.subsets[s]) << '\n';
        }
        io::write_text(topo_out, io::serialize_machine(as_unit_machine(g)));
    });

    // example
    std::string example_name, example_out = "-";
    std::vector<double> example_params;
    std::string names;
    for (const auto& n : examples::names()) names += (names.empty() ? "" : ", ") + n;
    auto* example_cmd = app.add_subcommand("example", "Write a built-in machine: " + names);
    example_cmd->add_option("name", example_name, "Example name")->required();
    example_cmd->add_option("params", example_params, "Parameters in (0,1)");
    example_cmd->add_option("-o,--out", example_out, "Output machine")->capture_default_str();
    example_cmd->callback([&] {
        io::write_text(example_out, io::serialize_machine(examples::by_name(example_name, example_params)));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const emach::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
    return status;
}
