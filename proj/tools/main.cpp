// idemlin: command-line front end for the idempotent linear algebra library.
//
// Subcommands: axioms, kernel extract, kernel decide, suite run, delta enum,
// app shortest-path, app viterbi, app conv.  Every command is a pure function
// of its input file and flags; outputs use stable key ordering so repeated
// runs are byte-identical.
//
// Exit codes: 0 success, 1 negative verdict (law violation, no kernel,
// kernel theorem fails, negative cycle), 2 input error, 3 internal
// inconsistency (suite violations or unexpected failure).

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "idemlin/apps.hpp"
#include "idemlin/axioms.hpp"
#include "idemlin/harness.hpp"
#include "idemlin/io.hpp"
#include "idemlin/nuclear.hpp"
#include "idemlin/operators.hpp"

namespace {

using nlohmann::json;
using namespace idemlin;

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

// Per-command flags shared across the subcommands.
struct Common {
    std::string format = "text";
    std::string out;
    std::uint64_t seed = 1;
    std::uint64_t cap = 1u << 20;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* cap_opt = nullptr;
};

void add_common(CLI::App* cmd, Common& c, std::uint64_t default_cap,
                const std::string& cap_desc) {
    c.cap = default_cap;
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    cmd->add_option("--out", c.out, "write the result to this file instead of stdout");
    c.seed_opt = cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
    c.cap_opt = cmd->add_option("--cap", c.cap, cap_desc)->capture_default_str();
}

// Writes the finished result to --out or stdout; diagnostics go to stderr.
int emit(const Common& c, const std::string& content) {
    if (c.out.empty()) {
        std::cout << content;
        return kExitOk;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
        std::cerr << "cannot open output file: " << c.out << "\n";
        return kExitInput;
    }
    f << content;
    f.flush();
    if (!f.good()) {
        std::cerr << "failed writing output file: " << c.out << "\n";
        return kExitInput;
    }
    return kExitOk;
}

// Maps the library's failure modes onto the documented exit codes.
int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NoKernelError& e) {
        std::cerr << "no kernel: " << e.what() << "\n";
        return kExitVerdict;
    } catch (const MaxKernelUndefined& e) {
        std::cerr << "no maximal kernel: " << e.what() << "\n";
        return kExitVerdict;
    } catch (const Unrepresentable& e) {
        std::cerr << "unrepresentable: " << e.what() << "\n";
        return kExitVerdict;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << " (raise --cap)\n";
        return kExitVerdict;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

std::string value_row_text(const Semiring& sr, const std::vector<SemiringValue>& vs) {
    std::string s = "(";
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) s += ", ";
        s += sr.describe_value(vs[i]);
    }
    s += ")";
    return s;
}

std::string kernel_text(const KernelMatrix& k) {
    std::ostringstream os;
    for (std::size_t x = 0; x < k.source->size(); ++x)
        os << "kernel " << k.source->labels[x] << ": "
           << value_row_text(k.sr, k.rows[x].values()) << "\n";
    return os.str();
}

json values_json(const std::vector<SemiringValue>& vs) {
    json a = json::array();
    for (const auto& v : vs) a.push_back(value_to_json(v));
    return a;
}

// ---------------------------------------------------------------- axioms ---

int cmd_axioms(const std::string& path, const Common& c) {
    Semiring sr = semiring_from_json(load_json_file(path), path);
    AxiomOptions opt;
    opt.sample_triples = c.cap;
    opt.seed = c.seed;
    LawReport rep = check_axioms(sr, opt);

    std::string body;
    if (c.format == "json") {
        json out;
        out["semiring"] = semiring_to_json(sr);
        out["exhaustive"] = rep.exhaustive;
        out["triples_checked"] = rep.triples_checked;
        out["ok"] = rep.ok();
        json vs = json::array();
        for (const auto& v : rep.violations)
            vs.push_back(json{{"law", v.law}, {"witness", values_json(v.witness)}});
        out["violations"] = vs;
        body = stable_dump(out);
    } else {
        std::ostringstream os;
        os << "semiring: " << sr.name() << "\n";
        os << "mode: " << (rep.exhaustive ? "exhaustive" : "sampled") << " ("
           << rep.triples_checked << " triples)\n";
        if (rep.ok()) {
            os << "result: all laws hold\n";
        } else {
            os << "result: " << rep.violations.size() << " law(s) violated\n";
            for (const auto& v : rep.violations)
                os << "  " << v.law << ": witness " << value_row_text(sr, v.witness)
                   << "\n";
        }
        body = os.str();
    }
    int rc = emit(c, body);
    if (rc != kExitOk) return rc;
    return rep.ok() ? kExitOk : kExitVerdict;
}

// -------------------------------------------------------- kernel extract ---

int cmd_kernel_extract(const std::string& path, const Common& c) {
    OperatorDoc doc = operator_doc_from_json(load_json_file(path), path);
    KernelMatrix k = [&] {
        if (doc.table) return max_kernel(*doc.table, c.cap);
        // Kernel-form operator on a full space that cannot be materialized
        // (rational semirings): extract through the impulse responses.
        const KernelMatrix& defining = *doc.kernel;
        const Semimodule& W = *doc.target;
        return max_kernel_full(
            [&](const FiniteFunction& f) { return apply_integral(defining, f, W); },
            doc.source->domain(), doc.source->semiring());
    }();

    std::string body = c.format == "json" ? stable_dump(kernel_to_json(k))
                                          : kernel_text(k);
    return emit(c, body);
}

// --------------------------------------------------------- kernel decide ---

int cmd_kernel_decide(const std::string& path, const Common& c) {
    SemimodulePtr V = semimodule_from_json(load_json_file(path), path);

    std::optional<KernelMatrix> k;
    if (V->is_full() && !V->materialized()) {
        // Full spaces always satisfy the kernel theorem; the identity's
        // kernel is the diagonal of impulses.
        std::vector<FiniteFunction> rows;
        for (std::size_t x = 0; x < V->domain()->size(); ++x)
            rows.push_back(impulse(V->domain(), V->semiring(), x));
        k = make_kernel(V->domain(), V->domain(), V->semiring(), std::move(rows));
    } else {
        k = integral_representation(identity_table(V), c.cap);
    }

    std::string body;
    if (c.format == "json") {
        json out;
        out["verdict"] = k ? "holds" : "fails";
        if (k) out["kernel"] = kernel_to_json(*k);
        body = stable_dump(out);
    } else {
        std::ostringstream os;
        if (k) {
            os << "verdict: holds\n" << kernel_text(*k);
        } else {
            os << "verdict: fails (the identity has no integral representation)\n";
        }
        body = os.str();
    }
    int rc = emit(c, body);
    if (rc != kExitOk) return rc;
    return k ? kExitOk : kExitVerdict;
}

// ------------------------------------------------------------- suite run ---

int cmd_suite_run(const std::string& path, const Common& c) {
    TrialConfig cfg = trial_config_from_json(load_json_file(path));
    if (c.seed_opt && c.seed_opt->count() > 0) cfg.seed = c.seed;
    if (c.cap_opt && c.cap_opt->count() > 0) cfg.enumeration_cap = c.cap;
    cfg.validate();

    std::vector<CheckReport> reports = run_checks(cfg);
    std::uint64_t total_violations = 0;
    for (const auto& r : reports) total_violations += r.violations.size();

    std::string body;
    if (c.format == "json") {
        body = report_to_json_lines(reports, cfg);
    } else {
        std::ostringstream os;
        std::uint64_t instances = 0, skipped = 0;
        for (const auto& r : reports) {
            os << check_name(r.check) << ": instances=" << r.instances
               << " skipped=" << r.skipped << " violations=" << r.violations.size()
               << " (" << r.wall_ms << " ms)\n";
            for (const auto& v : r.violations) os << "  violation: " << v.detail << "\n";
            instances += r.instances;
            skipped += r.skipped;
        }
        os << "total: instances=" << instances << " skipped=" << skipped
           << " violations=" << total_violations << "\n";
        body = os.str();
    }
    int rc = emit(c, body);
    if (rc != kExitOk) return rc;
    return total_violations == 0 ? kExitOk : kExitInternal;
}

// ------------------------------------------------------------ delta enum ---

int cmd_delta_enum(const std::string& path, const Common& c) {
    SemimodulePtr V = semimodule_from_json(load_json_file(path), path);
    if (!V->materialized())
        throw std::invalid_argument(
            "delta enumeration needs an enumerated carrier (full spaces over "
            "rational semirings are not supported)");

    DeltaSet ds = delta_set(V, c.cap);
    IDeltaReport rep = i_delta(V, c.cap);
    const Semiring& sr = V->semiring();

    auto functional_row = [&](const OperatorTable& phi) {
        std::vector<SemiringValue> row;
        for (std::size_t i = 0; i < V->size(); ++i) row.push_back(functional_value(phi, i));
        return row;
    };

    std::string body;
    if (c.format == "json") {
        json out;
        out["carrier_size"] = V->size();
        json deltas = json::array();
        for (const auto& d : ds.members)
            deltas.push_back(json{{"values", values_json(functional_row(d.phi))},
                                  {"witness", values_json(d.witness.values())}});
        out["deltas"] = deltas;
        json excluded = json::array();
        for (const auto& e : ds.excluded)
            excluded.push_back(json{{"values", values_json(functional_row(e.phi))},
                                    {"failing_element", values_json(e.failing_w.values())}});
        out["excluded"] = excluded;
        json idelta;
        idelta["points"] = rep.delta_points->labels;
        idelta["injective"] = rep.injective;
        idelta["join_preserving"] = rep.join_preserving;
        idelta["order_reflecting"] = rep.order_reflecting;
        idelta["embedding"] = rep.embedding;
        idelta["image_size"] = rep.image->size();
        json map_rows = json::array();
        for (std::size_t i = 0; i < V->size(); ++i)
            map_rows.push_back(values_json(rep.map.table[i].values()));
        idelta["map"] = map_rows;
        out["i_delta"] = idelta;
        body = stable_dump(out);
    } else {
        std::ostringstream os;
        os << "carrier: " << V->size() << " elements over " << sr.name() << ", |X| = "
           << V->domain()->size() << "\n";
        os << "delta functionals: " << ds.members.size() << " (plus "
           << ds.excluded.size() << " b-linear functionals excluded)\n";
        for (std::size_t i = 0; i < ds.members.size(); ++i)
            os << "  " << rep.delta_points->labels[i] << ": values "
               << value_row_text(sr, functional_row(ds.members[i].phi)) << "  witness "
               << value_row_text(sr, ds.members[i].witness.values()) << "\n";
        os << "i_delta: " << (rep.embedding ? "embedding" : "NOT an embedding")
           << " (injective=" << (rep.injective ? "yes" : "no")
           << ", join-preserving=" << (rep.join_preserving ? "yes" : "no")
           << ", order-reflecting=" << (rep.order_reflecting ? "yes" : "no")
           << "); image size " << rep.image->size() << "\n";
        body = os.str();
    }
    return emit(c, body);
}

// ---------------------------------------------------------- applications ---

int cmd_shortest_path(const std::string& path, const Common& c) {
    WeightedGraph g = graph_from_json(load_json_file(path), path);
    ShortestPathResult r;
    try {
        r = shortest_paths(g);
    } catch (const NegativeCycleError& e) {
        std::ostringstream os;
        os << "negative cycle reachable from source:";
        for (std::size_t i = 0; i < e.cycle.size(); ++i)
            os << (i ? " -> " : " ") << g.nodes.at(e.cycle[i]);
        std::cerr << os.str() << "\n";
        return kExitVerdict;
    }

    Semiring mp = Semiring::min_plus();
    std::string body;
    if (c.format == "json") {
        json out;
        out["iterations"] = r.iterations;
        json dist = json::array();
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            dist.push_back(json{{"node", g.nodes[i]}, {"value", value_to_json(r.dist[i])}});
        out["dist"] = dist;
        body = stable_dump(out);
    } else {
        std::ostringstream os;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            os << g.nodes[i] << ": ";
            if (r.dist[i].is_bottom()) {
                os << "unreachable";
            } else {
                os << mp.describe_value(r.dist[i]);
            }
            os << "\n";
        }
        os << "iterations: " << r.iterations << "\n";
        body = os.str();
    }
    return emit(c, body);
}

int cmd_viterbi(const std::string& path, const Common& c) {
    HmmSpec h = hmm_from_json(load_json_file(path), path);
    ViterbiResult r = viterbi(h);
    Semiring mp = Semiring::max_plus();

    std::string body;
    if (c.format == "json") {
        json out;
        json states = json::array();
        for (std::size_t s : r.path) states.push_back(h.states.at(s));
        out["path"] = states;
        out["score"] = value_to_json(r.score);
        body = stable_dump(out);
    } else {
        std::ostringstream os;
        os << "path:";
        for (std::size_t s : r.path) os << " " << h.states.at(s);
        os << "\n";
        os << "score: "
           << (r.score.is_bottom() ? std::string("impossible")
                                   : mp.describe_value(r.score))
           << "\n";
        body = os.str();
    }
    return emit(c, body);
}

int cmd_conv(const std::string& path, const Common& c) {
    json doc = load_json_file(path);
    if (!doc.is_object() || !doc.contains("semiring") || !doc.contains("p") ||
        !doc.contains("q"))
        throw ParseError(path + ": expected an object with semiring, p, and q");
    Semiring sr = semiring_from_json(doc.at("semiring"), path + ".semiring");
    auto read_list = [&](const char* key) {
        const json& arr = doc.at(key);
        if (!arr.is_array())
            throw ParseError(path + "." + key + ": expected an array of values");
        std::vector<SemiringValue> vs;
        for (std::size_t i = 0; i < arr.size(); ++i)
            vs.push_back(value_from_json(arr[i], sr,
                                         path + "." + key + "[" + std::to_string(i) + "]"));
        return vs;
    };
    std::vector<SemiringValue> p = read_list("p");
    std::vector<SemiringValue> q = read_list("q");
    std::vector<SemiringValue> r = tropical_convolution(sr, p, q);

    std::string body;
    if (c.format == "json") {
        json out;
        out["semiring"] = semiring_to_json(sr);
        out["result"] = values_json(r);
        body = stable_dump(out);
    } else {
        body = value_row_text(sr, r) + "\n";
    }
    return emit(c, body);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"idempotent (tropical) linear algebra toolkit"};
    app.require_subcommand(1);

    int rc = kExitOk;
    auto bind = [&rc](const std::function<int()>& body) {
        return [&rc, body] { rc = run_guarded(body); };
    };

    // axioms <semiring.json>
    static std::string axioms_path;
    static Common axioms_c;
    auto* axioms = app.add_subcommand("axioms", "check the semiring laws of an instance");
    axioms->add_option("input", axioms_path, "semiring spec JSON file")->required();
    add_common(axioms, axioms_c, 10000, "sampled triples on non-enumerable instances");
    axioms->callback(bind([] { return cmd_axioms(axioms_path, axioms_c); }));

    // kernel extract|decide
    auto* kernel = app.add_subcommand("kernel", "integral kernel operations");
    kernel->require_subcommand(1);

    static std::string kx_path;
    static Common kx_c;
    auto* extract = kernel->add_subcommand("extract", "maximal kernel of an operator");
    extract->add_option("input", kx_path, "operator JSON file")->required();
    add_common(extract, kx_c, 1u << 20, "kernel enumeration budget");
    extract->callback(bind([] { return cmd_kernel_extract(kx_path, kx_c); }));

    static std::string kd_path;
    static Common kd_c;
    auto* decide = kernel->add_subcommand(
        "decide", "decide whether the kernel theorem holds in a semimodule");
    decide->add_option("input", kd_path, "semimodule JSON file")->required();
    add_common(decide, kd_c, 1u << 20, "kernel enumeration budget");
    decide->callback(bind([] { return cmd_kernel_decide(kd_path, kd_c); }));

    // suite run
    auto* suite = app.add_subcommand("suite", "verification harness");
    suite->require_subcommand(1);

    static std::string suite_path;
    static Common suite_c;
    auto* run = suite->add_subcommand("run", "run the representation-theorem suite");
    run->add_option("input", suite_path, "trial config JSON file")->required();
    add_common(run, suite_c, 1u << 20, "override the config's enumeration cap");
    run->callback(bind([] { return cmd_suite_run(suite_path, suite_c); }));

    // delta enum
    auto* delta = app.add_subcommand("delta", "delta-functional analysis");
    delta->require_subcommand(1);

    static std::string delta_path;
    static Common delta_c;
    auto* denum = delta->add_subcommand(
        "enum", "enumerate delta-functionals and the i_delta embedding");
    denum->add_option("input", delta_path, "semimodule JSON file")->required();
    add_common(denum, delta_c, 1u << 20, "functional candidate budget");
    denum->callback(bind([] { return cmd_delta_enum(delta_path, delta_c); }));

    // app shortest-path|viterbi|conv
    auto* apps = app.add_subcommand("app", "semiring-parametric applications");
    apps->require_subcommand(1);

    static std::string sp_path;
    static Common sp_c;
    auto* sp = apps->add_subcommand("shortest-path",
                                    "single-source shortest paths (min-plus kernel)");
    sp->add_option("input", sp_path, "graph JSON file")->required();
    add_common(sp, sp_c, 1u << 20, "unused");
    sp->callback(bind([] { return cmd_shortest_path(sp_path, sp_c); }));

    static std::string vit_path;
    static Common vit_c;
    auto* vit = apps->add_subcommand("viterbi",
                                     "most probable state path (max-plus kernel)");
    vit->add_option("input", vit_path, "HMM JSON file")->required();
    add_common(vit, vit_c, 1u << 20, "unused");
    vit->callback(bind([] { return cmd_viterbi(vit_path, vit_c); }));

    static std::string conv_path;
    static Common conv_c;
    auto* conv = apps->add_subcommand("conv", "tropical convolution of coefficient lists");
    conv->add_option("input", conv_path, "convolution JSON file ({semiring, p, q})")
        ->required();
    add_common(conv, conv_c, 1u << 20, "unused");
    conv->callback(bind([] { return cmd_conv(conv_path, conv_c); }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }
    return rc;
}
