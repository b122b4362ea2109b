#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rpq/product.hpp"
#include "rpq/sat.hpp"
#include "rpq/semantics.hpp"
#include "rpq/topo.hpp"

namespace rpq::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw PreconditionError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw PreconditionError("cannot write '" + path + "'");
    out << content;
}

std::vector<std::string> split_word(const std::string& text) {
    std::vector<std::string> letters;
    std::istringstream in(text);
    std::string letter;
    while (in >> letter)
        letters.push_back(letter);
    return letters;
}

struct QueryFlags {
    std::string regex_text;
    std::string automaton_path;

    Query load() const {
        if (regex_text.empty() == automaton_path.empty())
            throw PreconditionError("give exactly one of --query and --automaton");
        if (!regex_text.empty())
            return Query::from_regex(parse_regex(regex_text));
        return Query::from_automaton(parse_automaton(read_file(automaton_path)));
    }
};

SemanticsMode parse_mode(const std::string& name) {
    auto mode = semantics_from_string(name);
    if (!mode)
        throw PreconditionError("unknown semantics '" + name +
                                "' (walk, trail, simple-walk, trail-run, simple-run, "
                                "binding-trail)");
    return *mode;
}

void add_query_flags(CLI::App* cmd, QueryFlags& flags) {
    cmd->add_option("--query", flags.regex_text, "query as a regular expression");
    cmd->add_option("--automaton", flags.automaton_path, "query as an automaton file");
}

nlohmann::json entry_json(const Database& db, const WalkBagEntry& entry) {
    nlohmann::json j;
    j["multiplicity"] = entry.multiplicity;
    j["length"] = entry.walk.length();
    auto& vertices = j["vertices"] = nlohmann::json::array();
    for (VertexId v : entry.walk.vertices())
        vertices.push_back(db.vertex_name(v));
    auto& edges = j["edges"] = nlohmann::json::array();
    for (EdgeId e : entry.walk.edges())
        edges.push_back(db.edge_id(e));
    return j;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& arg : args)
        argv.push_back(arg.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Regular-path-query engine over edge-labelled multigraphs"};
    app.require_subcommand(1);

    std::string graph_path, sem_name = "simple-run";
    std::string from_name, to_name;
    QueryFlags query_flags;
    Guards guards;
    std::optional<std::size_t> max_length;
    bool dedup = false, json_output = false, trace_delay = false;

    auto add_common = [&](CLI::App* cmd, bool with_endpoints) {
        cmd->add_option("--graph", graph_path, "graph database file")->required();
        add_query_flags(cmd, query_flags);
        cmd->add_option("--sem", sem_name, "semantics mode");
        if (with_endpoints) {
            cmd->add_option("--from", from_name, "source vertex");
            cmd->add_option("--to", to_name, "target vertex");
        }
        cmd->add_option("--guard-product-vertices", guards.max_product_vertices,
                        "bound on product vertices for exhaustive modes");
        cmd->add_option("--guard-group-buffer", guards.max_group_buffer,
                        "bound on walks buffered per length class");
    };

    CLI::App* eval = app.add_subcommand("eval", "enumerate the result bag");
    add_common(eval, true);
    eval->add_option("--max-length", max_length,
                     "length cap (required under walk semantics)");
    eval->add_flag("--dedup", dedup, "print each distinct walk once, without multiplicity");
    eval->add_flag("--json", json_output, "structured record stream");
    eval->add_flag("--trace-delay", trace_delay,
                   "report enumeration operations between emissions on stderr");

    CLI::App* member = app.add_subcommand("member", "tuple membership between two vertices");
    add_common(member, true);

    CLI::App* count = app.add_subcommand("count", "tuple multiplicity between two vertices");
    add_common(count, true);

    CLI::App* walk_member = app.add_subcommand("walk-member", "membership of a given walk");
    add_common(walk_member, false);
    std::string walk_path, walk_text;
    walk_member->add_option("--walk", walk_path, "walk file (v0 -e0-> v1 ... format)");
    walk_member->add_option("--walk-text", walk_text, "walk given inline");

    CLI::App* gen_sat = app.add_subcommand("gen-sat", "emit the 3-SAT reduction instance");
    std::string cnf_path, out_graph, out_walk;
    gen_sat->add_option("--cnf", cnf_path, "DIMACS CNF input (3 literals per clause)")
        ->required();
    gen_sat->add_option("--out-graph", out_graph, "where to write the database");
    gen_sat->add_option("--out-walk", out_walk, "where to write the walk");

    CLI::App* encode = app.add_subcommand(
        "encode", "expression whose position automaton encodes an automaton");
    std::string encode_automaton, encode_word_text;
    bool no_union = false;
    encode->add_option("--automaton", encode_automaton, "automaton file")->required();
    CLI::Option* word_option =
        encode->add_option("--word", encode_word_text, "word to encode (space-separated)");
    encode->add_flag("--no-union", no_union, "use the union-free encoding");

    CLI::App* product_dump = app.add_subcommand("product-dump", "dump the run database");
    add_common(product_dump, false);

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (app.got_subcommand(eval) || app.got_subcommand(member) ||
            app.got_subcommand(count) || app.got_subcommand(walk_member) ||
            app.got_subcommand(product_dump)) {
            Database db = parse_database(read_file(graph_path));
            Query query = query_flags.load();
            SemanticsMode mode = parse_mode(sem_name);

            if (app.got_subcommand(product_dump)) {
                out << RunDatabase::build(db, query.automaton()).dump();
                return kOk;
            }
            if (app.got_subcommand(walk_member)) {
                if (walk_path.empty() == walk_text.empty())
                    throw PreconditionError("give exactly one of --walk and --walk-text");
                std::string text = walk_text.empty() ? read_file(walk_path) : walk_text;
                // A walk file may carry trailing newlines; take the first line.
                if (auto eol = text.find('\n'); eol != std::string::npos)
                    text = text.substr(0, eol);
                Walk w = parse_walk(db, text);
                bool ok = walk_membership(db, query, w, mode);
                out << (ok ? "true" : "false") << "\n";
                return ok ? kOk : kNegative;
            }

            std::optional<std::pair<VertexId, VertexId>> endpoints;
            if (!from_name.empty() || !to_name.empty()) {
                if (from_name.empty() || to_name.empty())
                    throw PreconditionError("--from and --to go together");
                endpoints = {db.vertex(from_name), db.vertex(to_name)};
            }

            if (app.got_subcommand(member)) {
                if (!endpoints)
                    throw PreconditionError("member needs --from and --to");
                bool ok = tuple_membership(db, query, endpoints->first, endpoints->second,
                                           mode, guards);
                out << (ok ? "true" : "false") << "\n";
                return ok ? kOk : kNegative;
            }
            if (app.got_subcommand(count)) {
                if (!endpoints)
                    throw PreconditionError("count needs --from and --to");
                out << tuple_multiplicity(db, query, endpoints->first, endpoints->second,
                                          mode, guards)
                    << "\n";
                return kOk;
            }

            EvalStream stream = evaluate(db, query, mode, endpoints, guards, max_length);
            while (auto entry = stream.next()) {
                if (json_output) {
                    auto j = entry_json(db, *entry);
                    if (dedup)
                        j.erase("multiplicity");
                    out << j.dump() << "\n";
                } else if (dedup) {
                    out << serialize_walk(db, entry->walk) << "\n";
                } else {
                    out << entry->multiplicity << "\t" << serialize_walk(db, entry->walk)
                        << "\n";
                }
                if (trace_delay)
                    err << "# delay-ops " << stream.last_delay_ops() << "\n";
            }
            return kOk;
        }

        if (app.got_subcommand(gen_sat)) {
            SatInstance inst = parse_dimacs(read_file(cnf_path));
            auto [db, walk] = build_reduction(inst);
            std::string graph_text = serialize_database(db);
            std::string walk_text_out = serialize_walk(db, walk) + "\n";
            if (out_graph.empty())
                out << graph_text;
            else
                write_file(out_graph, graph_text);
            if (out_walk.empty())
                out << walk_text_out;
            else
                write_file(out_walk, walk_text_out);
            return kOk;
        }

        if (app.got_subcommand(encode)) {
            Automaton a = parse_automaton(read_file(encode_automaton));
            bool have_word = word_option->count() > 0;
            if (no_union) {
                if (!have_word) {
                    out << serialize_regex(coding_expression_no_union(a)) << "\n";
                } else {
                    auto word = no_union_encode_word(a, split_word(encode_word_text));
                    for (std::size_t i = 0; i < word.size(); ++i)
                        out << (i ? " " : "") << word[i];
                    out << "\n";
                }
            } else {
                auto [expr, witness] = coding_expression(a);
                if (!have_word) {
                    out << serialize_regex(expr) << "\n";
                } else {
                    auto word = encode_word(witness, split_word(encode_word_text));
                    for (std::size_t i = 0; i < word.size(); ++i)
                        out << (i ? " " : "") << word[i];
                    out << "\n";
                }
            }
            return kOk;
        }
    } catch (const GuardError& e) {
        err << "guard: " << e.what() << "\n";
        return kGuard;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

} // namespace rpq::cli
