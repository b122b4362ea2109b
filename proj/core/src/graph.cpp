#include "rpq/graph.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace rpq {

SymbolId Database::declare_symbol(const std::string& name) {
    alphabet_declared_ = true;
    auto it = symbol_index_.find(name);
    if (it != symbol_index_.end())
        return it->second;
    SymbolId id = static_cast<SymbolId>(symbol_names_.size());
    symbol_names_.push_back(name);
    symbol_index_.emplace(name, id);
    return id;
}

SymbolId Database::intern_symbol(const std::string& name) {
    auto it = symbol_index_.find(name);
    if (it != symbol_index_.end())
        return it->second;
    if (alphabet_declared_)
        throw PreconditionError("label '" + name + "' is not in the declared alphabet");
    SymbolId id = static_cast<SymbolId>(symbol_names_.size());
    symbol_names_.push_back(name);
    symbol_index_.emplace(name, id);
    return id;
}

VertexId Database::add_vertex(const std::string& name) {
    if (vertex_index_.count(name))
        throw PreconditionError("duplicate vertex '" + name + "'");
    VertexId id = static_cast<VertexId>(vertex_names_.size());
    vertex_names_.push_back(name);
    vertex_index_.emplace(name, id);
    out_.emplace_back();
    in_.emplace_back();
    return id;
}

VertexId Database::ensure_vertex(const std::string& name) {
    auto it = vertex_index_.find(name);
    if (it != vertex_index_.end())
        return it->second;
    return add_vertex(name);
}

EdgeId Database::add_edge(const std::string& id, VertexId src, VertexId tgt,
                          std::vector<SymbolId> labels) {
    if (edge_index_.count(id))
        throw PreconditionError("duplicate edge id '" + id + "'");
    if (labels.empty())
        throw PreconditionError("edge '" + id + "' has no label");
    if (src >= vertex_count() || tgt >= vertex_count())
        throw PreconditionError("edge '" + id + "' references an unknown vertex");
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    EdgeId e = static_cast<EdgeId>(edge_ids_.size());
    edge_ids_.push_back(id);
    edge_index_.emplace(id, e);
    edge_src_.push_back(src);
    edge_tgt_.push_back(tgt);
    edge_labels_.push_back(std::move(labels));
    out_[src].push_back(e);
    in_[tgt].push_back(e);
    return e;
}

std::optional<VertexId> Database::find_vertex(std::string_view name) const {
    auto it = vertex_index_.find(std::string(name));
    if (it == vertex_index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<EdgeId> Database::find_edge(std::string_view id) const {
    auto it = edge_index_.find(std::string(id));
    if (it == edge_index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<SymbolId> Database::find_symbol(std::string_view name) const {
    auto it = symbol_index_.find(std::string(name));
    if (it == symbol_index_.end())
        return std::nullopt;
    return it->second;
}

VertexId Database::vertex(std::string_view name) const {
    auto v = find_vertex(name);
    if (!v)
        throw PreconditionError("unknown vertex '" + std::string(name) + "'");
    return *v;
}

bool Database::edge_has_label(EdgeId e, SymbolId s) const {
    const auto& labels = edge_labels_[e];
    return std::binary_search(labels.begin(), labels.end(), s);
}

Walk Walk::at(VertexId v) {
    return Walk({v}, {});
}

Walk Walk::from_edges(const Database& db, VertexId start, std::vector<EdgeId> edges) {
    if (start >= db.vertex_count())
        throw PreconditionError("walk starts at an unknown vertex");
    std::vector<VertexId> vertices;
    vertices.reserve(edges.size() + 1);
    vertices.push_back(start);
    VertexId cur = start;
    for (EdgeId e : edges) {
        if (e >= db.edge_count())
            throw PreconditionError("walk references an unknown edge");
        if (db.edge_src(e) != cur)
            throw PreconditionError("walk edge '" + db.edge_id(e) +
                                    "' does not start at the current vertex");
        cur = db.edge_tgt(e);
        vertices.push_back(cur);
    }
    return Walk(std::move(vertices), std::move(edges));
}

bool Walk::operator<(const Walk& other) const {
    if (edges_.size() != other.edges_.size())
        return edges_.size() < other.edges_.size();
    if (edges_ != other.edges_)
        return edges_ < other.edges_;
    return vertices_.front() < other.vertices_.front();
}

std::uint64_t total_multiplicity(const WalkBag& bag) {
    std::uint64_t total = 0;
    for (const auto& entry : bag)
        total += entry.multiplicity;
    return total;
}

bool is_trail(const Walk& w) {
    std::unordered_set<EdgeId> seen;
    for (EdgeId e : w.edges())
        if (!seen.insert(e).second)
            return false;
    return true;
}

bool is_simple(const Walk& w) {
    std::unordered_set<VertexId> seen;
    for (VertexId v : w.vertices())
        if (!seen.insert(v).second)
            return false;
    return true;
}

void ensure_walk_valid(const Database& db, const Walk& w) {
    if (w.src() >= db.vertex_count())
        throw PreconditionError("walk is not a walk of this database");
    for (std::size_t i = 0; i < w.length(); ++i) {
        EdgeId e = w.edges()[i];
        if (e >= db.edge_count() || db.edge_src(e) != w.vertices()[i] ||
            db.edge_tgt(e) != w.vertices()[i + 1])
            throw PreconditionError("walk is not a walk of this database");
    }
}

bool walk_label_contains(const Database& db, const Walk& w,
                         const std::vector<SymbolId>& word) {
    if (word.size() != w.length())
        return false;
    for (std::size_t i = 0; i < word.size(); ++i)
        if (!db.edge_has_label(w.edges()[i], word[i]))
            return false;
    return true;
}

bool walk_label_contains(const Database& db, const Walk& w,
                         const std::vector<std::string>& word) {
    if (word.size() != w.length())
        return false;
    std::vector<SymbolId> ids;
    ids.reserve(word.size());
    for (const auto& name : word) {
        auto s = db.find_symbol(name);
        if (!s)
            return false;
        ids.push_back(*s);
    }
    return walk_label_contains(db, w, ids);
}

Walk concat(const Walk& w, const Walk& w2) {
    if (w.tgt() != w2.src())
        throw PreconditionError("cannot concatenate walks with mismatched endpoints");
    std::vector<EdgeId> edges = w.edges();
    edges.insert(edges.end(), w2.edges().begin(), w2.edges().end());
    std::vector<VertexId> vertices = w.vertices();
    vertices.insert(vertices.end(), w2.vertices().begin() + 1, w2.vertices().end());
    return Walk(std::move(vertices), std::move(edges));
}

namespace {

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            tokens.emplace_back(line.substr(start, i - start));
    }
    return tokens;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return parts;
}

} // namespace

Database parse_database(std::string_view text) {
    Database db;
    struct PendingEdge {
        std::size_t line;
        std::string id, src, tgt;
        std::vector<std::string> labels;
    };
    std::vector<PendingEdge> pending;
    bool explicit_vertices = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        auto tokens = split_ws(line);
        if (tokens.empty()) {
            if (eol == text.size())
                break;
            continue;
        }
        const std::string& kind = tokens[0];
        if (kind == "alphabet") {
            if (tokens.size() < 2)
                throw ParseError(line_no, "alphabet line needs at least one symbol");
            for (std::size_t i = 1; i < tokens.size(); ++i)
                db.declare_symbol(tokens[i]);
        } else if (kind == "vertex") {
            if (tokens.size() != 2)
                throw ParseError(line_no, "expected: vertex <name>");
            explicit_vertices = true;
            if (db.find_vertex(tokens[1]))
                throw ParseError(line_no, "duplicate vertex '" + tokens[1] + "'");
            db.add_vertex(tokens[1]);
        } else if (kind == "edge") {
            if (tokens.size() != 5)
                throw ParseError(line_no, "expected: edge <id> <src> <tgt> <labels>");
            PendingEdge e;
            e.line = line_no;
            e.id = tokens[1];
            e.src = tokens[2];
            e.tgt = tokens[3];
            e.labels = split_commas(tokens[4]);
            for (const auto& label : e.labels)
                if (label.empty())
                    throw ParseError(line_no, "empty label in edge '" + e.id + "'");
            pending.push_back(std::move(e));
        } else {
            throw ParseError(line_no, "unknown record '" + kind + "'");
        }
        if (eol == text.size())
            break;
    }

    for (auto& e : pending) {
        VertexId src, tgt;
        if (explicit_vertices) {
            auto s = db.find_vertex(e.src);
            auto t = db.find_vertex(e.tgt);
            if (!s)
                throw ParseError(e.line, "edge '" + e.id + "' references undeclared vertex '" + e.src + "'");
            if (!t)
                throw ParseError(e.line, "edge '" + e.id + "' references undeclared vertex '" + e.tgt + "'");
            src = *s;
            tgt = *t;
        } else {
            src = db.ensure_vertex(e.src);
            tgt = db.ensure_vertex(e.tgt);
        }
        std::vector<SymbolId> labels;
        labels.reserve(e.labels.size());
        try {
            for (const auto& label : e.labels)
                labels.push_back(db.intern_symbol(label));
            db.add_edge(e.id, src, tgt, std::move(labels));
        } catch (const PreconditionError& err) {
            throw ParseError(e.line, err.what());
        }
    }
    return db;
}

std::string serialize_database(const Database& db) {
    std::ostringstream out;
    if (db.symbol_count() > 0) {
        out << "alphabet";
        for (SymbolId s = 0; s < db.symbol_count(); ++s)
            out << ' ' << db.symbol_name(s);
        out << '\n';
    }
    for (VertexId v = 0; v < db.vertex_count(); ++v)
        out << "vertex " << db.vertex_name(v) << '\n';
    for (EdgeId e = 0; e < db.edge_count(); ++e) {
        out << "edge " << db.edge_id(e) << ' ' << db.vertex_name(db.edge_src(e)) << ' '
            << db.vertex_name(db.edge_tgt(e)) << ' ';
        const auto& labels = db.edge_labels(e);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (i > 0)
                out << ',';
            out << db.symbol_name(labels[i]);
        }
        out << '\n';
    }
    return out.str();
}

Walk parse_walk(const Database& db, std::string_view text) {
    auto tokens = split_ws(text);
    if (tokens.empty())
        throw ParseError(1, "empty walk");
    auto v = db.find_vertex(tokens[0]);
    if (!v)
        throw ParseError(1, "unknown vertex '" + tokens[0] + "'");
    std::vector<EdgeId> edges;
    std::size_t i = 1;
    while (i < tokens.size()) {
        const std::string& arrow = tokens[i];
        if (arrow.size() < 4 || arrow.substr(0, 1) != "-" ||
            arrow.substr(arrow.size() - 2) != "->")
            throw ParseError(1, "expected '-<edge>->' but got '" + arrow + "'");
        std::string edge_name = arrow.substr(1, arrow.size() - 3);
        auto e = db.find_edge(edge_name);
        if (!e)
            throw ParseError(1, "unknown edge '" + edge_name + "'");
        edges.push_back(*e);
        if (i + 1 >= tokens.size())
            throw ParseError(1, "walk ends with a dangling edge");
        const std::string& vertex_name = tokens[i + 1];
        if (db.vertex_name(db.edge_tgt(*e)) != vertex_name)
            throw ParseError(1, "edge '" + edge_name + "' does not lead to '" + vertex_name + "'");
        i += 2;
    }
    try {
        return Walk::from_edges(db, *v, std::move(edges));
    } catch (const PreconditionError& err) {
        throw ParseError(1, err.what());
    }
}

std::string serialize_walk(const Database& db, const Walk& w) {
    std::ostringstream out;
    out << db.vertex_name(w.src());
    for (std::size_t i = 0; i < w.length(); ++i)
        out << " -" << db.edge_id(w.edges()[i]) << "-> "
            << db.vertex_name(w.vertices()[i + 1]);
    return out.str();
}

} // namespace rpq
