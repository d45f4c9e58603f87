#include "eulersparse/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace eulersparse {

void write_tsv(std::ostream& os, const DirectedMultigraph& g) {
    os << "# directed-eulerian n=" << g.vertex_count() << " m=" << g.edge_count() << "\n";
    for (const Edge& e : g.edges()) os << e.tail << "\t" << e.head << "\t" << e.weight << "\n";
}

void write_tsv_file(const std::string& path, const DirectedMultigraph& g) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path);
    write_tsv(os, g);
    if (!os.flush()) throw Error("write failed: " + path);
}

DirectedMultigraph read_tsv(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw ParseError("empty input, expected graph header");
    long long n = -1, m = -1;
    if (std::sscanf(header.c_str(), "# directed-eulerian n=%lld m=%lld", &n, &m) != 2)
        throw ParseError("bad header: '" + header + "'");
    if (n < 0 || m < 0) throw ParseError("negative n or m in header");
    DirectedMultigraph g(static_cast<Vertex>(n));
    std::string line;
    long long count = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        long long tail, head;
        unsigned long long weight;
        if (std::sscanf(line.c_str(), "%lld\t%lld\t%llu", &tail, &head, &weight) != 3)
            throw ParseError("bad edge line: '" + line + "'");
        g.add_edge(static_cast<Vertex>(tail), static_cast<Vertex>(head), weight);
        ++count;
    }
    if (count != m)
        throw ParseError("header says m=" + std::to_string(m) + " but file has " +
                         std::to_string(count) + " edges");
    return g;
}

DirectedMultigraph read_tsv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open: " + path);
    return read_tsv(is);
}

static nlohmann::json to_json(const RealDigraph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const RealEdge& e : g.edges) edges.push_back({e.tail, e.head, e.weight});
    return {{"format", "directed-eulerian-real"}, {"n", g.n}, {"edges", std::move(edges)}};
}

std::string json_graph_string(const RealDigraph& g) { return to_json(g).dump(); }

void write_json_graph_file(const std::string& path, const RealDigraph& g) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path);
    os << to_json(g).dump(2) << "\n";
    if (!os.flush()) throw Error("write failed: " + path);
}

static RealDigraph real_from_json(const nlohmann::json& j) try {
    if (!j.is_object() || j.value("format", "") != std::string("directed-eulerian-real"))
        throw ParseError("not a directed-eulerian-real JSON graph");
    RealDigraph g;
    g.n = j.at("n").get<Vertex>();
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3) throw ParseError("edge entries must be [tail, head, weight]");
        RealEdge re{e[0].get<Vertex>(), e[1].get<Vertex>(), e[2].get<double>()};
        if (re.tail < 0 || re.tail >= g.n || re.head < 0 || re.head >= g.n)
            throw ParseError("edge endpoint out of range in JSON graph");
        if (re.tail == re.head) throw ParseError("self-loop in JSON graph");
        if (!(re.weight > 0.0)) throw ParseError("non-positive weight in JSON graph");
        g.edges.push_back(re);
    }
    return g;
} catch (const nlohmann::json::exception& e) {
    // Missing keys or wrong element types come out of nlohmann; map them to
    // the library's parse failure so callers see one exception type.
    throw ParseError(std::string("malformed JSON graph: ") + e.what());
}

RealDigraph read_json_graph_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open: " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return real_from_json(j);
}

RealDigraph load_real_graph(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open: " + path);
    char first = 0;
    is >> std::ws;
    first = static_cast<char>(is.peek());
    is.seekg(0);
    if (first == '{') {
        nlohmann::json j;
        try {
            is >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("invalid JSON in " + path + ": " + e.what());
        }
        return real_from_json(j);
    }
    return to_real(read_tsv(is));
}

}  // namespace eulersparse
