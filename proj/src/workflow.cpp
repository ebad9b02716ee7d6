#include "fuzzysched/workflow.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "fuzzysched/error.hpp"

namespace fuzzysched {

namespace pt = boost::property_tree;

Workflow::Workflow(std::string name, std::vector<Task> tasks, std::vector<DataDependency> edges)
    : name_(std::move(name)), tasks_(std::move(tasks)) {
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        tasks_[i].index = i;
    }
    // Merge parallel dependencies, keeping first-seen order.
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
    for (const auto& e : edges) {
        auto [it, inserted] = seen.try_emplace({e.from, e.to}, edges_.size());
        if (inserted) {
            edges_.push_back(e);
        } else {
            edges_[it->second].size_bytes += e.size_bytes;
        }
    }
    in_.resize(tasks_.size());
    out_.resize(tasks_.size());
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const auto& e = edges_[k];
        if (e.from < tasks_.size() && e.to < tasks_.size()) {
            out_[e.from].push_back(k);
            in_[e.to].push_back(k);
        }
    }
}

namespace {

// Returns a witness cycle (task indices, first == last) or empty.
std::vector<std::size_t> find_cycle(const Workflow& w) {
    enum class Mark { White, Grey, Black };
    std::vector<Mark> mark(w.size(), Mark::White);
    std::vector<std::size_t> parent(w.size(), 0);
    std::vector<std::size_t> cycle;

    for (std::size_t root = 0; root < w.size() && cycle.empty(); ++root) {
        if (mark[root] != Mark::White) continue;
        // Iterative DFS: stack of (vertex, next out-edge position).
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        mark[root] = Mark::Grey;
        while (!stack.empty() && cycle.empty()) {
            auto& [v, pos] = stack.back();
            auto outs = w.out_edges(v);
            if (pos == outs.size()) {
                mark[v] = Mark::Black;
                stack.pop_back();
                continue;
            }
            const std::size_t u = w.edges()[outs[pos++]].to;
            if (mark[u] == Mark::Grey) {
                cycle.push_back(u);
                for (std::size_t x = v; x != u; x = parent[x]) cycle.push_back(x);
                cycle.push_back(u);
                std::reverse(cycle.begin(), cycle.end());
            } else if (mark[u] == Mark::White) {
                mark[u] = Mark::Grey;
                parent[u] = v;
                stack.emplace_back(u, 0);
            }
        }
    }
    return cycle;
}

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::MalformedDocument, std::string("bad ") + what + " value '" + s + "'");
    }
}

std::int64_t parse_int(const std::string& s, const char* what) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        // Some generators write sizes as floats.
        return static_cast<std::int64_t>(parse_double(s, what));
    }
    return v;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::FileNotFound, path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

void validate(const Workflow& w) {
    for (const auto& e : w.edges()) {
        if (e.from >= w.size() || e.to >= w.size()) {
            std::ostringstream msg;
            msg << "edge " << e.from << "->" << e.to << " outside [0," << w.size() << ")";
            throw Error(ErrorKind::IndexOutOfRange, msg.str());
        }
    }
    for (const auto& t : w.tasks()) {
        if (!(t.reference_runtime > 0.0)) {
            throw Error(ErrorKind::NonPositiveRuntime,
                        "task " + t.id + " has runtime " + std::to_string(t.reference_runtime));
        }
    }
    if (auto cycle = find_cycle(w); !cycle.empty()) {
        std::string msg = "cycle ";
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            if (i) msg += " -> ";
            msg += w.task(cycle[i]).id;
        }
        throw Error(ErrorKind::CycleDetected, msg);
    }
}

std::vector<std::size_t> topological_order(const Workflow& w) {
    std::vector<std::size_t> indegree(w.size(), 0);
    for (std::size_t v = 0; v < w.size(); ++v) indegree[v] = w.in_edges(v).size();

    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t v = 0; v < w.size(); ++v) {
        if (indegree[v] == 0) ready.push(v);
    }
    std::vector<std::size_t> order;
    order.reserve(w.size());
    while (!ready.empty()) {
        const std::size_t v = ready.top();
        ready.pop();
        order.push_back(v);
        for (std::size_t k : w.out_edges(v)) {
            if (--indegree[w.edges()[k].to] == 0) ready.push(w.edges()[k].to);
        }
    }
    if (order.size() != w.size()) {
        validate(w);  // reports the witness
        throw Error(ErrorKind::CycleDetected, "workflow " + w.name() + " is not acyclic");
    }
    return order;
}

Workflow parse_dax(std::string_view document, std::string fallback_name) {
    pt::ptree doc;
    try {
        std::istringstream in{std::string(document)};
        pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw Error(ErrorKind::MalformedDocument, e.what());
    }
    auto adag = doc.get_child_optional("adag");
    if (!adag) {
        throw Error(ErrorKind::MalformedDocument, "missing <adag> root element");
    }
    std::string name = adag->get("<xmlattr>.name", fallback_name);

    struct FileUse {
        std::uint64_t size = 0;
        bool read = false;
        bool written = false;
    };
    std::vector<Task> tasks;
    std::unordered_map<std::string, std::size_t> by_id;
    std::vector<std::map<std::string, FileUse>> uses;

    for (const auto& [key, node] : *adag) {
        if (key != "job") continue;
        auto id = node.get_optional<std::string>("<xmlattr>.id");
        auto runtime = node.get_optional<std::string>("<xmlattr>.runtime");
        if (!id || !runtime) {
            throw Error(ErrorKind::MalformedDocument, "<job> needs id and runtime attributes");
        }
        if (by_id.count(*id)) {
            throw Error(ErrorKind::MalformedDocument, "duplicate job id " + *id);
        }
        by_id.emplace(*id, tasks.size());
        tasks.push_back({*id, tasks.size(), parse_double(*runtime, "runtime")});

        std::map<std::string, FileUse> files;
        for (const auto& [ukey, use] : node) {
            if (ukey != "uses") continue;
            auto file = use.get_optional<std::string>("<xmlattr>.file");
            if (!file) file = use.get_optional<std::string>("<xmlattr>.name");
            if (!file) {
                throw Error(ErrorKind::MalformedDocument, "<uses> without file name in job " + *id);
            }
            const std::int64_t size = parse_int(use.get("<xmlattr>.size", std::string("0")), "size");
            if (size < 0) {
                throw Error(ErrorKind::NegativeSize, "file " + *file + " in job " + *id);
            }
            const std::string link = use.get("<xmlattr>.link", std::string("input"));
            auto& slot = files[*file];
            slot.size = std::max(slot.size, static_cast<std::uint64_t>(size));
            slot.read = slot.read || link == "input" || link == "inout";
            slot.written = slot.written || link == "output" || link == "inout";
        }
        uses.push_back(std::move(files));
    }

    auto lookup = [&](const std::string& ref) {
        auto it = by_id.find(ref);
        if (it == by_id.end()) {
            throw Error(ErrorKind::UnknownJobReference, "no job with id '" + ref + "'");
        }
        return it->second;
    };

    std::vector<DataDependency> edges;
    std::set<std::pair<std::size_t, std::size_t>> declared;
    for (const auto& [key, node] : *adag) {
        if (key != "child") continue;
        const std::size_t child = lookup(node.get<std::string>("<xmlattr>.ref", ""));
        for (const auto& [pkey, pnode] : node) {
            if (pkey != "parent") continue;
            const std::size_t parent = lookup(pnode.get<std::string>("<xmlattr>.ref", ""));
            if (!declared.insert({parent, child}).second) continue;
            std::uint64_t bytes = 0;
            for (const auto& [file, use] : uses[parent]) {
                if (!use.written) continue;
                auto in = uses[child].find(file);
                if (in != uses[child].end() && in->second.read) bytes += use.size;
            }
            edges.push_back({parent, child, bytes});
        }
    }
    return Workflow(std::move(name), std::move(tasks), std::move(edges));
}

Workflow load_dax(const std::filesystem::path& path) {
    return parse_dax(read_file(path), path.stem().string());
}

std::string write_dax(const Workflow& w) {
    std::ostringstream out;
    out.precision(17);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<adag xmlns=\"http://pegasus.isi.edu/schema/DAX\" version=\"3.6\" name=\"" << w.name()
        << "\" jobCount=\"" << w.size() << "\" childCount=\"" << w.edges().size() << "\">\n";
    for (const auto& t : w.tasks()) {
        out << "  <job id=\"" << t.id << "\" name=\"" << t.id << "\" runtime=\"" << t.reference_runtime
            << "\">\n";
        for (std::size_t k : w.in_edges(t.index)) {
            out << "    <uses file=\"d" << k << ".dat\" link=\"input\" size=\"" << w.edges()[k].size_bytes
                << "\"/>\n";
        }
        for (std::size_t k : w.out_edges(t.index)) {
            out << "    <uses file=\"d" << k << ".dat\" link=\"output\" size=\""
                << w.edges()[k].size_bytes << "\"/>\n";
        }
        out << "  </job>\n";
    }
    for (const auto& t : w.tasks()) {
        if (w.in_edges(t.index).empty()) continue;
        out << "  <child ref=\"" << t.id << "\">\n";
        for (std::size_t k : w.in_edges(t.index)) {
            out << "    <parent ref=\"" << w.task(w.edges()[k].from).id << "\"/>\n";
        }
        out << "  </child>\n";
    }
    out << "</adag>\n";
    return out.str();
}

Workflow parse_fixture(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::string name = "fixture";
    std::vector<Task> tasks;
    std::unordered_map<std::string, std::size_t> by_id;
    std::vector<std::tuple<std::string, std::string, std::int64_t>> raw_edges;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        auto bad = [&] {
            return Error(ErrorKind::MalformedDocument, "fixture line " + std::to_string(lineno) + ": " + line);
        };
        if (kind == "name") {
            if (!(ls >> name)) throw bad();
        } else if (kind == "task") {
            std::string id;
            double runtime = 0;
            if (!(ls >> id >> runtime) || by_id.count(id)) throw bad();
            by_id.emplace(id, tasks.size());
            tasks.push_back({id, tasks.size(), runtime});
        } else if (kind == "edge") {
            std::string from, to;
            std::int64_t bytes = 0;
            if (!(ls >> from >> to >> bytes)) throw bad();
            if (bytes < 0) throw Error(ErrorKind::NegativeSize, "fixture line " + std::to_string(lineno));
            raw_edges.emplace_back(from, to, bytes);
        } else {
            throw bad();
        }
    }
    std::vector<DataDependency> edges;
    for (const auto& [from, to, bytes] : raw_edges) {
        auto f = by_id.find(from);
        auto t = by_id.find(to);
        if (f == by_id.end() || t == by_id.end()) {
            throw Error(ErrorKind::UnknownJobReference, "edge " + from + " -> " + to);
        }
        edges.push_back({f->second, t->second, static_cast<std::uint64_t>(bytes)});
    }
    return Workflow(std::move(name), std::move(tasks), std::move(edges));
}

std::string write_fixture(const Workflow& w) {
    std::ostringstream out;
    out.precision(17);
    out << "name " << w.name() << '\n';
    for (const auto& t : w.tasks()) out << "task " << t.id << ' ' << t.reference_runtime << '\n';
    for (const auto& e : w.edges()) {
        out << "edge " << w.task(e.from).id << ' ' << w.task(e.to).id << ' ' << e.size_bytes << '\n';
    }
    return out.str();
}

Workflow load_workflow(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '<') {
        return parse_dax(text, path.stem().string());
    }
    Workflow w = parse_fixture(text);
    return w;
}

}  // namespace fuzzysched
