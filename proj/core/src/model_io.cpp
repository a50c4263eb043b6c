#include "gibbslab/model_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gibbslab/csv.hpp"

namespace gibbslab {

namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    throw std::runtime_error("model file: line " + std::to_string(line_no) +
                             ": " + what);
}

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double parse_energy(const std::string& tok, std::size_t line_no) {
    if (tok == "inf") return kForbidden;
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size() || !std::isfinite(v)) {
            fail(line_no, "energy must be a finite decimal or 'inf': " + tok);
        }
        return v;
    } catch (const std::runtime_error&) {
        throw;
    } catch (const std::exception&) {
        fail(line_no, "energy must be a finite decimal or 'inf': " + tok);
    }
}

std::pair<std::string, std::string> split_edge_key(const std::string& key,
                                                   std::size_t line_no) {
    const std::size_t dash = key.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == key.size()) {
        fail(line_no, "edge key must look like a-b: " + key);
    }
    return {key.substr(0, dash), key.substr(dash + 1)};
}

}  // namespace

ModelFile parse_model_file(std::istream& in) {
    ModelFile file;
    PairPotentialModel& model = file.model;

    enum class Section { none, alphabet, graph, self, pair, blocks };
    Section section = Section::none;

    std::vector<std::pair<std::size_t, std::string>> self_lines, pair_lines,
        block_lines;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = strip(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            const std::string name = line.substr(1, line.size() - 2);
            if (name == "alphabet") section = Section::alphabet;
            else if (name == "graph") section = Section::graph;
            else if (name == "potentials.self") section = Section::self;
            else if (name == "potentials.pair") section = Section::pair;
            else if (name == "blocks") section = Section::blocks;
            else fail(line_no, "unknown section [" + name + "]");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key = value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");

        switch (section) {
            case Section::none:
                fail(line_no, "key outside any section");
            case Section::alphabet: {
                if (key != "q") fail(line_no, "unknown alphabet key: " + key);
                try {
                    model.alphabet_size = std::stoi(value);
                } catch (const std::exception&) {
                    fail(line_no, "q must be an integer");
                }
                if (model.alphabet_size <= 0) fail(line_no, "q must be positive");
                break;
            }
            case Section::graph: {
                if (key == "sites") {
                    for (const auto& tok : tokens_of(value)) {
                        model.graph.site_names.push_back(tok);
                    }
                } else if (key == "edges") {
                    for (const auto& tok : tokens_of(value)) {
                        const auto [a, b] = split_edge_key(tok, line_no);
                        const int ia = model.graph.site_index(a);
                        const int ib = model.graph.site_index(b);
                        if (ia < 0) fail(line_no, "edge endpoint " + a +
                                                  " is not a declared site");
                        if (ib < 0) fail(line_no, "edge endpoint " + b +
                                                  " is not a declared site");
                        model.graph.edges.emplace_back(ia, ib);
                    }
                } else {
                    fail(line_no, "unknown graph key: " + key);
                }
                break;
            }
            case Section::self:
                self_lines.emplace_back(line_no, line);
                break;
            case Section::pair:
                pair_lines.emplace_back(line_no, line);
                break;
            case Section::blocks:
                block_lines.emplace_back(line_no, line);
                break;
        }
    }

    if (model.alphabet_size <= 0) {
        throw std::runtime_error("model file: missing [alphabet] q");
    }
    const int n = model.graph.site_count();
    const int q = model.alphabet_size;
    model.self_potentials.assign(n, std::vector<double>(q, 0.0));
    model.pair_potentials.assign(model.graph.edges.size(), {});

    std::vector<char> self_seen(n, 0);
    for (const auto& [no, text] : self_lines) {
        const std::size_t eq = text.find('=');
        const std::string key = strip(text.substr(0, eq));
        const int site = model.graph.site_index(key);
        if (site < 0) fail(no, "self potential for undeclared site " + key);
        if (self_seen[site]) fail(no, "duplicate self table for " + key);
        self_seen[site] = 1;
        const auto toks = tokens_of(strip(text.substr(eq + 1)));
        if (static_cast<int>(toks.size()) != q) {
            fail(no, "self table for " + key + " needs " + std::to_string(q) +
                         " energies, got " + std::to_string(toks.size()));
        }
        for (int v = 0; v < q; ++v) {
            model.self_potentials[site][v] = parse_energy(toks[v], no);
        }
    }

    std::vector<char> pair_seen(model.graph.edges.size(), 0);
    for (const auto& [no, text] : pair_lines) {
        const std::size_t eq = text.find('=');
        const std::string key = strip(text.substr(0, eq));
        const auto [a, b] = split_edge_key(key, no);
        const int ia = model.graph.site_index(a);
        const int ib = model.graph.site_index(b);
        int edge = -1;
        for (int e = 0; e < model.graph.edge_count(); ++e) {
            if (model.graph.edges[e] == std::make_pair(ia, ib)) {
                edge = e;
                break;
            }
            if (model.graph.edges[e] == std::make_pair(ib, ia)) {
                fail(no, "pair table key " + key +
                             " reverses the declared edge order; declare it as " +
                             model.graph.site_names[model.graph.edges[e].first] +
                             "-" +
                             model.graph.site_names[model.graph.edges[e].second]);
            }
        }
        if (edge < 0) fail(no, "pair table for undeclared edge " + key);
        if (pair_seen[edge]) fail(no, "duplicate pair table for " + key);
        pair_seen[edge] = 1;
        const auto toks = tokens_of(strip(text.substr(eq + 1)));
        if (static_cast<int>(toks.size()) != q * q) {
            fail(no, "pair table for " + key + " needs " +
                         std::to_string(q * q) + " energies, got " +
                         std::to_string(toks.size()));
        }
        auto& table = model.pair_potentials[edge];
        table.resize(static_cast<std::size_t>(q) * q);
        for (int i = 0; i < q * q; ++i) table[i] = parse_energy(toks[i], no);
    }
    for (std::size_t e = 0; e < model.graph.edges.size(); ++e) {
        if (!pair_seen[e]) {
            const auto& [a, b] = model.graph.edges[e];
            throw std::runtime_error(
                "model file: missing pair table for edge " +
                model.graph.site_names[a] + "-" + model.graph.site_names[b]);
        }
    }

    for (const auto& [no, text] : block_lines) {
        const std::size_t eq = text.find('=');
        BlockDeclaration block;
        block.name = strip(text.substr(0, eq));
        const auto toks = tokens_of(strip(text.substr(eq + 1)));
        if (toks.size() < 2) {
            fail(no, "block " + block.name + " needs a weight and at least one site");
        }
        try {
            std::size_t used = 0;
            block.weight = std::stod(toks[0], &used);
            if (used != toks[0].size()) throw std::invalid_argument(toks[0]);
        } catch (const std::exception&) {
            fail(no, "block " + block.name + ": first token must be the weight");
        }
        if (!(block.weight > 0.0) || !std::isfinite(block.weight)) {
            fail(no, "block " + block.name + ": weight must be positive");
        }
        for (std::size_t i = 1; i < toks.size(); ++i) {
            if (model.graph.site_index(toks[i]) < 0) {
                fail(no, "block " + block.name + ": undeclared site " + toks[i]);
            }
            block.sites.push_back(toks[i]);
        }
        for (const auto& other : file.blocks) {
            if (other.name == block.name) {
                fail(no, "duplicate block name " + block.name);
            }
        }
        file.blocks.push_back(std::move(block));
    }

    const auto diags = validate_model(model);
    if (!diags.empty()) {
        std::ostringstream os;
        os << "model file: invalid model:";
        for (const auto& d : diags) os << "\n  " << d;
        throw std::runtime_error(os.str());
    }
    return file;
}

ModelFile load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return parse_model_file(in);
}

void write_model_file(std::ostream& out, const ModelFile& file) {
    const PairPotentialModel& model = file.model;
    const int q = model.alphabet_size;

    out << "[alphabet]\nq = " << q << "\n\n";

    out << "[graph]\nsites =";
    for (const auto& name : model.graph.site_names) out << " " << name;
    out << "\n";
    if (!model.graph.edges.empty()) {
        out << "edges =";
        for (const auto& [a, b] : model.graph.edges) {
            out << " " << model.graph.site_names[a] << "-"
                << model.graph.site_names[b];
        }
        out << "\n";
    }

    out << "\n[potentials.self]\n";
    for (int site = 0; site < model.graph.site_count(); ++site) {
        out << model.graph.site_names[site] << " =";
        for (int v = 0; v < q; ++v) {
            out << " " << format_real(model.self_potentials[site][v]);
        }
        out << "\n";
    }

    if (!model.graph.edges.empty()) {
        out << "\n[potentials.pair]\n";
        for (int e = 0; e < model.graph.edge_count(); ++e) {
            const auto& [a, b] = model.graph.edges[e];
            out << model.graph.site_names[a] << "-" << model.graph.site_names[b]
                << " =";
            for (int i = 0; i < q * q; ++i) {
                out << " " << format_real(model.pair_potentials[e][i]);
            }
            out << "\n";
        }
    }

    if (!file.blocks.empty()) {
        out << "\n[blocks]\n";
        for (const auto& block : file.blocks) {
            out << block.name << " = " << format_real(block.weight);
            for (const auto& site : block.sites) out << " " << site;
            out << "\n";
        }
    }
}

}  // namespace gibbslab
