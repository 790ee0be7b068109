#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "secat/module.hpp"
#include "secat/secondary.hpp"

namespace secat::dsl {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// A parsed file: the declarations as written (for serialization round-trips)
// plus the compiled objects.
struct Document {
    struct SqDecl {
        int k = 0;
        std::string label;
        std::vector<std::string> value;  // empty = 0
    };
    struct MulDecl {
        std::string l1, l2;
        std::vector<std::string> value;
    };
    struct AmbigDecl {
        int k = 0;
        std::string label;
        std::vector<std::vector<std::string>> alternatives;
    };
    struct AssertDecl {
        int k = 0;
        std::string label;
        std::string provenance;  // trailing comment, echoed into reports
    };
    struct ModuleDecl {
        std::string name;
        int max_degree = 0;
        std::vector<std::pair<std::string, int>> gens;  // declaration order
        std::vector<SqDecl> sqs;
        std::vector<MulDecl> muls;
        std::vector<AmbigDecl> ambigs;
        std::vector<AssertDecl> asserts;
        mod::UnstableAlgebra compiled;  // mul filled only when muls nonempty
        bool has_products = false;
    };
    struct MapDecl {
        std::string name, from, to;
        int shift = 0;
        std::vector<std::pair<std::string, std::vector<std::string>>> lines;
        mod::ModuleMap compiled;
    };
    struct DiagramDecl {
        std::string name;
        std::string Y, C, SX, SY;
        std::string jstar, taustar, sfstar;
        bool exact = false;
    };

    std::vector<ModuleDecl> modules;
    std::vector<MapDecl> maps;
    std::vector<DiagramDecl> diagrams;
    // Every provenance-tagged comment in the file, in order.
    std::vector<std::string> provenance_notes;

    const ModuleDecl* find_module(const std::string& name) const;
    const MapDecl* find_map(const std::string& name) const;
    const DiagramDecl* find_diagram(const std::string& name) const;
    // Assembles the compiled nodes and maps; throws on dangling names or
    // endpoint mismatches.
    secondary::CofiberDiagram build_diagram(const DiagramDecl& d) const;
};

Document parse(const std::string& text);
std::string serialize(const Document& doc);

}  // namespace secat::dsl
