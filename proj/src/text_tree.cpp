#include "text_tree.hpp"

#include <sstream>
#include <stdexcept>

namespace zerocert::text {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

void serialize_node(const TextNode& n, int depth, std::string& out) {
    const std::string indent(static_cast<size_t>(depth) * 2, ' ');
    for (const auto& [key, toks] : n.entries) {
        out += indent;
        out += key;
        for (const std::string& t : toks) {
            out += ' ';
            out += t;
        }
        out += '\n';
    }
    for (const TextNode& c : n.children) {
        out += indent;
        out += c.name;
        out += " {\n";
        serialize_node(c, depth + 1, out);
        out += indent;
        out += "}\n";
    }
}

}  // namespace

TextNode parse_tree(const std::string& text) {
    TextNode root;
    std::vector<TextNode*> stack = {&root};
    std::istringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::vector<std::string> toks = tokenize(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks.size() == 1 && toks[0] == "}") {
            if (stack.size() == 1)
                throw std::runtime_error("line " + std::to_string(lineno) + ": unmatched '}'");
            stack.pop_back();
            continue;
        }
        if (toks.back() == "{") {
            if (toks.size() != 2)
                throw std::runtime_error("line " + std::to_string(lineno) +
                                         ": section header must be 'name {'");
            stack.back()->children.push_back(TextNode{toks[0], {}, {}});
            stack.push_back(&stack.back()->children.back());
            continue;
        }
        std::vector<std::string> vals(toks.begin() + 1, toks.end());
        stack.back()->entries.emplace_back(toks[0], std::move(vals));
    }
    if (stack.size() != 1) throw std::runtime_error("unterminated section at end of input");
    return root;
}

std::string serialize_tree(const TextNode& root) {
    std::string out;
    serialize_node(root, 0, out);
    return out;
}

}  // namespace zerocert::text
