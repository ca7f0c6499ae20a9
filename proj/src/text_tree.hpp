#pragma once

// Internal line-oriented tree format shared by the config and certificate
// readers/writers. A document is entries (key + tokens) and named sections
// delimited by "name {" ... "}", two-space indentation on output.

#include <string>
#include <vector>

namespace zerocert::text {

struct TextNode {
    std::string name;
    std::vector<std::pair<std::string, std::vector<std::string>>> entries;
    std::vector<TextNode> children;

    void add(const std::string& key, std::vector<std::string> tokens) {
        entries.emplace_back(key, std::move(tokens));
    }
    void add(const std::string& key, const std::string& token) { add(key, std::vector<std::string>{token}); }

    const std::vector<std::string>* find(const std::string& key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return &v;
        return nullptr;
    }
    std::vector<const std::vector<std::string>*> find_all(const std::string& key) const {
        std::vector<const std::vector<std::string>*> out;
        for (const auto& [k, v] : entries)
            if (k == key) out.push_back(&v);
        return out;
    }
    const TextNode* child(const std::string& cname) const {
        for (const TextNode& c : children)
            if (c.name == cname) return &c;
        return nullptr;
    }
    std::vector<const TextNode*> children_named(const std::string& cname) const {
        std::vector<const TextNode*> out;
        for (const TextNode& c : children)
            if (c.name == cname) out.push_back(&c);
        return out;
    }
};

// throws std::runtime_error on malformed input
TextNode parse_tree(const std::string& text);
std::string serialize_tree(const TextNode& root);

}  // namespace zerocert::text
