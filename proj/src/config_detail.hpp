#pragma once

#include "text_tree.hpp"
#include "zerocert/config.hpp"

namespace zerocert::config_detail {

ConvexBody body_from_node(const text::TextNode& n);
text::TextNode body_to_node(const std::string& name, const ConvexBody& body);
ProblemConfig config_from_node(const text::TextNode& root);
text::TextNode config_to_node(const ProblemConfig& cfg);

}  // namespace zerocert::config_detail
