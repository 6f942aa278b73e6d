#pragma once

// Minimal XML well-formedness check and attribute queries for the emitted
// SVG documents. Enough structure awareness to find band groups and cells
// without an XML library.

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace svgcheck {

struct Tag {
    std::string name;
    std::map<std::string, std::string> attrs;
    bool closing = false;
    bool self_closing = false;
    std::size_t begin = 0;
    std::size_t end = 0;
};

inline std::optional<Tag> parse_tag(std::string_view doc, std::size_t pos) {
    Tag tag;
    tag.begin = pos;
    if (pos >= doc.size() || doc[pos] != '<') return std::nullopt;
    std::size_t i = pos + 1;
    if (i < doc.size() && doc[i] == '/') {
        tag.closing = true;
        ++i;
    }
    std::size_t name_start = i;
    while (i < doc.size() && (std::isalnum(static_cast<unsigned char>(doc[i])) || doc[i] == '_'))
        ++i;
    tag.name = std::string(doc.substr(name_start, i - name_start));
    if (tag.name.empty()) return std::nullopt;
    while (i < doc.size() && doc[i] != '>') {
        while (i < doc.size() && std::isspace(static_cast<unsigned char>(doc[i]))) ++i;
        if (i < doc.size() && (doc[i] == '>' || doc[i] == '/')) {
            if (doc[i] == '/') {
                tag.self_closing = true;
                ++i;
            }
            continue;
        }
        std::size_t key_start = i;
        while (i < doc.size() && doc[i] != '=' && !std::isspace(static_cast<unsigned char>(doc[i])) &&
               doc[i] != '>')
            ++i;
        std::string key(doc.substr(key_start, i - key_start));
        if (i >= doc.size() || doc[i] != '=') return std::nullopt; // bare attribute: not emitted
        ++i;
        if (i >= doc.size() || doc[i] != '"') return std::nullopt;
        ++i;
        std::size_t val_start = i;
        while (i < doc.size() && doc[i] != '"') ++i;
        if (i >= doc.size()) return std::nullopt;
        tag.attrs[key] = std::string(doc.substr(val_start, i - val_start));
        ++i;
    }
    if (i >= doc.size()) return std::nullopt;
    tag.end = i + 1;
    return tag;
}

// Walks every tag; returns false on nesting or quoting problems.
inline bool well_formed(std::string_view doc, std::string* error = nullptr) {
    auto fail = [&](const std::string& message) {
        if (error) *error = message;
        return false;
    };
    std::vector<std::string> stack;
    std::size_t pos = doc.find('<');
    bool seen_root = false;
    while (pos != std::string_view::npos) {
        if (doc.compare(pos, 2, "<?") == 0) {
            const std::size_t close = doc.find("?>", pos);
            if (close == std::string_view::npos) return fail("unterminated declaration");
            pos = doc.find('<', close + 2);
            continue;
        }
        auto tag = parse_tag(doc, pos);
        if (!tag) return fail("bad tag at offset " + std::to_string(pos));
        if (tag->closing) {
            if (stack.empty() || stack.back() != tag->name)
                return fail("mismatched </" + tag->name + ">");
            stack.pop_back();
            if (stack.empty()) seen_root = true;
        } else if (!tag->self_closing) {
            if (seen_root && stack.empty()) return fail("content after the root element");
            stack.push_back(tag->name);
        }
        pos = doc.find('<', tag->end);
    }
    if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
    if (!seen_root) return fail("no root element");
    return true;
}

// All tags with the given name whose attributes include every entry of
// `match`, searched in `doc` (order of appearance).
inline std::vector<Tag> find_tags(std::string_view doc, std::string_view name,
                                  const std::map<std::string, std::string>& match = {}) {
    std::vector<Tag> out;
    std::size_t pos = doc.find('<');
    while (pos != std::string_view::npos) {
        if (doc.compare(pos, 2, "<?") == 0) {
            pos = doc.find('<', pos + 2);
            continue;
        }
        auto tag = parse_tag(doc, pos);
        if (!tag) break;
        if (!tag->closing && tag->name == name) {
            bool ok = true;
            for (const auto& [k, v] : match) {
                auto it = tag->attrs.find(k);
                if (it == tag->attrs.end() || it->second != v) {
                    ok = false;
                    break;
                }
            }
            if (ok) out.push_back(*tag);
        }
        pos = doc.find('<', tag->end);
    }
    return out;
}

// The <g class="band" data-signal=...> ... </g> fragment, nesting-aware.
inline std::string band_fragment(std::string_view doc, std::string_view signal) {
    std::size_t pos = doc.find('<');
    while (pos != std::string_view::npos) {
        if (doc.compare(pos, 2, "<?") == 0) {
            pos = doc.find('<', pos + 2);
            continue;
        }
        auto tag = parse_tag(doc, pos);
        if (!tag) return {};
        if (!tag->closing && tag->name == "g" && tag->attrs.count("class") &&
            tag->attrs.at("class") == "band" && tag->attrs.count("data-signal") &&
            tag->attrs.at("data-signal") == signal) {
            int depth = 1;
            std::size_t scan = tag->end;
            while (depth > 0) {
                const std::size_t next = doc.find('<', scan);
                if (next == std::string_view::npos) return {};
                auto inner = parse_tag(doc, next);
                if (!inner) return {};
                if (inner->name == "g") {
                    if (inner->closing) --depth;
                    else if (!inner->self_closing) ++depth;
                }
                if (depth == 0) return std::string(doc.substr(tag->begin, inner->end - tag->begin));
                scan = inner->end;
            }
        }
        pos = doc.find('<', tag->end);
    }
    return {};
}

} // namespace svgcheck
