#include <algorithm>
#include <map>
#include <sstream>

#include "storyline/error.hpp"
#include "storyline/io.hpp"

namespace storyline {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string part;
    std::istringstream in(s);
    while (std::getline(in, part, sep)) out.push_back(trim(part));
    return out;
}

}  // namespace

instance convert_sgb_book(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;

    struct entry {
        std::string name;
        int order;
    };
    std::map<std::string, entry> roster;
    bool in_roster = true;
    std::vector<std::vector<std::string>> cliques;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line.front() == '*') continue;
        if (in_roster) {
            if (trim(line).empty()) {
                if (!roster.empty()) in_roster = false;
                continue;
            }
            const auto code = trim(line.substr(0, std::min<std::size_t>(2, line.size())));
            if (code.size() != 2) throw parse_error("expected a two-letter character code", line_no, 1);
            std::string desc = line.size() > 3 ? line.substr(3) : std::string();
            const auto comma = desc.find(',');
            const auto name = trim(comma == std::string::npos ? desc : desc.substr(0, comma));
            const int order = static_cast<int>(roster.size());
            if (!roster.emplace(code, entry{name.empty() ? code : name, order}).second)
                throw parse_error("character code " + code + " defined twice", line_no, 1);
            continue;
        }
        if (trim(line).empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw parse_error("expected 'chapter:cliques'", line_no, 1);
        for (const auto &group : split(line.substr(colon + 1), ';')) {
            if (group.empty()) continue;
            std::vector<std::string> members;
            for (const auto &code : split(group, ',')) {
                if (code.empty()) continue;
                if (!roster.count(code))
                    throw parse_error("unknown character code " + code, line_no,
                                      static_cast<int>(line.find(code)) + 1);
                if (std::find(members.begin(), members.end(), code) == members.end())
                    members.push_back(code);
            }
            if (!members.empty()) cliques.push_back(std::move(members));
        }
    }
    if (cliques.empty()) throw invalid_instance("book file contains no cliques");

    // Characters in roster order, restricted to those that appear.
    std::vector<std::pair<int, std::string>> used;
    for (const auto &clique : cliques)
        for (const auto &code : clique) used.push_back({roster.at(code).order, code});
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());

    std::map<std::string, char_id> id;
    std::vector<character> chars;
    for (const auto &[order, code] : used) {
        id[code] = static_cast<char_id>(chars.size());
        chars.push_back({order + 1, roster.at(code).name});
    }
    std::vector<interaction> inters;
    for (std::size_t t = 0; t < cliques.size(); ++t) {
        interaction inter{static_cast<int>(t), {}};
        for (const auto &code : cliques[t]) inter.chars.push_back(id.at(code));
        inters.push_back(std::move(inter));
    }
    return instance::build(static_cast<int>(cliques.size()), std::move(chars), std::move(inters));
}

instance convert_sgb_book_file(const std::filesystem::path &path) {
    return convert_sgb_book(read_file(path));
}

}  // namespace storyline
