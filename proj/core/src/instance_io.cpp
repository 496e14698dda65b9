#include <fstream>
#include <map>
#include <sstream>

#include "json_util.hpp"
#include "storyline/error.hpp"
#include "storyline/io.hpp"

namespace storyline {

using json = nlohmann::json;

namespace {

// 1-based line and column of byte offset `byte` (nlohmann reports the
// offset one past the offending character).
std::pair<int, int> locate(std::string_view text, std::size_t byte) {
    int line = 1, column = 1;
    const std::size_t end = std::min(text.size(), byte > 0 ? byte - 1 : 0);
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

[[noreturn]] void schema_error(const std::string &what) { throw parse_error(what, 0, 0); }

const json &field(const json &obj, const char *key, const std::string &where) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(where + ": missing \"" + key + "\"");
    return *it;
}

std::int64_t as_int(const json &v, const std::string &where) {
    if (!v.is_number_integer()) schema_error(where + ": expected an integer");
    return v.get<std::int64_t>();
}

}  // namespace

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path &path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw error("failed writing '" + path.string() + "'");
}

json detail::parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        const auto [line, column] = locate(text, e.byte);
        std::string msg = e.what();
        if (auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
        throw parse_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                              ": " + msg,
                          line, column);
    }
}

instance parse_instance_text(std::string_view text) {
    const json doc = detail::parse_json(text);
    if (!doc.is_object()) schema_error("instance: top level must be an object");
    if (auto f = doc.find("format"); f != doc.end() && *f != "storyline-instance")
        schema_error("instance: unknown format " + f->dump());
    if (auto v = doc.find("version"); v != doc.end() && as_int(*v, "version") != 1)
        schema_error("instance: unsupported version " + v->dump());

    const auto layers = as_int(field(doc, "layers", "instance"), "layers");
    if (layers < 1 || layers > 1'000'000) throw invalid_instance("instance needs 1..1000000 layers");

    const auto &jchars = field(doc, "characters", "instance");
    if (!jchars.is_array()) schema_error("characters: expected an array");
    std::vector<character> chars;
    std::map<std::int64_t, char_id> by_label;
    for (std::size_t i = 0; i < jchars.size(); ++i) {
        const std::string where = "characters[" + std::to_string(i) + "]";
        const auto &jc = jchars[i];
        if (!jc.is_object()) schema_error(where + ": expected an object");
        character c;
        c.label = as_int(field(jc, "id", where), where + ".id");
        if (auto n = jc.find("name"); n != jc.end()) {
            if (!n->is_string()) schema_error(where + ".name: expected a string");
            c.name = n->get<std::string>();
        }
        if (!by_label.emplace(c.label, static_cast<char_id>(chars.size())).second)
            throw invalid_instance("character id " + std::to_string(c.label) + " is listed twice");
        chars.push_back(std::move(c));
    }
    auto lookup = [&](const json &v, const std::string &where) {
        const auto label = as_int(v, where);
        auto it = by_label.find(label);
        if (it == by_label.end())
            throw invalid_instance(where + " references unknown character " + std::to_string(label));
        return it->second;
    };

    const auto &jinter = field(doc, "interactions", "instance");
    if (!jinter.is_array()) schema_error("interactions: expected an array");
    std::vector<interaction> inters;
    for (std::size_t k = 0; k < jinter.size(); ++k) {
        const std::string where = "interactions[" + std::to_string(k) + "]";
        const auto &ji = jinter[k];
        if (!ji.is_object()) schema_error(where + ": expected an object");
        interaction inter;
        const auto time = as_int(field(ji, "time", where), where + ".time");
        if (time < 1 || time > layers)
            throw invalid_instance(where + " has time " + std::to_string(time) + " outside layers 1.." +
                                   std::to_string(layers));
        inter.time = static_cast<int>(time - 1);
        const auto &jc = field(ji, "chars", where);
        if (!jc.is_array()) schema_error(where + ".chars: expected an array");
        for (const auto &c : jc) inter.chars.push_back(lookup(c, where));
        inters.push_back(std::move(inter));
    }

    std::optional<std::vector<activity_interval>> activity;
    if (auto ja = doc.find("activity"); ja != doc.end()) {
        if (!ja->is_array()) schema_error("activity: expected an array");
        // Characters without an entry span their first to last interaction.
        std::vector<activity_interval> act(chars.size(), {-1, -1});
        for (const auto &inter : inters)
            for (char_id c : inter.chars) {
                auto &a = act[c];
                if (a.start < 0 || inter.time < a.start) a.start = inter.time;
                if (a.end < 0 || inter.time > a.end) a.end = inter.time;
            }
        std::vector<char> seen(chars.size(), 0);
        for (std::size_t i = 0; i < ja->size(); ++i) {
            const std::string where = "activity[" + std::to_string(i) + "]";
            const auto &e = (*ja)[i];
            if (!e.is_object()) schema_error(where + ": expected an object");
            const char_id c = lookup(field(e, "char", where), where);
            if (seen[c]) throw invalid_instance(where + " repeats character " + std::to_string(chars[c].label));
            seen[c] = 1;
            const auto s = as_int(field(e, "start", where), where + ".start");
            const auto t = as_int(field(e, "end", where), where + ".end");
            if (s < 1 || t > layers || s > t)
                throw invalid_instance(where + " is not a range within layers 1.." + std::to_string(layers));
            act[c] = {static_cast<int>(s - 1), static_cast<int>(t - 1)};
        }
        for (std::size_t c = 0; c < chars.size(); ++c)
            if (act[c].start < 0)
                throw invalid_instance("character " + std::to_string(chars[c].label) +
                                       " has no interactions and no activity entry");
        activity = std::move(act);
    }
    return instance::build(static_cast<int>(layers), std::move(chars), std::move(inters),
                           std::move(activity));
}

instance parse_instance(const std::filesystem::path &path) { return parse_instance_text(read_file(path)); }

std::string instance_to_text(const instance &inst) {
    std::ostringstream os;
    os << "{\n  \"format\": \"storyline-instance\",\n  \"version\": 1,\n";
    os << "  \"layers\": " << inst.num_layers() << ",\n  \"characters\": [\n";
    const auto &chars = inst.characters();
    for (std::size_t i = 0; i < chars.size(); ++i)
        os << "    {\"id\": " << chars[i].label << ", \"name\": " << json(chars[i].name).dump()
           << "}" << (i + 1 < chars.size() ? "," : "") << "\n";
    os << "  ],\n  \"interactions\": [\n";
    const auto &inters = inst.interactions();
    for (std::size_t k = 0; k < inters.size(); ++k) {
        os << "    {\"time\": " << inters[k].time + 1 << ", \"chars\": [";
        for (std::size_t j = 0; j < inters[k].chars.size(); ++j)
            os << (j ? ", " : "") << chars[inters[k].chars[j]].label;
        os << "]}" << (k + 1 < inters.size() ? "," : "") << "\n";
    }
    os << "  ],\n  \"activity\": [\n";
    for (std::size_t c = 0; c < chars.size(); ++c) {
        const auto &a = inst.activity(static_cast<char_id>(c));
        os << "    {\"char\": " << chars[c].label << ", \"start\": " << a.start + 1
           << ", \"end\": " << a.end + 1 << "}" << (c + 1 < chars.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
}

void write_instance(const std::filesystem::path &path, const instance &inst) {
    write_file(path, instance_to_text(inst));
}

}  // namespace storyline
