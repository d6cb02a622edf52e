#include "heatlab/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace heatlab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text) {
    KeyValueFile kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        kv.set(key, trim(line.substr(eq + 1)));
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : items_)
        if (k == key) {
            v = value;
            return;
        }
    items_.emplace_back(key, value);
}

void KeyValueFile::set(const std::string& key, double value) { set(key, format_double(value)); }
void KeyValueFile::set(const std::string& key, int value) { set(key, std::to_string(value)); }

bool KeyValueFile::has(const std::string& key) const {
    for (const auto& [k, v] : items_)
        if (k == key) return true;
    return false;
}

const std::string& KeyValueFile::get(const std::string& key) const {
    for (const auto& [k, v] : items_)
        if (k == key) return v;
    throw ConfigError("missing config key: " + key);
}

std::string KeyValueFile::get_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? get(key) : fallback;
}

double KeyValueFile::get_double(const std::string& key, std::optional<double> fallback) const {
    if (!has(key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing config key: " + key);
    }
    const std::string& text = get(key);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': not a number: " + text);
    return v;
}

int KeyValueFile::get_int(const std::string& key, std::optional<int> fallback) const {
    if (!has(key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing config key: " + key);
    }
    const std::string& text = get(key);
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': not an integer: " + text);
    return static_cast<int>(v);
}

std::vector<double> KeyValueFile::get_double_list(const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(get(key));
    std::string item;
    while (std::getline(in, item, ',')) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str())
            throw ConfigError("config key '" + key + "': not a number list");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

std::string KeyValueFile::serialize() const {
    std::string out;
    for (const auto& [k, v] : items_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", value);
    return buf;
}

RunMode parse_run_mode(const std::string& text) {
    if (text == "steady") return RunMode::Steady;
    if (text == "sweep-lambda") return RunMode::SweepLambda;
    if (text == "sweep-bias") return RunMode::SweepBias;
    if (text == "rectify") return RunMode::Rectify;
    if (text == "detune") return RunMode::Detune;
    if (text == "amplify") return RunMode::Amplify;
    throw ConfigError("config key 'mode': unknown mode '" + text + "'");
}

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::Steady: return "steady";
        case RunMode::SweepLambda: return "sweep-lambda";
        case RunMode::SweepBias: return "sweep-bias";
        case RunMode::Rectify: return "rectify";
        case RunMode::Detune: return "detune";
        case RunMode::Amplify: return "amplify";
    }
    return "?";
}

std::string preset_path(const std::string& name) {
    namespace fs = std::filesystem;
    std::vector<fs::path> roots;
    if (const char* env = std::getenv("HEATLAB_PRESET_DIR")) roots.emplace_back(env);
#ifdef HEATLAB_PRESET_DIR
    roots.emplace_back(HEATLAB_PRESET_DIR);
#endif
    for (const auto& root : roots) {
        const fs::path candidate = root / (name + ".cfg");
        if (fs::exists(candidate)) return candidate.string();
    }
    throw ConfigError("unknown preset: " + name);
}

}  // namespace heatlab
