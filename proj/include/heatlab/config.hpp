#ifndef HEATLAB_CONFIG_HPP
#define HEATLAB_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heatlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat `key = value` text, '#' comments, order-preserving. Used both for
// run configuration and for the emitted metadata sidecar.
class KeyValueFile {
  public:
    static KeyValueFile parse(const std::string& text);
    static KeyValueFile load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, int value);
    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;

    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, std::optional<double> fallback = {}) const;
    int get_int(const std::string& key, std::optional<int> fallback = {}) const;
    std::vector<double> get_double_list(const std::string& key) const;

    std::string serialize() const;
    const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

  private:
    std::vector<std::pair<std::string, std::string>> items_;
};

// 17-significant-digit scientific notation; the fixed CSV float format.
std::string format_double(double value);

enum class RunMode { Steady, SweepLambda, SweepBias, Rectify, Detune, Amplify };

RunMode parse_run_mode(const std::string& text);
std::string to_string(RunMode mode);

// Resolve a preset name to the config file shipped under presets/.
// HEATLAB_PRESET_DIR overrides the built-in location.
std::string preset_path(const std::string& name);

}  // namespace heatlab

#endif
