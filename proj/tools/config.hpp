#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sqrs/adversary.hpp"
#include "sqrs/optimizer.hpp"
#include "sqrs/params.hpp"

namespace sqrs::cli {

/// A configuration problem, reported with the JSON path of the offending field.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Read access to one JSON object that remembers which keys were consumed, so that
/// finish() can reject anything left over.
class Section {
  public:
    Section(const nlohmann::json &node, std::string path);

    bool has(const std::string &key) const;
    Section child(const std::string &key);

    template <typename T>
    T get(const std::string &key) {
        return convert<T>(key, at(key));
    }

    template <typename T>
    T get_or(const std::string &key, T fallback) {
        return has(key) ? get<T>(key) : fallback;
    }

    /// Array of values at `key`.
    template <typename T>
    std::vector<T> list(const std::string &key) {
        const auto &node = at(key);
        if (!node.is_array()) fail(key, "expected an array");
        std::vector<T> out;
        for (std::size_t i = 0; i < node.size(); ++i) out.push_back(convert<T>(key + "[" + std::to_string(i) + "]", node[i]));
        return out;
    }

    /// Array of objects at `key`, each addressed as key[i].
    std::vector<Section> objects(const std::string &key);
    double probability(const std::string &key);
    int positive_int(const std::string &key);

    /// Marks a key as handled elsewhere.
    void ignore(const std::string &key) { used_.insert(key); }
    /// Throws if any key of the object was never read.
    void finish() const;

    [[noreturn]] void fail(const std::string &key, const std::string &message) const;
    const std::string &path() const { return path_; }

  private:
    const nlohmann::json &at(const std::string &key);

    template <typename T>
    T convert(const std::string &key, const nlohmann::json &node) const {
        try {
            if constexpr (std::is_same_v<T, int>) {
                if (!node.is_number_integer()) throw std::invalid_argument("expected an integer");
            } else if constexpr (std::is_same_v<T, double>) {
                if (!node.is_number()) throw std::invalid_argument("expected a number");
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!node.is_boolean()) throw std::invalid_argument("expected true or false");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!node.is_string()) throw std::invalid_argument("expected a string");
            } else if constexpr (std::is_same_v<T, std::uint64_t>) {
                if (!node.is_number_unsigned()) throw std::invalid_argument("expected a non-negative integer");
            }
            return node.get<T>();
        } catch (const std::exception &e) {
            fail(key, e.what());
        }
    }

    const nlohmann::json &node_;
    std::string path_;
    std::set<std::string> used_;
};

/// Parses a JSON document; syntax errors become ConfigError.
nlohmann::json load_config_file(const std::string &path);

ProtocolParams read_protocol(Section s);
/// `attack` object: {"strategy": name, "attack_probability": p (optional, default 1)}.
AttackStrategy read_attack(Section s);
/// Search settings shared by `optimize` and the optimizer-backed figures.
void read_search_settings(Section &s, SearchConfig &c);

}  // namespace sqrs::cli
