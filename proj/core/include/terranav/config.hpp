#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace terranav {

// Flat key-value configuration: one `key value` pair per line, dotted
// section names, '#' comments. Values keep everything after the first
// whitespace run so strings with spaces work.
class Config {
public:
    Config() = default;

    static Config parse_file(const std::string& path);
    static Config parse(std::istream& in, const std::string& name);

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // Keys beginning with `prefix`, in file order.
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

    void set(const std::string& key, const std::string& value);

    const std::string& name() const { return name_; }

private:
    struct Entry {
        std::string value;
        int line = 0;
        int order = 0;
    };

    [[noreturn]] void fail(const std::string& key, const std::string& what) const;
    const Entry& require(const std::string& key) const;

    std::string name_ = "<none>";
    std::map<std::string, Entry> entries_;
    int next_order_ = 0;
};

}  // namespace terranav
