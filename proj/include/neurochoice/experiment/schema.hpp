#ifndef NEUROCHOICE_EXPERIMENT_SCHEMA_HPP
#define NEUROCHOICE_EXPERIMENT_SCHEMA_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace neurochoice::experiment
{

using json = nlohmann::json;

/// One schema or precondition problem, tied to a field path such as parameters.U[2].
struct Diagnostic
{
    std::string field;
    std::string message;

    std::string str() const { return field.empty() ? message : field + ": " + message; }
};

using Diagnostics = std::vector<Diagnostic>;

/**
 * Typed view of one JSON object that records problems instead of throwing.
 * Every key that was read is remembered so that unknown (usually misspelled)
 * keys can be reported by finish().
 */
class Reader
{
public:
    Reader(const json& node, std::string path, Diagnostics& diag) : node_(node), path_(std::move(path)), diag_(diag)
    {
        if (!node_.is_object())
            error("", "expected an object");
    }

    const std::string& path() const { return path_; }

    bool has(const std::string& key) const { return node_.is_object() && node_.contains(key); }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void error(const std::string& key, const std::string& message) const
    {
        diag_.push_back({key.empty() ? path_ : field(key), message});
    }

    Diagnostics& diagnostics() const { return diag_; }

    const json* child(const std::string& key)
    {
        seen_.insert(key);
        if (!has(key))
            return nullptr;
        return &node_.at(key);
    }

    std::optional<double> opt_number(const std::string& key)
    {
        const json* v = child(key);
        if (!v)
            return std::nullopt;
        if (!v->is_number())
        {
            error(key, "expected a number");
            return std::nullopt;
        }
        const double d = v->get<double>();
        if (!std::isfinite(d))
        {
            error(key, "must be finite");
            return std::nullopt;
        }
        return d;
    }

    double number(const std::string& key)
    {
        if (!has(key))
        {
            seen_.insert(key);
            error(key, "required number is missing");
            return 0.0;
        }
        return opt_number(key).value_or(0.0);
    }

    double number(const std::string& key, double fallback) { return opt_number(key).value_or(fallback); }

    std::optional<std::int64_t> opt_integer(const std::string& key)
    {
        const json* v = child(key);
        if (!v)
            return std::nullopt;
        if (!v->is_number_integer())
        {
            error(key, "expected an integer");
            return std::nullopt;
        }
        return v->get<std::int64_t>();
    }

    std::int64_t integer(const std::string& key)
    {
        if (!has(key))
        {
            seen_.insert(key);
            error(key, "required integer is missing");
            return 0;
        }
        return opt_integer(key).value_or(0);
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) { return opt_integer(key).value_or(fallback); }

    bool boolean(const std::string& key, bool fallback)
    {
        const json* v = child(key);
        if (!v)
            return fallback;
        if (!v->is_boolean())
        {
            error(key, "expected true or false");
            return fallback;
        }
        return v->get<bool>();
    }

    std::optional<std::string> opt_string(const std::string& key)
    {
        const json* v = child(key);
        if (!v)
            return std::nullopt;
        if (!v->is_string())
        {
            error(key, "expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    std::string string(const std::string& key, const std::string& fallback)
    {
        return opt_string(key).value_or(fallback);
    }

    std::vector<double> numbers(const std::string& key, bool required = true)
    {
        const json* v = child(key);
        std::vector<double> out;
        if (!v)
        {
            if (required)
                error(key, "required list of numbers is missing");
            return out;
        }
        if (!v->is_array())
        {
            error(key, "expected a list of numbers");
            return out;
        }
        for (std::size_t k = 0; k < v->size(); ++k)
        {
            const json& e = (*v)[k];
            if (!e.is_number() || !std::isfinite(e.get<double>()))
            {
                error(key + "[" + std::to_string(k) + "]", "expected a finite number");
                continue;
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::vector<std::vector<double>> matrix(const std::string& key, bool required = true)
    {
        const json* v = child(key);
        std::vector<std::vector<double>> out;
        if (!v)
        {
            if (required)
                error(key, "required matrix is missing");
            return out;
        }
        if (!v->is_array())
        {
            error(key, "expected a list of rows");
            return out;
        }
        for (std::size_t r = 0; r < v->size(); ++r)
        {
            const json& row = (*v)[r];
            const std::string rk = key + "[" + std::to_string(r) + "]";
            if (!row.is_array())
            {
                error(rk, "expected a list of numbers");
                out.emplace_back();
                continue;
            }
            std::vector<double> vals;
            for (std::size_t c = 0; c < row.size(); ++c)
            {
                if (!row[c].is_number() || !std::isfinite(row[c].get<double>()))
                    error(rk + "[" + std::to_string(c) + "]", "expected a finite number");
                vals.push_back(row[c].is_number() ? row[c].get<double>() : 0.0);
            }
            out.push_back(std::move(vals));
        }
        return out;
    }

    std::vector<std::string> strings(const std::string& key, bool required = true)
    {
        const json* v = child(key);
        std::vector<std::string> out;
        if (!v)
        {
            if (required)
                error(key, "required list of strings is missing");
            return out;
        }
        if (!v->is_array())
        {
            error(key, "expected a list of strings");
            return out;
        }
        for (std::size_t k = 0; k < v->size(); ++k)
        {
            if (!(*v)[k].is_string())
                error(key + "[" + std::to_string(k) + "]", "expected a string");
            else
                out.push_back((*v)[k].get<std::string>());
        }
        return out;
    }

    /// Nested object reader; the caller must call finish() on it.
    std::optional<Reader> object(const std::string& key)
    {
        const json* v = child(key);
        if (!v)
            return std::nullopt;
        if (!v->is_object())
        {
            error(key, "expected an object");
            return std::nullopt;
        }
        return Reader(*v, field(key), diag_);
    }

    /// Elements of a list of objects.
    std::vector<Reader> objects(const std::string& key, bool required = true)
    {
        const json* v = child(key);
        std::vector<Reader> out;
        if (!v)
        {
            if (required)
                error(key, "required list is missing");
            return out;
        }
        if (!v->is_array())
        {
            error(key, "expected a list of objects");
            return out;
        }
        for (std::size_t k = 0; k < v->size(); ++k)
            out.emplace_back((*v)[k], field(key) + "[" + std::to_string(k) + "]", diag_);
        return out;
    }

    void finish() const
    {
        if (!node_.is_object())
            return;
        for (const auto& item : node_.items())
            if (!seen_.count(item.key()))
                diag_.push_back({field(item.key()), "unknown key"});
    }

private:
    const json& node_;
    std::string path_;
    Diagnostics& diag_;
    std::set<std::string> seen_;
};

/// 1-based line and column of a byte offset, for parse errors.
inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset)
{
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < offset && k < text.size(); ++k)
    {
        if (text[k] == '\n')
        {
            ++line;
            col = 1;
        }
        else
        {
            ++col;
        }
    }
    return {line, col};
}

} // namespace neurochoice::experiment

#endif // NEUROCHOICE_EXPERIMENT_SCHEMA_HPP
