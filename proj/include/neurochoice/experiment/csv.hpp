#ifndef NEUROCHOICE_EXPERIMENT_CSV_HPP
#define NEUROCHOICE_EXPERIMENT_CSV_HPP

#include <charconv>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <system_error>
#include <type_traits>
#include <vector>

#include "../errors.hpp"

namespace neurochoice::experiment
{

/// Shortest round-trip decimal form; identical on every conforming platform.
inline std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (v == 0.0)
        v = 0.0;  // drop the sign of negative zero
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{})
        throw NumericalError("format_number: conversion failed");
    return std::string(buf, end);
}

class CsvTable
{
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    class Row
    {
    public:
        Row& operator<<(double v) { return cell(format_number(v)); }
        Row& operator<<(const std::string& s) { return cell(s); }
        Row& operator<<(const char* s) { return cell(s); }

        template <typename I>
            requires(std::is_integral_v<I> && !std::is_same_v<I, bool>)
        Row& operator<<(I v)
        {
            return cell(std::to_string(v));
        }

        Row& operator<<(bool b) { return cell(b ? "1" : "0"); }

    private:
        friend class CsvTable;
        explicit Row(std::vector<std::string>& cells) : cells_(cells) {}

        Row& cell(std::string s)
        {
            cells_.push_back(std::move(s));
            return *this;
        }

        std::vector<std::string>& cells_;
    };

    Row row()
    {
        rows_.emplace_back();
        return Row(rows_.back());
    }

    std::size_t size() const { return rows_.size(); }

    std::string str() const
    {
        std::string out;
        append_line(out, header_);
        for (const auto& r : rows_)
        {
            if (r.size() != header_.size())
                throw NumericalError("CsvTable: row width does not match the header");
            append_line(out, r);
        }
        return out;
    }

private:
    static void append_line(std::string& out, const std::vector<std::string>& cells)
    {
        for (std::size_t k = 0; k < cells.size(); ++k)
        {
            if (k)
                out += ',';
            out += cells[k];
        }
        out += '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace neurochoice::experiment

#endif // NEUROCHOICE_EXPERIMENT_CSV_HPP
