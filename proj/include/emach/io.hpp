#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "emach/machine.hpp"

namespace emach::io {

// Machine text format, one directive per line, '#' starts a comment:
//
//   states <N>
//   alphabet <sym0> <sym1> ...
//   edge <from> <symbol> <probability> <to>
//
// Probabilities are decimal literals or exact ratios "a/b".

struct ParsedMachine {
    Machine machine;
    std::vector<std::string> warnings;
};

ParsedMachine parse_machine(std::string_view text);

/// Reads a machine from a path, or from standard input when path is "-".
ParsedMachine read_machine(const std::string& path);

/// 17 significant digits, so parse(serialize(m)) reproduces every double.
std::string serialize_machine(const Machine& machine);

void write_text(const std::string& path, std::string_view text);
std::string read_text(const std::string& path);

/// Locale-independent shortest-general formatting with the given number of
/// significant digits.
std::string format_double(double value, int precision = 17);

/// Decimal or "a/b" probability literal.
double parse_probability(std::string_view token);

/// Packed ("0110") when every symbol name is one character and the text has
/// no whitespace; otherwise whitespace-separated symbol names.
Word parse_word(const Alphabet& alphabet, std::string_view text);
std::string format_word(const Alphabet& alphabet, const Word& word);

// Sample files: optional "# alphabet a b ..." header, then symbols either one
// per line or packed on lines with no separators.

struct Sample {
    Alphabet alphabet;
    Word symbols;
};

Sample parse_sample(std::string_view text);
std::string serialize_sample(const Alphabet& alphabet, const Word& symbols, bool packed);

}  // namespace emach::io
