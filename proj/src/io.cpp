#include "emach/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>

namespace emach::io {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string_view strip_comment(std::string_view line) {
    const auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
    std::size_t start = 0, line_no = 1;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        f(line_no++, line);
        if (end == text.size()) break;
        start = end + 1;
    }
}

std::size_t parse_index(std::string_view token, std::size_t line, const char* what) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ParseError(line, std::string("bad ") + what + " '" + std::string(token) + "'");
    return value;
}

double parse_double(std::string_view token) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw DomainError("bad number '" + std::string(token) + "'");
    return value;
}

}  // namespace

std::string format_double(double value, int precision) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, precision);
    if (ec != std::errc()) throw Error("cannot format number");
    return std::string(buf, ptr);
}

double parse_probability(std::string_view token) {
    const auto slash = token.find('/');
    if (slash == std::string_view::npos) return parse_double(token);
    const double num = parse_double(token.substr(0, slash));
    const double den = parse_double(token.substr(slash + 1));
    if (den == 0.0) throw DomainError("zero denominator in '" + std::string(token) + "'");
    return num / den;
}

ParsedMachine parse_machine(std::string_view text) {
    std::optional<std::size_t> n_states;
    std::optional<Alphabet> alphabet;
    std::vector<Edge> edges;
    std::vector<std::string> warnings;

    for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
        const auto tokens = split_ws(strip_comment(raw));
        if (tokens.empty()) return;
        const auto& head = tokens.front();
        if (head == "states") {
            if (tokens.size() != 2) throw ParseError(line_no, "expected 'states <N>'");
            if (n_states) throw ParseError(line_no, "duplicate 'states' line");
            n_states = parse_index(tokens[1], line_no, "state count");
            if (*n_states == 0) throw ParseError(line_no, "state count must be positive");
        } else if (head == "alphabet") {
            if (tokens.size() < 2) throw ParseError(line_no, "alphabet needs at least one symbol");
            if (alphabet) throw ParseError(line_no, "duplicate 'alphabet' line");
            std::vector<std::string> names(tokens.begin() + 1, tokens.end());
            try {
                alphabet = Alphabet(std::move(names));
            } catch (const InvalidMachine& e) {
                throw ParseError(line_no, e.what());
            }
        } else if (head == "edge") {
            if (!n_states || !alphabet) throw ParseError(line_no, "edge before 'states' and 'alphabet'");
            if (tokens.size() != 5) throw ParseError(line_no, "expected 'edge <from> <symbol> <prob> <to>'");
            Edge e;
            e.from = parse_index(tokens[1], line_no, "state");
            const auto sym = alphabet->find(tokens[2]);
            if (!sym) throw ParseError(line_no, "unknown symbol '" + std::string(tokens[2]) + "'");
            e.symbol = *sym;
            try {
                e.probability = parse_probability(tokens[3]);
            } catch (const DomainError& err) {
                throw ParseError(line_no, err.what());
            }
            e.to = parse_index(tokens[4], line_no, "state");
            if (e.from >= *n_states || e.to >= *n_states)
                throw ParseError(line_no, "state index out of range");
            if (e.probability == 0.0) warnings.push_back("line " + std::to_string(line_no) + ": zero-probability edge dropped");
            edges.push_back(e);
        } else {
            throw ParseError(line_no, "unknown directive '" + std::string(head) + "'");
        }
    });

    if (!n_states) throw ParseError(0, "missing 'states' line");
    if (!alphabet) throw ParseError(0, "missing 'alphabet' line");
    return {Machine(*n_states, std::move(*alphabet), std::move(edges)), std::move(warnings)};
}

std::string read_text(const std::string& path) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::string& path, std::string_view text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

ParsedMachine read_machine(const std::string& path) { return parse_machine(read_text(path)); }

std::string serialize_machine(const Machine& machine) {
    std::string out = "states " + std::to_string(machine.n_states()) + "\nalphabet";
    for (const auto& name : machine.alphabet().names()) out += " " + name;
    out += "\n";
    for (const Edge& e : machine.edges()) {
        out += "edge " + std::to_string(e.from) + " " + machine.alphabet().name(e.symbol) + " " +
               format_double(e.probability) + " " + std::to_string(e.to) + "\n";
    }
    return out;
}

Word parse_word(const Alphabet& alphabet, std::string_view text) {
    const auto tokens = split_ws(text);
    Word word;
    if (tokens.size() == 1 && alphabet.single_char() && !alphabet.find(tokens.front())) {
        for (char c : tokens.front()) {
            const auto sym = alphabet.find(std::string_view(&c, 1));
            if (!sym) throw DomainError(std::string("unknown symbol '") + c + "'");
            word.push_back(*sym);
        }
        return word;
    }
    for (auto token : tokens) {
        const auto sym = alphabet.find(token);
        if (!sym) throw DomainError("unknown symbol '" + std::string(token) + "'");
        word.push_back(*sym);
    }
    return word;
}

std::string format_word(const Alphabet& alphabet, const Word& word) {
    std::string out;
    const bool packed = alphabet.single_char();
    for (std::size_t t = 0; t < word.size(); ++t) {
        if (!packed && t > 0) out += '.';
        out += alphabet.name(word[t]);
    }
    return out;
}

Sample parse_sample(std::string_view text) {
    std::optional<Alphabet> declared;
    std::vector<std::string> raw;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        const auto hash = line.find('#');
        if (hash != std::string_view::npos) {
            const auto tokens = split_ws(line.substr(hash + 1));
            if (!tokens.empty() && tokens.front() == "alphabet") {
                if (tokens.size() < 2) throw ParseError(line_no, "empty alphabet header");
                declared = Alphabet(std::vector<std::string>(tokens.begin() + 1, tokens.end()));
            }
            line = line.substr(0, hash);
        }
        for (auto token : split_ws(line)) {
            if (declared && declared->find(token)) {
                raw.emplace_back(token);
            } else if (token.size() > 1 && (!declared || declared->single_char())) {
                for (char c : token) raw.emplace_back(1, c);
            } else {
                raw.emplace_back(token);
            }
        }
    });

    Alphabet alphabet;
    if (declared) {
        alphabet = *declared;
    } else {
        std::set<std::string> names(raw.begin(), raw.end());
        if (names.empty()) throw ParseError(0, "sample has no symbols and no alphabet header");
        alphabet = Alphabet(std::vector<std::string>(names.begin(), names.end()));
    }
    Sample sample{alphabet, {}};
    sample.symbols.reserve(raw.size());
    for (const auto& name : raw) {
        const auto sym = alphabet.find(name);
        if (!sym) throw ParseError(0, "symbol '" + name + "' not in the sample alphabet");
        sample.symbols.push_back(*sym);
    }
    return sample;
}

std::string serialize_sample(const Alphabet& alphabet, const Word& symbols, bool packed) {
    std::string out = "# alphabet";
    for (const auto& name : alphabet.names()) out += " " + name;
    out += "\n";
    packed = packed && alphabet.single_char();
    std::size_t column = 0;
    for (Symbol x : symbols) {
        out += alphabet.name(x);
        if (!packed) {
            out += '\n';
        } else if (++column == 80) {
            out += '\n';
            column = 0;
        }
    }
    if (packed && column != 0) out += '\n';
    return out;
}

}  // namespace emach::io
