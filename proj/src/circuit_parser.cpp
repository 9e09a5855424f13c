#include "mzp/circuit_parser.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace mzp {

namespace {

struct Cursor {
    const std::string& text;
    int line;
    std::size_t pos = 0;

    void skip_spaces() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_spaces();
        return pos >= text.size() || text[pos] == '#';
    }
    int column() const { return static_cast<int>(pos) + 1; }

    std::string word() {
        skip_spaces();
        const std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) throw ParseError(line, column(), "expected an identifier");
        return text.substr(start, pos - start);
    }

    void expect(char ch) {
        skip_spaces();
        if (pos >= text.size() || text[pos] != ch)
            throw ParseError(line, column(), std::string("expected '") + ch + "'");
        ++pos;
    }

    bool consume(char ch) {
        skip_spaces();
        if (pos < text.size() && text[pos] == ch) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect_arrow() {
        skip_spaces();
        if (pos + 1 >= text.size() || text[pos] != '-' || text[pos + 1] != '>')
            throw ParseError(line, column(), "expected '->'");
        pos += 2;
    }

    std::string rest() {
        skip_spaces();
        std::size_t end = text.size();
        const std::size_t hash = text.find('#', pos);
        if (hash != std::string::npos) end = hash;
        std::string out = text.substr(pos, end - pos);
        while (!out.empty() && (out.back() == ' ' || out.back() == '\t' || out.back() == '\r'))
            out.pop_back();
        pos = end;
        return out;
    }
};

}  // namespace

double parse_phase_expression(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (ch != ' ' && ch != '\t') s.push_back(ch);
    if (s.empty()) throw std::invalid_argument("empty phase expression");

    double sign = 1.0;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') {
        sign = s[i] == '-' ? -1.0 : 1.0;
        ++i;
    }

    auto read_number = [&]() -> double {
        std::size_t consumed = 0;
        const double value = std::stod(s.substr(i), &consumed);
        i += consumed;
        return value;
    };

    double coefficient = 1.0;
    bool have_coefficient = false;
    if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) {
        coefficient = read_number();
        have_coefficient = true;
        if (i < s.size() && s[i] == '*') ++i;
    }

    double value = coefficient;
    if (s.compare(i, 2, "pi") == 0) {
        i += 2;
        value = coefficient * kPi;
        if (i < s.size() && s[i] == '/') {
            ++i;
            const double denom = read_number();
            if (denom == 0.0) throw std::invalid_argument("division by zero in phase expression");
            value /= denom;
        }
    } else if (!have_coefficient) {
        throw std::invalid_argument("invalid phase expression '" + text + "'");
    }
    if (i != s.size()) throw std::invalid_argument("trailing characters in phase expression '" + text + "'");
    return sign * value;
}

CircuitDescription parse_circuit(const std::string& text) {
    CircuitDescription circuit;
    std::set<std::string> produced;   // beams that exist (or existed)
    std::set<std::string> live;       // currently propagating beams
    std::set<std::string> external;   // beams first seen as element inputs

    std::istringstream stream(text);
    std::string raw;
    int line_number = 0;

    auto consume_input = [&](Cursor& cur, const std::string& beam) {
        if (live.count(beam)) {
            live.erase(beam);
            return;
        }
        if (circuit.is_vacuum_beam(beam)) return;
        if (produced.count(beam))
            throw ParseError(cur.line, cur.column(), "beam '" + beam + "' was already consumed");
        // First use introduces an external input beam.
        external.insert(beam);
        produced.insert(beam);
    };

    auto produce_output = [&](Cursor& cur, const std::string& beam) {
        if (produced.count(beam) || circuit.is_vacuum_beam(beam))
            throw ParseError(cur.line, cur.column(),
                             "output beam '" + beam + "' is already defined");
        produced.insert(beam);
        live.insert(beam);
    };

    while (std::getline(stream, raw)) {
        ++line_number;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        Cursor cur{raw, line_number};
        if (cur.done()) continue;

        const std::string keyword = cur.word();
        if (keyword == "BS") {
            OpticalElement e;
            e.kind = OpticalElement::Kind::BeamSplitter;
            e.line = line_number;
            e.inputs.push_back(cur.word());
            if (cur.consume(',')) e.inputs.push_back(cur.word());
            cur.expect_arrow();
            e.outputs.push_back(cur.word());
            cur.expect(',');
            e.outputs.push_back(cur.word());
            if (e.outputs[0] == e.outputs[1])
                throw ParseError(line_number, cur.column(), "splitter outputs must be distinct");
            for (const auto& b : e.inputs) consume_input(cur, b);
            for (const auto& b : e.outputs) produce_output(cur, b);
            circuit.elements.push_back(std::move(e));
        } else if (keyword == "MIRROR" || keyword == "PHASE") {
            OpticalElement e;
            e.kind = keyword == "MIRROR" ? OpticalElement::Kind::Mirror
                                         : OpticalElement::Kind::PhaseShifter;
            e.line = line_number;
            const std::string beam = cur.word();
            e.inputs.push_back(beam);
            e.outputs.push_back(beam);
            if (e.kind == OpticalElement::Kind::PhaseShifter) {
                const std::string expr = cur.rest();
                if (expr == "phi") {
                    e.phase_from_config = true;
                } else {
                    try {
                        e.phase = parse_phase_expression(expr);
                    } catch (const std::exception& ex) {
                        throw ParseError(line_number, cur.column(), ex.what());
                    }
                }
            }
            if (!live.count(beam) && !produced.count(beam)) {
                external.insert(beam);
                produced.insert(beam);
                live.insert(beam);
            }
            if (!live.count(beam))
                throw ParseError(line_number, cur.column(),
                                 "beam '" + beam + "' is not live at this element");
            circuit.elements.push_back(std::move(e));
        } else if (keyword == "DETECT") {
            DetectorPlacement d;
            d.beam = cur.word();
            const std::string where = cur.word();
            if (where == "before")
                d.before_recombiner = true;
            else if (where == "after")
                d.before_recombiner = false;
            else
                throw ParseError(line_number, cur.column(), "expected 'before' or 'after'");
            if (!produced.count(d.beam))
                throw ParseError(line_number, cur.column(), "unknown beam '" + d.beam + "'");
            circuit.detectors.push_back(std::move(d));
        } else if (keyword == "VACUUM") {
            const std::string beam = cur.word();
            if (produced.count(beam))
                throw ParseError(line_number, cur.column(),
                                 "beam '" + beam + "' already exists; cannot declare vacuum");
            circuit.vacuum_beams.push_back(beam);
        } else {
            throw ParseError(line_number, 1, "unknown element '" + keyword + "'");
        }
        if (!cur.done())
            throw ParseError(line_number, cur.column(), "unexpected trailing input");
    }

    if (circuit.elements.empty()) throw ParseError(line_number, 1, "circuit has no elements");
    if (external.size() != 1)
        throw ParseError(1, 1, "circuit must have exactly one input beam, found " +
                                   std::to_string(external.size()));
    circuit.input_beam = *external.begin();
    return circuit;
}

}  // namespace mzp
