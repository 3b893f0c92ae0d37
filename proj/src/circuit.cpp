#include "spoqc/circuit.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace spoqc {

namespace {

struct OpInfo {
    Op op;
    std::string_view name;
};

constexpr std::array<OpInfo, 25> kOps = {{
    {Op::QUBIT_COORDS, "QUBIT_COORDS"},
    {Op::R, "R"},
    {Op::RX, "RX"},
    {Op::H, "H"},
    {Op::H_YZ, "H_YZ"},
    {Op::S, "S"},
    {Op::S_DAG, "S_DAG"},
    {Op::CZ, "CZ"},
    {Op::M, "M"},
    {Op::MX, "MX"},
    {Op::MZZ, "MZZ"},
    {Op::MXX, "MXX"},
    {Op::MYY, "MYY"},
    {Op::X_ERROR, "X_ERROR"},
    {Op::Y_ERROR, "Y_ERROR"},
    {Op::Z_ERROR, "Z_ERROR"},
    {Op::DPH2, "DPH2"},
    {Op::RUS_CZ, "RUS_CZ"},
    {Op::RUS_MZZ, "RUS_MZZ"},
    {Op::RUS_MXX, "RUS_MXX"},
    {Op::RUS_MYY, "RUS_MYY"},
    {Op::DETECTOR, "DETECTOR"},
    {Op::OBSERVABLE_INCLUDE, "OBSERVABLE_INCLUDE"},
    {Op::TICK, "TICK"},
    {Op::SHIFT_COORDS, "SHIFT_COORDS"},
}};

bool is_probability_op(Op op) {
    return op == Op::X_ERROR || op == Op::Y_ERROR || op == Op::Z_ERROR || op == Op::DPH2;
}

bool takes_records(Op op) { return op == Op::DETECTOR || op == Op::OBSERVABLE_INCLUDE; }

bool sorts_targets(Op op) { return op == Op::X_ERROR || op == Op::Y_ERROR || op == Op::Z_ERROR; }

void check_instruction(const Instruction& inst) {
    const Op op = inst.op;
    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument(std::string(op_name(op)) + ": " + msg);
    };
    for (double a : inst.args) {
        if (!std::isfinite(a)) {
            fail("non-finite argument");
        }
    }
    if (is_probability_op(op)) {
        if (inst.args.size() != 1) {
            fail("expected exactly one probability argument");
        }
        if (inst.args[0] < 0 || inst.args[0] > 1) {
            fail("probability out of range [0,1]");
        }
    } else if (op == Op::OBSERVABLE_INCLUDE) {
        if (inst.args.size() != 1 || inst.args[0] < 0 || inst.args[0] != std::floor(inst.args[0])) {
            fail("expected one non-negative integer observable index");
        }
    } else if (op == Op::QUBIT_COORDS) {
        if (inst.args.size() != 2) {
            fail("expected two coordinates");
        }
    } else if (op != Op::DETECTOR && op != Op::SHIFT_COORDS && !inst.args.empty()) {
        fail("takes no arguments");
    }

    if (takes_records(op)) {
        for (const Target& t : inst.targets) {
            if (!t.is_record) {
                fail("targets must be record references");
            }
            if (t.value == 0) {
                fail("record reference must be rec[-k] with k >= 1");
            }
        }
        return;
    }
    for (const Target& t : inst.targets) {
        if (t.is_record) {
            fail("record references are only allowed on DETECTOR and OBSERVABLE_INCLUDE");
        }
    }
    if (op == Op::TICK || op == Op::SHIFT_COORDS) {
        if (!inst.targets.empty()) {
            fail("takes no targets");
        }
    }
    if (is_two_qubit(op)) {
        if (inst.targets.size() % 2 != 0) {
            fail("two-qubit operation needs an even number of targets");
        }
        for (std::size_t k = 0; k < inst.targets.size(); k += 2) {
            if (inst.targets[k].value == inst.targets[k + 1].value) {
                fail("pair targets must be distinct qubits");
            }
        }
    }
}

}  // namespace

std::string_view op_name(Op op) { return kOps[static_cast<std::size_t>(op)].name; }

std::optional<Op> op_from_name(std::string_view name) {
    for (const auto& info : kOps) {
        if (info.name == name) {
            return info.op;
        }
    }
    return std::nullopt;
}

bool is_two_qubit(Op op) {
    switch (op) {
        case Op::CZ:
        case Op::MZZ:
        case Op::MXX:
        case Op::MYY:
        case Op::DPH2:
        case Op::RUS_CZ:
        case Op::RUS_MZZ:
        case Op::RUS_MXX:
        case Op::RUS_MYY:
            return true;
        default:
            return false;
    }
}

bool is_rus(Op op) {
    return op == Op::RUS_CZ || op == Op::RUS_MZZ || op == Op::RUS_MXX || op == Op::RUS_MYY;
}

bool is_noise(Op op) { return is_probability_op(op); }

bool is_reset(Op op) { return op == Op::R || op == Op::RX; }

bool is_measurement(Op op) {
    switch (op) {
        case Op::M:
        case Op::MX:
        case Op::MZZ:
        case Op::MXX:
        case Op::MYY:
        case Op::RUS_MZZ:
        case Op::RUS_MXX:
        case Op::RUS_MYY:
            return true;
        default:
            return false;
    }
}

bool is_annotation(Op op) {
    return op == Op::DETECTOR || op == Op::OBSERVABLE_INCLUDE || op == Op::TICK || op == Op::SHIFT_COORDS ||
           op == Op::QUBIT_COORDS;
}

std::size_t Instruction::measurement_count() const {
    if (!is_measurement(op)) {
        return 0;
    }
    return is_two_qubit(op) ? targets.size() / 2 : targets.size();
}

void Circuit::append(Instruction inst) {
    check_instruction(inst);
    if (sorts_targets(inst.op)) {
        std::sort(inst.targets.begin(), inst.targets.end(),
                  [](const Target& a, const Target& b) { return a.value < b.value; });
    }
    if (!takes_records(inst.op)) {
        for (const Target& t : inst.targets) {
            qubit_count_ = std::max(qubit_count_, t.value + 1);
        }
    }
    measurement_count_ += inst.measurement_count();
    if (inst.op == Op::DETECTOR) {
        detector_count_++;
    } else if (inst.op == Op::OBSERVABLE_INCLUDE) {
        observable_count_ = std::max(observable_count_, static_cast<std::size_t>(inst.args[0]) + 1);
    } else if (is_rus(inst.op)) {
        rus_count_ += inst.targets.size() / 2;
    }
    instructions_.push_back(std::move(inst));
}

void Circuit::append(Op op, std::vector<uint32_t> qubits, std::vector<double> args) {
    Instruction inst;
    inst.op = op;
    inst.args = std::move(args);
    inst.targets.reserve(qubits.size());
    for (uint32_t q : qubits) {
        inst.targets.push_back(Target::qubit(q));
    }
    append(std::move(inst));
}

void Circuit::append_record_annotation(Op op, const std::vector<std::size_t>& absolute_records,
                                       std::vector<double> args) {
    Instruction inst;
    inst.op = op;
    inst.args = std::move(args);
    for (std::size_t m : absolute_records) {
        if (m >= measurement_count_) {
            throw std::invalid_argument("annotation references a future measurement");
        }
        inst.targets.push_back(Target::record(static_cast<uint32_t>(measurement_count_ - m)));
    }
    append(std::move(inst));
}

std::map<uint32_t, std::pair<double, double>> Circuit::coordinates() const {
    std::map<uint32_t, std::pair<double, double>> out;
    for (const auto& inst : instructions_) {
        if (inst.op == Op::QUBIT_COORDS) {
            for (const auto& t : inst.targets) {
                out[t.value] = {inst.args[0], inst.args[1]};
            }
        }
    }
    return out;
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

class LineParser {
  public:
    LineParser(std::string_view text, std::size_t line_no) : text_(text), line_(line_no) {}

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, pos_ + 1, msg); }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) {
            pos_++;
        }
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    std::size_t pos() const { return pos_; }

    std::string_view read_word() {
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_') {
                pos_++;
            } else {
                break;
            }
        }
        return text_.substr(start, pos_ - start);
    }

    double read_real() {
        skip_space();
        double value = 0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        if (begin < end && *begin == '+') {
            fail("expected a real number");
        }
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr == begin) {
            fail("expected a real number");
        }
        pos_ += static_cast<std::size_t>(ptr - begin);
        return value;
    }

    uint32_t read_uint() {
        uint64_t value = 0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr == begin || value > 0xFFFFFFFFull) {
            fail("expected an unsigned integer");
        }
        pos_ += static_cast<std::size_t>(ptr - begin);
        return static_cast<uint32_t>(value);
    }

    void expect(char c) {
        if (peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        pos_++;
    }

    bool consume(std::string_view s) {
        if (text_.substr(pos_, s.size()) == s) {
            pos_ += s.size();
            return true;
        }
        return false;
    }

  private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

}  // namespace

Circuit parse_circuit(std::string_view text) {
    Circuit c;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        line_no++;
        std::string_view line = text.substr(start, end - start);
        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        LineParser p(line, line_no);
        p.skip_space();
        if (!p.at_end()) {
            std::size_t op_col = p.pos();
            std::string_view word = p.read_word();
            if (word.empty()) {
                p.fail("expected an opcode");
            }
            auto op = op_from_name(word);
            if (!op) {
                throw ParseError(line_no, op_col + 1, "unknown opcode '" + std::string(word) + "'");
            }
            Instruction inst;
            inst.op = *op;
            if (p.peek() == '(') {
                p.expect('(');
                inst.args.push_back(p.read_real());
                p.skip_space();
                while (p.peek() == ',') {
                    p.expect(',');
                    inst.args.push_back(p.read_real());
                    p.skip_space();
                }
                p.expect(')');
            }
            while (true) {
                std::size_t before = p.pos();
                p.skip_space();
                if (p.at_end()) {
                    break;
                }
                if (p.pos() == before) {
                    p.fail("expected whitespace before target");
                }
                if (p.consume("rec[-")) {
                    uint32_t k = p.read_uint();
                    p.expect(']');
                    inst.targets.push_back(Target::record(k));
                } else if (p.peek() >= '0' && p.peek() <= '9') {
                    inst.targets.push_back(Target::qubit(p.read_uint()));
                } else {
                    p.fail("expected a qubit index or rec[-k]");
                }
            }
            try {
                c.append(std::move(inst));
            } catch (const std::invalid_argument& e) {
                throw ParseError(line_no, op_col + 1, e.what());
            }
        }
        if (end == text.size()) {
            break;
        }
        start = end + 1;
    }
    return c;
}

namespace {

void append_real(std::string& out, double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    out.append(buf, ptr);
}

}  // namespace

std::string print_instruction(const Instruction& inst) {
    std::string out(op_name(inst.op));
    if (!inst.args.empty()) {
        out += '(';
        for (std::size_t k = 0; k < inst.args.size(); k++) {
            if (k) {
                out += ", ";
            }
            append_real(out, inst.args[k]);
        }
        out += ')';
    }
    for (const Target& t : inst.targets) {
        out += ' ';
        if (t.is_record) {
            out += "rec[-";
            out += std::to_string(t.value);
            out += ']';
        } else {
            out += std::to_string(t.value);
        }
    }
    return out;
}

std::string print_circuit(const Circuit& c) {
    std::string out;
    for (const auto& inst : c.instructions()) {
        out += print_instruction(inst);
        out += '\n';
    }
    return out;
}

std::vector<Diagnostic> validate(const Circuit& c, std::optional<CircuitLevel> expected_level) {
    std::vector<Diagnostic> out;
    std::size_t measured = 0;
    const auto& insts = c.instructions();
    for (std::size_t k = 0; k < insts.size(); k++) {
        const auto& inst = insts[k];
        if (expected_level == CircuitLevel::Instance && is_rus(inst.op)) {
            out.push_back({k, std::string(op_name(inst.op)) + " is not allowed in an Instance circuit"});
        }
        if (takes_records(inst.op)) {
            for (const auto& t : inst.targets) {
                if (t.value == 0 || t.value > measured) {
                    out.push_back({k, "rec[-" + std::to_string(t.value) + "] refers to a measurement that does not exist (" +
                                          std::to_string(measured) + " so far)"});
                }
            }
        } else {
            for (const auto& t : inst.targets) {
                if (t.value >= c.qubit_count()) {
                    out.push_back({k, "qubit " + std::to_string(t.value) + " out of range"});
                }
            }
        }
        measured += inst.measurement_count();
    }
    return out;
}

Annotations collect_annotations(const Circuit& c) {
    Annotations a;
    std::size_t measured = 0;
    for (const auto& inst : c.instructions()) {
        if (inst.op == Op::DETECTOR || inst.op == Op::OBSERVABLE_INCLUDE) {
            std::vector<std::size_t> recs;
            for (const auto& t : inst.targets) {
                if (t.value == 0 || t.value > measured) {
                    throw std::invalid_argument("annotation refers to a nonexistent measurement");
                }
                recs.push_back(measured - t.value);
            }
            if (inst.op == Op::DETECTOR) {
                a.detectors.push_back(std::move(recs));
                a.detector_coords.push_back(inst.args);
            } else {
                std::size_t id = static_cast<std::size_t>(inst.args[0]);
                if (a.observables.size() <= id) {
                    a.observables.resize(id + 1);
                }
                auto& obs = a.observables[id];
                obs.insert(obs.end(), recs.begin(), recs.end());
            }
        }
        measured += inst.measurement_count();
    }
    return a;
}

Circuit strip_annotations(const Circuit& c) {
    Circuit out;
    out.reserve_qubits(c.qubit_count());
    for (const auto& inst : c.instructions()) {
        if (inst.op != Op::DETECTOR && inst.op != Op::OBSERVABLE_INCLUDE) {
            out.append(inst);
        }
    }
    return out;
}

Circuit load_circuit_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_circuit(ss.str());
}

void save_circuit_file(const Circuit& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << print_circuit(c);
}

}  // namespace spoqc
