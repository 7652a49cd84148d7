#include "torsionkit/computability.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <mutex>
#include <set>
#include <sstream>

namespace torsionkit {

Natural cantor_pair(Natural x, Natural y) {
  const unsigned __int128 s = static_cast<unsigned __int128>(x) + y;
  const unsigned __int128 z = s * (s + 1) / 2 + y;
  if (z > std::numeric_limits<Natural>::max()) throw std::overflow_error("cantor_pair overflows 64 bits");
  return static_cast<Natural>(z);
}

std::pair<Natural, Natural> cantor_unpair(Natural z) {
  // w = floor((sqrt(8z + 1) - 1) / 2), corrected for rounding.
  auto tri = [](unsigned __int128 w) { return w * (w + 1) / 2; };
  auto w = static_cast<unsigned __int128>((std::sqrt(8.0L * static_cast<long double>(z) + 1.0L) - 1.0L) / 2.0L);
  while (tri(w) > z) --w;
  while (tri(w + 1) <= z) ++w;
  const auto y = static_cast<Natural>(z - tri(w));
  const auto x = static_cast<Natural>(w - y);
  return {x, y};
}

bool is_prime(Natural n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (Natural d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

namespace {

std::mutex prime_mutex;
std::vector<Natural> prime_table;  // guarded by prime_mutex

void ensure_primes(Natural count) {
  if (prime_table.size() >= count) return;
  const double n = std::max<double>(static_cast<double>(count), 6.0);
  const auto limit = static_cast<std::size_t>(n * (std::log(n) + std::log(std::log(n)))) + 16;
  std::vector<bool> composite(limit + 1, false);
  prime_table.clear();
  for (std::size_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    prime_table.push_back(i);
    for (std::size_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
}

}  // namespace

Natural nth_prime(Natural i) {
  if (i == 0) throw std::invalid_argument("nth_prime is 1-based");
  std::lock_guard lock(prime_mutex);
  ensure_primes(i);
  return prime_table[i - 1];
}

std::optional<Natural> prime_index(Natural p) {
  if (!is_prime(p)) return std::nullopt;
  std::lock_guard lock(prime_mutex);
  Natural want = std::max<Natural>(prime_table.size(), 16);
  while (prime_table.empty() || prime_table.back() < p) {
    want *= 2;
    ensure_primes(want);
  }
  auto it = std::lower_bound(prime_table.begin(), prime_table.end(), p);
  return static_cast<Natural>(it - prime_table.begin()) + 1;
}

Program::Program(std::vector<Instruction> code) : code_(std::move(code)) {
  for (const auto& ins : code_) {
    if (ins.op == Opcode::decjz && ins.target >= code_.size()) {
      throw std::invalid_argument("jump target " + std::to_string(ins.target) + " out of bounds");
    }
    if (ins.op != Opcode::halt) register_count_ = std::max(register_count_, ins.reg + 1);
  }
}

namespace {

Natural parse_register(std::string_view tok) {
  Natural r = 0;
  if (tok.size() < 2 || tok[0] != 'r') throw ParseError("expected register, got '" + std::string(tok) + "'");
  auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), r);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw ParseError("bad register '" + std::string(tok) + "'");
  return r;
}

Natural parse_natural(std::string_view tok) {
  Natural v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("bad number '" + std::string(tok) + "'");
  }
  return v;
}

Instruction parse_instruction(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> toks;
  for (std::string t; in >> t;) toks.push_back(t);
  if (toks.empty()) throw ParseError("empty instruction");
  if (toks[0] == "HALT" && toks.size() == 1) return {Opcode::halt, 0, 0};
  if (toks[0] == "INC" && toks.size() == 2) return {Opcode::inc, parse_register(toks[1]), 0};
  if (toks[0] == "DECJZ" && toks.size() == 3) {
    return {Opcode::decjz, parse_register(toks[1]), parse_natural(toks[2])};
  }
  throw ParseError("bad instruction '" + std::string(line) + "'");
}

std::string format_instruction(const Instruction& ins) {
  switch (ins.op) {
    case Opcode::inc:
      return "INC r" + std::to_string(ins.reg);
    case Opcode::decjz:
      return "DECJZ r" + std::to_string(ins.reg) + " " + std::to_string(ins.target);
    case Opcode::halt:
      break;
  }
  return "HALT";
}

Program checked_program(std::vector<Instruction> code) {
  try {
    return Program(std::move(code));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

Program parse_program(std::string_view text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  lines.push_back(current);
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos) lines.pop_back();
  std::vector<Instruction> code;
  for (const auto& line : lines) code.push_back(parse_instruction(line));
  return checked_program(std::move(code));
}

std::string format_program(const Program& p) {
  std::string out;
  for (const auto& ins : p.code()) out += format_instruction(ins) + "\n";
  return out;
}

std::string format_program_inline(const Program& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += "; ";
    out += format_instruction(p.code()[i]);
  }
  return out + "]";
}

Program parse_program_inline(std::string_view text) {
  const auto first = text.find_first_not_of(' ');
  const auto last = text.find_last_not_of(' ');
  if (first == std::string_view::npos || text[first] != '[' || text[last] != ']') {
    throw ParseError("inline program must be bracketed: '" + std::string(text) + "'");
  }
  const auto body = text.substr(first + 1, last - first - 1);
  std::vector<Instruction> code;
  if (body.find_first_not_of(' ') == std::string_view::npos) return {};
  std::size_t start = 0;
  while (start <= body.size()) {
    const auto semi = body.find(';', start);
    const auto piece = body.substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start);
    code.push_back(parse_instruction(piece));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return checked_program(std::move(code));
}

Machine::Machine(const Program& program, Natural input)
    : program_(&program), registers_(program.register_count(), 0) {
  registers_[0] = input;
}

bool Machine::halted() const {
  return pc_ >= program_->size() || program_->code()[pc_].op == Opcode::halt;
}

bool Machine::run(Natural steps) {
  const auto& code = program_->code();
  while (steps > 0) {
    if (pc_ >= code.size()) return true;
    const Instruction& ins = code[pc_];
    switch (ins.op) {
      case Opcode::halt:
        return true;
      case Opcode::inc:
        ++registers_[ins.reg];
        ++pc_;
        break;
      case Opcode::decjz:
        if (registers_[ins.reg] == 0) {
          pc_ = ins.target;
        } else {
          --registers_[ins.reg];
          ++pc_;
        }
        break;
    }
    ++steps_;
    --steps;
  }
  return halted();
}

std::optional<Natural> run(const Program& p, Natural input, Natural steps) {
  Machine m(p, input);
  if (m.run(steps)) return m.output();
  return std::nullopt;
}

ProgramBuilder::Label ProgramBuilder::new_label() {
  labels_.emplace_back();
  return labels_.size() - 1;
}

void ProgramBuilder::bind(Label label) { labels_.at(label) = code_.size(); }

void ProgramBuilder::inc(Natural reg) { code_.push_back({{Opcode::inc, reg, 0}, std::nullopt, false}); }

void ProgramBuilder::decjz(Natural reg, Label target) {
  code_.push_back({{Opcode::decjz, reg, 0}, target, false});
}

void ProgramBuilder::halt() { code_.push_back({{Opcode::halt, 0, 0}, std::nullopt, false}); }

void ProgramBuilder::jump(Label target) { code_.push_back({{Opcode::decjz, 0, 0}, target, true}); }

void ProgramBuilder::clear(Natural reg) {
  const Label loop = new_label();
  const Label done = new_label();
  bind(loop);
  decjz(reg, done);
  jump(loop);
  bind(done);
}

void ProgramBuilder::move(Natural src, Natural dst) {
  const Label loop = new_label();
  const Label done = new_label();
  bind(loop);
  decjz(src, done);
  inc(dst);
  jump(loop);
  bind(done);
}

void ProgramBuilder::unpair(Natural src, Natural x, Natural y) {
  // Walk the Cantor order src times: (x, y) -> (x - 1, y + 1), or
  // (y + 1, 0) when x is zero.
  const Label loop = new_label();
  const Label x_zero = new_label();
  const Label done = new_label();
  bind(loop);
  decjz(src, done);
  decjz(x, x_zero);
  inc(y);
  jump(loop);
  bind(x_zero);
  move(y, x);
  inc(x);
  jump(loop);
  bind(done);
}

void ProgramBuilder::branch_on_values(Natural reg, const std::vector<Natural>& values, Label yes, Label no) {
  const std::set<Natural> members(values.begin(), values.end());
  const Natural top = members.empty() ? 0 : *members.rbegin();
  for (Natural v = 0; v <= top; ++v) {
    decjz(reg, members.count(v) ? yes : no);
  }
  jump(no);
}

void ProgramBuilder::diverge() {
  const Label self = new_label();
  bind(self);
  jump(self);
}

Program ProgramBuilder::build() const {
  Natural zero = 1;  // register 0 holds the input
  for (const auto& p : code_) {
    if (!p.zero_register && p.ins.op != Opcode::halt) zero = std::max(zero, p.ins.reg + 1);
  }
  std::vector<Instruction> code;
  code.reserve(code_.size() + 1);
  bool needs_tail = false;
  for (const auto& p : code_) {
    Instruction ins = p.ins;
    if (p.zero_register) ins.reg = zero;
    if (p.label) {
      const auto& at = labels_.at(*p.label);
      if (!at) throw std::logic_error("unbound label");
      ins.target = *at;
      if (*at == code_.size()) needs_tail = true;
    }
    code.push_back(ins);
  }
  if (needs_tail) code.push_back({Opcode::halt, 0, 0});
  return Program(std::move(code));
}

namespace programs {

Program identity() { return Program({{Opcode::halt, 0, 0}}); }

Program diverge() {
  ProgramBuilder b;
  b.diverge();
  return b.build();
}

Program doubling() {
  ProgramBuilder b;
  const auto loop = b.new_label();
  const auto done = b.new_label();
  b.bind(loop);
  b.decjz(0, done);
  b.inc(1);
  b.inc(1);
  b.jump(loop);
  b.bind(done);
  b.move(1, 0);
  b.halt();
  return b.build();
}

Program halt_on_evens() {
  ProgramBuilder b;
  const auto loop = b.new_label();
  const auto yes = b.new_label();
  const auto no = b.new_label();
  b.bind(loop);
  b.decjz(0, yes);
  b.decjz(0, no);
  b.jump(loop);
  b.bind(no);
  b.diverge();
  b.bind(yes);
  b.halt();
  return b.build();
}

Program halt_on_set(const std::vector<Natural>& values, Natural delay) {
  ProgramBuilder b;
  const auto accept = b.new_label();
  const auto reject = b.new_label();
  b.move(0, 1);
  b.branch_on_values(1, values, accept, reject);
  b.bind(reject);
  b.diverge();
  b.bind(accept);
  for (Natural i = 0; i < delay; ++i) b.inc(2);
  b.halt();
  return b.build();
}

Program total(Natural delay) {
  ProgramBuilder b;
  const auto loop = b.new_label();
  const auto done = b.new_label();
  b.move(0, 1);
  b.bind(loop);
  b.decjz(1, done);
  for (Natural i = 0; i < delay; ++i) b.inc(2);
  b.jump(loop);
  b.bind(done);
  b.halt();
  return b.build();
}

Program membership_predicate(const std::vector<Natural>& members) {
  ProgramBuilder b;
  const auto yes = b.new_label();
  const auto no = b.new_label();
  b.unpair(0, 1, 2);
  b.branch_on_values(1, members, yes, no);
  b.bind(yes);
  b.inc(0);
  b.halt();
  b.bind(no);
  b.halt();
  return b.build();
}

Program even_and_m_positive_predicate() {
  ProgramBuilder b;
  const auto yes = b.new_label();
  const auto no = b.new_label();
  const auto parity = b.new_label();
  const auto odd = b.new_label();
  const auto even = b.new_label();
  b.unpair(0, 1, 2);  // r1 = a, r2 = <m, n>
  b.unpair(2, 3, 4);  // r3 = m, r4 = n
  b.bind(parity);
  b.decjz(1, even);
  b.decjz(1, odd);
  b.jump(parity);
  b.bind(odd);
  b.jump(no);
  b.bind(even);
  b.decjz(3, no);
  b.jump(yes);
  b.bind(yes);
  b.inc(0);
  b.halt();
  b.bind(no);
  b.halt();
  return b.build();
}

Program constant(Natural value) {
  ProgramBuilder b;
  b.clear(0);
  for (Natural i = 0; i < value; ++i) b.inc(0);
  b.halt();
  return b.build();
}

}  // namespace programs

ReSet ReSet::from_program(Program p) {
  ReSet s;
  s.program_ = std::move(p);
  return s;
}

ReSet ReSet::crushed(ReSet inner) {
  ReSet s;
  s.inner_ = std::make_shared<const ReSet>(std::move(inner));
  return s;
}

std::string ReSet::describe() const {
  if (inner_) return "crush(" + inner_->describe() + ")";
  return format_program_inline(program_);
}

bool operator==(const ReSet& a, const ReSet& b) {
  if (a.is_program() != b.is_program()) return false;
  if (a.is_program()) return a.program_ == b.program_;
  return *a.inner_ == *b.inner_;
}

ReSet parse_reset(std::string_view text) {
  const auto first = text.find_first_not_of(' ');
  if (first == std::string_view::npos) throw ParseError("empty r.e. set description");
  text = text.substr(first);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.starts_with("crush(")) {
    if (text.back() != ')') throw ParseError("unterminated crush(...)");
    return ReSet::crushed(parse_reset(text.substr(6, text.size() - 7)));
  }
  return ReSet::from_program(parse_program_inline(text));
}

struct ReSetEnumerator::State {
  // Program-backed: one machine per started input; `active` lists the
  // inputs still running, ascending.
  std::vector<Machine> machines;
  std::vector<Natural> active;
  // Crush-backed.
  std::unique_ptr<ReSetEnumerator> inner;
  Natural emitted = 0;
};

ReSetEnumerator::ReSetEnumerator(const ReSet& set)
    : set_(std::make_shared<const ReSet>(set)), state_(std::make_unique<State>()) {
  if (!set_->is_program()) state_->inner = std::make_unique<ReSetEnumerator>(*set_->inner());
}

ReSetEnumerator::ReSetEnumerator(const ReSetEnumerator& other)
    : set_(other.set_), state_(std::make_unique<State>()), diagonal_(other.diagonal_) {
  state_->machines = other.state_->machines;
  state_->active = other.state_->active;
  state_->emitted = other.state_->emitted;
  if (other.state_->inner) state_->inner = std::make_unique<ReSetEnumerator>(*other.state_->inner);
}

ReSetEnumerator& ReSetEnumerator::operator=(const ReSetEnumerator& other) {
  if (this != &other) *this = ReSetEnumerator(other);
  return *this;
}

ReSetEnumerator::~ReSetEnumerator() = default;
ReSetEnumerator::ReSetEnumerator(ReSetEnumerator&&) noexcept = default;
ReSetEnumerator& ReSetEnumerator::operator=(ReSetEnumerator&&) noexcept = default;

std::vector<Natural> ReSetEnumerator::advance_diagonal() {
  std::vector<Natural> found;
  if (state_->inner) {
    for (std::size_t k = state_->inner->advance_diagonal().size(); k > 0; --k) found.push_back(state_->emitted++);
    ++diagonal_;
    return found;
  }
  const Natural d = diagonal_++;
  std::vector<Natural> still_running;
  still_running.reserve(state_->active.size() + 1);
  for (Natural x : state_->active) {
    if (state_->machines[x].run(1)) {
      found.push_back(x);
    } else {
      still_running.push_back(x);
    }
  }
  state_->machines.emplace_back(set_->program(), d);
  if (state_->machines.back().halted()) {
    found.push_back(d);
  } else {
    still_running.push_back(d);
  }
  state_->active = std::move(still_running);
  return found;
}

std::vector<Natural> we_enumerate(const ReSet& s, Natural items, Natural max_diagonals) {
  std::vector<Natural> out;
  ReSetEnumerator e(s);
  while (out.size() < items && e.diagonals() < max_diagonals) {
    for (Natural v : e.advance_diagonal()) {
      if (out.size() < items) out.push_back(v);
    }
  }
  return out;
}

ReSet crush(const ReSet& s) { return ReSet::crushed(s); }

Natural sigma2_eval(const Sigma2Predicate& pred, Natural a, Natural m, Natural n) {
  const Natural input = cantor_pair(a, cantor_pair(m, n));
  auto out = run(pred.program, input, pred.budget);
  if (!out) {
    throw BudgetExhausted("phi(" + std::to_string(a) + "," + std::to_string(m) + "," + std::to_string(n) +
                          ") did not halt within " + std::to_string(pred.budget) + " steps");
  }
  return *out;
}

}  // namespace torsionkit
