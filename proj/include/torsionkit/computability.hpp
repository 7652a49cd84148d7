#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "torsionkit/words.hpp"

namespace torsionkit {

/// <x, y> = (x + y)(x + y + 1) / 2 + y. Throws std::overflow_error when the
/// result does not fit in 64 bits.
Natural cantor_pair(Natural x, Natural y);
std::pair<Natural, Natural> cantor_unpair(Natural z);

/// The i-th prime, 1-based: nth_prime(1) == 2.
Natural nth_prime(Natural i);
/// Inverse of nth_prime; std::nullopt when p is not prime.
std::optional<Natural> prime_index(Natural p);
bool is_prime(Natural n);

enum class Opcode { inc, decjz, halt };

struct Instruction {
  Opcode op = Opcode::halt;
  Natural reg = 0;
  Natural target = 0;  // DECJZ only

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// Counter-machine program over INC / DECJZ / HALT. Register 0 holds the
/// input and, on halting, the output. Falling off the end halts.
class Program {
 public:
  Program() = default;
  explicit Program(std::vector<Instruction> code);

  const std::vector<Instruction>& code() const { return code_; }
  std::size_t size() const { return code_.size(); }
  Natural register_count() const { return register_count_; }

  friend bool operator==(const Program& a, const Program& b) { return a.code_ == b.code_; }

 private:
  std::vector<Instruction> code_;
  Natural register_count_ = 1;
};

/// One instruction per line: `INC r3`, `DECJZ r1 7`, `HALT`. Jump targets are
/// 0-based line numbers.
Program parse_program(std::string_view text);
std::string format_program(const Program& p);
/// Single-line form `[INC r0; HALT]` used inside presentation files.
std::string format_program_inline(const Program& p);
Program parse_program_inline(std::string_view text);

/// Small-step machine state, advanced one instruction at a time.
/// Borrows `program`, which must outlive the machine.
class Machine {
 public:
  Machine(const Program& program, Natural input);

  bool halted() const;
  /// Executes up to `steps` instructions; returns true once halted.
  bool run(Natural steps);
  Natural steps_taken() const { return steps_; }
  Natural output() const { return registers_[0]; }

 private:
  const Program* program_;
  std::vector<Natural> registers_;
  Natural pc_ = 0;
  Natural steps_ = 0;
};

/// Output after halting within `steps` instructions, otherwise std::nullopt
/// (NotYet).
std::optional<Natural> run(const Program& p, Natural input, Natural steps);

/// Assembler with labels and a handful of macros for writing fixtures.
/// Unconditional jumps use DECJZ on a register that is never written; it is
/// allocated past every register the program touches when `build` runs.
class ProgramBuilder {
 public:
  using Label = std::size_t;

  Label new_label();
  void bind(Label label);

  void inc(Natural reg);
  void decjz(Natural reg, Label target);
  void halt();
  void jump(Label target);

  void clear(Natural reg);
  /// dst += src; src = 0.
  void move(Natural src, Natural dst);
  /// Replaces `src` by the pair (x, y) with src = <x, y>; x, y must be zero
  /// on entry. Runs in O(src) steps.
  void unpair(Natural src, Natural x, Natural y);
  /// Jumps to `yes` when reg's value is in `values`, else to `no`. Consumes reg.
  void branch_on_values(Natural reg, const std::vector<Natural>& values, Label yes, Label no);
  /// Loops forever.
  void diverge();

  Program build() const;

 private:
  struct Pending {
    Instruction ins;
    std::optional<Label> label;
    bool zero_register = false;
  };
  std::vector<Pending> code_;
  std::vector<std::optional<std::size_t>> labels_;
};

/// Ready-made programs used by tests, the CLI and the bindings.
namespace programs {
Program identity();
Program diverge();
Program doubling();
Program halt_on_evens();
/// Halts exactly on the inputs in `values`. Halting time grows with the input,
/// plus `delay` extra steps before the HALT.
Program halt_on_set(const std::vector<Natural>& values, Natural delay = 0);
/// Halts on every input after `delay` steps per unit of input.
Program total(Natural delay = 0);
/// Sigma-2 predicate program: on input <a, <m, n>> outputs 1 iff a is in
/// `members`, ignoring m and n.
Program membership_predicate(const std::vector<Natural>& members);
/// Outputs 1 iff a is even and m >= 1.
Program even_and_m_positive_predicate();
/// Outputs `value` on every input.
Program constant(Natural value);
}  // namespace programs

/// An r.e. set: the domain of a program's partial function, or the image of
/// another r.e. set under the crush map (n-th enumerated element becomes n-1).
class ReSet {
 public:
  static ReSet from_program(Program p);
  static ReSet crushed(ReSet inner);

  bool is_program() const { return !inner_; }
  const Program& program() const { return program_; }
  const ReSet* inner() const { return inner_.get(); }

  /// `[INC r0; HALT]` or `crush([...])`.
  std::string describe() const;

  friend bool operator==(const ReSet& a, const ReSet& b);

 private:
  Program program_;
  std::shared_ptr<const ReSet> inner_;
};

ReSet parse_reset(std::string_view text);

/// Dovetailed enumeration cursor. Anti-diagonal d runs input x with a budget
/// of d - x steps, inputs ascending; each element is reported once, on the
/// first diagonal where it halts.
class ReSetEnumerator {
 public:
  explicit ReSetEnumerator(const ReSet& set);
  ReSetEnumerator(const ReSetEnumerator& other);
  ReSetEnumerator& operator=(const ReSetEnumerator& other);
  ReSetEnumerator(ReSetEnumerator&&) noexcept;
  ReSetEnumerator& operator=(ReSetEnumerator&&) noexcept;
  ~ReSetEnumerator();

  /// Processes one anti-diagonal and returns the elements it enumerated.
  std::vector<Natural> advance_diagonal();
  Natural diagonals() const { return diagonal_; }

 private:
  struct State;
  std::shared_ptr<const ReSet> set_;
  std::unique_ptr<State> state_;
  Natural diagonal_ = 0;
};

/// First `items` elements of the set in dovetail order, looking at no more
/// than `max_diagonals` anti-diagonals.
std::vector<Natural> we_enumerate(const ReSet& s, Natural items, Natural max_diagonals);

/// W_{h(n)} for W_n = s: empty stays empty, a finite set of size k becomes
/// {0, ..., k-1}, an infinite set becomes all of N.
ReSet crush(const ReSet& s);

class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A program claimed to compute a total function of <a, <m, n>>, together
/// with the per-call step budget. The set it describes is
/// A = { a | exists m, for all n: phi(a, m, n) = 1 }.
struct Sigma2Predicate {
  Program program;
  Natural budget = 0;

  friend bool operator==(const Sigma2Predicate&, const Sigma2Predicate&) = default;
};

/// Throws BudgetExhausted when the program does not halt within the budget.
Natural sigma2_eval(const Sigma2Predicate& pred, Natural a, Natural m, Natural n);

}  // namespace torsionkit
