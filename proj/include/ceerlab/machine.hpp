#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "ceerlab/finite_set.hpp"
#include "ceerlab/pairing.hpp"

namespace ceerlab {

// A small unlimited-register machine. Every natural number decodes to a program:
//
//   code 0       -> empty program
//   code e > 0   -> (head, rest) = unpair(e - 1); instruction(head) followed by program(rest)
//
// and an instruction code c splits into opcode c % 5 and argument a = c / 5:
//
//   0  INC r          r = a
//   1  DECJZ r, t     (r, t) = unpair(a); jump to t if R[r] == 0, else decrement
//   2  JMP t          t = a
//   3  HALT r         halt with output R[r]
//   4  DIVERGE
//
// The input sits in R[0]; all other registers start at zero. Each executed
// instruction costs one step. A program halts only through HALT; running off
// the end of the body, or reaching DIVERGE, spins forever.

enum class Opcode : unsigned char { Inc, DecJz, Jmp, Halt, Diverge };

struct Instruction {
  Opcode op = Opcode::Diverge;
  std::size_t reg = 0;  // dense register slot
  Nat target = 0;
};

struct Program {
  Nat code = 0;
  std::vector<Instruction> body;
  std::size_t register_count = 1;

  static Program decode(Nat code) {
    Program program;
    program.code = code;
    std::map<Nat, std::size_t> slots{{0, 0}};
    auto slot = [&](Nat raw) {
      auto [it, inserted] = slots.emplace(raw, slots.size());
      return it->second;
    };
    Nat rest = code;
    while (rest != 0) {
      auto [head, tail] = unpair(rest - 1);
      rest = tail;
      Instruction ins;
      const Nat arg = head / 5;
      switch (head % 5) {
        case 0:
          ins.op = Opcode::Inc;
          ins.reg = slot(arg);
          break;
        case 1: {
          auto [r, t] = unpair(arg);
          ins.op = Opcode::DecJz;
          ins.reg = slot(r);
          ins.target = t;
          break;
        }
        case 2:
          ins.op = Opcode::Jmp;
          ins.target = arg;
          break;
        case 3:
          ins.op = Opcode::Halt;
          ins.reg = slot(arg);
          break;
        default:
          ins.op = Opcode::Diverge;
          break;
      }
      program.body.push_back(ins);
    }
    program.register_count = slots.size();
    return program;
  }
};

/// Instruction code helpers, used to write programs by hand.
namespace asm_ {
inline Nat inc(Nat r) { return 5 * r + 0; }
inline Nat decjz(Nat r, Nat t) { return 5 * pair(r, t) + 1; }
inline Nat jmp(Nat t) { return 5 * t + 2; }
inline Nat halt(Nat r) { return 5 * r + 3; }
inline Nat diverge() { return 4; }

/// Inverse of Program::decode on instruction lists.
inline Nat assemble(const std::vector<Nat>& instructions) {
  Nat code = 0;
  for (auto it = instructions.rbegin(); it != instructions.rend(); ++it) {
    code = pair(*it, code) + 1;
  }
  return code;
}
}  // namespace asm_

struct Outcome {
  bool halted = false;
  Nat output = 0;

  static Outcome running() { return {}; }
  static Outcome halt(Nat value) { return {true, value}; }
  bool operator==(const Outcome&) const = default;
};

/// A resumable run of one program on one input.
class Execution {
 public:
  Execution(std::shared_ptr<const Program> program, Nat input)
      : program_(std::move(program)), registers_(program_->register_count, 0) {
    registers_[0] = input;
  }

  /// Runs until halted or until `budget` steps have been spent in total.
  void advance(Nat budget) {
    const auto& body = program_->body;
    while (!halted_ && !stuck_ && steps_ < budget) {
      if (pc_ >= body.size()) {
        stuck_ = true;
        break;
      }
      const Instruction& ins = body[pc_];
      ++steps_;
      switch (ins.op) {
        case Opcode::Inc:
          ++registers_[ins.reg];
          ++pc_;
          break;
        case Opcode::DecJz:
          if (registers_[ins.reg] == 0) {
            if (ins.target == pc_) stuck_ = true;  // a zero register never changes by itself
            pc_ = ins.target;
          } else {
            --registers_[ins.reg];
            ++pc_;
          }
          break;
        case Opcode::Jmp:
          if (ins.target == pc_) stuck_ = true;
          pc_ = ins.target;
          break;
        case Opcode::Halt:
          halted_ = true;
          output_ = registers_[ins.reg];
          break;
        case Opcode::Diverge:
          stuck_ = true;
          break;
      }
    }
  }

  /// Outcome within `budget` steps, for any budget up to the progress made so far.
  Outcome outcome_within(Nat budget) const {
    if (halted_ && steps_ <= budget) return Outcome::halt(output_);
    return Outcome::running();
  }

  bool halted() const { return halted_; }
  /// True once the run is known never to halt.
  bool stuck() const { return stuck_; }
  Nat steps() const { return steps_; }
  Nat output() const { return output_; }

 private:
  std::shared_ptr<const Program> program_;
  std::vector<Nat> registers_;
  std::size_t pc_ = 0;
  Nat steps_ = 0;
  Nat output_ = 0;
  bool halted_ = false;
  bool stuck_ = false;
};

/// phi_e(x) within `budget` steps.
inline Outcome run_program(Nat code, Nat input, Nat budget) {
  Execution run(std::make_shared<const Program>(Program::decode(code)), input);
  run.advance(budget);
  return run.outcome_within(budget);
}

/// Memoised runs of one program over many inputs; used to dovetail W_e stage by stage.
/// Thread-safe: the cache is internal and guarded.
class ProgramRuns {
 public:
  explicit ProgramRuns(Nat code)
      : code_(code), program_(std::make_shared<const Program>(Program::decode(code))) {}

  Nat code() const { return code_; }

  Outcome outcome(Nat input, Nat budget) const {
    std::lock_guard lock(mutex_);
    return advanced(input, budget).outcome_within(budget);
  }

  /// The stage at which x enters W_e: max(x + 1, halting time), if that is <= stage.
  std::optional<Nat> entry_stage(Nat input, Nat stage) const {
    std::lock_guard lock(mutex_);
    const Execution& run = advanced(input, stage);
    if (!run.outcome_within(stage).halted) return std::nullopt;
    const Nat entry = std::max(input + 1, run.steps());
    if (entry > stage) return std::nullopt;
    return entry;
  }

 private:
  Execution& advanced(Nat input, Nat budget) const {
    while (runs_.size() <= input) runs_.emplace_back(program_, runs_.size());
    Execution& run = runs_[input];
    run.advance(budget);
    return run;
  }

  Nat code_;
  std::shared_ptr<const Program> program_;
  mutable std::vector<Execution> runs_;
  mutable std::mutex mutex_;
};

/// W_{e,s} = { x < s : phi_e(x) halts within s steps }.
inline FiniteSet we_at_stage(Nat code, Nat stage) {
  const ProgramRuns runs(code);
  FiniteSet out;
  for (Nat x = 0; x < stage; ++x) {
    if (runs.outcome(x, stage).halted) out.push_back(x);
  }
  return out;
}

/// K_{j,s} = { x < s : phi_x(x) halts within s steps with output j }.
inline FiniteSet k_set(Nat j, Nat stage) {
  FiniteSet out;
  for (Nat x = 0; x < stage; ++x) {
    const Outcome o = run_program(x, x, stage);
    if (o.halted && o.output == j) out.push_back(x);
  }
  return out;
}

/// Memoised diagonal runs phi_x(x), for stage-by-stage enumeration of the K_j.
class DiagonalRuns {
 public:
  /// Stage at which x enters K_j for its output j, with that output, if by `stage`.
  std::optional<std::pair<Nat, Nat>> entry(Nat x, Nat stage) const {
    std::lock_guard lock(mutex_);
    while (runs_.size() <= x) {
      const Nat e = runs_.size();
      runs_.emplace_back(std::make_shared<const Program>(Program::decode(e)), e);
    }
    Execution& run = runs_[x];
    run.advance(stage);
    if (!run.outcome_within(stage).halted) return std::nullopt;
    const Nat entry = std::max(x + 1, run.steps());
    if (entry > stage) return std::nullopt;
    return std::pair{entry, run.output()};
  }

 private:
  mutable std::vector<Execution> runs_;
  mutable std::mutex mutex_;
};

}  // namespace ceerlab
