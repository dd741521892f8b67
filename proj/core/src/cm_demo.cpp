#include "tokmc/cm_demo.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace tokmc {

void CounterMachine::validate() const {
  if (num_states <= 0) throw std::invalid_argument("CounterMachine: no states");
  if (initial < 0 || initial >= num_states || halt < 0 || halt >= num_states)
    throw std::invalid_argument("CounterMachine: initial/halt out of range");
  if (static_cast<int>(program.size()) != num_states)
    throw std::invalid_argument("CounterMachine: program must cover every state");
  auto chk = [&](int t) {
    if (t < 0 || t >= num_states) throw std::invalid_argument("CounterMachine: target out of range");
  };
  for (int q = 0; q < num_states; ++q) {
    const auto& in = program[q];
    if (in.op == Instr::Op::Tz) { chk(in.target_zero); chk(in.target_nonzero); }
    else chk(in.target);
    if (in.op != Instr::Op::Goto && in.counter != 1 && in.counter != 2)
      throw std::invalid_argument("CounterMachine: counter must be 1 or 2");
  }
}

CmRun cm_reference_run(const CounterMachine& cm, long counter_bound, int max_steps) {
  if (counter_bound < 0 || max_steps <= 0)
    throw std::invalid_argument("cm_reference_run: bounds must be positive");
  cm.validate();
  CmRun run;
  int q = cm.initial;
  long c1 = 0, c2 = 0;
  for (int step = 0; step < max_steps; ++step) {
    run.trace.push_back({q, c1, c2});
    if (q == cm.halt) { run.halted = true; return run; }
    if (run.looped) continue;  // spin in place forever
    const auto& in = cm.program[q];
    long& c = in.counter == 1 ? c1 : c2;
    switch (in.op) {
      case CounterMachine::Instr::Op::Inc:
        if (c >= counter_bound) { run.looped = true; break; }
        ++c;
        q = in.target;
        break;
      case CounterMachine::Instr::Op::Dec:
        if (c <= 0) { run.looped = true; break; }
        --c;
        q = in.target;
        break;
      case CounterMachine::Instr::Op::Tz:
        q = c == 0 ? in.target_zero : in.target_nonzero;
        break;
      case CounterMachine::Instr::Op::Goto:
        q = in.target;
        break;
    }
  }
  return run;
}

namespace {

// command numbering: 0 inc1, 1 dec1, 2 tz1, 3 inc2, 4 dec2, 5 tz2
int command_of(const CounterMachine::Instr& in) {
  int base = in.counter == 1 ? 0 : 3;
  switch (in.op) {
    case CounterMachine::Instr::Op::Inc: return base + 0;
    case CounterMachine::Instr::Op::Dec: return base + 1;
    case CounterMachine::Instr::Op::Tz: return base + 2;
    default: return -1;  // goto has no command
  }
}

struct Builder {
  ProcessTemplate t;
  std::map<std::string, int> ids;

  int state(const std::string& name, bool token, std::vector<std::string> labels = {}) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(t.states.size());
    t.states.push_back(name);
    t.has_token.push_back(token);
    std::sort(labels.begin(), labels.end());
    t.prop_labels.push_back(std::move(labels));
    ids.emplace(name, id);
    return id;
  }
  void edge(int from, const std::string& action, int to) { t.transitions.push_back({from, action, to}); }
};

std::string mem_n(int b1, int b2, int var, bool tried) {
  std::ostringstream os;
  os << "m" << b1 << b2 << "v" << var << (tried ? "t" : "i");
  return os.str();
}
std::string mem_t(int b1, int b2, int var, bool cw) {
  std::ostringstream os;
  os << "M" << b1 << b2 << "v" << var << (cw ? ">" : "<");
  return os.str();
}

ProcessTemplate full_protocol_template(const CounterMachine& cm) {
  Builder b;
  b.t.name = "cm-biring";
  b.t.internal_actions = {"step"};
  b.t.snd_directions = {"cw!", "ccw!"};
  b.t.rcv_directions = {"cw?", "ccw?"};

  // ---- memory component
  for (int b1 = 0; b1 <= 1; ++b1)
    for (int b2 = 0; b2 <= 1; ++b2)
      for (int var = 0; var < 6; ++var) {
        for (int tried = 0; tried <= 1; ++tried) b.state(mem_n(b1, b2, var, tried), false);
        b.state(mem_t(b1, b2, var, true), true);
        b.state(mem_t(b1, b2, var, false), true);
      }
  for (int b1 = 0; b1 <= 1; ++b1)
    for (int b2 = 0; b2 <= 1; ++b2)
      for (int var = 0; var < 6; ++var) {
        int idle = b.ids.at(mem_n(b1, b2, var, false));
        int tried = b.ids.at(mem_n(b1, b2, var, true));
        int relay = b.ids.at(mem_t(b1, b2, (var + 1) % 6, true));
        // rotation round: idle cw receipt bumps the command variable
        b.edge(idle, "cw?", relay);
        // completion relay: tried cw receipt clears the flag, no bump
        b.edge(tried, "cw?", b.ids.at(mem_t(b1, b2, var, true)));
        b.edge(b.ids.at(mem_t(b1, b2, var, true)), "cw!", idle);
        b.edge(b.ids.at(mem_t(b1, b2, var, false)), "ccw!", tried);

        // execution sweep: idle ccw receipt runs the stored command
        int bit = (var < 3) ? b1 : b2;
        int cmd = var % 3;  // 0 inc, 1 dec, 2 tz on that counter
        bool can;
        int nb1 = b1, nb2 = b2;
        switch (cmd) {
          case 0:  // inc: needs bit 0, sets it
            can = bit == 0;
            if (can) ((var < 3) ? nb1 : nb2) = 1;
            break;
          case 1:  // dec: needs bit 1, clears it
            can = bit == 1;
            if (can) ((var < 3) ? nb1 : nb2) = 0;
            break;
          default:  // tz: bit 1 answers "nonzero", bit 0 passes on
            can = bit == 1;
            break;
        }
        if (can) b.edge(idle, "ccw?", b.ids.at(mem_t(nb1, nb2, var, true)));   // reply cw
        else b.edge(idle, "ccw?", b.ids.at(mem_t(b1, b2, var, false)));        // pass ccw
      }

  // ---- controller component
  auto cready = [&](int q, int cur) {
    std::string n = "c" + std::to_string(q) + "v" + std::to_string(cur);
    return b.state(n, true, q == cm.halt ? std::vector<std::string>{"HALT"} : std::vector<std::string>{});
  };
  auto cwait = [&](const std::string& tag, int q, int cur, bool halt_label = false) {
    std::string n = "w" + tag + std::to_string(q) + "v" + std::to_string(cur);
    return b.state(n, false, halt_label ? std::vector<std::string>{"HALT"} : std::vector<std::string>{});
  };

  int fail = b.state("cfail", true);
  int failw = b.state("cfailw", false);
  b.edge(fail, "cw!", failw);
  b.edge(failw, "cw?", fail);

  for (int q = 0; q < cm.num_states; ++q)
    for (int cur = 0; cur < 6; ++cur) {
      int ready = cready(q, cur);
      if (q == cm.halt) {
        int w = cwait("h", q, cur, true);
        b.edge(ready, "cw!", w);
        b.edge(w, "cw?", cready(q, (cur + 1) % 6));
        continue;
      }
      const auto& in = cm.program[q];
      if (in.op == CounterMachine::Instr::Op::Goto) {
        int w = cwait("g", q, cur);
        b.edge(ready, "cw!", w);
        b.edge(w, "cw?", cready(in.target, (cur + 1) % 6));
        continue;
      }
      int cmd = command_of(in);
      if (cmd != cur) {
        // rotation round towards the command value
        int w = cwait("r", q, cur);
        b.edge(ready, "cw!", w);
        b.edge(w, "cw?", cready(q, (cur + 1) % 6));
        continue;
      }
      // trigger the execution sweep
      int ex = cwait("x", q, cur);
      b.edge(ready, "ccw!", ex);
      if (in.op == CounterMachine::Instr::Op::Tz) {
        b.edge(ex, "cw?", cready(in.target_nonzero, cur));
        // zero answer returns ccw; one cleanup round clears the tried flags
        int zc = b.state("cz" + std::to_string(q) + "v" + std::to_string(cur), true);
        int zw = cwait("z", q, cur);
        b.edge(ex, "ccw?", zc);
        b.edge(zc, "cw!", zw);
        b.edge(zw, "cw?", cready(in.target_zero, cur));
      } else {
        b.edge(ex, "cw?", cready(in.target, cur));
        b.edge(ex, "ccw?", fail);  // saturated increment / zero decrement
      }
    }

  b.t.initial_with_token = b.ids.at("c" + std::to_string(cm.initial) + "v0");
  b.t.initial_without_token = b.ids.at(mem_n(0, 0, 0, false));
  return b.t;
}

// Ring size 2 leaves one channel in each direction, so neither side can
// signal by direction choice; the bundle degenerates to the bound-1 product
// machine with a relay memory.
ProcessTemplate relay_template(const CounterMachine& cm) {
  Builder b;
  b.t.name = "cm-biring-2";
  b.t.internal_actions = {"step"};
  b.t.snd_directions = {"cw!", "ccw!"};
  b.t.rcv_directions = {"cw?", "ccw?"};

  int m0 = b.state("relay", false);
  int mt = b.state("relayT", true);
  b.edge(m0, "cw?", mt);
  b.edge(mt, "ccw!", m0);

  auto rstate = [&](int q, int c1, int c2, bool tok) {
    std::ostringstream os;
    os << (tok ? "r" : "rw") << q << "c" << c1 << c2;
    bool halt = q == cm.halt;
    return b.state(os.str(), tok, halt ? std::vector<std::string>{"HALT"} : std::vector<std::string>{});
  };

  for (int q = 0; q < cm.num_states; ++q)
    for (int c1 = 0; c1 <= 1; ++c1)
      for (int c2 = 0; c2 <= 1; ++c2) {
        int here = rstate(q, c1, c2, true);
        int nq = q, n1 = c1, n2 = c2;
        if (q != cm.halt) {
          const auto& in = cm.program[q];
          int& c = in.counter == 1 ? n1 : n2;
          switch (in.op) {
            case CounterMachine::Instr::Op::Inc:
              if (c >= 1) { nq = q; } else { ++c; nq = in.target; }
              break;
            case CounterMachine::Instr::Op::Dec:
              if (c <= 0) { nq = q; } else { --c; nq = in.target; }
              break;
            case CounterMachine::Instr::Op::Tz:
              nq = (c == 0) ? in.target_zero : in.target_nonzero;
              break;
            case CounterMachine::Instr::Op::Goto:
              nq = in.target;
              break;
          }
          // a stuck step (nq==q with same counters) loops by construction
        }
        int wait = rstate(nq, n1, n2, false);
        b.edge(here, "cw!", wait);
        b.edge(wait, "ccw?", rstate(nq, n1, n2, true));
      }

  b.t.initial_with_token = b.ids.at("r" + std::to_string(cm.initial) + "c00");
  b.t.initial_without_token = m0;
  return b.t;
}

}  // namespace

SimBundle cm_to_biring(const CounterMachine& cm, int n, bool allow_large) {
  cm.validate();
  if (n < 2) throw std::invalid_argument("cm_to_biring: need n >= 2");
  if (n > 6 && !allow_large)
    throw std::invalid_argument("cm_to_biring: ring sizes above 6 need allow_large");
  SimBundle bundle;
  bundle.topo = make_biring(n);
  bundle.tpl = n == 2 ? relay_template(cm) : full_protocol_template(cm);
  return bundle;
}

CounterMachine builtin_cm(const std::string& name) {
  using Op = CounterMachine::Instr::Op;
  CounterMachine cm;
  cm.name = name;
  if (name == "spin") {
    // never halts, no counter use
    cm.num_states = 2;
    cm.initial = 0;
    cm.halt = 1;
    cm.program.resize(2);
    cm.program[0] = {Op::Goto, 1, 0, 0, 0};
    return cm;
  }
  if (name == "count-two") {
    // inc1 inc1, then drain: halts iff counters can reach 2
    cm.num_states = 5;
    cm.initial = 0;
    cm.halt = 4;
    cm.program.resize(5);
    cm.program[0] = {Op::Inc, 1, 1, 0, 0};
    cm.program[1] = {Op::Inc, 1, 2, 0, 0};
    cm.program[2] = {Op::Tz, 1, 0, 4, 3};   // zero -> halt, nonzero -> dec
    cm.program[3] = {Op::Dec, 1, 2, 0, 0};
    return cm;
  }
  if (name == "halt-now") {
    cm.num_states = 1;
    cm.initial = 0;
    cm.halt = 0;
    cm.program.resize(1);
    return cm;
  }
  if (name == "use-both") {
    // inc2, dec2, test 2 for zero: halts at every bound >= 1
    cm.num_states = 4;
    cm.initial = 0;
    cm.halt = 3;
    cm.program.resize(4);
    cm.program[0] = {Op::Inc, 2, 1, 0, 0};
    cm.program[1] = {Op::Dec, 2, 2, 0, 0};
    cm.program[2] = {Op::Tz, 2, 0, 3, 1};   // zero -> halt, nonzero -> drain again
    return cm;
  }
  if (name == "count-three") {
    // three increments then halt: needs counter room for 3
    cm.num_states = 4;
    cm.initial = 0;
    cm.halt = 3;
    cm.program.resize(4);
    cm.program[0] = {Op::Inc, 1, 1, 0, 0};
    cm.program[1] = {Op::Inc, 1, 2, 0, 0};
    cm.program[2] = {Op::Inc, 1, 3, 0, 0};
    return cm;
  }
  throw std::invalid_argument("builtin_cm: unknown machine '" + name + "'");
}

std::vector<std::string> builtin_cm_names() {
  return {"spin", "count-two", "halt-now", "use-both", "count-three"};
}

}  // namespace tokmc
