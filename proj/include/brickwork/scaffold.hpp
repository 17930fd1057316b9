#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "brickwork/brick.hpp"
#include "brickwork/bricks/basic.hpp"
#include "brickwork/circuit.hpp"
#include "brickwork/error.hpp"

namespace brickwork {

using BrickIndex = std::size_t;

struct PortRef {
  BrickIndex brick = 0;
  std::size_t port = 0;

  friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

struct Connection {
  PortRef src;
  PortRef dst;
};

// Source bricks begin one step after the global start neuron (which fires at 0).
inline constexpr int kSourceBegin = 1;

inline bool valid_brick_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name)
    if (c == ':' || c == '.' || c == '/' || c == ' ' || c == '\t' || c == '\n') return false;
  return true;
}

// User-level composition graph: bricks as nodes, port-to-port connections as
// edges. Always a DAG; an input port has at most one source, an output port
// may feed any number of inputs.
class Scaffold {
 public:
  explicit Scaffold(std::string ns = "main") : ns_(std::move(ns)) {}

  const std::string& name_space() const noexcept { return ns_; }

  BrickIndex add_brick(std::string name, BrickPtr brick) {
    if (!brick) throw error(errc::parameter, "null brick");
    if (!valid_brick_name(name)) throw error(errc::parameter, "invalid brick name '" + name + "'");
    if (find(name)) throw error(errc::namespace_clash, "brick name '" + name + "' already used");
    entries_.push_back(Entry{std::move(name), std::move(brick), {}});
    entries_.back().inputs.resize(entries_.back().brick->arity());
    return entries_.size() - 1;
  }

  BrickIndex add_brick(BrickPtr brick) {
    std::string name = std::string(brick ? brick->kind() : "brick") + std::to_string(entries_.size());
    return add_brick(std::move(name), std::move(brick));
  }

  void connect(PortRef src, PortRef dst) {
    check_index(src.brick);
    check_index(dst.brick);
    const auto& s = entries_[src.brick];
    auto& d = entries_[dst.brick];
    if (src.port >= s.brick->output_count())
      throw error(errc::wiring, "brick '" + s.name + "' has no output port " + std::to_string(src.port));
    if (dst.port >= d.inputs.size())
      throw error(errc::wiring, "brick '" + d.name + "' has no input port " + std::to_string(dst.port));
    if (d.inputs[dst.port])
      throw error(errc::fan_in, "input port " + d.name + "." + std::to_string(dst.port) + " is already connected");
    if (src.brick == dst.brick || reaches(dst.brick, src.brick))
      throw error(errc::cycle, "connecting " + s.name + " -> " + d.name + " would create a cycle");
    d.inputs[dst.port] = src;
  }

  void connect(std::string_view src, std::size_t src_port, std::string_view dst, std::size_t dst_port) {
    connect(PortRef{require(src), src_port}, PortRef{require(dst), dst_port});
  }

  // Detaches whatever feeds `dst`; returns the former source.
  std::optional<PortRef> disconnect(PortRef dst) {
    check_index(dst.brick);
    auto& slot = entries_[dst.brick].inputs.at(dst.port);
    auto old = slot;
    slot.reset();
    return old;
  }

  std::optional<BrickIndex> find(std::string_view name) const {
    for (BrickIndex i = 0; i < entries_.size(); ++i)
      if (entries_[i].name == name) return i;
    return std::nullopt;
  }
  BrickIndex require(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw error(errc::wiring, "unknown brick '" + std::string(name) + "'");
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const std::string& name(BrickIndex i) const { return entries_.at(i).name; }
  const Brick& brick(BrickIndex i) const { return *entries_.at(i).brick; }
  BrickPtr brick_ptr(BrickIndex i) const { return entries_.at(i).brick; }
  const std::vector<std::optional<PortRef>>& inputs(BrickIndex i) const { return entries_.at(i).inputs; }

  std::vector<Connection> connections() const {
    std::vector<Connection> out;
    for (BrickIndex i = 0; i < entries_.size(); ++i)
      for (std::size_t p = 0; p < entries_[i].inputs.size(); ++p)
        if (entries_[i].inputs[p]) out.push_back({*entries_[i].inputs[p], PortRef{i, p}});
    return out;
  }

  // Distinct upstream bricks, ascending.
  std::vector<BrickIndex> predecessors(BrickIndex i) const {
    std::set<BrickIndex> preds;
    for (const auto& in : entries_.at(i).inputs)
      if (in) preds.insert(in->brick);
    return {preds.begin(), preds.end()};
  }

  // Kahn's algorithm; among ready bricks the earliest added goes first.
  std::vector<BrickIndex> topological_order() const {
    std::vector<std::size_t> pending(entries_.size(), 0);
    std::vector<std::vector<BrickIndex>> succ(entries_.size());
    for (BrickIndex i = 0; i < entries_.size(); ++i)
      for (BrickIndex p : predecessors(i)) {
        ++pending[i];
        succ[p].push_back(i);
      }
    std::set<BrickIndex> ready;
    for (BrickIndex i = 0; i < entries_.size(); ++i)
      if (pending[i] == 0) ready.insert(i);
    std::vector<BrickIndex> order;
    while (!ready.empty()) {
      BrickIndex i = *ready.begin();
      ready.erase(ready.begin());
      order.push_back(i);
      for (BrickIndex s : succ[i])
        if (--pending[s] == 0) ready.insert(s);
    }
    return order;
  }

 private:
  struct Entry {
    std::string name;
    BrickPtr brick;
    std::vector<std::optional<PortRef>> inputs;
  };

  void check_index(BrickIndex i) const {
    if (i >= entries_.size()) throw error(errc::wiring, "unknown brick index " + std::to_string(i));
  }

  // True when `to` is reachable from `from` along existing connections.
  bool reaches(BrickIndex from, BrickIndex to) const {
    std::vector<std::vector<BrickIndex>> succ(entries_.size());
    for (BrickIndex i = 0; i < entries_.size(); ++i)
      for (BrickIndex p : predecessors(i)) succ[p].push_back(i);
    std::vector<char> seen(entries_.size(), 0);
    std::vector<BrickIndex> stack{from};
    while (!stack.empty()) {
      BrickIndex i = stack.back();
      stack.pop_back();
      if (i == to) return true;
      if (seen[i]) continue;
      seen[i] = 1;
      for (BrickIndex s : succ[i]) stack.push_back(s);
    }
    return false;
  }

  std::string ns_;
  std::vector<Entry> entries_;
};

// Ports fed by the alignment machinery rather than by a connection.
using ExternalPorts = std::set<PortRef>;

struct ResolvedScaffold {
  std::vector<BrickIndex> order;
  std::vector<std::vector<PortShape>> input_shapes;
  std::vector<Resolution> resolutions;
};

inline ResolvedScaffold resolve_shapes(const Scaffold& s, const ExternalPorts& external = {}) {
  ResolvedScaffold r;
  r.order = s.topological_order();
  r.input_shapes.resize(s.size());
  r.resolutions.resize(s.size());
  for (BrickIndex b : r.order) {
    const auto& ins = s.inputs(b);
    auto& shapes = r.input_shapes[b];
    for (std::size_t p = 0; p < ins.size(); ++p) {
      if (external.count(PortRef{b, p})) {
        shapes.push_back(PortShape{{1}, Coding::binary_vector, Duration(1)});
      } else if (!ins[p]) {
        throw error(errc::wiring, "input port " + s.name(b) + "." + std::to_string(p) + " is not connected");
      } else {
        shapes.push_back(r.resolutions[ins[p]->brick].outputs.at(ins[p]->port));
      }
    }
    try {
      r.resolutions[b] = s.brick(b).resolve_metadata(shapes);
    } catch (const error& e) {
      throw error(e.code(), "brick '" + s.name(b) + "': " + e.what());
    }
  }
  return r;
}

// Timesteps from the sources' presentation to each brick's first outputs.
struct BranchDepth {
  std::vector<Depth> depth;
  // Latest predecessor depth; 0 for sources, runtime if any predecessor is.
  std::vector<Depth> before;
};

inline BranchDepth depths_from(const Scaffold& s, const ResolvedScaffold& r) {
  BranchDepth d{std::vector<Depth>(s.size()), std::vector<Depth>(s.size())};
  for (BrickIndex b : r.order) {
    Depth before(0);
    for (BrickIndex p : s.predecessors(b)) {
      if (d.depth[p].is_runtime() || before.is_runtime()) before = Depth::runtime();
      else before = Depth(std::max(before.steps(), d.depth[p].steps()));
    }
    d.before[b] = before;
    const Depth own = r.resolutions[b].metadata.depth;
    d.depth[b] = (before.is_runtime() || own.is_runtime()) ? Depth::runtime() : Depth(before.steps() + own.steps());
  }
  return d;
}

inline BranchDepth compute_depths(const Scaffold& s) { return depths_from(s, resolve_shapes(s)); }

enum class InsertionKind { delay, buffer };

struct Insertion {
  InsertionKind kind;
  std::string name;   // inserted brick
  std::string from;   // upstream brick
  std::string merge;  // downstream brick
  std::size_t port;   // merge input port
  int steps = 0;      // delay amount
};

// Buffers in front of one merge, all released by one join neuron that fires
// once every upstream done has fired.
struct JoinGroup {
  std::string name;
  BrickIndex merge;
  std::vector<BrickIndex> buffers;
  std::vector<BrickIndex> upstream;
};

struct AlignedScaffold {
  Scaffold scaffold;
  std::vector<Insertion> insertions;
  std::vector<JoinGroup> joins;

  ExternalPorts external_ports() const {
    ExternalPorts out;
    for (const auto& j : joins)
      for (BrickIndex b : j.buffers) out.insert(PortRef{b, 1});
    return out;
  }
  const JoinGroup* join_for(BrickIndex merge) const {
    for (const auto& j : joins)
      if (j.merge == merge) return &j;
    return nullptr;
  }
};

// Pads every merge so all of its inputs arrive together. Static branches get a
// Delay brick at their end, sized to the deepest branch. If any branch has a
// runtime depth, every branch is buffered and released by the join of all
// upstream done signals; the same holds for a brick whose only input comes
// from a runtime-depth brick. The input scaffold is not modified.
inline AlignedScaffold align_timing(const Scaffold& user) {
  AlignedScaffold a{user, {}, {}};
  const auto resolved = resolve_shapes(user);
  const auto depth = depths_from(user, resolved);
  auto& s = a.scaffold;
  for (BrickIndex m : resolved.order) {
    const auto ins = user.inputs(m);
    if (ins.empty()) continue;
    bool runtime = false, single_step = true;
    int deepest = 0;
    for (const auto& in : ins) {
      const Depth d = depth.depth[in->brick];
      if (d.is_runtime()) runtime = true;
      else deepest = std::max(deepest, d.steps());
      single_step = single_step && resolved.resolutions[in->brick].outputs.at(in->port).duration == Duration(1);
    }
    // A lone input behind a runtime-depth brick is buffered too, so the
    // brick's begin coincides with its data. Multi-step lone inputs cannot be
    // buffered; lay_bricks then starts the brick after the upstream done.
    if (runtime && (ins.size() >= 2 || single_step)) {
      JoinGroup group{"join~" + user.name(m), m, {}, user.predecessors(m)};
      for (std::size_t p = 0; p < ins.size(); ++p) {
        const PortRef src = *ins[p];
        std::string name = "buffer~" + user.name(src.brick) + "~" + user.name(m) + "~" + std::to_string(p);
        BrickIndex buf = s.add_brick(name, std::make_shared<BufferBrick>());
        s.disconnect(PortRef{m, p});
        s.connect(src, PortRef{buf, 0});
        s.connect(PortRef{buf, 0}, PortRef{m, p});
        group.buffers.push_back(buf);
        a.insertions.push_back({InsertionKind::buffer, name, user.name(src.brick), user.name(m), p, 0});
      }
      a.joins.push_back(std::move(group));
      continue;
    }
    if (runtime || ins.size() < 2) continue;
    for (std::size_t p = 0; p < ins.size(); ++p) {
      const PortRef src = *ins[p];
      const int gap = deepest - depth.depth[src.brick].steps();
      if (gap == 0) continue;
      std::string name = "delay~" + user.name(src.brick) + "~" + user.name(m) + "~" + std::to_string(p);
      BrickIndex d = s.add_brick(name, std::make_shared<DelayBrick>(gap));
      s.disconnect(PortRef{m, p});
      s.connect(src, PortRef{d, 0});
      s.connect(PortRef{d, 0}, PortRef{m, p});
      a.insertions.push_back({InsertionKind::delay, name, user.name(src.brick), user.name(m), p, gap});
    }
  }
  // Buffer shapes must resolve now so unsupported ports fail at alignment.
  resolve_shapes(s, a.external_ports());
  return a;
}

struct LaidBrick {
  std::string name;
  std::string kind;
  bool inserted = false;
  std::vector<InputPort> inputs;
  std::vector<OutputPort> outputs;
  NeuronId begin;
  NeuronId done;
  BrickMetadata metadata;
  Depth depth;
  // Absolute begin step when anchored to the global start.
  std::optional<int> begin_time;
};

struct Layout {
  Circuit circuit;
  NeuronId start;
  std::vector<LaidBrick> bricks;
  std::vector<Insertion> insertions;
  std::map<std::string, NeuronId> joins;  // merge name -> join neuron

  const LaidBrick& brick(std::string_view name) const {
    for (const auto& b : bricks)
      if (b.name == name) return b;
    throw error(errc::wiring, "no laid brick named '" + std::string(name) + "'");
  }
};

// Builds every brick in deterministic topological order and merges the local
// circuits into one. Connected ports are wired 1:1 by index with weight +1 and
// the downstream port's arrival delay. Each begin node is driven from an
// anchor: the global start for static bricks, the join neuron for buffered
// merges, and the upstream done for bricks below a runtime-depth brick.
inline Layout lay_bricks(const AlignedScaffold& a) {
  const Scaffold& s = a.scaffold;
  const auto resolved = resolve_shapes(s, a.external_ports());
  const auto depth = depths_from(s, resolved);
  std::set<std::string> inserted;
  for (const auto& ins : a.insertions) inserted.insert(ins.name);

  Layout out{Circuit(s.name_space(), "scaffold"), {}, std::vector<LaidBrick>(s.size()), a.insertions, {}};
  auto& c = out.circuit;
  out.start = c.add_neuron(NeuronParams{}, Role::input, {}, "start", "scaffold");

  for (BrickIndex b : resolved.order) {
    BuiltBrick built = [&] {
      try {
        return s.brick(b).build(resolved.input_shapes[b], Namer(s.name_space(), s.name(b)));
      } catch (const error& e) {
        throw error(e.code(), "brick '" + s.name(b) + "': " + e.what());
      }
    }();
    c.merge(built.fragment);
    auto& laid = out.bricks[b];
    laid.name = s.name(b);
    laid.kind = std::string(s.brick(b).kind());
    laid.inserted = inserted.count(laid.name) != 0;
    laid.inputs = std::move(built.inputs);
    laid.outputs = std::move(built.outputs);
    laid.begin = built.begin;
    laid.done = built.done;
    laid.metadata = built.metadata;
    laid.depth = depth.depth[b];
  }

  auto wire = [&](const NeuronId& pre, const NeuronId& post, int delay, const std::string& what) {
    // One source feeding several ports that land on the same neuron (x AND x)
    // becomes a single synapse carrying the summed weight.
    if (c.contains(pre, post) && c.synapse(pre, post).delay == delay) {
      Synapse merged = c.synapse(pre, post);
      merged.weight += 1.0;
      c.insert_unchecked(std::move(merged));
      return;
    }
    try {
      c.add_synapse(pre, post, 1.0, delay);
    } catch (const error& e) {
      throw error(errc::wiring, what + ": " + e.what());
    }
  };

  for (BrickIndex b : resolved.order) {
    const auto& ins = s.inputs(b);
    for (std::size_t p = 0; p < ins.size(); ++p) {
      if (!ins[p]) continue;
      const auto& src = out.bricks[ins[p]->brick].outputs.at(ins[p]->port);
      const auto& dst = out.bricks[b].inputs.at(p);
      const std::string what = s.name(ins[p]->brick) + "." + std::to_string(ins[p]->port) + " -> " + s.name(b) + "." +
                               std::to_string(p);
      if (src.neurons.size() != dst.neurons.size() || !src.shape.same_dims(dst.shape))
        throw error(errc::wiring, what + ": port shapes " + dims_to_string(src.shape.dims) + " and " +
                                      dims_to_string(dst.shape.dims) + " differ");
      for (const auto& id : src.neurons) {
        auto pos = ravel(c.neuron(id).index, src.shape.dims);
        if (!pos) throw error(errc::wiring, what + ": neuron " + id + " carries an index outside its port");
        wire(id, dst.neurons[*pos], dst.arrival_delay, what);
      }
    }
  }

  for (const auto& j : a.joins) {
    NeuronParams params;
    params.threshold = static_cast<double>(j.upstream.size()) - 0.5;
    params.decay = 0.0;
    params.reset = kFireOnceReset;
    auto join = c.add_neuron(params, Role::control, {}, "join", j.name);
    for (BrickIndex u : j.upstream) wire(out.bricks[u].done, join, 1, j.name);
    for (BrickIndex buf : j.buffers) {
      const auto& release = out.bricks[buf].inputs.at(1);
      wire(join, release.neurons.at(0), release.arrival_delay, j.name);
    }
    out.joins.emplace(s.name(j.merge), join);
  }

  for (BrickIndex b : resolved.order) {
    auto& laid = out.bricks[b];
    const auto preds = s.predecessors(b);
    const std::string what = "begin of " + laid.name;
    if (a.join_for(b)) {
      wire(out.joins.at(s.name(b)), laid.begin, BufferBrick::kReleaseLatency, what);
    } else if (!depth.before[b].is_runtime()) {
      laid.begin_time = kSourceBegin + depth.before[b].steps();
      wire(out.start, laid.begin, *laid.begin_time, what);
    } else if (preds.size() == 1) {
      wire(out.bricks[preds.front()].done, laid.begin, 1, what);
    } else {
      throw error(errc::wiring, laid.name + " merges runtime-depth branches without alignment");
    }
  }

  require_valid(c);
  return out;
}

inline Layout lay_bricks(const Scaffold& s) { return lay_bricks(align_timing(s)); }

}  // namespace brickwork
