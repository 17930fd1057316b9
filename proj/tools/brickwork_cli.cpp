#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "brickwork/brickwork.hpp"

namespace bw = brickwork;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kSimulation = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bw::error(bw::errc::parse, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw bw::error(bw::errc::parse, "cannot write '" + path + "'");
  out << text;
}

bw::Injection parse_injection(const std::string& spec) {
  auto at = spec.rfind('@');
  if (at == std::string::npos) throw CLI::ValidationError("--inject", "expected <neuron-id>@<t>, got '" + spec + "'");
  try {
    return {spec.substr(0, at), std::stoi(spec.substr(at + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--inject", "bad time in '" + spec + "'");
  }
}

// The global start neuron of a laid scaffold, if this circuit has one.
std::optional<bw::NeuronId> start_neuron(const bw::Circuit& c) {
  for (const auto& [id, n] : c.neurons())
    if (n.role == bw::Role::input && n.brick_tag == "scaffold" && id.ends_with(":start")) return id;
  return std::nullopt;
}

int cmd_build(const std::string& spec, const std::string& out) {
  const auto layout = bw::lay_bricks(bw::io::load_scaffold_spec(spec));
  write_file(out, bw::io::encode_circuit(layout.circuit));
  std::cerr << "built " << layout.circuit.neuron_count() << " neurons, " << layout.circuit.synapse_count()
            << " synapses";
  if (!layout.insertions.empty()) std::cerr << ", " << layout.insertions.size() << " alignment insertion(s)";
  std::cerr << "\n";
  return kOk;
}

int cmd_run(const std::string& doc, int steps, std::uint64_t seed, const std::string& raster_out,
            const std::string& format, const std::vector<std::string>& injections, bool no_start) {
  const auto fmt = bw::io::raster_format_from_string(format);
  const auto circuit = bw::io::decode_circuit(read_file(doc));
  bw::Simulator sim(circuit);
  if (!no_start)
    if (auto start = start_neuron(circuit)) sim.inject(*start, 0);
  for (const auto& s : injections) {
    auto inj = parse_injection(s);
    sim.inject(inj.neuron, inj.t);
  }
  bw::SimulationConfig config;
  config.steps = steps;
  config.seed = seed;
  const auto raster = sim.run(config);
  for (const auto& key : raster.ignored_attributes()) std::cerr << "warning: attribute '" << key << "' ignored\n";
  write_file(raster_out, bw::io::write_raster(raster, fmt));
  std::cerr << raster.size() << " spikes over " << steps << " steps\n";
  return kOk;
}

int cmd_inspect(const std::string& doc) {
  const auto circuit = bw::io::decode_circuit(read_file(doc));
  struct Count {
    std::size_t neurons = 0, in = 0, out = 0;
  };
  std::map<std::string, Count> per_tag;
  for (const auto& [id, n] : circuit.neurons()) ++per_tag[n.brick_tag].neurons;
  for (const auto& [key, s] : circuit.synapses()) {
    const auto& pre = circuit.neuron(s.pre).brick_tag;
    const auto& post = circuit.neuron(s.post).brick_tag;
    if (pre == post) continue;
    ++per_tag[pre].out;
    ++per_tag[post].in;
  }
  std::cout << "namespace " << circuit.name_space() << ": " << circuit.neuron_count() << " neurons, "
            << circuit.synapse_count() << " synapses\n\n";
  std::cout << "brick                              neurons  in-syn  out-syn\n";
  for (const auto& [tag, c] : per_tag) {
    std::string name = tag;
    name.resize(std::max<std::size_t>(name.size(), 34), ' ');
    std::cout << name << ' ' << std::setw(7) << c.neurons << ' ' << std::setw(7) << c.in << ' ' << std::setw(8) << c.out
              << '\n';
  }

  // Depth report: begin offsets from the start neuron and begin -> done spans.
  auto start = start_neuron(circuit);
  if (!start) return kOk;
  std::cout << "\nbrick                              begin    done-after-begin\n";
  for (const auto& [tag, c] : per_tag) {
    if (tag == "scaffold") continue;
    const auto begin = circuit.make_id(tag, "begin");
    const auto done = circuit.make_id(tag, "done");
    if (!circuit.contains(begin)) continue;
    std::string anchor = "runtime";
    for (const auto& [key, s] : circuit.synapses())
      if (s.post == begin) anchor = s.pre == *start ? "t=" + std::to_string(s.delay) : "after " + circuit.neuron(s.pre).brick_tag;
    std::string span = "runtime";
    if (circuit.contains(begin, done)) span = std::to_string(circuit.synapse(begin, done).delay);
    std::string name = tag;
    name.resize(std::max<std::size_t>(name.size(), 34), ' ');
    std::cout << name << ' ' << std::left << std::setw(8) << anchor << ' ' << span << std::right << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"brickwork: compose spiking circuits from bricks, simulate them, inspect the result"};
  app.require_subcommand(1);

  std::string spec, out = "-";
  auto* build = app.add_subcommand("build", "Lay out a scaffold spec into a circuit document");
  build->add_option("spec", spec, "Scaffold spec file")->required()->check(CLI::ExistingFile);
  build->add_option("-o,--output", out, "Circuit document path ('-' for stdout)");

  std::string doc, raster_out = "-", format = "events";
  int steps = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> injections;
  bool no_start = false;
  auto* run = app.add_subcommand("run", "Simulate a circuit document");
  run->add_option("doc", doc, "Circuit document")->required()->check(CLI::ExistingFile);
  run->add_option("--steps", steps, "Number of timesteps")->required()->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Seed for stochastic firing");
  run->add_option("--raster", raster_out, "Raster output path ('-' for stdout)");
  run->add_option("--format", format, "Raster format")->check(CLI::IsMember({"events", "per-neuron"}));
  run->add_option("--inject", injections, "Drive an input neuron: <id>@<t> (repeatable)");
  run->add_flag("--no-start", no_start, "Do not drive the scaffold start neuron at t=0");

  std::string inspect_doc;
  auto* inspect = app.add_subcommand("inspect", "Neuron counts per brick and a timing report");
  inspect->add_option("doc", inspect_doc, "Circuit document")->required()->check(CLI::ExistingFile);

  std::string demo_name;
  std::uint64_t demo_seed = 0;
  auto* demo = app.add_subcommand("demo", "Run one of the bundled example scaffolds");
  demo->add_option("name", demo_name, "Demo name")->required()->check(CLI::IsMember(bw::demo::demo_names()));
  demo->add_option("--seed", demo_seed, "Seed for stochastic firing");
  std::string demo_out;
  demo->add_option("--emit", demo_out, "Also write the demo's circuit document to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*build) return cmd_build(spec, out);
    if (*run) return cmd_run(doc, steps, seed, raster_out, format, injections, no_start);
    if (*inspect) return cmd_inspect(inspect_doc);
    if (*demo) {
      if (!demo_out.empty())
        write_file(demo_out, bw::io::encode_circuit(bw::lay_bricks(bw::demo::demo_scaffold(demo_name)).circuit));
      std::cout << bw::demo::run_demo(demo_name, demo_seed);
      return kOk;
    }
  } catch (const bw::error& e) {
    std::cerr << "error (" << bw::to_string(e.code()) << "): " << e.what() << "\n";
    switch (e.code()) {
      case bw::errc::injection:
        return kSimulation;
      case bw::errc::parameter:
        return *run ? kSimulation : kInvalid;
      default:
        return kInvalid;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSimulation;
  }
  return kUsage;
}
