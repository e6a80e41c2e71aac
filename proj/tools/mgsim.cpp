// Copyright 2026 The mgsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <random>
#include <sstream>

#include "mgsim/circuit_json.hpp"
#include "mgsim/sample.hpp"
#include "mgsim/statevector.hpp"
#include "mgsim/strong.hpp"
#include "mgsim/version.hpp"

namespace {

using nlohmann::ordered_json;
using namespace mgsim;

// Exit codes are a stable contract: 0 success, 1 numerical integrity
// failure, 2 input/validation error.
constexpr int kExitOk = 0;
constexpr int kExitIntegrity = 1;
constexpr int kExitValidation = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string fmt_prob(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", p);
    return buf;
}

struct Report {
    std::string command;
    std::string file;
    std::string digest;
    ordered_json results;
    std::optional<std::uint64_t> seed;
    double timing_ms = 0.0;

    // Timing goes to stderr so that stdout is byte-identical for a fixed
    // seed and input.
    void print(bool machine) const {
        if (machine) {
            ordered_json out;
            out["command"] = command;
            out["file"] = file;
            out["digest"] = digest;
            out["version"] = kVersion;
            if (seed) out["seed"] = *seed;
            out["results"] = results;
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << "command: " << command << "\n";
            std::cout << "file: " << file << " (digest " << digest << ")\n";
            if (seed) std::cout << "seed: " << *seed << "\n";
            print_text("", results);
        }
        std::cerr << "timing_ms: " << timing_ms << "\n";
    }

  private:
    static void print_text(const std::string& prefix, const ordered_json& j) {
        if (j.is_object()) {
            for (auto it = j.begin(); it != j.end(); ++it)
                print_text(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value());
        } else if (j.is_array()) {
            for (std::size_t i = 0; i < j.size(); ++i)
                print_text(prefix + "[" + std::to_string(i) + "]", j[i]);
        } else if (j.is_number_float()) {
            std::cout << prefix << ": " << fmt_prob(j.get<double>()) << "\n";
        } else {
            std::cout << prefix << ": " << j.dump() << "\n";
        }
    }
};

std::vector<int> parse_subset(const std::string& arg, int n) {
    std::vector<int> out;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (...) {
            throw validation_error("bad qubit list entry: " + item);
        }
        if (out.back() < 1 || out.back() > n) throw validation_error("qubit outside 1..n");
    }
    if (out.empty()) throw validation_error("empty qubit list");
    return out;
}

std::vector<std::string> split_trace(const std::string& arg) {
    std::vector<std::string> out;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, '|')) out.push_back(item);
    return out;
}

OutcomeAssignment assignment_from_bits(const std::vector<MeasureSpec>& measure,
                                       const std::string& bits) {
    if (measure.empty()) throw validation_error("file has no measure block; use --all-over");
    if (bits.size() != measure.size())
        throw validation_error("--outcome needs one bit per measured qubit (" +
                               std::to_string(measure.size()) + ")");
    OutcomeAssignment out;
    for (std::size_t i = 0; i < measure.size(); ++i) {
        if (!measure[i].basis.computational)
            throw validation_error("strong probabilities need computational bases; use sample");
        if (bits[i] != '0' && bits[i] != '1') throw validation_error("outcome bits must be 0/1");
        out.push_back({measure[i].qubit, bits[i] == '1' ? 1 : 0, MeasureBasis::z()});
    }
    return out;
}

// Enumerates every trace of an adaptive program together with the rounds it
// visits. Guarded by the caller.
void enumerate_traces(const AdaptiveProgram& p, int round, OutcomeTrace& trace,
                      const std::function<void(const OutcomeTrace&)>& fn) {
    const AdaptiveRound& r = p.rounds[round];
    const std::size_t k = r.measure.size();
    for (std::size_t key = 0; key < (std::size_t{1} << k); ++key) {
        std::string bits;
        for (std::size_t i = 0; i < k; ++i) bits += ((key >> (k - 1 - i)) & 1) ? '1' : '0';
        trace.push_back(bits);
        if (r.terminal()) {
            fn(trace);
        } else {
            auto it = r.branches.find(bits);
            if (it == r.branches.end()) it = r.branches.find("default");
            enumerate_traces(p, it->second, trace, fn);
        }
        trace.pop_back();
    }
}

std::size_t count_traces(const AdaptiveProgram& p, int round) {
    const AdaptiveRound& r = p.rounds[round];
    const std::size_t k = std::size_t{1} << r.measure.size();
    if (r.terminal()) return k;
    std::size_t total = 0;
    for (std::size_t key = 0; key < k; ++key) {
        std::string bits;
        for (std::size_t i = 0; i < r.measure.size(); ++i)
            bits += ((key >> (r.measure.size() - 1 - i)) & 1) ? '1' : '0';
        auto it = r.branches.find(bits);
        if (it == r.branches.end()) it = r.branches.find("default");
        total += count_traces(p, it->second);
        if (total > (std::size_t{1} << 20)) return total;
    }
    return total;
}

// Dense joint probability of an adaptive trace by explicit mid-circuit
// projection and renormalization.
double dense_trace_prob(const AdaptiveProgram& p, const InputSpec& input,
                        const OutcomeTrace& trace) {
    StateVector sv = input.kind == InputSpec::Kind::Basis ? StateVector::basis(p.n, input.bits)
                                                          : StateVector::product(input.qubits);
    double joint = 1.0;
    int round = 0;
    for (const auto& bits : trace) {
        const AdaptiveRound& r = p.rounds[round];
        Circuit seg;
        seg.n = p.n;
        seg.pbc = p.pbc;
        seg.gates = r.gates;
        sv.apply_circuit(seg);
        for (std::size_t i = 0; i < r.measure.size(); ++i) {
            try {
                auto [next, prob] = sv.project(r.measure[i].qubit, bits[i] == '1' ? 1 : 0,
                                               MeasureBasis::z());
                joint *= prob;
                sv = std::move(next);
            } catch (const impossible_outcome_error&) {
                return 0.0;
            }
        }
        if (r.terminal()) break;
        auto it = r.branches.find(bits);
        if (it == r.branches.end()) it = r.branches.find("default");
        round = it->second;
    }
    return joint;
}

void guard_oracle_size(const CircuitFile& file) {
    int cap = file.input.kind == InputSpec::Kind::Basis ? kOracleMaxQubits : kOracleMaxQubits - 1;
    if (file.circuit.n > cap)
        throw dimension_guard_error("dense oracle capped at " + std::to_string(cap) +
                                    " qubits for this input type");
}

ordered_json prob_table_engine(const CircuitFile& file, const std::vector<int>& subset) {
    if (subset.size() > 20) throw validation_error("--all-over capped at 20 qubits");
    CompiledStrong compiled(file.circuit, file.input);
    ordered_json rows = ordered_json::array();
    double sum = 0.0;
    const std::size_t k = subset.size();
    for (std::size_t key = 0; key < (std::size_t{1} << k); ++key) {
        OutcomeAssignment y;
        std::string bits;
        for (std::size_t i = 0; i < k; ++i) {
            int bit = (key >> (k - 1 - i)) & 1;
            bits += bit ? '1' : '0';
            y.push_back({subset[i], bit, MeasureBasis::z()});
        }
        double p = compiled.probability(y);
        sum += p;
        rows.push_back(ordered_json{{"bits", bits}, {"probability", p}});
    }
    return ordered_json{{"outcomes", rows}, {"sum", sum}};
}

ordered_json prob_table_oracle(const CircuitFile& file, const std::vector<int>& subset,
                               const std::vector<MeasureBasis>& bases) {
    guard_oracle_size(file);
    StateVector sv = file.input.kind == InputSpec::Kind::Basis
                         ? StateVector::basis(file.circuit.n, file.input.bits)
                         : StateVector::product(file.input.qubits);
    sv.apply_circuit(file.circuit);
    auto table = sv.exact_distribution(subset, bases);
    ordered_json rows = ordered_json::array();
    double sum = 0.0;
    const std::size_t k = subset.size();
    for (std::size_t key = 0; key < table.size(); ++key) {
        std::string bits;
        for (std::size_t i = 0; i < k; ++i) bits += ((key >> (k - 1 - i)) & 1) ? '1' : '0';
        sum += table[key];
        rows.push_back(ordered_json{{"bits", bits}, {"probability", table[key]}});
    }
    return ordered_json{{"outcomes", rows}, {"sum", sum}};
}

std::vector<int> default_subset(const CircuitFile& file) {
    std::vector<int> subset;
    for (const auto& m : file.measure) {
        if (!m.basis.computational)
            throw validation_error("strong probabilities need computational bases; use sample");
        subset.push_back(m.qubit);
    }
    if (subset.empty())
        throw validation_error("file has no measure block; pass --outcome or --all-over");
    return subset;
}

int cmd_validate(const std::string& path, bool machine) {
    std::string text = read_file(path);
    CircuitFile file = parse_circuit(text);
    Report rep;
    rep.command = "validate";
    rep.file = path;
    rep.digest = fnv1a_digest(text);
    rep.results = ordered_json{{"valid", true},
                               {"n", file.circuit.n},
                               {"gates", file.circuit.gates.size()},
                               {"adaptive", file.program.has_value()}};
    rep.print(machine);
    return kExitOk;
}

int cmd_prob(const std::string& path, const std::string& outcome, const std::string& all_over,
             bool machine) {
    auto t0 = std::chrono::steady_clock::now();
    std::string text = read_file(path);
    CircuitFile file = parse_circuit(text);
    Report rep;
    rep.command = "prob";
    rep.file = path;
    rep.digest = fnv1a_digest(text);

    if (file.program) {
        const AdaptiveProgram& prog = *file.program;
        if (!outcome.empty()) {
            OutcomeTrace trace = split_trace(outcome);
            double p = adaptive_joint_prob(prog, file.input, trace);
            rep.results = ordered_json{{"trace", outcome}, {"probability", p}};
        } else {
            if (count_traces(prog, 0) > (std::size_t{1} << 20))
                throw validation_error("too many traces to enumerate; pass --outcome");
            ordered_json rows = ordered_json::array();
            double sum = 0.0;
            OutcomeTrace trace;
            enumerate_traces(prog, 0, trace, [&](const OutcomeTrace& t) {
                std::string key;
                for (std::size_t i = 0; i < t.size(); ++i) key += (i ? "|" : "") + t[i];
                double p = adaptive_joint_prob(prog, file.input, t);
                sum += p;
                rows.push_back(ordered_json{{"trace", key}, {"probability", p}});
            });
            rep.results = ordered_json{{"traces", rows}, {"sum", sum}};
        }
    } else if (!outcome.empty()) {
        OutcomeAssignment y = assignment_from_bits(file.measure, outcome);
        CompiledStrong compiled(file.circuit, file.input);
        rep.results = ordered_json{{"bits", outcome}, {"probability", compiled.probability(y)}};
    } else {
        std::vector<int> subset =
            all_over.empty() ? default_subset(file) : parse_subset(all_over, file.circuit.n);
        rep.results = prob_table_engine(file, subset);
    }
    rep.timing_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep.print(machine);
    return kExitOk;
}

int cmd_expect(const std::string& path, int qubit, bool machine) {
    auto t0 = std::chrono::steady_clock::now();
    std::string text = read_file(path);
    CircuitFile file = parse_circuit(text);
    if (file.program) throw validation_error("expect does not run adaptive programs");
    double z = expectation_z(file.circuit, file.input, qubit);
    Report rep;
    rep.command = "expect";
    rep.file = path;
    rep.digest = fnv1a_digest(text);
    rep.results = ordered_json{{"qubit", qubit},
                               {"expectation", z},
                               {"p0", (1.0 + z) / 2.0},
                               {"p1", (1.0 - z) / 2.0}};
    rep.timing_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep.print(machine);
    return kExitOk;
}

int cmd_sample(const std::string& path, std::size_t shots, std::optional<std::uint64_t> seed_opt,
               bool machine) {
    auto t0 = std::chrono::steady_clock::now();
    std::string text = read_file(path);
    CircuitFile file = parse_circuit(text);
    std::uint64_t seed = seed_opt ? *seed_opt : std::random_device{}();

    Report rep;
    rep.command = "sample";
    rep.file = path;
    rep.digest = fnv1a_digest(text);
    rep.seed = seed;

    std::vector<std::string> samples;
    if (file.program) {
        auto shots_out = run_adaptive(*file.program, file.input, seed, shots);
        samples.reserve(shots_out.size());
        for (const auto& s : shots_out) {
            std::string key;
            for (std::size_t i = 0; i < s.rounds.size(); ++i) key += (i ? "|" : "") + s.rounds[i];
            samples.push_back(key);
        }
    } else {
        if (file.measure.empty()) throw validation_error("file has no measure block");
        bool rotated = false;
        for (const auto& m : file.measure) rotated |= !m.basis.computational;
        if (rotated) {
            samples = sample_rotated(file.circuit, file.input, file.measure, seed, shots);
        } else {
            std::vector<int> subset;
            for (const auto& m : file.measure) subset.push_back(m.qubit);
            samples = sample_computational(file.circuit, file.input, subset, seed, shots);
        }
    }

    std::map<std::string, std::size_t> counts;
    for (const auto& s : samples) ++counts[s];
    ordered_json counts_json;
    for (const auto& [k, v] : counts) counts_json[k] = v;
    rep.results = ordered_json{{"shots", shots}, {"counts", counts_json}};
    if (shots <= 1000) {
        ordered_json arr = ordered_json::array();
        for (const auto& s : samples) arr.push_back(s);
        rep.results["samples"] = arr;
    }
    rep.timing_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep.print(machine);
    return kExitOk;
}

int cmd_oracle(const std::string& path, const std::string& outcome, const std::string& all_over,
               int qubit, bool compare, bool machine) {
    auto t0 = std::chrono::steady_clock::now();
    std::string text = read_file(path);
    CircuitFile file = parse_circuit(text);
    Report rep;
    rep.command = "oracle";
    rep.file = path;
    rep.digest = fnv1a_digest(text);

    if (file.program) {
        guard_oracle_size(file);
        const AdaptiveProgram& prog = *file.program;
        if (count_traces(prog, 0) > (std::size_t{1} << 16))
            throw validation_error("too many traces to enumerate");
        ordered_json rows = ordered_json::array();
        double sum = 0.0, max_delta = 0.0;
        OutcomeTrace trace;
        enumerate_traces(prog, 0, trace, [&](const OutcomeTrace& t) {
            std::string key;
            for (std::size_t i = 0; i < t.size(); ++i) key += (i ? "|" : "") + t[i];
            double p = dense_trace_prob(prog, file.input, t);
            sum += p;
            ordered_json row{{"trace", key}, {"probability", p}};
            if (compare) {
                double q = adaptive_joint_prob(prog, file.input, t);
                max_delta = std::max(max_delta, std::abs(p - q));
                row["engine"] = q;
            }
            rows.push_back(row);
        });
        rep.results = ordered_json{{"traces", rows}, {"sum", sum}};
        if (compare) rep.results["max_abs_delta"] = max_delta;
    } else if (qubit > 0) {
        guard_oracle_size(file);
        StateVector sv = file.input.kind == InputSpec::Kind::Basis
                             ? StateVector::basis(file.circuit.n, file.input.bits)
                             : StateVector::product(file.input.qubits);
        sv.apply_circuit(file.circuit);
        auto table = sv.exact_distribution({qubit}, {MeasureBasis::z()});
        double z = table[0] - table[1];
        rep.results =
            ordered_json{{"qubit", qubit}, {"expectation", z}, {"p0", table[0]}, {"p1", table[1]}};
        if (compare) {
            double q = expectation_z(file.circuit, file.input, qubit);
            rep.results["engine"] = q;
            rep.results["max_abs_delta"] = std::abs(z - q);
        }
    } else {
        std::vector<int> subset;
        std::vector<MeasureBasis> bases;
        if (!all_over.empty()) {
            subset = parse_subset(all_over, file.circuit.n);
            bases.assign(subset.size(), MeasureBasis::z());
        } else {
            if (file.measure.empty())
                throw validation_error("file has no measure block; pass --all-over or --qubit");
            for (const auto& m : file.measure) {
                subset.push_back(m.qubit);
                bases.push_back(m.basis);
            }
        }
        if (subset.size() > 20) throw validation_error("subset capped at 20 qubits");
        rep.results = prob_table_oracle(file, subset, bases);
        if (!outcome.empty()) {
            // Report a single row instead of the full table.
            if (outcome.size() != subset.size())
                throw validation_error("--outcome needs one bit per measured qubit");
            std::size_t key = 0;
            for (char c : outcome) key = (key << 1) | (c == '1' ? 1 : 0);
            double p = rep.results["outcomes"][key]["probability"].get<double>();
            rep.results = ordered_json{{"bits", outcome}, {"probability", p}};
        }
        if (compare) {
            bool rotated = false;
            for (const auto& b : bases) rotated |= !b.computational;
            if (rotated)
                throw validation_error("--compare needs computational bases (strong path)");
            ordered_json engine = prob_table_engine(file, subset);
            double max_delta = 0.0;
            ordered_json oracle_rows = prob_table_oracle(file, subset, bases)["outcomes"];
            for (std::size_t i = 0; i < oracle_rows.size(); ++i) {
                double a = oracle_rows[i]["probability"].get<double>();
                double b = engine["outcomes"][i]["probability"].get<double>();
                max_delta = std::max(max_delta, std::abs(a - b));
            }
            rep.results["max_abs_delta"] = max_delta;
        }
    }
    rep.timing_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep.print(machine);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matchgate circuit simulator"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "machine"}));

    std::string file;
    std::string outcome, all_over;
    int qubit = 0;
    std::size_t shots = 1024;
    std::optional<std::uint64_t> seed;
    bool compare = false;

    CLI::App* validate = app.add_subcommand("validate", "check a circuit file");
    validate->fallthrough();
    validate->add_option("file", file)->required();

    CLI::App* prob = app.add_subcommand("prob", "exact outcome probabilities");
    prob->fallthrough();
    prob->add_option("file", file)->required();
    prob->add_option("--outcome", outcome, "bits for the file's measured qubits, or a |-separated trace");
    prob->add_option("--all-over", all_over, "comma-separated qubits to enumerate");

    CLI::App* expect = app.add_subcommand("expect", "single-qubit Z expectation");
    expect->fallthrough();
    expect->add_option("file", file)->required();
    expect->add_option("--qubit", qubit, "qubit index (1-based)")->required();

    CLI::App* sample = app.add_subcommand("sample", "draw outcome samples");
    sample->fallthrough();
    sample->add_option("file", file)->required();
    sample->add_option("--shots", shots, "number of shots");
    sample->add_option("--seed", seed, "RNG seed (entropy when absent)");

    CLI::App* oracle = app.add_subcommand("oracle", "dense state-vector reference");
    oracle->fallthrough();
    oracle->add_option("file", file)->required();
    oracle->add_option("--outcome", outcome, "bits for the measured qubits");
    oracle->add_option("--all-over", all_over, "comma-separated qubits to enumerate");
    oracle->add_option("--qubit", qubit, "Z expectation of this qubit");
    oracle->add_flag("--compare", compare, "also run the engine and print the max deviation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    const bool machine = format == "machine";
    try {
        if (validate->parsed()) return cmd_validate(file, machine);
        if (prob->parsed()) return cmd_prob(file, outcome, all_over, machine);
        if (expect->parsed()) return cmd_expect(file, qubit, machine);
        if (sample->parsed()) return cmd_sample(file, shots, seed, machine);
        if (oracle->parsed()) return cmd_oracle(file, outcome, all_over, qubit, compare, machine);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const integrity_error& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return kExitIntegrity;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitIntegrity;
    }
    return kExitOk;
}
