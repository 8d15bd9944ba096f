/*
   Copyright 2026 The kxcn authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

/**
 * @file kxcn_main.cpp
 * @brief Command-line front end: parses matrices, module presentations and
 *        operators, runs the analyses and emits JSON certificates.
 *
 * A certificate is printed only after every verification check listed in it
 * has been re-run and passed; the `verify` subcommand is the exception and
 * emits the raw check report. All scalars are rendered as canonical decimal
 * strings, and keys keep a fixed order, so certificates are byte-identical
 * across runs.
 *
 * Exit codes: 0 success, 2 parse error, 3 verification failure (verify
 * mode), 4 budget exhaustion, 5 internal route disagreement.
 */

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kxcn/cn.hpp"
#include "kxcn/io.hpp"
#include "kxcn/kxmodule.hpp"
#include "kxcn/matrix.hpp"
#include "kxcn/operators.hpp"
#include "kxcn/poly.hpp"
#include "kxcn/scalars.hpp"
#include "kxcn/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace kxcn;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_parse = 2;
constexpr int exit_verify_failed = 3;
constexpr int exit_budget = 4;
constexpr int exit_internal = 5;

struct CmdError {
    int code;
    std::string reason;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CmdError{exit_parse, "cannot read file: " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a64_hex(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

void check_field_flag(const std::optional<std::string>& flag, const FieldSpec& header_field) {
    if (!flag) return;
    const FieldSpec requested = parse_field_flag(*flag);
    if (requested != header_field) {
        throw invalid_input("--field " + requested.to_string() + " conflicts with file header field " +
                            header_field.to_string());
    }
}

template <class Fn>
auto dispatch_field(const FieldSpec& field, Fn&& fn) {
    if (field.rational) return fn(Rational(0));
    return fn(PrimeField(0, field.p));
}

// ---------------------------------------------------------------------------
// json rendering

template <FieldScalar K>
json matrix_json(const Matrix<K>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
        rows.push_back(std::move(row));
    }
    return rows;
}

template <FieldScalar K>
json subspace_json(const Subspace<K>& s) {
    return json{{"ambient_dim", s.ambient_dim()}, {"dim", s.dim()}, {"basis", matrix_json(s.basis())}};
}

template <FieldScalar K>
json presentation_json(const ModulePresentation<K>& m) {
    json torsion = json::array();
    for (const auto& f : m.torsion) torsion.push_back(f.to_string());
    return json{{"free_rank", m.free_rank}, {"torsion", std::move(torsion)}};
}

json checks_json(const std::vector<std::pair<std::string, bool>>& checks) {
    json out = json::array();
    for (const auto& [name, pass] : checks) out.push_back(json{{"name", name}, {"pass", pass}});
    return out;
}

json certificate_skeleton(const std::string& analysis, const std::vector<std::string>& files,
                          const FieldSpec& field, const std::string& canonical_input) {
    json cert;
    cert["tool"] = tool_name;
    cert["version"] = tool_version;
    cert["analysis"] = analysis;
    cert["input"] = json{{"files", files}, {"field", field.to_string()}, {"digest", fnv1a64_hex(canonical_input)}};
    return cert;
}

// ---------------------------------------------------------------------------
// analyses

template <FieldScalar K>
std::size_t append_rank_chain(const Matrix<K>& a, std::size_t m, json& results) {
    json chain = json::array();
    Matrix<K> power = Matrix<K>::identity(a.rows(), a.field_zero());
    for (std::size_t k = 0; k <= m + 1; ++k) {
        chain.push_back(rank(power));
        power = power * a;
    }
    const std::size_t rank_a = chain[1].get<std::size_t>();  // chain always holds ranks of A^0 and A^1
    results["rank_chain"] = std::move(chain);
    return rank_a;
}

template <FieldScalar K>
json analyze_index(const Matrix<K>& a, const FieldSpec& field, const std::vector<std::string>& files) {
    const std::size_t m = index_of(a);
    json cert = certificate_skeleton("index", files, field, render_matrix_file(a, field));
    cert["input"]["rows"] = a.rows();
    cert["input"]["cols"] = a.cols();
    json results;
    results["index"] = m;
    const std::size_t rank_a = append_rank_chain(a, m, results);
    cert["results"] = std::move(results);

    const bool invertible = rank_a == a.rows();
    std::vector<std::pair<std::string, bool>> checks{
        {"rank_stabilizes", rank(matpow(a, m)) == rank(matpow(a, m + 1))},
        {"index_zero_iff_invertible", (m == 0) == invertible},
    };
    cert["verification"] = checks_json(checks);
    for (const auto& [name, pass] : checks) {
        if (!pass) throw CmdError{exit_internal, "verification check failed: " + name};
    }
    return cert;
}

template <FieldScalar K>
std::vector<std::pair<std::string, bool>> decomposition_checks(const Matrix<K>& a, const CNDecomposition<K>& split,
                                                               const CNDecomposition<K>& poly) {
    const std::size_t m = split.index;
    const Matrix<K> zero = Matrix<K>::zeros(a.rows(), a.rows(), a.field_zero());
    const auto axioms = verify_drazin(a, split.drazin, m);
    return {
        {"routes_agree", split == poly},
        {"sum_reconstructs", split.core + split.nilpotent == a},
        {"parts_annihilate", split.core * split.nilpotent == zero && split.nilpotent * split.core == zero},
        {"nilpotent_power_vanishes", matpow(split.nilpotent, std::max<std::size_t>(m, 1)) == zero},
        {"core_index_at_most_one", index_of(split.core) <= 1},
        {"projector_idempotent", split.projector * split.projector == split.projector},
        {"projector_commutes", split.projector * a == a * split.projector},
        {"core_is_A_times_projector", split.core == a * split.projector},
        {"direct_sum", direct_sum_check(split.kernel_part, split.image_part)},
        {"drazin_fixed_point", axioms.fixed_point},
        {"drazin_commutes", axioms.commutes},
        {"drazin_power_identity", axioms.power_identity},
    };
}

template <FieldScalar K>
json analyze_cn(const Matrix<K>& a, const FieldSpec& field, const std::vector<std::string>& files, bool full) {
    const CNDecomposition<K> split = cn_decompose_split(a);
    const CNDecomposition<K> poly = cn_decompose_poly(a);
    if (!(split == poly)) throw CmdError{exit_internal, "decomposition routes disagree"};

    json cert = certificate_skeleton(full ? "cn" : "drazin", files, field, render_matrix_file(a, field));
    cert["input"]["rows"] = a.rows();
    cert["input"]["cols"] = a.cols();
    json results;
    results["index"] = split.index;
    if (full) {
        results["core"] = matrix_json(split.core);
        results["nilpotent"] = matrix_json(split.nilpotent);
        results["projector"] = matrix_json(split.projector);
    }
    results["drazin"] = matrix_json(split.drazin);
    if (full) {
        results["kernel_part"] = subspace_json(split.kernel_part);
        results["image_part"] = subspace_json(split.image_part);
    }
    cert["results"] = std::move(results);

    const auto checks = decomposition_checks(a, split, poly);
    cert["verification"] = checks_json(checks);
    for (const auto& [name, pass] : checks) {
        if (!pass) throw CmdError{exit_internal, "verification check failed: " + name};
    }
    return cert;
}

template <FieldScalar K>
json analyze_module(const ModulePresentation<K>& m, const FieldSpec& field, const std::vector<std::string>& files,
                    const K& exemplar) {
    const auto report = localize(m);
    const auto parts = pointwise_cn(m);

    json cert = certificate_skeleton("module-analyze", files, field, render_module_file(m, field));
    json results;
    results["presentation"] = presentation_json(m);
    results["kernel"] = presentation_json(report.kernel);
    results["localized"] = presentation_json(report.localized);
    results["surjective"] = report.surjective;
    results["splits"] = report.splits;
    if (report.section_idempotents) {
        json es = json::array();
        for (const auto& e : *report.section_idempotents) es.push_back(e.to_string());
        results["section_idempotents"] = std::move(es);
    } else {
        results["section_idempotents"] = nullptr;
    }
    if (parts) {
        results["pointwise_cn"] = json{{"u", presentation_json(parts->u)},
                                       {"w", presentation_json(parts->w)},
                                       {"uniform_index", parts->uniform_index}};
    } else {
        results["pointwise_cn"] = nullptr;
    }
    cert["results"] = std::move(results);

    bool kernel_x_primary = true;
    for (const auto& f : report.kernel.torsion) {
        kernel_x_primary = kernel_x_primary && x_adic_valuation(f).unit_part.is_one();
    }
    bool localized_units = true;
    for (const auto& g : report.localized.torsion) {
        localized_units = localized_units && !g.coeff_or(0, zero_like(exemplar)).is_zero();
    }
    const auto kernel_loc = localize(report.kernel);
    bool idempotents_ok = true;
    if (report.section_idempotents) {
        const auto& es = *report.section_idempotents;
        for (std::size_t i = 0; i < es.size(); ++i) {
            const auto& f = m.torsion[i];
            const auto [val, unit] = x_adic_valuation(f);
            const Poly<K> xa = Poly<K>::x_power(val, one_like(exemplar));
            const Poly<K> one_poly = Poly<K>::constant(one_like(exemplar));
            idempotents_ok = idempotents_ok && ((es[i] * es[i] - es[i]) % f).is_zero() && (es[i] % xa).is_zero() &&
                             ((es[i] - one_poly) % unit).is_zero();
        }
    }
    bool pointwise_consistent = true;
    if (parts) {
        pointwise_consistent = parts->u == report.kernel && parts->w.torsion == report.localized.torsion;
    }
    std::vector<std::pair<std::string, bool>> checks{
        {"kernel_is_x_primary", kernel_x_primary},
        {"localized_units_at_zero", localized_units},
        {"kernel_localizes_to_zero", kernel_loc.surjective && kernel_loc.localized.torsion.empty()},
        {"section_idempotent_congruences", idempotents_ok},
        {"pointwise_split_consistent", pointwise_consistent},
    };
    cert["verification"] = checks_json(checks);
    for (const auto& [name, pass] : checks) {
        if (!pass) throw CmdError{exit_internal, "verification check failed: " + name};
    }
    return cert;
}

template <FieldScalar K>
json analyze_op_check(const ParsedOperator<K>& parsed, const std::vector<SparseVector<K>>& vectors,
                      const std::string& canonical_vectors, std::uint64_t budget, const FieldSpec& field,
                      const std::vector<std::string>& files, bool& budget_exhausted) {
    const BasisOperator<K>& op = parsed.op;
    json cert = certificate_skeleton("op-check", files, field, parsed.canonical + canonical_vectors);
    json results;
    results["operator"] = json{{"name", op.name}, {"band", op.band}, {"has_drazin_rule", op.has_drazin_rule()}};
    results["budget"] = budget;

    bool witnesses_minimal = true;
    bool surjectivity_valid = true;
    bool axioms_ok = true;
    budget_exhausted = false;

    json rows = json::array();
    for (const auto& v : vectors) {
        json row;
        row["vector"] = v.to_string();

        const auto witness = pointwise_nilpotency_witness(op, v, budget);
        row["nilpotency_witness"] = witness ? json(*witness) : json(nullptr);
        if (witness && *witness >= 1) {
            witnesses_minimal = witnesses_minimal && !apply_power(op, v, *witness - 1).is_zero();
        }

        const auto membership = kernel_membership(op, v, budget);
        row["kernel_membership"] = membership ? json(*membership) : json(nullptr);
        if (!membership) budget_exhausted = true;

        const auto surj = surjectivity_witness(op, v, budget);
        json sj;
        switch (surj.status) {
            case SurjectivitySearch<K>::Status::found:
                sj = json{{"status", "found"}, {"m", surj.m}, {"witness", surj.witness.to_string()}};
                surjectivity_valid =
                    surjectivity_valid && apply_power(op, surj.witness, surj.m + 1) == apply_power(op, v, surj.m);
                break;
            case SurjectivitySearch<K>::Status::no_witness:
                sj = json{{"status", "no_witness"}, {"m", nullptr}, {"witness", nullptr}};
                budget_exhausted = true;
                break;
            case SurjectivitySearch<K>::Status::window_exhausted:
                sj = json{{"status", "window_exhausted"}, {"m", nullptr}, {"witness", nullptr}};
                budget_exhausted = true;
                break;
        }
        row["surjectivity"] = std::move(sj);

        if (op.has_drazin_rule()) {
            const auto report = verify_pointwise_axioms(op, {v}, budget);
            const auto& e = report.entries[0];
            row["axioms"] = json{{"fixed_point", e.fixed_point},
                                 {"commutes", e.commutes},
                                 {"power_m", e.power_m ? json(*e.power_m) : json(nullptr)}};
            axioms_ok = axioms_ok && e.fixed_point && e.commutes;
            if (!e.power_m) budget_exhausted = true;
        } else {
            row["axioms"] = nullptr;
        }
        rows.push_back(std::move(row));
    }
    results["vectors"] = std::move(rows);
    cert["results"] = std::move(results);

    std::vector<std::pair<std::string, bool>> checks{
        {"nilpotency_witnesses_minimal", witnesses_minimal},
        {"surjectivity_witnesses_valid", surjectivity_valid},
        {"pointwise_axioms_hold", axioms_ok},
    };
    cert["verification"] = checks_json(checks);
    for (const auto& [name, pass] : checks) {
        if (!pass) throw CmdError{exit_internal, "verification check failed: " + name};
    }
    return cert;
}

template <FieldScalar K>
json analyze_verify(const Matrix<K>& a, const Matrix<K>& candidate, std::size_t m, const FieldSpec& field,
                    const std::vector<std::string>& files, bool& all_pass) {
    const auto report = verify_drazin(a, candidate, m);
    all_pass = report.all();
    json cert = certificate_skeleton(
        "verify", files, field,
        render_matrix_file(a, field) + render_matrix_file(candidate, field) + "index " + std::to_string(m) + "\n");
    cert["input"]["index"] = m;
    cert["results"] = json{{"fixed_point", report.fixed_point},
                           {"commutes", report.commutes},
                           {"power_identity", report.power_identity}};
    cert["verification"] = checks_json({{"fixed_point", report.fixed_point},
                                        {"commutes", report.commutes},
                                        {"power_identity", report.power_identity}});
    return cert;
}

// ---------------------------------------------------------------------------
// command drivers

struct GlobalOpts {
    std::optional<std::string> field_flag;
    unsigned jobs = 1;
};

template <FieldScalar K>
Matrix<K> load_matrix(const std::vector<std::string>& lines, const MatrixHeader& header, const K& exemplar) {
    return parse_matrix_body(std::vector<std::string>(lines.begin() + 1, lines.end()), header, exemplar);
}

json run_matrix_command(const std::string& kind, const std::string& path, const GlobalOpts& opts) {
    const auto lines = significant_lines(read_file(path));
    if (lines.empty()) throw invalid_input("empty input file: " + path);
    const MatrixHeader header = parse_matrix_header(lines[0]);
    check_field_flag(opts.field_flag, header.field);
    return dispatch_field(header.field, [&](auto exemplar) -> json {
        const auto a = load_matrix(lines, header, exemplar);
        if (kind == "index") return analyze_index(a, header.field, {path});
        return analyze_cn(a, header.field, {path}, kind == "cn");
    });
}

json run_module_command(const std::string& path, const GlobalOpts& opts) {
    const auto lines = significant_lines(read_file(path));
    if (lines.empty()) throw invalid_input("empty input file: " + path);
    const FieldSpec field = parse_module_header(lines[0]);
    check_field_flag(opts.field_flag, field);
    return dispatch_field(field, [&](auto exemplar) -> json {
        const auto m = parse_module_body(std::vector<std::string>(lines.begin() + 1, lines.end()), exemplar);
        return analyze_module(m, field, {path}, exemplar);
    });
}

void write_out_dir_copy(const std::string& input_path, const std::string& payload) {
    const char* dir = std::getenv("KXCN_OUT_DIR");
    if (!dir || !*dir) return;
    fs::path out = fs::path(dir) / (fs::path(input_path).stem().string() + ".cert.json");
    std::ofstream o(out, std::ios::binary);
    if (!o) throw CmdError{exit_parse, "cannot write to output directory: " + std::string(dir)};
    o << payload;
}

void emit(const json& cert, const std::string& input_path) {
    const std::string payload = cert.dump(2) + "\n";
    std::cout << payload;
    write_out_dir_copy(input_path, payload);
}

/// Runs a single-input command over a file, or over every regular file of a
/// directory (sorted by name, optionally in parallel). Batch output maps
/// file names to certificates.
int run_batchable(const std::string& kind, const std::string& path, const GlobalOpts& opts) {
    const auto run_one = [&](const std::string& p) {
        return kind == "module-analyze" ? run_module_command(p, opts) : run_matrix_command(kind, p, opts);
    };
    if (!fs::is_directory(path)) {
        const json cert = run_one(path);
        emit(cert, path);
        return exit_ok;
    }

    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file()) files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw invalid_input("batch directory contains no files: " + path);

    std::vector<json> certs(files.size());
    std::vector<std::optional<CmdError>> errors(files.size());
    std::atomic<std::size_t> next{0};
    const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, files.size()));
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < files.size(); i = next.fetch_add(1)) {
            try {
                certs[i] = run_one(files[i]);
            } catch (const CmdError& e) {
                errors[i] = e;
            } catch (const internal_inconsistency& e) {
                errors[i] = CmdError{exit_internal, e.what()};
            } catch (const std::exception& e) {
                errors[i] = CmdError{exit_parse, e.what()};
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::size_t i = 0; i < files.size(); ++i) {
        if (errors[i]) throw CmdError{errors[i]->code, files[i] + ": " + errors[i]->reason};
    }
    json combined;
    for (std::size_t i = 0; i < files.size(); ++i) {
        combined[fs::path(files[i]).filename().string()] = certs[i];
        write_out_dir_copy(files[i], certs[i].dump(2) + "\n");
    }
    std::cout << combined.dump(2) << "\n";
    return exit_ok;
}

int run_op_check(const std::string& op_path, const std::string& vec_path, std::uint64_t budget,
                 const GlobalOpts& opts) {
    const auto op_lines = significant_lines(read_file(op_path));
    if (op_lines.empty()) throw invalid_input("empty operator file: " + op_path);
    const OperatorHeader header = parse_operator_header(op_lines[0]);
    check_field_flag(opts.field_flag, header.field);
    const auto vec_lines = significant_lines(read_file(vec_path));
    return dispatch_field(header.field, [&](auto exemplar) -> int {
        const auto parsed =
            parse_operator_body(header, std::vector<std::string>(op_lines.begin() + 1, op_lines.end()), exemplar);
        const auto vectors = parse_vectors_file(vec_lines, exemplar);
        std::string canonical_vectors;
        for (const auto& v : vectors) canonical_vectors += v.to_string() + "\n";
        bool budget_exhausted = false;
        const json cert = analyze_op_check(parsed, vectors, canonical_vectors, budget, header.field,
                                           {op_path, vec_path}, budget_exhausted);
        emit(cert, op_path);
        return budget_exhausted ? exit_budget : exit_ok;
    });
}

int run_verify(const std::string& matrix_path, const std::string& candidate_path, std::size_t m,
               const GlobalOpts& opts) {
    const auto a_lines = significant_lines(read_file(matrix_path));
    const auto x_lines = significant_lines(read_file(candidate_path));
    if (a_lines.empty() || x_lines.empty()) throw invalid_input("empty input file");
    const MatrixHeader a_header = parse_matrix_header(a_lines[0]);
    const MatrixHeader x_header = parse_matrix_header(x_lines[0]);
    if (a_header.field != x_header.field) {
        throw invalid_input("matrix and candidate use different fields: " + a_header.field.to_string() + " vs " +
                            x_header.field.to_string());
    }
    check_field_flag(opts.field_flag, a_header.field);
    return dispatch_field(a_header.field, [&](auto exemplar) -> int {
        const auto a = load_matrix(a_lines, a_header, exemplar);
        const auto x = load_matrix(x_lines, x_header, exemplar);
        bool all_pass = false;
        const json cert = analyze_verify(a, x, m, a_header.field, {matrix_path, candidate_path}, all_pass);
        emit(cert, matrix_path);
        return all_pass ? exit_ok : exit_verify_failed;
    });
}

int fail(const CmdError& e) {
    std::cerr << json{{"error", true}, {"exit_code", e.code}, {"reason", e.reason}}.dump() << "\n";
    return e.code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact core-nilpotent decompositions, Drazin inverses and k[x]-module localization"};
    app.set_version_flag("--version", std::string(tool_version));

    GlobalOpts opts;
    std::string field_flag_value;
    app.add_option("--field", field_flag_value, "assert the base field (Q or Fp:<p>); must match file headers");
    app.add_option("--jobs", opts.jobs, "worker threads for batch directories")->default_val(1u);

    std::string path, candidate, vectors;
    std::uint64_t budget = 64;
    std::size_t verify_index = 0;

    auto* cmd_index = app.add_subcommand("index", "index of a square matrix");
    cmd_index->add_option("file", path, "matrix file or batch directory")->required();

    auto* cmd_cn = app.add_subcommand("cn", "core-nilpotent decomposition with Drazin inverse");
    cmd_cn->add_option("file", path, "matrix file or batch directory")->required();

    auto* cmd_drazin = app.add_subcommand("drazin", "Drazin inverse only");
    cmd_drazin->add_option("file", path, "matrix file or batch directory")->required();

    auto* cmd_module = app.add_subcommand("module", "k[x]-module analyses");
    auto* cmd_module_analyze = cmd_module->add_subcommand("analyze", "localization and pointwise splitting");
    cmd_module_analyze->add_option("file", path, "module file or batch directory")->required();

    auto* cmd_op = app.add_subcommand("op", "operator analyses");
    auto* cmd_op_check = cmd_op->add_subcommand("check", "per-vector witness and axiom report");
    cmd_op_check->add_option("spec-file", path, "operator spec file")->required();
    cmd_op_check->add_option("vectors-file", vectors, "file with one vector literal per line")->required();
    cmd_op_check->add_option("--budget", budget, "search budget for per-vector queries")->default_val(64);

    auto* cmd_verify = app.add_subcommand("verify", "check a candidate Drazin inverse");
    cmd_verify->add_option("file", path, "matrix file")->required();
    cmd_verify->add_option("candidate-file", candidate, "candidate inverse matrix file")->required();
    cmd_verify->add_option("--index", verify_index, "index at which to test the power identity")->required();

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return fail({exit_parse, std::string("command line: ") + e.what()});
    }
    if (!field_flag_value.empty()) opts.field_flag = field_flag_value;

    try {
        if (cmd_index->parsed()) return run_batchable("index", path, opts);
        if (cmd_cn->parsed()) return run_batchable("cn", path, opts);
        if (cmd_drazin->parsed()) return run_batchable("drazin", path, opts);
        if (cmd_module->parsed() && cmd_module_analyze->parsed()) return run_batchable("module-analyze", path, opts);
        if (cmd_op->parsed() && cmd_op_check->parsed()) return run_op_check(path, vectors, budget, opts);
        if (cmd_verify->parsed()) return run_verify(path, candidate, verify_index, opts);
        return fail({exit_parse, "missing subcommand"});
    } catch (const CmdError& e) {
        return fail(e);
    } catch (const internal_inconsistency& e) {
        return fail({exit_internal, e.what()});
    } catch (const invalid_input& e) {
        return fail({exit_parse, e.what()});
    } catch (const unsupported_operator& e) {
        return fail({exit_parse, e.what()});
    } catch (const std::exception& e) {
        return fail({exit_parse, e.what()});
    }
}
