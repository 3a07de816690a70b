#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "primechain/chain_selector.hpp"
#include "primechain/json_io.hpp"

using namespace primechain;

namespace {

constexpr const char* kVersion = "primechain 1.0.0";

std::vector<std::string> split_csv(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t at = 0;
    while (at <= csv.size()) {
        std::size_t comma = csv.find(',', at);
        if (comma == std::string::npos) comma = csv.size();
        if (comma > at) out.push_back(csv.substr(at, comma - at));
        at = comma + 1;
    }
    if (out.empty()) throw CLI::ValidationError("expected a comma-separated list");
    return out;
}

u64 parse_magnitude(const std::string& s) {
    // Accepts 1000000 or 1e6 style.
    double v = std::stod(s);
    if (v < 0 || v > 1.8e19) throw CLI::ValidationError("value out of range");
    return static_cast<u64>(v + 0.5);
}

std::vector<u64> parse_u64_list(const std::string& csv) {
    std::vector<u64> out;
    for (const std::string& s : split_csv(csv)) out.push_back(parse_magnitude(s));
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    for (const std::string& s : split_csv(csv)) out.push_back(std::stod(s));
    return out;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + out_path);
        os << j.dump(2) << "\n";
    }
}

OffsetTuple pool_from_flag(const std::string& pool, std::size_t need) {
    if (pool == "odd-squares") return odd_square_offsets(need);
    return OffsetTuple(parse_u64_list(pool));
}

// Single-block cutoff for one config block; J = 1 gets the plain window
// bump on [0, scale/10], larger blocks the profiled construction.
TensorSumF block_for(std::size_t J, const MaynardSmoothing& smoothing) {
    if (J >= 2) return maynard_basis(J, smoothing);
    Rational t0 = rational_from_double(smoothing.support_scale) / 10;
    Rational inv = 1 / t0;
    BasisFunction bump = BasisFunction::single(
        t0, Poly({Rational(1), -2 * inv, inv * inv}));
    SieveGrid grid({1}, {{1}}, {1.0});
    return TensorSumF(std::move(grid), {{bump}});
}

// Re-verification of any emitted certificate, primality engine only.
int verify_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        std::cerr << "cannot read " << path << "\n";
        return 2;
    }
    json j = json::parse(is);
    bool ok = false;
    std::string kind;
    if (j.contains("witnesses")) {
        kind = "witness certificate";
        ok = witness_from_json(j).verify();
    } else if (j.contains("primes")) {
        kind = "good-tuple chain";
        // GoodTuple construction re-checks the full pairwise invariant.
        try {
            ChainResult chain = chain_result_from_json(j);
            ok = true;
            for (u64 w : chain.step_witnesses)
                if (!is_prime(w)) ok = false;
        } catch (const input_error&) {
            ok = false;
        }
    } else if (j.contains("a") && j.contains("b")) {
        kind = "half-sumset certificate";
        ok = half_sumset_from_json(j).verify();
    } else if (j.contains("chain")) {
        kind = "chain certificate";
        ok = chain_certificate_from_json(j).verify();
    } else {
        std::cerr << "unrecognised certificate schema\n";
        return 2;
    }
    std::cout << kind << ": " << (ok ? "verified" : "FAILED") << "\n";
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"prime-pattern certificates: admissible tuples, good-tuple "
                 "chains, sieve measures and half sumsets"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    std::string out_path;

    // admissible check|witness
    auto* adm = app.add_subcommand("admissible", "admissible-tuple tooling");
    adm->require_subcommand(1);
    std::string adm_offsets;
    auto* adm_check = adm->add_subcommand("check", "decide admissibility");
    adm_check->add_option("--offsets", adm_offsets, "comma-separated offsets")
        ->required();
    adm_check->add_option("--out", out_path, "write JSON here");

    std::string wit_offsets, wit_lo = "1", wit_hi, wit_max = "10";
    u64 wit_z = 0;
    auto* adm_wit =
        adm->add_subcommand("witness", "search prime-producing witnesses");
    adm_wit->add_option("--offsets", wit_offsets)->required();
    adm_wit->add_option("--lo", wit_lo);
    adm_wit->add_option("--hi", wit_hi)->required();
    adm_wit->add_option("--max", wit_max);
    adm_wit->add_option("--z", wit_z,
                        "restrict to the CRT class for primes <= z");
    adm_wit->add_option("--out", out_path);

    // goodtuple build|verify
    auto* good = app.add_subcommand("goodtuple", "good-tuple chains");
    good->require_subcommand(1);
    u64 seed = 5;
    std::size_t target_len = 2;
    std::string bound_str = "1000000";
    auto* good_build = good->add_subcommand("build", "extend a chain from a seed");
    good_build->add_option("--seed", seed);
    good_build->add_option("--len", target_len)->required();
    good_build->add_option("--bound", bound_str);
    good_build->add_option("--out", out_path);

    std::string good_in, good_primes;
    auto* good_verify = good->add_subcommand("verify", "re-check a chain");
    good_verify->add_option("--in", good_in, "chain JSON file");
    good_verify->add_option("--primes", good_primes, "inline list to check");

    // sieve verify|functionals
    auto* sieve = app.add_subcommand("sieve", "Maynard sieve measurements");
    sieve->require_subcommand(1);
    std::string cfg_path, csv_path;
    auto* sieve_verify =
        sieve->add_subcommand("verify", "empirical sums vs predictions");
    sieve_verify->add_option("--config", cfg_path, "run configuration JSON")
        ->required();
    sieve_verify->add_option("--out", out_path);
    sieve_verify->add_option("--csv", csv_path, "also write a CSV table");

    std::size_t fn_J = 0;
    std::string fn_cfg;
    auto* sieve_fn = sieve->add_subcommand(
        "functionals", "exact I/J/L values and basis ratios");
    sieve_fn->add_option("--J", fn_J, "single-block size to analyse");
    sieve_fn->add_option("--config", fn_cfg, "run configuration JSON");
    sieve_fn->add_option("--out", out_path);

    // chain run
    auto* chain = app.add_subcommand("chain", "measure-driven chain selection");
    chain->require_subcommand(1);
    std::string pool_flag = "odd-squares", shape_str, theta_str, n_str;
    std::size_t depth = 2;
    u64 chain_z = 7;
    auto* chain_run = chain->add_subcommand("run", "full pipeline");
    chain_run->add_option("--pool", pool_flag, "odd-squares or explicit list");
    chain_run->add_option("--shape", shape_str, "block sizes, e.g. 2,3")->required();
    chain_run->add_option("--theta", theta_str, "per-block scaling")->required();
    chain_run->add_option("--N", n_str, "window size(s), e.g. 1e6 or 5e5,1e6")
        ->required();
    chain_run->add_option("--depth", depth);
    chain_run->add_option("--z", chain_z);
    chain_run->add_option("--out", out_path);

    // sumset build|verify
    auto* sumset = app.add_subcommand("sumset", "half-sumset certificates");
    sumset->require_subcommand(1);
    std::string a_str, sum_bound = "100000";
    std::size_t count_b = 4;
    auto* sum_build = sumset->add_subcommand("build", "greedy smallest-next-b");
    sum_build->add_option("--a", a_str, "the fixed increasing side")->required();
    sum_build->add_option("--count", count_b);
    sum_build->add_option("--bound", sum_bound);
    sum_build->add_option("--out", out_path);

    std::string sum_in;
    auto* sum_verify = sumset->add_subcommand("verify", "re-check a certificate");
    sum_verify->add_option("--in", sum_in)->required();

    // verify <file>
    std::string verify_path;
    auto* verify_cmd = app.add_subcommand("verify", "re-verify any certificate");
    verify_cmd->add_option("file", verify_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (adm_check->parsed()) {
            OffsetTuple t(parse_u64_list(adm_offsets));
            AdmissibilityReport rep = is_admissible(t);
            emit(to_json(rep, t), out_path);
            std::cout << (rep.admissible ? "admissible" : "not admissible") << "\n";
            return rep.admissible ? 0 : 1;
        }
        if (adm_wit->parsed()) {
            OffsetTuple t(parse_u64_list(wit_offsets));
            std::optional<CrtClass> cls;
            if (wit_z >= 2) cls = primitive_class(t, wit_z);
            WitnessCertificate cert =
                find_witnesses(t, parse_magnitude(wit_lo), parse_magnitude(wit_hi),
                               parse_magnitude(wit_max), cls);
            emit(to_json(cert), out_path);
            return 0;
        }
        if (good_build->parsed()) {
            ChainResult chain_result =
                build_chain(seed, target_len, parse_magnitude(bound_str));
            emit(to_json(chain_result), out_path);
            if (!chain_result.reached_target) {
                std::cerr << "chain stopped at length " << chain_result.tuple.size()
                          << " (bound exhausted)\n";
                return 1;
            }
            return 0;
        }
        if (good_verify->parsed()) {
            std::vector<u64> primes;
            if (!good_in.empty()) {
                std::ifstream is(good_in);
                if (!is) throw std::runtime_error("cannot read " + good_in);
                json j = json::parse(is);
                primes = j.at("primes").get<std::vector<u64>>();
            } else {
                primes = parse_u64_list(good_primes);
            }
            GoodCheck check = verify_good(primes);
            if (check.good) {
                std::cout << "good tuple\n";
                return 0;
            }
            std::cout << "not a good tuple: " << check.violation << "\n";
            return 1;
        }
        if (sieve_verify->parsed() || sieve_fn->parsed()) {
            if (sieve_fn->parsed() && fn_J >= 2) {
                TensorSumF block = maynard_basis(fn_J);
                emit(to_json(measure_basis_ratios(block)), out_path);
                return 0;
            }
            std::string path = sieve_verify->parsed() ? cfg_path : fn_cfg;
            std::ifstream is(path);
            if (!is) throw std::runtime_error("cannot read " + path);
            json j = json::parse(is);
            std::vector<std::size_t> shape =
                j.at("shape").get<std::vector<std::size_t>>();
            std::vector<double> thetas = j.at("thetas").get<std::vector<double>>();
            u64 N = j.at("N").is_string()
                        ? parse_magnitude(j.at("N").get<std::string>())
                        : j.at("N").get<u64>();
            u64 z = j.value("z", u64(7));
            std::size_t k = 0;
            for (std::size_t J : shape) k += J;
            std::vector<std::vector<u64>> block_offsets;
            if (j.contains("offsets")) {
                block_offsets = j.at("offsets").get<std::vector<std::vector<u64>>>();
            } else {
                OffsetTuple pool =
                    pool_from_flag(j.value("pool", std::string("odd-squares")), k);
                std::size_t at = 0;
                for (std::size_t J : shape) {
                    block_offsets.emplace_back(pool.begin() + at,
                                               pool.begin() + at + J);
                    at += J;
                }
            }
            MaynardSmoothing smoothing;
            if (j.contains("basis")) {
                smoothing.profile_degree =
                    j["basis"].value("profile_degree", smoothing.profile_degree);
                smoothing.support_scale =
                    j["basis"].value("support_scale", smoothing.support_scale);
            }
            std::vector<TensorSumF> blocks;
            for (std::size_t J : shape) blocks.push_back(block_for(J, smoothing));
            TensorSumF F = scaled_product(blocks, thetas, block_offsets);
            if (sieve_fn->parsed()) {
                json out;
                out["I"] = I_functional(F);
                json singles = json::array(), pairs = json::array();
                for (Cell c : F.grid().cells()) {
                    json e;
                    e["i"] = c.i + 1;
                    e["j"] = c.j + 1;
                    e["J"] = J_functional(F, c);
                    singles.push_back(std::move(e));
                }
                auto cells = F.grid().cells();
                for (std::size_t x = 0; x < cells.size(); ++x)
                    for (std::size_t y = x + 1; y < cells.size(); ++y) {
                        json e;
                        e["cells"] = {cells[x].i + 1, cells[x].j + 1,
                                      cells[y].i + 1, cells[y].j + 1};
                        e["L"] = L_functional(F, cells[x], cells[y]);
                        pairs.push_back(std::move(e));
                    }
                out["J"] = std::move(singles);
                out["L"] = std::move(pairs);
                emit(out, out_path);
                return 0;
            }
            SieveConfig cfg = SieveConfig::make(F.grid(), N, z);
            EstimateReport rep = verify_estimates(cfg, F);
            emit(to_json(rep), out_path);
            if (!csv_path.empty()) {
                std::ofstream cs(csv_path, std::ios::binary);
                if (!cs) throw std::runtime_error("cannot write " + csv_path);
                cs << to_csv(rep);
            }
            return 0;
        }
        if (chain_run->parsed()) {
            std::vector<u64> shape64 = parse_u64_list(shape_str);
            std::vector<std::size_t> shape(shape64.begin(), shape64.end());
            std::vector<double> thetas = parse_double_list(theta_str);
            std::vector<u64> schedule = parse_u64_list(n_str);
            std::size_t k = 0;
            for (std::size_t J : shape) k += J;
            PipelineOptions opts;
            opts.z = chain_z;
            ChainCertificate cert = run_pipeline(pool_from_flag(pool_flag, k),
                                                 shape, thetas, schedule, depth, opts);
            emit(to_json(cert), out_path);
            return cert.verify() ? 0 : 1;
        }
        if (sum_build->parsed()) {
            HalfSumset s = build_half_sumset(OffsetTuple(parse_u64_list(a_str)),
                                             count_b, parse_magnitude(sum_bound));
            emit(to_json(s), out_path);
            return s.verify() ? 0 : 1;
        }
        if (sum_verify->parsed()) {
            return verify_file(sum_in);
        }
        if (verify_cmd->parsed()) {
            return verify_file(verify_path);
        }
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
