#include "primechain/json_io.hpp"

#include <sstream>

namespace primechain {

json to_json(const WitnessCertificate& cert) {
    json j;
    j["offsets"] = std::vector<u64>(cert.offsets.begin(), cert.offsets.end());
    j["witnesses"] = cert.witnesses;
    j["searched_up_to"] = cert.searched_up_to;
    return j;
}

WitnessCertificate witness_from_json(const json& j) {
    WitnessCertificate cert;
    cert.offsets = OffsetTuple(j.at("offsets").get<std::vector<u64>>());
    cert.witnesses = j.at("witnesses").get<std::vector<u64>>();
    cert.searched_up_to = j.at("searched_up_to").get<u64>();
    return cert;
}

json to_json(const AdmissibilityReport& report, const OffsetTuple& t) {
    json j;
    j["offsets"] = std::vector<u64>(t.begin(), t.end());
    j["admissible"] = report.admissible;
    json per = json::array();
    for (const PrimeCoverage& cov : report.per_prime) {
        json e;
        e["prime"] = cov.prime;
        e["covered"] = cov.covered_count;
        if (cov.avoided) {
            e["avoided_class"] = *cov.avoided;
        } else {
            e["covering_offsets"] = cov.covering_offsets;
        }
        per.push_back(std::move(e));
    }
    j["per_prime"] = std::move(per);
    return j;
}

json to_json(const ChainResult& chain) {
    json j;
    j["primes"] = std::vector<u64>(chain.tuple.begin(), chain.tuple.end());
    j["step_witnesses"] = chain.step_witnesses;
    j["bound"] = chain.bound;
    return j;
}

ChainResult chain_result_from_json(const json& j) {
    ChainResult out;
    out.tuple = GoodTuple(j.at("primes").get<std::vector<u64>>());
    out.step_witnesses = j.at("step_witnesses").get<std::vector<u64>>();
    out.bound = j.at("bound").get<u64>();
    out.reached_target = true;
    return out;
}

json to_json(const HalfSumset& s) {
    json j;
    j["a"] = s.a;
    j["b1"] = s.b1;
    j["b"] = s.b;
    j["bound"] = s.bound;
    json m = json::array();
    for (const SumsetEntry& e : s.matrix) {
        json row;
        row["i"] = e.i;
        row["j"] = e.j;
        row["sum"] = e.sum;
        row["prime"] = e.prime;
        m.push_back(std::move(row));
    }
    j["matrix"] = std::move(m);
    return j;
}

HalfSumset half_sumset_from_json(const json& j) {
    HalfSumset s;
    s.a = j.at("a").get<std::vector<u64>>();
    s.b1 = j.at("b1").get<u64>();
    s.b = j.at("b").get<std::vector<u64>>();
    s.bound = j.at("bound").get<u64>();
    for (const json& row : j.at("matrix")) {
        SumsetEntry e;
        e.i = row.at("i").get<std::size_t>();
        e.j = row.at("j").get<std::size_t>();
        e.sum = row.at("sum").get<u64>();
        e.prime = row.at("prime").get<bool>();
        s.matrix.push_back(e);
    }
    return s;
}

json to_json(const ChainCertificate& cert) {
    json j;
    j["pool"] = cert.pool;
    j["shape"] = cert.shape;
    j["thetas"] = cert.thetas;
    j["z"] = cert.z;
    j["schedule"] = cert.schedule;
    json chain = json::array();
    for (std::size_t r = 0; r < cert.chain.size(); ++r) {
        json e;
        e["i"] = cert.chain[r].i + 1;
        e["j"] = cert.chain[r].j + 1;
        e["offset"] = cert.chain_offsets[r];
        chain.push_back(std::move(e));
    }
    j["chain"] = std::move(chain);
    j["prefix_measures"] = cert.prefix_measures;
    json certs = json::array();
    for (const WitnessCertificate& w : cert.prefix_witnesses)
        certs.push_back(to_json(w));
    j["prefix_witnesses"] = std::move(certs);
    return j;
}

ChainCertificate chain_certificate_from_json(const json& j) {
    ChainCertificate cert;
    cert.pool = j.at("pool").get<std::vector<u64>>();
    cert.shape = j.at("shape").get<std::vector<std::size_t>>();
    cert.thetas = j.at("thetas").get<std::vector<double>>();
    cert.z = j.at("z").get<u64>();
    cert.schedule = j.at("schedule").get<std::vector<u64>>();
    for (const json& e : j.at("chain")) {
        cert.chain.push_back(Cell{e.at("i").get<std::size_t>() - 1,
                                  e.at("j").get<std::size_t>() - 1});
        cert.chain_offsets.push_back(e.at("offset").get<u64>());
    }
    cert.prefix_measures =
        j.at("prefix_measures").get<std::vector<std::vector<double>>>();
    for (const json& w : j.at("prefix_witnesses"))
        cert.prefix_witnesses.push_back(witness_from_json(w));
    return cert;
}

namespace {

json to_json(const EstimateLine& line) {
    json j;
    j["empirical"] = line.empirical;
    j["predicted"] = line.predicted;
    j["ratio"] = line.ratio;
    return j;
}

} // namespace

json to_json(const EstimateReport& rep) {
    json j;
    j["N"] = rep.N;
    j["z"] = rep.z;
    j["W"] = rep.W;
    j["b"] = rep.b;
    j["k"] = rep.k;
    j["B"] = rep.B;
    j["class_count"] = rep.class_count;
    j["sum_w"] = to_json(rep.weight_sum);
    json singles = json::array();
    for (const CellEstimate& ce : rep.singles) {
        json e;
        e["i"] = ce.cell.i + 1;
        e["j"] = ce.cell.j + 1;
        e["offset"] = ce.offset;
        e["sums"] = to_json(ce.line);
        e["nu"] = ce.nu;
        e["target"] = ce.target;
        singles.push_back(std::move(e));
    }
    j["singles"] = std::move(singles);
    json pairs = json::array();
    for (const PairEstimate& pe : rep.pairs) {
        json e;
        e["i1"] = pe.a.i + 1;
        e["j1"] = pe.a.j + 1;
        e["i2"] = pe.b.i + 1;
        e["j2"] = pe.b.j + 1;
        e["offsets"] = std::vector<u64>{pe.offset_a, pe.offset_b};
        e["within_block"] = pe.within_block;
        e["sums"] = to_json(pe.line);
        e["nu"] = pe.nu;
        e["target"] = pe.target;
        pairs.push_back(std::move(e));
    }
    j["pairs"] = std::move(pairs);
    return j;
}

std::string to_csv(const EstimateReport& rep) {
    std::ostringstream os;
    os << "quantity,empirical,predicted,ratio\n";
    auto emit = [&](const std::string& name, const EstimateLine& l) {
        os << name << ',' << l.empirical << ',' << l.predicted << ',' << l.ratio
           << '\n';
    };
    emit("sum_w", rep.weight_sum);
    for (const CellEstimate& ce : rep.singles)
        emit("single_" + std::to_string(ce.cell.i + 1) + "_" +
                 std::to_string(ce.cell.j + 1),
             ce.line);
    for (const PairEstimate& pe : rep.pairs)
        emit("pair_" + std::to_string(pe.a.i + 1) + "_" +
                 std::to_string(pe.a.j + 1) + "__" + std::to_string(pe.b.i + 1) +
                 "_" + std::to_string(pe.b.j + 1),
             pe.line);
    return os.str();
}

json to_json(const BasisRatios& r) {
    json j;
    j["J"] = r.J;
    j["I"] = r.I;
    j["J_over_I"] = r.J_over_I;
    j["L_over_I"] = r.L_over_I;
    j["single_target"] = r.single_target;
    j["pair_target"] = r.pair_target;
    j["c_lower"] = r.c_lower;
    j["C_upper"] = r.C_upper;
    return j;
}

} // namespace primechain
