#include "lieexp/expanders.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <set>
#include <sstream>
#include <thread>

#include "lieexp/error.hpp"
#include "lieexp/io.hpp"

namespace lieexp::expanders {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<Mat> mats_of(const std::vector<ProjMatrix>& S) {
    std::vector<Mat> out;
    for (const auto& s : S) out.push_back(s.mat());
    return out;
}

GroupEnum enumerate(const std::vector<Mat>& gens, std::size_t cap, bool projective) {
    auto G = matgrp::generate_group(gens, cap, projective);
    if (!G.complete())
        throw UnsupportedConfig("cap exceeded: group has more than " + std::to_string(cap) + " elements");
    return G;
}

void set_classification(FamilyResult& r, const GroupEnum& G, std::uint64_t ell) {
    auto c = matgrp::classify_quotient(G, ell);
    r.classification = c.name();
    r.order = c.order;
}

struct Spectral {
    spectra::CayleyGraph graph;
    SpectralReport report;
};

Spectral spectral(const GroupEnum& G, const std::vector<Mat>& S, const Options& opt) {
    auto g = spectra::cayley_graph(G, S);
    auto trivial = spectra::trivial_eigendata(G, g, S);
    auto rep = spectra::analyze(g, trivial, opt.spectral);
    return {std::move(g), std::move(rep)};
}

Verdict gap_verdict(const SpectralReport& r) { return {"gap", r.lambda_x, 1.0 - 1e-6, r.lambda_x < 1.0 - 1e-6}; }

std::set<std::vector<ff::Code>> as_code_set(const std::vector<ProjMatrix>& S) {
    std::set<std::vector<ff::Code>> out;
    for (const auto& s : S) out.insert(s.mat().codes());
    return out;
}

}  // namespace

bool FamilyResult::all_pass() const {
    return report.all_pass() && std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

nlohmann::json FamilyResult::to_json() const {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : verdicts) v.push_back({{"name", x.name}, {"value", x.value}, {"bound", x.bound}, {"pass", x.pass}});
    return {{"family", family},
            {"params", {{"p", p}, {"q", q}, {"d", d}, {"e", e}, {"seed", seed}}},
            {"classification", classification},
            {"order", order},
            {"report", report.to_json()},
            {"verdicts", v},
            {"pass", all_pass()},
            {"provenance", provenance}};
}

std::string FamilyResult::csv_header() {
    return "family,p,q,d,e,seed,n,k,classification,lambda,bound,verdict,runtime_ms";
}

std::string FamilyResult::csv_row() const {
    double bound = 1.0;
    for (const auto& v : report.verdicts)
        if (v.name == "ramanujan" || (v.name == "general_d" && d != 2)) bound = v.bound;
    std::ostringstream s;
    s << family << "," << p << "," << q << "," << d << "," << e << "," << seed << "," << report.n << "," << report.k
      << "," << classification << "," << io::format_double(report.lambda_x) << "," << io::format_double(bound) << ","
      << (all_pass() ? "pass" : "fail") << "," << static_cast<std::uint64_t>(runtime_ms);
    return s.str();
}

FamilyResult selberg_family(std::uint32_t p, const Options& opt) {
    if (p < 3 || !ff::is_prime(p)) throw UnsupportedConfig("selberg family needs an odd prime p");
    const auto t0 = Clock::now();
    auto F = ff::Field::prime(p);
    const std::vector<Mat> S{lsv::unipotent_A(F).mat(), lsv::weyl_B(F).mat()};
    auto G = enumerate(S, opt.cap, true);
    FamilyResult r;
    r.family = "selberg";
    r.p = r.q = p;
    r.d = 2;
    r.e = 1;
    set_classification(r, G, p);
    auto sp = spectral(G, S, opt);
    r.verdicts.push_back({"regular", static_cast<double>(sp.graph.k), 3.0, sp.graph.k == 3});
    r.verdicts.push_back({"connected", 1.0, 1.0, sp.graph.connected()});
    r.report = std::move(sp.report);
    r.verdicts.push_back(gap_verdict(r.report));
    r.provenance = {{"family", "selberg"}, {"p", p}, {"generators", {matgrp::mat_to_json(S[0]), matgrp::mat_to_json(S[1])}}};
    r.runtime_ms = ms_since(t0);
    return r;
}

LsvConstruction lsv_construct(const lsv::AlgebraSpec& spec, const Options& opt) {
    const auto t0 = Clock::now();
    auto genset = lsv::gens_S(spec);
    auto S = mats_of(genset.S);
    auto G = enumerate(S, opt.cap, true);
    auto cls = matgrp::classify_quotient(G, spec.K->size());
    auto g = spectra::cayley_graph(G, S);
    return {spec, std::move(genset), std::move(G), std::move(g), cls, ms_since(t0)};
}

LsvConstruction lsv_construct(std::uint64_t q, unsigned d, unsigned e, std::uint64_t seed, const Options& opt) {
    std::string last;
    for (unsigned attempt = 0; attempt <= opt.reseeds; ++attempt) {
        try {
            auto c = lsv_construct(lsv::build_spec(q, d, e, seed + attempt), opt);
            if (c.classification.tag != matgrp::GroupClass::Other) return c;
            last = "generated group has order " + std::to_string(c.group.size());
        } catch (const InternalError& err) {
            if (std::string(err.what()).find("degenerate") == std::string::npos) throw;
            last = err.what();
        }
    }
    throw InternalError("no admissible ideal after re-seeding: " + last);
}

FamilyResult lsv_analyze(LsvConstruction c, const Options& opt) {
    const auto t0 = Clock::now();
    const auto& spec = c.spec;
    FamilyResult r;
    r.family = "lsv";
    r.p = spec.Fq->characteristic();
    r.q = spec.q;
    r.d = spec.d;
    r.e = spec.e;
    r.seed = spec.seed;
    r.classification = c.classification.name();
    r.order = c.classification.order;

    const std::uint64_t expected = (ff::ipow(spec.q, spec.d) - 1) / (spec.q - 1);
    r.verdicts.push_back({"count_S", static_cast<double>(c.genset.S.size()), static_cast<double>(expected),
                          c.genset.S.size() == expected});
    std::vector<ProjMatrix> inv;
    for (const auto& s : c.genset.S) inv.push_back(s.inverse());
    const bool symmetric = as_code_set(c.genset.S) == as_code_set(inv);
    if (spec.d == 2) r.verdicts.push_back({"symmetric_S", symmetric ? 1.0 : 0.0, 1.0, symmetric});
    r.verdicts.push_back({"classification", static_cast<double>(c.group.size()), static_cast<double>(r.order),
                          r.classification != "OTHER"});

    const auto S = mats_of(c.genset.S);
    const std::size_t k_expected = spec.d == 2 ? spec.q + 1 : (symmetric ? expected : 2 * expected);
    r.verdicts.push_back({"regular", static_cast<double>(c.graph.k), static_cast<double>(k_expected),
                          c.graph.k == k_expected});
    r.verdicts.push_back({"connected", 1.0, 1.0, c.graph.connected()});
    auto trivial = spectra::trivial_eigendata(c.group, c.graph, S);
    r.report = spectra::analyze(c.graph, trivial, opt.spectral);
    spectra::add_bound_verdicts(r.report, spec.q, spec.d);
    r.provenance = lsv::spec_to_json(spec, &c.genset);
    r.runtime_ms = ms_since(t0) + c.runtime_ms;
    return r;
}

FamilyResult lsv_family(std::uint64_t q, unsigned d, unsigned e, std::uint64_t seed, const Options& opt) {
    return lsv_analyze(lsv_construct(q, d, e, seed, opt), opt);
}

FamilyResult lsv_from_provenance(const nlohmann::json& provenance, const Options& opt) {
    return lsv_analyze(lsv_construct(lsv::spec_from_json(provenance), opt), opt);
}

FamilyResult abcc_family(std::uint32_t p, unsigned e, std::uint64_t seed, const Options& opt) {
    const auto t0 = Clock::now();
    auto a = lsv::abcc_gens(p, e, seed);
    const auto gens = mats_of(a.gens);
    auto G = enumerate(gens, opt.cap, true);
    FamilyResult r;
    r.family = "abcc";
    r.p = r.q = p;
    r.d = 2;
    r.e = e;
    r.seed = seed;
    set_classification(r, G, a.spec.K->size());

    auto P = enumerate({gens[0], gens[1]}, opt.cap, true);
    const auto psl_p = matgrp::order_psl(2, p);
    r.verdicts.push_back({"AB_order", static_cast<double>(P.size()), static_cast<double>(psl_p), P.size() == psl_p});

    // S ⊆ P·C·P ∪ P·C′·P
    std::set<std::vector<ff::Code>> cosets;
    std::vector<Mat> reps{a.genset.C.mat()};
    if (a.genset.C_prime) reps.push_back(a.genset.C_prime->mat());
    for (const auto& R : reps)
        for (std::size_t i = 0; i < P.size(); ++i) {
            const Mat xR = P.element(i) * R;
            for (std::size_t j = 0; j < P.size(); ++j) cosets.insert(ProjMatrix(xR * P.element(j)).mat().codes());
        }
    std::size_t inside = 0;
    for (const auto& s : a.genset.S) inside += cosets.count(s.mat().codes());
    r.verdicts.push_back({"double_coset_containment", static_cast<double>(inside),
                          static_cast<double>(a.genset.S.size()), inside == a.genset.S.size()});

    auto sp = spectral(G, gens, opt);
    r.verdicts.push_back({"connected", 1.0, 1.0, sp.graph.connected()});
    r.report = std::move(sp.report);
    r.verdicts.push_back(gap_verdict(r.report));
    nlohmann::json gj = nlohmann::json::array();
    for (const auto& g : gens) gj.push_back(matgrp::mat_to_json(g));
    r.provenance = {{"family", "abcc"}, {"spec", lsv::spec_to_json(a.spec, &a.genset)}, {"generators", gj}};
    r.runtime_ms = ms_since(t0);
    return r;
}

Mat sl_lift(const ProjMatrix& m) {
    const auto& F = m.field();
    std::optional<Mat> best;
    for (ff::Code lam = 1; lam < F->size(); ++lam) {
        Mat c = m.mat().scaled(lam);
        if (c.det().code() != 1) continue;
        if (!best || c.codes() < best->codes()) best = std::move(c);
    }
    if (!best) throw InvalidArgument("projective class has no determinant-one representative");
    return *best;
}

bool multiset_contained(std::vector<double> small, std::vector<double> big, double tol) {
    if (small.size() > big.size()) return false;
    std::sort(small.begin(), small.end());
    std::sort(big.begin(), big.end());
    std::size_t j = 0;
    for (double s : small) {
        while (j < big.size() && big[j] < s - tol) ++j;
        if (j == big.size() || big[j] > s + tol) return false;
        ++j;
    }
    return true;
}

FamilyResult lift_cover(std::uint32_t p, const Options& opt) {
    if (p < 3 || !ff::is_prime(p)) throw UnsupportedConfig("lift_cover needs an odd prime p");
    auto F = ff::Field::prime(p);
    auto r = lift_cover(std::vector<ProjMatrix>{lsv::unipotent_A(F), lsv::weyl_B(F)}, opt);
    r.p = r.q = p;
    return r;
}

FamilyResult lift_cover(const std::vector<ProjMatrix>& gens, const Options& opt) {
    if (gens.empty()) throw InvalidArgument("lift_cover needs generators");
    const auto t0 = Clock::now();
    const auto& F = gens.front().field();
    const std::uint64_t ell = F->size();
    std::vector<Mat> lifts;
    for (const auto& g : gens) lifts.push_back(sl_lift(g));
    auto cover = enumerate(lifts, opt.cap, false);
    auto quotient = enumerate(mats_of(gens), opt.cap, true);
    if (cover.size() > opt.spectral.dense_cap)
        throw UnsupportedConfig("lift_cover compares full spectra; the cover exceeds the dense cap");

    FamilyResult r;
    r.family = "cover";
    r.p = F->characteristic();
    r.q = ell;
    r.d = 2;
    r.e = F->absolute_degree();
    set_classification(r, quotient, ell);
    r.verdicts.push_back({"cover_order", static_cast<double>(cover.size()),
                          static_cast<double>(matgrp::order_sl(2, ell)), cover.size() == matgrp::order_sl(2, ell)});

    auto cg = spectra::cayley_graph(cover, lifts);
    // quotient graph on the projected connection multiset, so that it is the honest quotient of the cover
    auto qg = spectra::cayley_graph_multiset(quotient, cg.connection);
    auto crep = spectra::full_spectrum_dense(cg, opt.spectral.dense_cap);
    auto qrep = spectra::full_spectrum_dense(qg, opt.spectral.dense_cap);
    crep.tol = qrep.tol = opt.spectral.tol;
    const bool contained = multiset_contained(qrep.spectrum, crep.spectrum, opt.spectral.tol);
    r.verdicts.push_back({"spectrum_containment", static_cast<double>(qrep.spectrum.size()),
                          static_cast<double>(crep.spectrum.size()), contained});
    r.verdicts.push_back({"constant_lifts", crep.spectrum.front(), 1.0, std::abs(crep.spectrum.front() - 1.0) <= 1e-9});
    auto ctriv = spectra::trivial_eigendata(cover, cg, lifts);
    std::vector<double> cvals;
    for (const auto& t : ctriv) cvals.push_back(t.value);
    spectra::lambda_nontrivial(crep, cvals);
    r.report = std::move(crep);
    nlohmann::json lj = nlohmann::json::array();
    for (const auto& l : lifts) lj.push_back(matgrp::mat_to_json(l));
    r.provenance = {{"family", "cover"},
                    {"field", ff::to_json(*F)},
                    {"lifts", lj},
                    {"quotient_order", quotient.size()},
                    {"quotient_degree", qg.k}};
    r.runtime_ms = ms_since(t0);
    return r;
}

std::vector<ProjMatrix> borel_gens(const ff::FieldRef& F, bool lower) {
    const ff::Code g = F->generator();
    Mat u(F, 2, lower ? std::vector<ff::Code>{1, 0, 1, 1} : std::vector<ff::Code>{1, 1, 0, 1});
    Mat t(F, 2, {g, 0, 0, F->inv(g)});
    return {ProjMatrix(u), ProjMatrix(t)};
}

FamilyResult product_expander(const GroupEnum& G, const std::vector<std::vector<ProjMatrix>>& factor_gens,
                              const Options& opt) {
    const auto t0 = Clock::now();
    FamilyResult r;
    r.family = "product";
    r.p = G.field()->characteristic();
    r.q = G.field()->size();
    r.d = G.dim();
    r.e = G.field()->absolute_degree();
    r.order = G.size();
    r.classification = "order " + std::to_string(G.size());

    std::vector<std::vector<std::uint32_t>> factors;
    std::vector<Mat> all;
    nlohmann::json factor_lambda = nlohmann::json::array();
    bool inside = true;
    for (const auto& gens : factor_gens) {
        const auto S = mats_of(gens);
        auto H = enumerate(S, opt.cap, G.projective());
        std::vector<std::uint32_t> idx;
        for (std::size_t i = 0; i < H.size(); ++i) {
            auto j = G.index_of(H.element(i));
            if (!j) {
                inside = false;
                break;
            }
            idx.push_back(*j);
        }
        factors.push_back(std::move(idx));
        auto sp = spectral(H, S, opt);
        factor_lambda.push_back({{"order", H.size()}, {"lambda", sp.report.lambda_x}});
        for (const auto& s : S) {
            const Mat ns = G.normalize(s);
            if (std::find(all.begin(), all.end(), ns) == all.end()) all.push_back(ns);
        }
    }
    r.verdicts.push_back({"factors_in_G", inside ? 1.0 : 0.0, 1.0, inside});
    const auto cov = inside ? matgrp::product_coverage(G, factors) : matgrp::Coverage{};
    r.verdicts.push_back({"coverage", static_cast<double>(cov.reached), static_cast<double>(G.size()), cov.covered});
    try {
        auto sp = spectral(G, all, opt);
        r.report = std::move(sp.report);
        r.verdicts.push_back(gap_verdict(r.report));
    } catch (const InvalidArgument& err) {
        r.verdicts.push_back({"union_generates", 0.0, 1.0, false});
    }
    r.provenance = {{"family", "product"}, {"factor_count", factor_gens.size()}, {"factor_lambda", factor_lambda}};
    r.runtime_ms = ms_since(t0);
    return r;
}

std::vector<SurveyRow> survey_rows(const nlohmann::json& config) {
    std::vector<SurveyRow> rows;
    if (config.is_null()) return rows;
    if (config.contains("rows"))
        for (const auto& j : config.at("rows")) {
            SurveyRow r;
            r.family = j.at("family").get<std::string>();
            r.p = j.value("p", std::uint64_t{0});
            r.q = j.value("q", std::uint64_t{0});
            r.d = j.value("d", 2u);
            r.e = j.value("e", 1u);
            r.seed = j.value("seed", std::uint64_t{1});
            rows.push_back(r);
        }
    if (config.contains("selberg"))
        for (auto p : config.at("selberg").at("p")) rows.push_back({"selberg", p.get<std::uint64_t>(), 0, 2, 1, 1});
    if (config.contains("cover"))
        for (auto p : config.at("cover").at("p")) rows.push_back({"cover", p.get<std::uint64_t>(), 0, 2, 1, 1});
    if (config.contains("lsv")) {
        const auto& c = config.at("lsv");
        const unsigned d = c.value("d", 2u);
        const std::uint64_t max_ell = c.value("max_ell", std::uint64_t{0});
        const std::uint64_t seed = c.value("seed", std::uint64_t{1});
        for (auto q : c.at("q"))
            for (auto e : c.at("e")) {
                const auto qq = q.get<std::uint64_t>();
                const auto ee = e.get<unsigned>();
                if (max_ell && ff::ipow(qq, ee) > max_ell) continue;
                rows.push_back({"lsv", 0, qq, d, ee, seed});
            }
    }
    if (config.contains("abcc")) {
        const auto& c = config.at("abcc");
        const std::uint64_t seed = c.value("seed", std::uint64_t{1});
        for (auto p : c.at("p"))
            for (auto e : c.at("e")) rows.push_back({"abcc", p.get<std::uint64_t>(), 0, 2, e.get<unsigned>(), seed});
    }
    return rows;
}

SurveyEntry run_row(const SurveyRow& row, const Options& opt) {
    SurveyEntry entry{row, std::nullopt, {}};
    try {
        if (row.family == "selberg")
            entry.result = selberg_family(static_cast<std::uint32_t>(row.p), opt);
        else if (row.family == "lsv")
            entry.result = lsv_family(row.q, row.d, row.e, row.seed, opt);
        else if (row.family == "abcc")
            entry.result = abcc_family(static_cast<std::uint32_t>(row.p), row.e, row.seed, opt);
        else if (row.family == "cover")
            entry.result = lift_cover(static_cast<std::uint32_t>(row.p), opt);
        else
            throw UnsupportedConfig("unknown family '" + row.family + "'");
    } catch (const UnsupportedConfig& err) {
        entry.error = err.what();
        entry.unsupported = true;
    } catch (const std::exception& err) {
        entry.error = err.what();
    }
    return entry;
}

std::vector<SurveyEntry> survey(const std::vector<SurveyRow>& rows, const Options& opt, unsigned jobs) {
    std::vector<SurveyEntry> out(rows.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < rows.size();) out[i] = run_row(rows[i], opt);
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(rows.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace lieexp::expanders
