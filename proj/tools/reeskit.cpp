#include "rk/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rk;

namespace {

// exit codes: 0 ok, 1 validation, 2 io, 3 math mismatch, 4 timeout
constexpr int EXIT_VALIDATION = 1;
constexpr int EXIT_IO = 2;
constexpr int EXIT_MATH = 3;
constexpr int EXIT_TIMEOUT = 4;

struct CommonOpts {
    std::string field_spec;
    std::string order_spec = "degrevlex";
    std::string json_out;
    double timeout = 0;  // seconds, 0 = none
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--field", opts.field_spec, "coefficient field: q or gf:p");
    cmd->add_option("--order", opts.order_spec, "monomial order: degrevlex or lex")
        ->check(CLI::IsMember({"degrevlex", "lex"}));
    cmd->add_option("--json", opts.json_out, "write the run report to this file");
    cmd->add_option("--timeout", opts.timeout, "abort after this many seconds (exit 4)");
}

Instance load(const std::string& path, const CommonOpts& opts) {
    Field f;
    bool has = !opts.field_spec.empty();
    if (has) f = parse_field(opts.field_spec);
    MonomialOrder ord;
    if (opts.order_spec == "lex") ord.kind = OrderKind::lex;
    return load_instance(path, f, has, ord);
}

void emit(const json& j, const CommonOpts& opts) {
    if (opts.json_out.empty()) return;
    std::ofstream out(opts.json_out);
    if (!out) throw std::ios_base::failure("cannot write " + opts.json_out);
    out << j.dump(2) << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Full single-instance verification: validation, normal form, case label,
// pencil invariants, the case-specific formula/oracle comparison, the
// defining ideal by both methods, and the colon observation.
json verify_instance(const PolyMatrix& phi0, const std::string& id, bool& pass) {
    json rep;
    rep["id"] = id;
    json timings = json::object();
    json checks = json::object();
    pass = false;
    auto t0 = std::chrono::steady_clock::now();

    SettingReport setting = validate_setting(phi0);
    rep["setting"] = json_of(setting);
    timings["validate"] = seconds_since(t0);
    if (!setting.ok()) {
        rep["verdict"] = "FAIL";
        rep["timings"] = timings;
        return rep;
    }

    PolyMatrix phi = normalize_shape(phi0);
    CaseLabel label = classify_case(phi);
    rep["case"] = json_of(label);
    rep["normalized_matrix"] = json_of(phi);

    PencilInvariants pinv = classify_phi_prime(pencil_from_matrix(phi_prime(phi)));
    rep["pencil"] = json_of(pinv);
    timings["classify"] = seconds_since(t0);

    json ideals = json::object();
    ideals["L"] = json_of(symmetric_ideal(phi));
    Ideal J = ideal_J(phi, label);
    ideals["J"] = json_of(J);

    auto tk = std::chrono::steady_clock::now();
    // the K-variant constructors compare formula and oracle internally and
    // throw MathMismatch on disagreement
    if (label.kind == CaseKind::I) {
        ideals["K2"] = json_of(symbolic_square_K(phi, Method::formula));
        checks["symbolic_square_formula_vs_oracle"] = true;
    } else if (label.kind == CaseKind::II) {
        ideals["Kprime"] = json_of(ideal_Kprime(phi, Method::formula));
        checks["Kprime_formula_vs_oracle"] = true;
    } else {
        ideals["Kdoubleprime"] = json_of(ideal_Kdoubleprime(phi));
        checks["Kdoubleprime_colon_identity"] = true;
    }
    timings["k_variant"] = seconds_since(tk);

    auto td = std::chrono::steady_clock::now();
    Ideal Af = defining_ideal(phi, DefiningMethod::formula);
    Ideal As = defining_ideal(phi, DefiningMethod::saturation);
    ideals["A_formula"] = json_of(Af);
    ideals["A_saturation"] = json_of(As);
    bool eq = ideal_equal(Af, As);
    checks["defining_formula_vs_saturation"] = eq;
    if (!eq)
        throw MathMismatch("defining ideal: formula and saturation disagree on " + id);
    timings["defining"] = seconds_since(td);

    auto tc = std::chrono::steady_clock::now();
    ObsColonReport obs = verify_obs_colon(phi);
    checks["colon_is_L_plus_I3"] = obs.equal;
    rep["saturation_exponent"] = obs.exponent;
    timings["obs_colon"] = seconds_since(tc);

    rep["ideals"] = ideals;
    rep["checks"] = checks;
    timings["total"] = seconds_since(t0);
    rep["timings"] = timings;
    pass = obs.equal && eq;
    rep["verdict"] = pass ? "PASS" : "FAIL";
    return rep;
}

void print_ideal(const std::string& name, const Ideal& I) {
    std::cout << name << " = (";
    auto strs = ideal_strings(I);
    for (size_t i = 0; i < strs.size(); ++i)
        std::cout << (i ? ",\n  " : i == 0 && strs.size() > 1 ? "\n  " : "") << strs[i];
    std::cout << (strs.size() > 1 ? "\n)" : ")") << "\n";
}

int run_guarded(const CommonOpts& opts, const std::function<int()>& body) {
    auto work = [&]() -> int {
        try {
            return body();
        } catch (const std::ios_base::failure& e) {
            std::cerr << "io error: " << e.what() << "\n";
            return EXIT_IO;
        } catch (const ParseError& e) {
            std::cerr << "parse error: " << e.what() << "\n";
            return EXIT_IO;
        } catch (const ValidationError& e) {
            std::cerr << "validation error: " << e.what() << "\n";
            return EXIT_VALIDATION;
        } catch (const NormalizationFailed& e) {
            std::cerr << "normalization failed: " << e.what() << "\n";
            return EXIT_VALIDATION;
        } catch (const Error& e) {  // math mismatch, frame mismatch, field extension
            std::cerr << "mismatch: " << e.what() << "\n";
            return EXIT_MATH;
        }
    };
    if (opts.timeout <= 0) return work();
    auto fut = std::async(std::launch::async, work);
    if (fut.wait_for(std::chrono::duration<double>(opts.timeout)) ==
        std::future_status::timeout) {
        std::cerr << "timed out after " << opts.timeout << " s\n";
        std::_Exit(EXIT_TIMEOUT);
    }
    return fut.get();
}

} // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* t = std::getenv("REES_KIT_THREADS")) {
        int nt = std::atoi(t);
        if (nt > 0) omp_set_num_threads(nt);
    }
#endif
    CLI::App app{"reeskit: Rees algebra defining ideals of almost linearly "
                 "presented height-two perfect ideals in k[x,y,z]"};
    app.require_subcommand(1);

    std::string path, method = "both", dir = "data";
    int random_count = 0;
    unsigned long seed = 1;
    CommonOpts opts;

    auto* c_validate = app.add_subcommand("validate", "check the Setting assumptions");
    c_validate->add_option("path", path)->required();
    add_common(c_validate, opts);

    auto* c_classify = app.add_subcommand("classify", "normalize and report the case");
    c_classify->add_option("path", path)->required();
    add_common(c_classify, opts);

    auto* c_pencil = app.add_subcommand("pencil", "Kronecker data of the phi' pencil");
    c_pencil->add_option("path", path)->required();
    add_common(c_pencil, opts);

    auto* c_sym = app.add_subcommand("sym", "symmetric algebra ideal L");
    c_sym->add_option("path", path)->required();
    add_common(c_sym, opts);

    auto* c_jdual = app.add_subcommand("jdual", "Jacobian dual in the case frame");
    c_jdual->add_option("path", path)->required();
    add_common(c_jdual, opts);

    auto* c_defining = app.add_subcommand("defining", "defining ideal of the Rees algebra");
    c_defining->add_option("path", path)->required();
    c_defining->add_option("--method", method, "formula, saturation, or both")
        ->check(CLI::IsMember({"formula", "saturation", "both"}));
    add_common(c_defining, opts);

    auto* c_verify = app.add_subcommand("verify", "full verification of one instance");
    c_verify->add_option("path", path)->required();
    add_common(c_verify, opts);

    auto* c_suite = app.add_subcommand("suite", "bundled corpus plus random instances");
    c_suite->add_option("dir", dir, "directory of instance files");
    c_suite->add_option("--random", random_count, "number of seeded random instances");
    c_suite->add_option("--seed", seed, "seed for the random instances");
    add_common(c_suite, opts);

    CLI11_PARSE(app, argc, argv);

    if (*c_validate)
        return run_guarded(opts, [&] {
            Instance inst = load(path, opts);
            SettingReport rep = validate_setting(inst.phi);
            for (auto& [name, ok] : rep.checks)
                std::cout << name << ": " << (ok ? "PASS" : "FAIL") << "\n";
            if (!rep.ok() && !rep.witness.empty())
                std::cout << "witness: " << rep.witness << "\n";
            json j;
            j["id"] = inst.id;
            j["setting"] = json_of(rep);
            j["verdict"] = rep.ok() ? "PASS" : "FAIL";
            emit(j, opts);
            return rep.ok() ? 0 : EXIT_VALIDATION;
        });

    if (*c_classify)
        return run_guarded(opts, [&] {
            Instance inst = load(path, opts);
            PolyMatrix phi = normalize_shape(inst.phi);
            CaseLabel label = classify_case(phi);
            std::cout << "case " << label.str() << " (" << label.evidence << ")\n";
            json j;
            j["id"] = inst.id;
            j["case"] = json_of(label);
            j["normalized_matrix"] = json_of(phi);
            j["verdict"] = "PASS";
            emit(j, opts);
            return 0;
        });

    if (*c_pencil)
        return run_guarded(opts, [&] {
            Instance inst = load(path, opts);
            PolyMatrix phi = normalize_shape(inst.phi);
            PencilInvariants inv = classify_phi_prime(pencil_from_matrix(phi_prime(phi)));
            std::cout << inv.summary_str() << "\n";
            std::cout << "invariant factors:";
            for (auto& f : inv.invariant_factors) std::cout << " " << f.str();
            std::cout << "\n";
            json j;
            j["id"] = inst.id;
            j["pencil"] = json_of(inv);
            j["verdict"] = "PASS";
            emit(j, opts);
            return 0;
        });

    if (*c_sym)
        return run_guarded(opts, [&] {
            Instance inst = load(path, opts);
            Ideal L = symmetric_ideal(inst.phi);
            print_ideal("L", L);
            json j;
            j["id"] = inst.id;
            j["ideals"] = {{"L", json_of(L)}};
            j["verdict"] = "PASS";
            emit(j, opts);
            return 0;
        });

    if (*c_jdual)
        return run_guarded(opts, [&] {
            Instance inst = load(path, opts);
            PolyMatrix phi = normalize_shape(inst.phi);
            CaseLabel label = classify_case(phi);
            Frame frame =
                label.kind == CaseKind::III ? Frame::XYZ2W0 : Frame::XYZW0;
            JacobianDual jd = jacobian_dual(phi, frame);
            std::cout << "frame:";
            for (auto& g : jd.frame_gens) std::cout << " " << g.str();
            std::cout << "\n";
            for (int r = 0; r < jd.B.rows; ++r) {
                for (int c = 0; c < jd.B.cols; ++c)
                    std::cout << (c ? " | " : "[ ") << jd.B.at(r, c).str();
                std::cout << " ]\n";
            }
            json j;
            j["id"] = inst.id;
            j["case"] = json_of(label);
            j["jacobian_dual"] = json_of(jd.B);
            j["verdict"] = "PASS";
            emit(j, opts);
            return 0;
        });

    if (*c_defining)
        return run_guarded(opts, [&] {
            Instance inst = load(path, opts);
            PolyMatrix phi = normalize_shape(inst.phi);
            json j;
            j["id"] = inst.id;
            json ideals = json::object();
            bool ok = true;
            std::optional<Ideal> Af, As;
            if (method != "saturation") {
                Af = defining_ideal(phi, DefiningMethod::formula);
                ideals["A_formula"] = json_of(*Af);
            }
            if (method != "formula") {
                As = defining_ideal(phi, DefiningMethod::saturation);
                ideals["A_saturation"] = json_of(*As);
            }
            print_ideal("A", Af ? *Af : *As);
            if (Af && As) {
                ok = ideal_equal(*Af, *As);
                std::cout << "formula vs saturation: " << (ok ? "PASS" : "FAIL") << "\n";
                j["checks"] = {{"defining_formula_vs_saturation", ok}};
            }
            j["ideals"] = ideals;
            j["verdict"] = ok ? "PASS" : "FAIL";
            emit(j, opts);
            if (!ok) {
                std::cerr << "mismatch: defining ideal methods disagree\n";
                return EXIT_MATH;
            }
            return 0;
        });

    if (*c_verify)
        return run_guarded(opts, [&] {
            Instance inst = load(path, opts);
            bool pass = false;
            json j = verify_instance(inst.phi, inst.id, pass);
            for (auto& [k, v] : j["checks"].items())
                std::cout << k << ": " << (v.get<bool>() ? "PASS" : "FAIL") << "\n";
            std::cout << inst.id << ": " << j["verdict"].get<std::string>() << "\n";
            emit(j, opts);
            return pass ? 0 : (j["setting"]["ok"].get<bool>() ? EXIT_MATH
                                                              : EXIT_VALIDATION);
        });

    if (*c_suite)
        return run_guarded(opts, [&] {
            struct Job {
                std::string id;
                PolyMatrix phi;
            };
            std::vector<Job> jobs;
            std::vector<std::string> files;
            if (fs::is_directory(dir)) {
                for (auto& e : fs::directory_iterator(dir))
                    if (e.path().extension() == ".json" &&
                        e.path().filename().string().rfind("report", 0) != 0 &&
                        e.path().string().find("schema") == std::string::npos)
                        files.push_back(e.path().string());
                std::sort(files.begin(), files.end());
            }
            for (auto& f : files) {
                Instance inst = load(f, opts);
                jobs.push_back({inst.id, inst.phi});
            }
            Field fld;
            if (!opts.field_spec.empty()) fld = parse_field(opts.field_spec);
            const Branch branches[] = {Branch::I_N1,  Branch::I_N2,  Branch::I_Rp2,
                                       Branch::I_N3,  Branch::I_N4,  Branch::II_1a,
                                       Branch::II_1b, Branch::II_2,  Branch::II_3a,
                                       Branch::II_3b, Branch::III};
            for (int i = 0; i < random_count; ++i) {
                Branch b = branches[i % 11];
                int n = (b == Branch::I_Rp2 || b == Branch::II_2) ? 6 : 5 + (i / 11) % 2;
                PolyMatrix phi = random_instance(b, seed * 1000 + i, n, fld);
                jobs.push_back({"random_" + std::to_string(i) + "_" + branch_name(b),
                                phi});
            }
            std::vector<json> reports(jobs.size());
            std::vector<int> oks(jobs.size(), 0);
            std::vector<std::string> errors(jobs.size());
#pragma omp parallel for schedule(dynamic)
            for (long long i = 0; i < (long long)jobs.size(); ++i) {
                try {
                    bool pass = false;
                    reports[i] = verify_instance(jobs[i].phi, jobs[i].id, pass);
                    oks[i] = pass;
                } catch (const Error& e) {
                    reports[i] = {{"id", jobs[i].id}, {"verdict", "FAIL"},
                                  {"error", e.what()}};
                    errors[i] = e.what();
                }
            }
            bool all = !jobs.empty();
            json agg = json::array();
            for (size_t i = 0; i < jobs.size(); ++i) {
                std::cout << jobs[i].id << ": " << (oks[i] ? "PASS" : "FAIL");
                if (!errors[i].empty()) std::cout << " (" << errors[i] << ")";
                std::cout << "\n";
                agg.push_back(reports[i]);
                all = all && oks[i];
            }
            std::cout << "suite: " << (all ? "PASS" : "FAIL") << " (" << jobs.size()
                      << " instances)\n";
            emit(agg, opts);
            return all ? 0 : EXIT_MATH;
        });

    return 0;
}
