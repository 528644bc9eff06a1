/**
 * Command-line front end: mesh generation/inspection and certification runs
 * with machine-readable JSON/CSV reports.
 *
 * Exit codes: 0 all checks pass, 1 certification failure, 2 parse/usage
 * error, 3 assembly error.  Set BGG_LOG for progress output on stderr.
 */

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bgg/verify.hpp"

namespace {

bool log_enabled() {
    const char* v = std::getenv("BGG_LOG");
    return v != nullptr && *v != '\0';
}

void log(const std::string& msg) {
    if (log_enabled()) std::cerr << "[bgg] " << msg << "\n";
}

/// A mesh source is either a file path or "gen:<kind>:<res>".
bgg::SimplicialComplex load_source(const std::string& src) {
    if (src.rfind("gen:", 0) == 0) {
        auto colon = src.find(':', 4);
        if (colon == std::string::npos) throw bgg::ParseError("mesh generator spec must be gen:<kind>:<res>");
        std::string kind = src.substr(4, colon - 4);
        int res = 0;
        try {
            size_t used = 0;
            res = std::stoi(src.substr(colon + 1), &used);
            if (used != src.size() - colon - 1) throw std::invalid_argument(src);
        } catch (const std::exception&) {
            throw bgg::ParseError("malformed resolution in mesh source: " + src);
        }
        return bgg::generate_mesh(kind, res);
    }
    return bgg::load_mesh(src);
}

std::string counts_summary(const bgg::SimplicialComplex& m) {
    std::ostringstream os;
    static const char* names[] = {"vertices", "edges", "faces", "cells"};
    for (int k = 0; k <= m.dim(); ++k) {
        const char* name = k == m.dim() ? "cells" : names[k];
        os << (k ? "  " : "") << name << " " << m.count(k) << " (" << m.interior_count(k) << " interior)";
    }
    return os.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw bgg::ParseError("cannot open output file: " + path);
    out << text;
}

nlohmann::json certificate_json(const bgg::Certificate& c) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : c.cohomology)
        rows.push_back({{"k", r.k},
                        {"dim", r.dim},
                        {"rank_in", r.rank_in},
                        {"rank_out", r.rank_out},
                        {"computed", r.computed},
                        {"expected", r.expected},
                        {"pass", r.pass}});
    nlohmann::json j{{"mesh", c.mesh_name}, {"kind", c.kind},       {"dims", c.dims},
                     {"composites", c.composites}, {"cohomology", rows}, {"duality", c.duality},
                     {"runtime_s", c.runtime_s}};
    if (c.oracle) j["oracle"] = *c.oracle;
    else j["oracle"] = nullptr;
    return j;
}

std::string certificates_csv(const std::vector<bgg::Certificate>& certs) {
    std::ostringstream os;
    os << "mesh,kind,k,dim,rank_in,rank_out,computed,expected,pass\n";
    for (const auto& c : certs)
        for (const auto& r : c.cohomology)
            os << c.mesh_name << "," << c.kind << "," << r.k << "," << r.dim << "," << r.rank_in << ","
               << r.rank_out << "," << r.computed << "," << r.expected << "," << (r.pass ? "true" : "false")
               << "\n";
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributional Hessian/divdiv complex assembly and certification"};
    app.require_subcommand(1);

    // mesh gen|info
    CLI::App* mesh = app.add_subcommand("mesh", "generate or inspect meshes");
    mesh->require_subcommand(1);
    CLI::App* gen = mesh->add_subcommand("gen", "generate a mesh file");
    std::string gen_kind, gen_out;
    int gen_res = 1;
    gen->add_option("--kind", gen_kind, "generator kind")->required();
    gen->add_option("--res", gen_res, "resolution");
    gen->add_option("-o,--output", gen_out, "output mesh file")->required();
    CLI::App* info = mesh->add_subcommand("info", "print mesh summary counts");
    std::string info_src;
    info->add_option("--mesh", info_src, "mesh file path or gen:<kind>:<res>")->required();

    // certify
    CLI::App* cert = app.add_subcommand("certify", "run the certification battery");
    std::string cert_src, cert_kinds = "all", cert_format = "json", cert_out, cert_fault;
    unsigned cert_seed = 0;
    cert->add_option("--mesh", cert_src, "mesh file path or gen:<kind>:<res>")->required();
    cert->add_option("--kinds", cert_kinds, "comma-separated complex kinds, or 'all'");
    cert->add_option("--seed", cert_seed, "random seed for the adjointness oracle");
    cert->add_option("--format", cert_format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cert->add_option("-o,--output", cert_out, "report file (default stdout)");
    cert->add_option("--fault", cert_fault, "inject a fault: flip-sign or perturb-entry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            bgg::SimplicialComplex m = bgg::generate_mesh(gen_kind, gen_res);
            write_output(gen_out, bgg::mesh_to_text(m));
            std::cout << counts_summary(m) << "\n";
            return 0;
        }
        if (info->parsed()) {
            bgg::SimplicialComplex m = load_source(info_src);
            std::cout << "dim " << m.dim() << "  " << counts_summary(m) << "\n";
            return 0;
        }

        // certify
        bgg::SimplicialComplex m = load_source(cert_src);
        std::vector<std::string> kinds;
        if (cert_kinds == "all") {
            std::string suffix = "-" + std::to_string(m.dim()) + "d";
            for (const auto& k : bgg::complex_kinds())
                if (k.size() >= suffix.size() && k.substr(k.size() - suffix.size()) == suffix) kinds.push_back(k);
        } else {
            std::stringstream ss(cert_kinds);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto& known = bgg::complex_kinds();
                if (std::find(known.begin(), known.end(), item) == known.end())
                    throw bgg::ParseError("unknown complex kind: " + item);
                kinds.push_back(item);
            }
            if (kinds.empty()) throw bgg::ParseError("no complex kinds given");
        }
        if (!cert_fault.empty() && cert_fault != "flip-sign" && cert_fault != "perturb-entry")
            throw bgg::ParseError("unknown fault: " + cert_fault);

        log("mesh " + cert_src + ": " + counts_summary(m));
        log("running duality checks");
        bool duality = bgg::check_duality(m);
        std::vector<bgg::Certificate> certs;
        bool all_pass = true;
        for (const auto& kind : kinds) {
            log("certifying " + kind);
            certs.push_back(bgg::certify(kind, m, cert_src, cert_seed, 20, cert_fault, duality));
            all_pass = all_pass && certs.back().pass();
        }

        std::string text;
        if (cert_format == "csv") {
            text = certificates_csv(certs);
        } else {
            nlohmann::json report = nlohmann::json::array();
            for (const auto& c : certs) report.push_back(certificate_json(c));
            text = report.dump(2) + "\n";
        }
        write_output(cert_out, text);
        return all_pass ? 0 : 1;
    } catch (const bgg::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bgg::TopologyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bgg::AssemblyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
