#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sseq/convergence.hpp"
#include "sseq/frontend.hpp"

using namespace sseq;

namespace {

void emit(const std::string& out, const std::string& text)
{
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(out, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open '" + out + "' for writing");
    os << text;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact spectral sequence calculator for Cartan-Eilenberg systems"};
    app.require_subcommand(1);

    std::string file, out, format = "csv";
    int p = 2, r = 0, probe = 0;
    unsigned seed = 0;
    int max_dim = 4, window = 6;

    auto* cval = app.add_subcommand("validate", "check the axioms of a .ces system");
    cval->add_option("file", file)->required();

    auto* cpag = app.add_subcommand("pages", "page tables or charts");
    cpag->add_option("file", file)->required();
    cpag->add_option("--r", r, "max page (csv) or page (svg)");
    cpag->add_option("--out", out, "output path; - for stdout");
    cpag->add_option("--format", format, "csv or svg")
        ->check(CLI::IsMember({"csv", "svg"}));

    auto* cdia = app.add_subcommand("diagnose", "full report with certificates");
    cdia->add_option("file", file)->required();
    cdia->add_option("--r", r, "max page for tables");
    cdia->add_option("--probe", probe, "tower probe override");
    cdia->add_option("--out", out, "output path; - for stdout");

    auto* cint = app.add_subcommand("interchange", "four-term sequence summary");
    cint->add_option("file", file)->required();
    cint->add_option("--probe", probe, "tower probe override");

    auto* cgen = app.add_subcommand("gen", "emit a random filtered-complex system");
    cgen->add_option("--seed", seed);
    cgen->add_option("--p", p)->check(CLI::IsMember({2, 3, 5, 7}));
    cgen->add_option("--max-dim", max_dim);
    cgen->add_option("--window", window);
    cgen->add_option("--out", out, "output path; - for stdout");

    auto* cex = app.add_subcommand("example81", "emit the builtin product-tower system");
    cex->add_option("--p", p)->check(CLI::IsMember({2, 3, 5, 7}));
    cex->add_option("--out", out, "output path; - for stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cval->parsed()) {
            CESystem sys = read_ces_file(file);
            ValidationReport vr = validate(sys);
            for (auto& f : vr.failures)
                std::cout << "failure: " << f << "\n";
            std::cout << (vr.ok ? "valid" : "invalid") << " (" << vr.checks
                      << " checks)\n";
            return vr.ok ? 0 : 1;
        }
        if (cpag->parsed()) {
            CESystem sys = read_ces_file(file);
            if (format == "svg")
                emit(out, pages_svg(sys, r > 0 ? r : 1));
            else
                emit(out, pages_csv(sys, r));
            return 0;
        }
        if (cdia->parsed()) {
            CESystem sys = read_ces_file(file);
            ReportOptions opt;
            opt.rmax = r;
            opt.probe = probe;
            DiagnoseResult dr = diagnose(sys, opt);
            emit(out, dr.text);
            if (!dr.valid)
                return 1;
            return dr.hypotheses_met ? 0 : 3;
        }
        if (cint->parsed()) {
            CESystem sys = read_ces_file(file);
            std::cout << interchange_summary(sys, probe);
            return 0;
        }
        if (cgen->parsed()) {
            RandomParams rp;
            rp.p = p;
            rp.max_dim = max_dim;
            rp.window = window;
            emit(out, write_ces(random_system(seed, rp)));
            return 0;
        }
        if (cex->parsed()) {
            emit(out, write_ces(example_8_1(p)));
            return 0;
        }
    } catch (const TamenessViolation& e) {
        std::cerr << "tameness violation: " << e.what() << "\n";
        return 2;
    } catch (const HypothesesUnmet& e) {
        std::cerr << "hypotheses unmet: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
