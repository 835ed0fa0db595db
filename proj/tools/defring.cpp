#include "defring/error.hpp"
#include "defring/report.hpp"

#include <CLI11.hpp>

#include <iostream>

// exit codes: 0 ok, 1 verification failed, 2 usage/validation, 3 refused, 4 cap exceeded
int main(int argc, char** argv)
{
    using namespace defring;
    CLI::App app{"defring: deformation rings of residual representations over F_p"};
    app.require_subcommand(1, 1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input, "group or algebra input document (JSON/TOML)");
        sub->add_option("--truncate", cfg.truncate, "truncation degree N")->check(CLI::Range(2, 64));
        sub->add_option("--max-arity", cfg.max_arity, "highest m_n to transfer")->check(CLI::Range(2, 64));
        sub->add_option("--dmax", cfg.dmax, "top cochain degree")->check(CLI::Range(1, 8));
        sub->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1, 256));
    };
    for (const char* name : {"cohomology", "products", "present", "pseudo", "oracle", "massey", "check"}) {
        auto* sub = app.add_subcommand(name);
        add_common(sub);
        const std::string n = name;
        if (n == "present") {
            sub->add_flag("--abelian", cfg.abelian, "print the abelianized presentation");
            sub->add_flag("--gma", cfg.gma, "print the GMA coordinate ring");
        }
        if (n == "pseudo") sub->add_option("--quiver", cfg.quiver, "synthetic quiver file");
        if (n == "oracle") sub->add_option("--ring", cfg.ring, "eps:n, xy2 or file:<path>");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        auto rep = run_command(cfg);
        std::cout << render(rep, cfg.format);
        return rep.ok ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const Refusal& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 3;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
