#include "hirsch/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>

int main(int argc, char** argv) {
    CLI::App app{"Exact computations with CDGA models of nilmanifolds and Hirsch extensions"};
    std::optional<int> top;
    std::string format = "plain";
    std::string job_path;
    std::vector<std::string> command;
    app.add_option("--top", top, "Top degree for truncated computations");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"plain", "tsv"}));
    app.add_option("--job", job_path, "Job file (default: standard input)");
    app.add_option("command", command, "Command overriding the job's run line");
    CLI11_PARSE(app, argc, argv);

    hirsch::cli::Options opt;
    opt.top = top;
    opt.format = format == "tsv" ? hirsch::cli::Format::tsv : hirsch::cli::Format::plain;

    std::string text;
    if (job_path.empty()) {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(job_path);
        if (!in) {
            std::cout << "ERROR: cannot open job file '" << job_path << "'\n";
            return 1;
        }
        text.assign(std::istreambuf_iterator<char>(in), {});
        opt.source = job_path;
    }
    if (top && *top < 0) {
        std::cout << "ERROR: --top must be nonnegative\n";
        return 1;
    }
    const auto r = hirsch::cli::run(text, opt, command);
    std::cout << r.output;
    return r.exit_code;
}
