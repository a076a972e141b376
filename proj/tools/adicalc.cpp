#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "adic/scenario.hpp"

using namespace adic;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string field_kind_of(const std::string& text)
{
    // peek at the ring block to decide the engine instantiation
    auto toks = Tokenizer(text).all();
    for (std::size_t i = 0; i + 1 < toks.size(); ++i)
        if (toks[i].text == "field")
            return toks[i + 1].text;
    return "Q";
}

int write_report(const Json& rep, const std::string& path)
{
    std::string body = rep.dump(2) + "\n";
    if (path.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write report to " << path << "\n";
            return 2;
        }
        out << body;
    }
    return rep.at("exit").get<int>();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"adicalc: derived a-adic completion and torsion at desk "
                 "scale, with certificates"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a scenario file");
    std::string scenario_path, report_path;
    RunOptions opt;
    std::string order_flag;
    long w0 = -4, w1 = 2;
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--report", report_path, "write the report here");
    run->add_option("--level", opt.level, "default tower level J");
    run->add_option("--window", [&](const std::vector<std::string>& v) {
           if (v.size() != 2)
               return false;
           w0 = std::stol(v[0]);
           w1 = std::stol(v[1]);
           return true;
       },
       "default internal degree window d0 d1")
        ->expected(2);
    run->add_option("--seed", opt.seed, "seed recorded in the report");
    run->add_option("--order", order_flag, "term order: grevlex or lex");
    run->add_option("--resolution-length", opt.resolution_length,
                    "free resolution truncation override");
    run->add_option("--jobs", opt.jobs, "parallel task workers");

    CLI11_PARSE(app, argc, argv);

    opt.d0 = w0;
    opt.d1 = w1;
    if (!order_flag.empty()) {
        if (order_flag == "grevlex")
            opt.order = TermOrderKind::Grevlex;
        else if (order_flag == "lex")
            opt.order = TermOrderKind::Lex;
        else {
            std::cerr << "unknown term order '" << order_flag << "'\n";
            return 2;
        }
    }

    try {
        auto text = read_file(scenario_path);
        auto kind = field_kind_of(text);
        Json rep;
        if (kind == "Fp") {
            auto sc = parse_scenario<PrimeField>(text, opt, PrimeField(2));
            rep = run_scenario(sc, opt);
        } else {
            auto sc = parse_scenario<RationalField>(text, opt);
            rep = run_scenario(sc, opt);
        }
        return write_report(rep, report_path);
    } catch (ParseError& e) {
        std::cerr << "parse error at line " << e.line << ", column " << e.col
                  << ": " << e.what() << "\n";
        return 2;
    } catch (LevelCapError& e) {
        std::cerr << "resource cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
