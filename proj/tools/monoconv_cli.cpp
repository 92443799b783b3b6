// monoconv: batch front end. Every subcommand writes to stdout (or --output) and
// exits with io::exit_code() of the first library error, 2 on usage errors, and 4
// when a verification subcommand finds a defect above tolerance.

#include <monoconv/branching.hpp>
#include <monoconv/cfree.hpp>
#include <monoconv/convolution.hpp>
#include <monoconv/embedding.hpp>
#include <monoconv/io.hpp>
#include <monoconv/opmodel.hpp>
#include <monoconv/semigroup.hpp>

#include <CLI11.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

using namespace monoconv;

namespace {

constexpr int exit_verification_failed = 4;

// "0.5" or "0.3,-0.2".
cplx parse_point(const std::string& text)
{
    auto parse = [&](const std::string& s) {
        std::size_t pos = 0;
        double x = 0.0;
        try {
            x = std::stod(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != s.size())
            detail::fail(Errc::parse_error, "bad point \"" + text + "\"; expected re or re,im");
        return x;
    };
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        return parse(text);
    return {parse(text.substr(0, comma)), parse(text.substr(comma + 1))};
}

std::vector<cplx> parse_points(const std::vector<std::string>& texts)
{
    std::vector<cplx> out;
    for (const auto& t : texts)
        out.push_back(parse_point(t));
    return out;
}

class Output {
public:
    explicit Output(const std::string& path) : path_(path) {}

    void write(const std::string& text) const
    {
        if (path_.empty()) {
            std::fwrite(text.data(), 1, text.size(), stdout);
            std::fflush(stdout);
            return;
        }
        std::ofstream out(path_, std::ios::binary);
        if (!out || !(out << text))
            detail::fail(Errc::io_error, "cannot write " + path_);
    }

private:
    std::string path_;
};

int run_convolve(const std::string& mu_path, const std::string& nu_path, std::size_t order,
                 const std::string& format, const Output& out)
{
    const auto mu = io::read_measure(io::read_json_file(mu_path));
    const auto nu = io::read_measure(io::read_json_file(nu_path));
    const auto m = moments(monotone_convolve(mu, nu, order), order);
    if (format == "csv") {
        std::string text = "k,re,im\n";
        for (std::size_t k = 1; k <= m.size(); ++k)
            text += io::csv_row({static_cast<double>(k), m[k - 1].real(), m[k - 1].imag()});
        out.write(text);
    } else {
        io::json j;
        j["order"] = order;
        j["moments"] = io::to_json(m);
        out.write(io::dump(j));
    }
    return 0;
}

int run_evolve(const std::string& gen_path, const std::vector<double>& times, const std::string& grid_path,
               const std::vector<std::string>& z_texts, double tol, const Output& out)
{
    const auto gen = io::read_generator(io::read_json_file(gen_path));
    std::vector<cplx> grid = parse_points(z_texts);
    if (!grid_path.empty()) {
        const auto more = io::read_grid(io::read_json_file(grid_path));
        grid.insert(grid.end(), more.begin(), more.end());
    }
    if (grid.empty())
        detail::fail(Errc::parse_error, "evolve needs --grid or --z");

    // A branching generator with a single rate is a Yule process; add its closed form.
    const BranchingGenerator* yule = std::get_if<BranchingGenerator>(&gen);
    if (yule && yule->rates().size() != 1)
        yule = nullptr;

    const auto traj = std::visit([&](const auto& g) { return evolve_trajectory(g, times, grid, tol); }, gen);
    std::string text = yule ? "t,re_z,im_z,re_K,im_K,re_closed_form,im_closed_form\n" : "t,re_z,im_z,re_K,im_K\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double t = traj.times[i];
            const cplx z = grid[j];
            const cplx k = traj.values[i][j];
            std::vector<double> row{t, z.real(), z.imag(), k.real(), k.imag()};
            if (yule) {
                const auto& [kk, alpha] = *yule->rates().begin();
                const cplx c = yule_closed_form(alpha, kk, t, z);
                row.push_back(c.real());
                row.push_back(c.imag());
            }
            text += io::csv_row(row);
        }
    }
    out.write(text);
    return 0;
}

int run_embed(const std::string& k_path, std::size_t max_iter, std::size_t order, const Output& out)
{
    const auto k = io::read_k(io::read_json_file(k_path), order);
    out.write(io::dump(io::to_json(embedding_test(k, max_iter))));
    return 0;
}

int run_gw(const std::string& law_path, std::size_t n, std::size_t trials, std::uint64_t seed,
           const std::vector<std::string>& z_texts, const Output& out)
{
    const auto law = io::read_law(io::read_json_file(law_path));
    const auto zs = parse_points(z_texts);
    std::string text = "re_z,im_z,re_empirical,im_empirical,stderr,re_theory,im_theory\n";
    for (const auto& e : gw_simulate(law, n, trials, zs, seed))
        text += io::csv_row({e.z.real(), e.z.imag(), e.empirical.real(), e.empirical.imag(), e.std_error,
                             e.theory.real(), e.theory.imag()});
    out.write(text);
    return 0;
}

int run_counterexample(double a, double b, const Output& out)
{
    out.write(io::dump(io::to_json(appendix_counterexample(a, b))));
    return 0;
}

int run_cfree_check(std::size_t max_len, int max_power, std::uint64_t seed, const Output& out)
{
    using Rational = boost::multiprecision::mpq_rational;
    if (max_len < 1 || max_power < 1)
        detail::fail(Errc::domain_error, "max-len and max-power must be positive");
    // Merging algebra-1 letters across a removed algebra-2 block can raise powers up to
    // max_power * ceil(max_len / 2); keep enough moments for that.
    const std::size_t order = max_len * static_cast<std::size_t>(max_power);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    std::vector<Rational> q1(order), q2(order);
    for (auto& x : q1)
        x = Rational(num(rng), den(rng));
    for (auto& x : q2)
        x = Rational(num(rng), den(rng));
    std::vector<double> d1, d2;
    for (const auto& x : q1)
        d1.push_back(x.convert_to<double>());
    for (const auto& x : q2)
        d2.push_back(x.convert_to<double>());

    const auto exact = cfree::check_monotone_specialization(
        cfree::MomentFunctional<Rational>(q1), cfree::MomentFunctional<Rational>(q2), max_len, max_power,
        [](const Rational& d) { return std::abs(d.convert_to<double>()) + (d == 0 ? 0.0 : 1e-300); });
    const auto floating = cfree::check_monotone_specialization(
        cfree::MomentFunctional<double>(d1), cfree::MomentFunctional<double>(d2), max_len, max_power,
        [](double d) { return std::abs(d); });

    const double float_tol = 1e-12;
    const bool pass = exact.mismatches == 0 && floating.max_defect <= float_tol;
    io::json j;
    j["max_len"] = max_len;
    j["max_power"] = max_power;
    j["seed"] = seed;
    j["exact"] = io::to_json(exact);
    j["float"] = io::to_json(floating);
    j["float_tolerance"] = float_tol;
    j["pass"] = pass;
    out.write(io::dump(j));
    return pass ? 0 : exit_verification_failed;
}

int run_verify_ops(std::uint64_t seed, std::size_t cases, double tol, const Output& out)
{
    const auto rep = identity_suite(seed, cases);
    const bool pass = rep.max_defect <= tol;
    io::json j;
    j["seed"] = seed;
    j["cases"] = rep.cases;
    j["grid_points"] = identity_z_grid().size();
    j["tolerance"] = tol;
    j["max_defect"] = rep.max_defect;
    j["pass"] = pass;
    io::json per_case = io::json::array();
    for (std::size_t i = 0; i < rep.cases; ++i)
        per_case.push_back({{"left_dim", rep.dims[i].first}, {"right_dim", rep.dims[i].second},
                            {"defect", rep.defects[i]}});
    j["per_case"] = std::move(per_case);
    out.write(io::dump(j));
    return pass ? 0 : exit_verification_failed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monotone convolution toolkit"};
    app.require_subcommand(1);
    std::string output;
    app.add_option("-o,--output", output, "Write to this file instead of stdout");

    std::function<int()> action;

    auto* convolve = app.add_subcommand("convolve", "Moments of mu |> nu");
    std::string mu_path, nu_path, format = "json";
    std::size_t order = default_order;
    convolve->add_option("mu", mu_path, "Measure JSON")->required();
    convolve->add_option("nu", nu_path, "Measure JSON")->required();
    convolve->add_option("--order", order, "Number of moments")->check(CLI::Range(1, 4096));
    convolve->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    convolve->callback([&] { action = [&] { return run_convolve(mu_path, nu_path, order, format, Output(output)); }; });

    auto* evolve = app.add_subcommand("evolve", "Trajectory K_t(z) of a generator");
    std::string gen_path, grid_path;
    std::vector<double> times;
    std::vector<std::string> evolve_z;
    double tol = default_ode_tol;
    evolve->add_option("generator", gen_path, "Generator JSON")->required();
    evolve->add_option("--t", times, "Times, increasing")->required();
    evolve->add_option("--grid", grid_path, "Grid JSON");
    evolve->add_option("--z", evolve_z, "Grid point re or re,im");
    evolve->add_option("--tol", tol, "ODE tolerance")->check(CLI::PositiveNumber);
    evolve->callback(
        [&] { action = [&] { return run_evolve(gen_path, times, grid_path, evolve_z, tol, Output(output)); }; });

    auto* embed = app.add_subcommand("embed", "Embedding test for a K-transform");
    std::string k_path;
    std::size_t max_iter = 1000;
    std::size_t embed_order = default_order;
    embed->add_option("k", k_path, "K JSON (coeffs or a measure)")->required();
    embed->add_option("--max-iter", max_iter, "Iteration cap")->check(CLI::Range(1, 1'000'000));
    embed->add_option("--order", embed_order, "Series order for measure input")->check(CLI::Range(1, 4096));
    embed->callback([&] { action = [&] { return run_embed(k_path, max_iter, embed_order, Output(output)); }; });

    auto* gw = app.add_subcommand("gw", "Galton-Watson Monte Carlo");
    std::string law_path;
    std::size_t steps = 0, trials = 100'000;
    std::uint64_t gw_seed = 1;
    std::vector<std::string> gw_z{"0.3", "0.5", "0.8"};
    gw->add_option("law", law_path, "Offspring law JSON")->required();
    gw->add_option("--n", steps, "Generations")->required();
    gw->add_option("--trials", trials, "Trials")->check(CLI::Range(std::size_t{1}, std::size_t{1'000'000'000}));
    gw->add_option("--seed", gw_seed, "Seed");
    gw->add_option("--z", gw_z, "Sample point re or re,im");
    gw->callback([&] { action = [&] { return run_gw(law_path, steps, trials, gw_seed, gw_z, Output(output)); }; });

    auto* counter = app.add_subcommand("counterexample", "Two-by-two-block counterexample report");
    double a = 0.5, b = 0.5;
    counter->add_option("--a", a, "a in (0, 1)")->required();
    counter->add_option("--b", b, "b in (0, 1)")->required();
    counter->callback([&] { action = [&] { return run_counterexample(a, b, Output(output)); }; });

    auto* cfree_check = app.add_subcommand("cfree-check", "c-free to monotone specialization check");
    std::size_t max_len = 8;
    int max_power = 4;
    std::uint64_t cfree_seed = 1;
    cfree_check->add_option("--max-len", max_len, "Longest word")->check(CLI::Range(1, 16));
    cfree_check->add_option("--max-power", max_power, "Largest letter power")->check(CLI::Range(1, 16));
    cfree_check->add_option("--seed", cfree_seed, "Seed for the random rational moments");
    cfree_check->callback(
        [&] { action = [&] { return run_cfree_check(max_len, max_power, cfree_seed, Output(output)); }; });

    auto* verify = app.add_subcommand("verify-ops", "K_{V1 W V2} = K_{V1 V2} o K_W on random models");
    std::uint64_t ops_seed = 1;
    std::size_t cases = 100;
    double ops_tol = 1e-10;
    verify->add_option("--seed", ops_seed, "Seed");
    verify->add_option("--cases", cases, "Number of random models")->check(CLI::Range(1, 100'000));
    verify->add_option("--tol", ops_tol, "Defect tolerance")->check(CLI::PositiveNumber);
    verify->callback([&] { action = [&] { return run_verify_ops(ops_seed, cases, ops_tol, Output(output)); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "monoconv: usage: " << e.what() << "\n";
        return io::exit_code(Errc::parse_error);
    }

    try {
        return action();
    } catch (const Error& e) {
        std::cerr << "monoconv: " << e.what() << "\n";
        return io::exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "monoconv: internal error: " << e.what() << "\n";
        return 1;
    }
}
