// JSON and CSV adapters for the command-line front end.
//
// Inputs are parsed with nlohmann::json; any structural problem becomes
// Errc::parse_error carrying the source name and, for syntax errors, the line.
// Output doubles are always written with 17 significant digits, so JSON is
// emitted by a small printer here instead of json::dump (which prints the
// shortest round-trip form).

#ifndef MONOCONV_IO_HPP
#define MONOCONV_IO_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <monoconv/branching.hpp>
#include <monoconv/cfree.hpp>
#include <monoconv/embedding.hpp>
#include <monoconv/error.hpp>
#include <monoconv/generator.hpp>
#include <monoconv/measure.hpp>
#include <monoconv/opmodel.hpp>

namespace monoconv::io {

using json = nlohmann::ordered_json;

// Process exit code for each error class. 0 is success, 1 an unexpected failure,
// 2 a usage problem (bad flags or malformed input files).
constexpr int exit_code(Errc code) noexcept
{
    switch (code) {
    case Errc::parse_error: return 2;
    case Errc::io_error: return 3;
    case Errc::domain_error: return 10;
    case Errc::order_exceeded: return 11;
    case Errc::invalid_measure: return 12;
    case Errc::invalid_generator: return 13;
    case Errc::not_a_k_transform: return 14;
    case Errc::unsupported_generator: return 15;
    case Errc::step_underflow: return 16;
    case Errc::max_steps_exceeded: return 17;
    case Errc::singular_system: return 18;
    case Errc::precondition_failed: return 19;
    case Errc::population_overflow: return 20;
    case Errc::recursion_limit: return 21;
    }
    return 1;
}

inline json parse_json(std::string_view text, std::string_view source)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        detail::fail(Errc::parse_error, std::string(source) + ": " + e.what());
    }
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        detail::fail(Errc::io_error, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), path);
}

namespace detail {

// Runs a reader, turning nlohmann type/range errors into parse_error.
template <typename F>
auto guarded(std::string_view what, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const json::exception& e) {
        monoconv::detail::fail(Errc::parse_error, std::string(what) + ": " + e.what());
    }
}

inline const json& member(const json& j, const char* key, std::string_view what)
{
    if (!j.is_object() || !j.contains(key))
        monoconv::detail::fail(Errc::parse_error, std::string(what) + ": missing \"" + key + "\"");
    return j.at(key);
}

} // namespace detail

// A complex number is a JSON number or a pair [re, im].
inline cplx read_cplx(const json& j)
{
    return detail::guarded("complex number", [&] {
        if (j.is_number())
            return cplx(j.get<double>());
        if (j.is_array() && j.size() == 2)
            return cplx(j[0].get<double>(), j[1].get<double>());
        monoconv::detail::fail(Errc::parse_error, "complex number must be a number or [re, im]");
    });
}

inline std::vector<cplx> read_cplx_array(const json& j)
{
    if (!j.is_array())
        monoconv::detail::fail(Errc::parse_error, "expected an array of complex numbers");
    std::vector<cplx> out;
    out.reserve(j.size());
    for (const auto& x : j)
        out.push_back(read_cplx(x));
    return out;
}

inline std::vector<Atom> read_atoms(const json& j)
{
    return detail::guarded("atoms", [&] {
        if (!j.is_array())
            monoconv::detail::fail(Errc::parse_error, "atoms must be an array");
        std::vector<Atom> atoms;
        for (const auto& a : j)
            atoms.push_back({detail::member(a, "angle", "atom").get<double>(),
                             detail::member(a, "weight", "atom").get<double>()});
        return atoms;
    });
}

// {"atoms": [{"angle": .., "weight": ..}, ...]} or {"moments": [[re, im], ...]}.
inline CircleMeasure read_measure(const json& j)
{
    if (j.is_object() && j.contains("atoms"))
        return CircleMeasure::atomic(read_atoms(j.at("atoms")));
    if (j.is_object() && j.contains("moments"))
        return CircleMeasure::from_moments(read_cplx_array(j.at("moments")));
    monoconv::detail::fail(Errc::parse_error, "measure needs \"atoms\" or \"moments\"");
}

// {"b": .., "rho": [atoms], "uniform": ..}; "uniform" is optional Lebesgue mass.
inline HerglotzGenerator read_herglotz(const json& j)
{
    return detail::guarded("generator", [&] {
        const double b = j.value("b", 0.0);
        const double uniform = j.value("uniform", 0.0);
        std::vector<Atom> rho;
        if (j.contains("rho"))
            rho = read_atoms(j.at("rho"));
        return HerglotzGenerator(b, std::move(rho), uniform);
    });
}

// {"rates": {"2": 1.0, "3": 0.5}}: lambda_j for offspring count j.
inline BranchingGenerator read_branching(const json& j)
{
    return detail::guarded("branching generator", [&] {
        const json& rates = detail::member(j, "rates", "branching generator");
        if (!rates.is_object())
            monoconv::detail::fail(Errc::parse_error, "rates must be an object keyed by offspring count");
        std::map<std::size_t, double> out;
        for (const auto& [key, value] : rates.items()) {
            std::size_t pos = 0;
            unsigned long k = 0;
            try {
                k = std::stoul(key, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos == 0 || pos != key.size())
                monoconv::detail::fail(Errc::parse_error, "rate key \"" + key + "\" is not an offspring count");
            out[k] = value.get<double>();
        }
        return BranchingGenerator(std::move(out));
    });
}

using AnyGenerator = std::variant<HerglotzGenerator, BranchingGenerator>;

inline AnyGenerator read_generator(const json& j)
{
    if (j.is_object() && j.contains("rates"))
        return read_branching(j);
    if (!j.is_object())
        monoconv::detail::fail(Errc::parse_error, "generator must be an object");
    return read_herglotz(j);
}

// {"p": [p0, p1, ...]}.
inline OffspringLaw read_law(const json& j)
{
    return detail::guarded("offspring law", [&] {
        return OffspringLaw(detail::member(j, "p", "offspring law").get<std::vector<double>>());
    });
}

// {"coeffs": [c0, c1, ...]} with c0 = 0, or any measure document.
inline KTransform read_k(const json& j, std::size_t order)
{
    if (j.is_object() && j.contains("coeffs")) {
        auto c = read_cplx_array(j.at("coeffs"));
        if (c.empty())
            monoconv::detail::fail(Errc::parse_error, "coeffs must not be empty");
        if (c.front() != cplx(0.0))
            monoconv::detail::fail(Errc::not_a_k_transform, "K(0) must vanish");
        if (c.size() == 1)
            c.push_back(0.0);
        return KTransform::from_series(TruncatedSeries(std::move(c)));
    }
    return k_transform(read_measure(j), order);
}

// {"points": [z, ...]} or a bare array of points.
inline std::vector<cplx> read_grid(const json& j)
{
    if (j.is_object())
        return read_cplx_array(detail::member(j, "points", "grid"));
    return read_cplx_array(j);
}

// Output ------------------------------------------------------------------

inline std::string number(double x)
{
    if (!std::isfinite(x))
        return "null";
    return fmt::format("{:.17g}", x);
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const std::vector<cplx>& zs)
{
    json out = json::array();
    for (const auto& z : zs)
        out.push_back(to_json(z));
    return out;
}

inline json to_json(const std::vector<double>& xs)
{
    json out = json::array();
    for (double x : xs)
        out.push_back(x);
    return out;
}

inline json to_json(const EmbeddingVerdict& v)
{
    json out;
    out["embeddable"] = v.embeddable;
    out["reason"] = std::string(to_string(v.reason));
    out["t0"] = v.t0 ? json(*v.t0) : json(nullptr);
    out["beta"] = v.beta ? to_json(*v.beta) : json(nullptr);
    out["branch_index"] = v.branch_index;
    out["iterations"] = v.iterations;
    out["cauchy_residual"] = v.cauchy_residual;
    out["u_origin_estimate"] = to_json(v.u_origin_estimate);
    out["grid"] = to_json(v.grid);
    out["u_tilde"] = to_json(v.u_tilde);
    json branches = json::array();
    for (const auto& b : v.branches)
        branches.push_back({{"index", b.index}, {"beta", to_json(b.beta)}, {"t0", b.t0}, {"min_re", b.min_re}});
    out["branches"] = std::move(branches);
    return out;
}

inline json to_json(const CounterexampleReport& r)
{
    json out;
    out["a"] = r.a;
    out["b"] = r.b;
    out["eigenvalues_sqrtX_Y_sqrtX"] = to_json(r.eigen_sxys);
    out["eigenvalues_sqrtY_X_sqrtY"] = to_json(r.eigen_syxs);
    out["eigenvalues_closed_form"] = to_json(r.eigen_closed_form);
    out["second_moment_sqrtX_Y_sqrtX"] = r.second_moment_sxys;
    out["second_moment_sqrtY_X_sqrtY"] = r.second_moment_syxs;
    out["second_moment_sqrtX_Y_sqrtX_closed_form"] = r.second_moment_sxys_closed_form;
    out["second_moment_sqrtY_X_sqrtY_closed_form"] = r.second_moment_syxs_closed_form;
    out["sqrt_closed_form_defect"] = r.sqrt_closed_form_defect;
    return out;
}

inline json to_json(const cfree::SpecializationReport& r)
{
    return {{"words", r.words}, {"mismatches", r.mismatches}, {"max_defect", r.max_defect}};
}

namespace detail {

inline void dump_to(std::string& out, const json& j, int indent, int depth)
{
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
    case json::value_t::number_float:
        out += number(j.get<double>());
        return;
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first)
                out += ",\n";
            first = false;
            out += pad + json(key).dump() + ": ";
            dump_to(out, value, indent, depth + 1);
        }
        out += "\n" + close_pad + "}";
        return;
    }
    case json::value_t::array: {
        // Arrays of scalars stay on one line; points and eigenvalue lists read better that way.
        const bool flat = std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
        if (j.empty()) {
            out += "[]";
            return;
        }
        if (flat) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i)
                    out += ", ";
                dump_to(out, j[i], indent, depth + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                out += ",\n";
            out += pad;
            dump_to(out, j[i], indent, depth + 1);
        }
        out += "\n" + close_pad + "]";
        return;
    }
    default:
        out += j.dump();
    }
}

} // namespace detail

// Pretty JSON with every float printed to 17 significant digits, newline terminated.
inline std::string dump(const json& j, int indent = 2)
{
    std::string out;
    detail::dump_to(out, j, indent, 0);
    out += '\n';
    return out;
}

inline std::string csv_row(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ',';
        out += fmt::format("{:.17g}", values[i]);
    }
    out += '\n';
    return out;
}

} // namespace monoconv::io

#endif // MONOCONV_IO_HPP
