#include "flni/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace flni::io {

namespace {

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& token, const std::string& path, std::size_t line) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line) + ": not a number: '" + token +
                                 "'");
    }
    if (pos != token.size()) {
        throw std::runtime_error(path + ":" + std::to_string(line) + ": trailing characters in '" +
                                 token + "'");
    }
    return v;
}

void append_array(std::string& out, const std::vector<double>& v) {
    out += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    out += ']';
}

void append_groups(std::string& out, const GroupPartition& part) {
    out += '[';
    for (std::size_t gi = 0; gi < part.groups.size(); ++gi) {
        if (gi) out += ',';
        out += '[';
        for (std::size_t k = 0; k < part.groups[gi].size(); ++k) {
            if (k) out += ',';
            out += std::to_string(part.groups[gi][k]);
        }
        out += ']';
    }
    out += ']';
}

void append_certificate(std::string& out, const oracle::SubgradientCertificate& cert) {
    out += "{\"residual\":";
    out += format_double(cert.residual);
    out += ",\"q\":";
    append_array(out, cert.q);
    out += ",\"t\":";
    append_array(out, cert.t);
    out += ",\"s\":";
    append_array(out, cert.s);
    out += '}';
}

}  // namespace

std::vector<double> read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string token = strip(line);
        if (token.empty()) continue;
        values.push_back(parse_double(token, path, lineno));
    }
    if (values.empty()) throw std::runtime_error(path + ": no values found");
    return values;
}

std::vector<Penalties> read_penalty_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grid file: " + path);
    std::vector<Penalties> grid;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string row = strip(line);
        if (row.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(row);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(strip(field));
        if (fields.size() != 3) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 3 comma-separated values lambda_f,lambda_l,lambda_ni");
        }
        grid.push_back(Penalties{parse_double(fields[0], path, lineno),
                                 parse_double(fields[1], path, lineno),
                                 parse_double(fields[2], path, lineno)});
    }
    if (grid.empty()) throw std::runtime_error(path + ": empty penalty grid");
    return grid;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fit_result_to_json(const FitResult& fit, const oracle::SubgradientCertificate* cert) {
    std::string out = "{\"beta\":";
    append_array(out, fit.beta);
    out += ",\"nu\":";
    append_array(out, fit.dual.nu);
    out += ",\"objective\":";
    out += format_double(fit.objective);
    out += ",\"df\":";
    out += std::to_string(fit.df);
    out += ",\"groups\":";
    append_groups(out, fit.groups);
    out += ",\"converged\":";
    out += fit.dual.converged ? "true" : "false";
    out += ",\"gap\":";
    out += format_double(fit.dual.gap);
    if (cert != nullptr) {
        out += ",\"certificate\":";
        append_certificate(out, *cert);
    }
    out += "}\n";
    return out;
}

std::string path_result_to_json(const PathResult& path) {
    std::string out = "{\"sigma2\":";
    out += format_double(path.sigma2);
    out += ",\"best_index\":";
    out += std::to_string(path.best_index);
    out += ",\"entries\":[";
    for (std::size_t i = 0; i < path.entries.size(); ++i) {
        const PathEntry& e = path.entries[i];
        if (i) out += ',';
        out += "{\"lambda_f\":";
        out += format_double(e.penalties.lambda_f);
        out += ",\"lambda_l\":";
        out += format_double(e.penalties.lambda_l);
        out += ",\"lambda_ni\":";
        out += format_double(e.penalties.lambda_ni);
        out += ",\"cp\":";
        out += format_double(e.cp);
        out += ",\"df\":";
        out += std::to_string(e.fit.df);
        out += ",\"objective\":";
        out += format_double(e.fit.objective);
        out += ",\"converged\":";
        out += e.fit.dual.converged ? "true" : "false";
        out += ",\"gap\":";
        out += format_double(e.fit.dual.gap);
        out += ",\"beta\":";
        append_array(out, e.fit.beta);
        out += '}';
    }
    out += "]}\n";
    return out;
}

std::string certificate_to_json(const oracle::SubgradientCertificate& cert) {
    std::string out;
    append_certificate(out, cert);
    out += '\n';
    return out;
}

}  // namespace flni::io
