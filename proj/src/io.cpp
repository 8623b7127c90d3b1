#include "cocopf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cocopf {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open for writing: " + path.string());
    return os;
}

} // namespace

std::string format_sci(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string mlog_filename(const std::string& solver_label, int function_id, int dim,
                          std::uint64_t instance_seed) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "_f%02d_d%02d_i%02llu.mlog.csv", function_id, dim,
                  static_cast<unsigned long long>(instance_seed));
    return solver_label + buf;
}

void write_mlog(const std::filesystem::path& path, std::span<const MLogRow> rows) {
    std::ofstream os = open_out(path);
    os << "# cocopf-mlog v1\n";
    os << "round,member,name,member_evals,total_evals,member_best,portfolio_best\n";
    for (const MLogRow& r : rows) {
        os << r.round << ',' << r.member_index << ',' << r.member_name << ','
           << r.member_evals << ',' << r.total_evals << ','
           << format_sci(r.member_best_delta) << ',' << format_sci(r.portfolio_best_delta)
           << '\n';
    }
    if (!os)
        throw std::runtime_error("write failed: " + path.string());
}

void write_records_csv(const std::filesystem::path& path, std::span<const TrialRecord> records) {
    std::ofstream os = open_out(path);
    os << "function,dim,instance,solver,evals_total,best_delta_final";
    const std::size_t n_targets = records.empty() ? standard_ladder().size()
                                                  : records.front().ladder.size();
    for (std::size_t j = 1; j <= n_targets; ++j)
        os << ",hit_" << j;
    os << '\n';
    for (const TrialRecord& r : records) {
        os << r.function_id << ',' << r.dim << ',' << r.instance_seed << ',' << r.solver_label
           << ',' << r.evals_total << ',' << format_sci(r.best_delta_final);
        for (const auto& h : r.hits) {
            os << ',';
            if (h)
                os << *h;
        }
        os << '\n';
    }
    if (!os)
        throw std::runtime_error("write failed: " + path.string());
}

std::vector<TrialRecord> read_records_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open records file: " + path.string());
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("empty records file: " + path.string());
    const auto header = split_csv_line(line);
    if (header.size() < 7 || header[0] != "function")
        throw std::runtime_error("malformed records header: " + path.string());
    const std::size_t n_targets = header.size() - 6;
    std::vector<TargetSpec> ladder = standard_ladder();
    if (ladder.size() != n_targets)
        ladder = target_ladder(static_cast<int>(n_targets), 1e-8, 1e2);

    std::vector<TrialRecord> out;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size())
            throw std::runtime_error("malformed records row: " + path.string());
        TrialRecord r;
        try {
            r.function_id = std::stoi(f[0]);
            r.dim = std::stoi(f[1]);
            r.instance_seed = std::stoull(f[2]);
            r.solver_label = f[3];
            r.evals_total = std::stol(f[4]);
            r.best_delta_final = std::stod(f[5]);
            r.ladder = ladder;
            r.hits.resize(n_targets);
            for (std::size_t j = 0; j < n_targets; ++j)
                if (!f[6 + j].empty())
                    r.hits[j] = std::stol(f[6 + j]);
        } catch (const std::logic_error&) {
            throw std::runtime_error("malformed records row: " + path.string());
        }
        out.push_back(std::move(r));
    }
    return out;
}

void write_ert_csv(const std::filesystem::path& path, const std::string& header,
                   std::span<const std::string> rows) {
    std::ofstream os = open_out(path);
    os << header << '\n';
    for (const std::string& r : rows)
        os << r << '\n';
    if (!os)
        throw std::runtime_error("write failed: " + path.string());
}

} // namespace cocopf
