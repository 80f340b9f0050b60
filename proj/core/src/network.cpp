#include "gridsched/network.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <numeric>

#include "gridsched/csv.hpp"

namespace gridsched {

std::string der_kind_name(DerKind kind) {
    switch (kind) {
        case DerKind::Spv: return "spv";
        case DerKind::Wt: return "wt";
        case DerKind::Mt: return "mt";
        case DerKind::Bess: return "bess";
    }
    return "?";
}

DerKind der_kind_from_name(const std::string& name) {
    if (name == "spv") return DerKind::Spv;
    if (name == "wt") return DerKind::Wt;
    if (name == "mt") return DerKind::Mt;
    if (name == "bess") return DerKind::Bess;
    throw InputError("unknown DER type '" + name + "'");
}

double CaseData::total_p_load_kw() const {
    return std::accumulate(buses.begin(), buses.end(), 0.0,
                           [](double a, const Bus& b) { return a + b.p_load_kw; });
}

double CaseData::total_q_load_kvar() const {
    return std::accumulate(buses.begin(), buses.end(), 0.0,
                           [](double a, const Bus& b) { return a + b.q_load_kvar; });
}

std::size_t CaseData::index_of(int bus_id) const {
    if (bus_id < 1 || static_cast<std::size_t>(bus_id) > buses.size())
        throw ReferenceError("bus " + std::to_string(bus_id) + " does not exist");
    return static_cast<std::size_t>(bus_id - 1);
}

namespace {

bool is_header_row(const std::vector<std::string>& row) {
    // Column-name rows start with a non-numeric first field.
    if (row.empty()) return false;
    char* end = nullptr;
    std::strtod(row[0].c_str(), &end);
    return end == row[0].c_str();
}

void validate_topology(const CaseData& c) {
    const std::size_t n = c.buses.size();
    for (const Line& l : c.lines) {
        if (l.from == l.to)
            throw TopologyError("self-loop on bus " + std::to_string(l.from));
        c.index_of(l.from);
        c.index_of(l.to);
    }
    if (c.lines.size() != n - 1)
        throw TopologyError("a radial case with " + std::to_string(n) + " buses needs " +
                            std::to_string(n - 1) + " lines, got " +
                            std::to_string(c.lines.size()));
    // Connectivity from the substation; with n-1 edges this also rules out cycles.
    std::vector<std::vector<int>> adj(n);
    for (const Line& l : c.lines) {
        adj[c.index_of(l.from)].push_back(static_cast<int>(c.index_of(l.to)));
        adj[c.index_of(l.to)].push_back(static_cast<int>(c.index_of(l.from)));
    }
    std::vector<char> seen(n, 0);
    std::vector<int> stack{static_cast<int>(c.index_of(c.substation))};
    seen[stack[0]] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                stack.push_back(v);
            }
        }
    }
    if (reached != n) throw TopologyError("network is not connected to the substation");
}

}  // namespace

CaseData load_case(std::istream& in, double default_ampacity_a) {
    CaseData c;
    enum class Section { None, Bus, Line, Der } section = Section::None;
    for (const auto& row : csv::read_rows(in)) {
        if (row.size() == 1 && (row[0] == "bus" || row[0] == "line" || row[0] == "der")) {
            section = row[0] == "bus" ? Section::Bus
                    : row[0] == "line" ? Section::Line
                                       : Section::Der;
            continue;
        }
        if (section == Section::None)
            throw InputError("case file must start with a 'bus', 'line' or 'der' section");
        if (is_header_row(row)) continue;
        switch (section) {
            case Section::Bus: {
                if (row.size() < 3) throw InputError("bus row needs id,p_kw,q_kvar");
                c.buses.push_back({csv::to_int(row[0], "bus id"),
                                   csv::to_double(row[1], "bus p_kw"),
                                   csv::to_double(row[2], "bus q_kvar")});
                break;
            }
            case Section::Line: {
                if (row.size() < 4) throw InputError("line row needs from,to,r_ohm,x_ohm[,amp]");
                Line l;
                l.from = csv::to_int(row[0], "line from");
                l.to = csv::to_int(row[1], "line to");
                l.r_ohm = csv::to_double(row[2], "line r_ohm");
                l.x_ohm = csv::to_double(row[3], "line x_ohm");
                l.ampacity_a =
                    row.size() > 4 && !row[4].empty() ? csv::to_double(row[4], "line amp")
                                                      : default_ampacity_a;
                c.lines.push_back(l);
                break;
            }
            case Section::Der: {
                if (row.size() < 3) throw InputError("der row needs node,type,rating");
                c.ders.push_back({csv::to_int(row[0], "der node"),
                                  der_kind_from_name(row[1]),
                                  csv::to_double(row[2], "der rating")});
                break;
            }
            case Section::None: break;
        }
    }
    if (c.buses.empty()) throw InputError("case file has no buses");
    std::sort(c.buses.begin(), c.buses.end(),
              [](const Bus& a, const Bus& b) { return a.id < b.id; });
    for (std::size_t k = 0; k < c.buses.size(); ++k) {
        if (c.buses[k].id != static_cast<int>(k) + 1)
            throw InputError("bus ids must be contiguous starting at 1, missing " +
                             std::to_string(k + 1));
        if (c.buses[k].p_load_kw < 0.0)
            throw InputError("negative load at bus " + std::to_string(c.buses[k].id));
    }
    validate_topology(c);
    for (const DerPlacement& d : c.ders) c.index_of(d.node);
    return c;
}

CaseData load_case_file(const std::string& path, double default_ampacity_a) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open case file '" + path + "'");
    return load_case(in, default_ampacity_a);
}

PowerFlowResult run_power_flow(const CaseData& c, const Injections& inj, double load_scale,
                               const PowerFlowOptions& opt) {
    using cplx = std::complex<double>;
    const std::size_t n = c.buses.size();
    if (inj.p_kw.size() != n || inj.q_kvar.size() != n)
        throw InputError("injection vectors must match the bus count");

    const double z_base = c.base_kv * c.base_kv / c.base_mva;             // ohm
    const double s_base_kw = c.base_mva * 1e3;                            // kW per p.u.
    const double i_base_a = c.base_mva * 1e6 / (std::sqrt(3.0) * c.base_kv * 1e3);

    // Orient every line away from the substation and order lines so a
    // parent line always precedes its children.
    const std::size_t root = c.index_of(c.substation);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);  // (other, line)
    for (std::size_t j = 0; j < c.lines.size(); ++j) {
        const std::size_t a = c.index_of(c.lines[j].from);
        const std::size_t b = c.index_of(c.lines[j].to);
        adj[a].push_back({b, j});
        adj[b].push_back({a, j});
    }
    std::vector<std::size_t> order;        // line indices, root-first
    std::vector<std::size_t> head(c.lines.size()), tail(c.lines.size());
    {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> queue{root};
        seen[root] = 1;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const std::size_t u = queue[q];
            for (auto [v, j] : adj[u]) {
                if (seen[v]) continue;
                seen[v] = 1;
                head[j] = u;
                tail[j] = v;
                order.push_back(j);
                queue.push_back(v);
            }
        }
    }

    // Per-unit net demand at each node (constant-power model).
    std::vector<cplx> s_demand(n);
    for (std::size_t k = 0; k < n; ++k) {
        s_demand[k] = cplx(c.buses[k].p_load_kw * load_scale - inj.p_kw[k],
                           c.buses[k].q_load_kvar * load_scale - inj.q_kvar[k]) /
                      (s_base_kw);
    }
    std::vector<cplx> z(c.lines.size());
    for (std::size_t j = 0; j < c.lines.size(); ++j)
        z[j] = cplx(c.lines[j].r_ohm, c.lines[j].x_ohm) / z_base;

    std::vector<cplx> v(n, cplx(opt.slack_v_pu, 0.0));
    std::vector<cplx> branch_i(c.lines.size());
    int iter = 0;
    for (; iter < opt.max_iter; ++iter) {
        // Backward sweep: accumulate branch currents from the leaves.
        std::vector<cplx> node_i(n);
        for (std::size_t k = 0; k < n; ++k) node_i[k] = std::conj(s_demand[k] / v[k]);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const std::size_t j = *it;
            branch_i[j] = node_i[tail[j]];
            node_i[head[j]] += branch_i[j];
        }
        // Forward sweep: update voltages from the substation down.
        double max_dv = 0.0;
        for (std::size_t j : order) {
            const cplx v_new = v[head[j]] - z[j] * branch_i[j];
            max_dv = std::max(max_dv, std::abs(v_new - v[tail[j]]));
            v[tail[j]] = v_new;
        }
        if (max_dv < opt.tol_pu) {
            ++iter;
            break;
        }
    }
    if (iter >= opt.max_iter)
        throw ConvergenceError("power flow did not converge in " +
                               std::to_string(opt.max_iter) + " iterations");

    PowerFlowResult r;
    r.iterations = iter;
    r.v_mag_pu.resize(n);
    r.v_ang_rad.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        r.v_mag_pu[k] = std::abs(v[k]);
        r.v_ang_rad[k] = std::arg(v[k]);
    }
    r.i_line_a.resize(c.lines.size());
    double loss_pu = 0.0;
    cplx root_i(0.0, 0.0);
    for (std::size_t j = 0; j < c.lines.size(); ++j) {
        r.i_line_a[j] = std::abs(branch_i[j]) * i_base_a;
        loss_pu += std::norm(branch_i[j]) * z[j].real();
        if (head[j] == root) root_i += branch_i[j];
    }
    root_i += std::conj(s_demand[root] / v[root]);
    const cplx s_grid = v[root] * std::conj(root_i);
    r.p_loss_kw = loss_pu * s_base_kw;
    r.p_grid_kw = s_grid.real() * s_base_kw;
    r.q_grid_kvar = s_grid.imag() * s_base_kw;

    // Back-feed per the angle test at the substation: when the feeder
    // imports, the first downstream bus lags (delta1 > delta2).
    double delta2 = 0.0;
    for (std::size_t j : order) {
        if (head[j] == root) {
            delta2 = r.v_ang_rad[tail[j]];
            break;
        }
    }
    r.p_rev_kw = r.v_ang_rad[root] > delta2 ? 0.0 : std::max(0.0, -r.p_grid_kw);
    return r;
}

double reverse_power(const PowerFlowResult& pf) { return pf.p_rev_kw; }

}  // namespace gridsched
