#include "gridsched/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gridsched/errors.hpp"

namespace gridsched {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InputError("expected a boolean for " + key + ", got '" + v + "'");
}

// One table drives parsing and echoing so the two cannot drift apart.
struct Field {
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

std::map<std::string, Field> field_table() {
    std::map<std::string, Field> t;
    const auto str = [&](const std::string& key, std::string RunConfig::* member) {
        t[key] = {[member](RunConfig& c, const std::string& v) { c.*member = v; },
                  [member](const RunConfig& c) { return c.*member; }};
    };
    const auto num = [&](const std::string& key, double RunConfig::* member) {
        t[key] = {[member, key](RunConfig& c, const std::string& v) {
                      try {
                          c.*member = std::stod(v);
                      } catch (const std::exception&) {
                          throw InputError("expected a number for " + key);
                      }
                  },
                  [member](const RunConfig& c) {
                      std::ostringstream os;
                      os.precision(17);
                      os << c.*member;
                      return os.str();
                  }};
    };
    const auto integer = [&](const std::string& key, int RunConfig::* member) {
        t[key] = {[member, key](RunConfig& c, const std::string& v) {
                      try {
                          c.*member = std::stoi(v);
                      } catch (const std::exception&) {
                          throw InputError("expected an integer for " + key);
                      }
                  },
                  [member](const RunConfig& c) { return std::to_string(c.*member); }};
    };
    const auto boolean = [&](const std::string& key, bool RunConfig::* member) {
        t[key] = {[member, key](RunConfig& c, const std::string& v) {
                      c.*member = parse_bool(v, key);
                  },
                  [member](const RunConfig& c) { return c.*member ? "true" : "false"; }};
    };

    str("files.case", &RunConfig::case_file);
    str("files.profiles", &RunConfig::profiles_dir);
    str("files.prices", &RunConfig::prices_file);
    str("files.out", &RunConfig::out_dir);
    num("bess.p_max_charge_kw", &RunConfig::bess_p_max_charge_kw);
    num("bess.p_max_discharge_kw", &RunConfig::bess_p_max_discharge_kw);
    num("bess.soc_min", &RunConfig::bess_soc_min);
    num("bess.soc_max", &RunConfig::bess_soc_max);
    num("bess.soc_init", &RunConfig::bess_soc_init);
    num("bess.round_trip", &RunConfig::bess_round_trip);
    num("bess.om_price", &RunConfig::bess_om_price);
    num("mt.reserve_kw", &RunConfig::mt_reserve_kw);
    num("mt.fuel_price", &RunConfig::mt_fuel_price);
    num("mt.om_price", &RunConfig::mt_om_price);
    num("prices.spv", &RunConfig::spv_price);
    num("prices.wt", &RunConfig::wt_price);
    num("prices.customer_markup", &RunConfig::customer_markup);
    num("uncertainty.k", &RunConfig::k);
    integer("swarm.population", &RunConfig::population);
    integer("swarm.generations", &RunConfig::generations);
    num("swarm.exploration", &RunConfig::exploration);
    num("swarm.exploitation", &RunConfig::exploitation);
    num("network.default_ampacity_a", &RunConfig::default_ampacity_a);
    num("network.pf_tol_pu", &RunConfig::pf_tol_pu);
    integer("network.pf_max_iter", &RunConfig::pf_max_iter);
    num("network.slack_v_pu", &RunConfig::slack_v_pu);
    num("network.v_min_pu", &RunConfig::v_min_pu);
    num("network.v_max_pu", &RunConfig::v_max_pu);
    t["run.seed"] = {[](RunConfig& c, const std::string& v) {
                         try {
                             c.seed = std::stoull(v);
                         } catch (const std::exception&) {
                             throw InputError("expected an integer for run.seed");
                         }
                     },
                     [](const RunConfig& c) { return std::to_string(c.seed); }};
    str("run.strategy", &RunConfig::strategy);
    boolean("run.reverse_constraint", &RunConfig::reverse_constraint);
    boolean("run.fc_enabled", &RunConfig::fc_enabled);
    num("run.peak_factor", &RunConfig::peak_factor);
    num("run.dt_h", &RunConfig::dt_h);
    return t;
}

}  // namespace

void apply_config_stream(RunConfig& cfg, std::istream& in, const std::string& origin) {
    const auto table = field_table();
    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw InputError(origin + ":" + std::to_string(line_no) + ": expected key=value");
        const std::string key =
            (section.empty() ? "" : section + ".") + trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const auto it = table.find(key);
        if (it == table.end())
            throw InputError(origin + ":" + std::to_string(line_no) + ": unknown key '" +
                             key + "'");
        it->second.set(cfg, value);
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    apply_config_stream(cfg, in, path);
}

void write_effective_config(const RunConfig& cfg, std::ostream& out) {
    const auto table = field_table();
    std::string section;
    for (const auto& [key, field] : table) {
        const auto dot = key.find('.');
        const std::string sec = key.substr(0, dot);
        if (sec != section) {
            section = sec;
            out << "[" << section << "]\n";
        }
        out << key.substr(dot + 1) << " = " << field.get(cfg) << "\n";
    }
}

}  // namespace gridsched
