#include "surfot/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "surfot/errors.hpp"

namespace surfot {

// ordered_json keeps insertion order, so identical data always serializes to
// identical bytes.
using json = nlohmann::ordered_json;

namespace {

json complex_list(const std::vector<cplx>& zs) {
    json arr = json::array();
    for (const cplx& z : zs) arr.push_back(json::array({z.real(), z.imag()}));
    return arr;
}

std::vector<cplx> complex_list_from(const json& arr) {
    std::vector<cplx> out;
    out.reserve(arr.size());
    for (const auto& e : arr) out.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return out;
}

json mobius_obj(const DiskMobius& m) {
    json o;
    o["a_re"] = m.a.real();
    o["a_im"] = m.a.imag();
    o["tau_re"] = m.tau.real();
    o["tau_im"] = m.tau.imag();
    return o;
}

DiskMobius mobius_from(const json& o) {
    DiskMobius m;
    m.a = cplx(o.at("a_re").get<double>(), o.at("a_im").get<double>());
    m.tau = cplx(o.at("tau_re").get<double>(), o.at("tau_im").get<double>());
    return m;
}

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError("malformed JSON input");
    return j;
}

json plan_obj(const TransportPlan& plan, const std::vector<std::pair<int, int>>& pairs,
              double Q) {
    json j;
    json pi = json::array();
    for (int i = 0; i < plan.n; ++i) {
        json row = json::array();
        for (int jj = 0; jj < plan.p; ++jj) row.push_back(plan.at(i, jj));
        pi.push_back(std::move(row));
    }
    j["pi"] = std::move(pi);
    j["objective"] = plan.objective;
    json pr = json::array();
    for (auto [i, jj] : pairs) pr.push_back(json::array({i, jj}));
    j["pairs"] = std::move(pr);
    j["duals"] = {{"u", plan.u}, {"v", plan.v}};
    j["Q"] = Q;
    return j;
}

} // namespace

std::string uniformization_to_json(const Uniformization& uni) {
    json j;
    j["midedge"] = complex_list(uni.disk.phi);
    j["mu_h"] = uni.factors.mu_H_vertex;
    j["boundary"] = uni.disk.boundary;
    return j.dump(2) + "\n";
}

std::string measure_to_json(const DiscreteMeasure& m) {
    json j;
    j["indices"] = m.surface_points;
    j["disk"] = complex_list(m.disk_points);
    j["masses"] = m.masses;
    j["fill_distance"] = m.fill_distance;
    return j.dump(2) + "\n";
}

std::string density_to_json(const ConformalDensity& d) {
    json j;
    j["centers"] = complex_list(d.centers);
    json b = json::array();
    for (int i = 0; i < d.b.size(); ++i) b.push_back(d.b(i));
    j["b"] = std::move(b);
    j["p1"] = json::array({d.p1(0), d.p1(1), d.p1(2)});
    j["lambda"] = d.lambda;
    j["floor_epsilon"] = d.floor_epsilon;
    return j.dump(2) + "\n";
}

ConformalDensity density_from_json(const std::string& text) {
    json j = parse(text);
    try {
        ConformalDensity d;
        d.centers = complex_list_from(j.at("centers"));
        auto b = j.at("b").get<std::vector<double>>();
        d.b = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<int>(b.size()));
        auto p1 = j.at("p1").get<std::vector<double>>();
        if (p1.size() != 3) throw ValidationError("density p1 must have 3 entries");
        d.p1 = Eigen::Vector3d(p1[0], p1[1], p1[2]);
        d.lambda = j.at("lambda").get<double>();
        d.floor_epsilon = j.at("floor_epsilon").get<double>();
        if (d.centers.size() != static_cast<size_t>(d.b.size()))
            throw ValidationError("density centers/coefficients length mismatch");
        return d;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad density JSON: ") + e.what());
    }
}

std::string cost_matrix_to_json(const CostMatrix& m, double radius_R, int sigma_steps) {
    json j;
    json d = json::array(), sigma = json::array(), mob = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json drow = json::array(), srow = json::array(), mrow = json::array();
        for (int jj = 0; jj < m.cols; ++jj) {
            size_t idx = static_cast<size_t>(i) * m.cols + jj;
            drow.push_back(m.values[idx]);
            srow.push_back(m.argmin_sigma[idx]);
            mrow.push_back(mobius_obj(m.argmin_mobius[idx]));
        }
        d.push_back(std::move(drow));
        sigma.push_back(std::move(srow));
        mob.push_back(std::move(mrow));
    }
    j["d"] = std::move(d);
    j["sigma"] = std::move(sigma);
    j["mobius"] = std::move(mob);
    j["radius_R"] = radius_R;
    j["sigma_steps"] = sigma_steps;
    j["hyperbolic_area"] = hyperbolic_disk_area(radius_R);
    return j.dump(2) + "\n";
}

CostMatrix cost_matrix_from_json(const std::string& text, double* radius_R, int* sigma_steps) {
    json j = parse(text);
    try {
        CostMatrix m;
        const json& d = j.at("d");
        m.rows = static_cast<int>(d.size());
        m.cols = m.rows > 0 ? static_cast<int>(d.at(0).size()) : 0;
        if (m.rows == 0 || m.cols == 0) throw ValidationError("empty cost matrix");
        const json& sigma = j.at("sigma");
        const json& mob = j.at("mobius");
        for (int i = 0; i < m.rows; ++i) {
            if (static_cast<int>(d.at(i).size()) != m.cols ||
                static_cast<int>(sigma.at(i).size()) != m.cols ||
                static_cast<int>(mob.at(i).size()) != m.cols)
                throw ValidationError("ragged cost matrix");
            for (int jj = 0; jj < m.cols; ++jj) {
                m.values.push_back(d.at(i).at(jj).get<double>());
                m.argmin_sigma.push_back(sigma.at(i).at(jj).get<int>());
                m.argmin_mobius.push_back(mobius_from(mob.at(i).at(jj)));
            }
        }
        if (radius_R) *radius_R = j.at("radius_R").get<double>();
        if (sigma_steps) *sigma_steps = j.at("sigma_steps").get<int>();
        return m;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad cost matrix JSON: ") + e.what());
    }
}

std::string plan_to_json(const TransportPlan& plan,
                         const std::vector<std::pair<int, int>>& pairs, double Q) {
    return plan_obj(plan, pairs, Q).dump(2) + "\n";
}

std::vector<std::pair<int, int>> pairs_from_plan_json(const std::string& text) {
    json j = parse(text);
    try {
        std::vector<std::pair<int, int>> pairs;
        for (const auto& e : j.at("pairs"))
            pairs.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        return pairs;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad plan JSON: ") + e.what());
    }
}

std::string scored_pairs_to_json(const std::vector<ScoredCorrespondence>& pairs) {
    json arr = json::array();
    for (const ScoredCorrespondence& p : pairs) {
        json o;
        o["i"] = p.i;
        o["j"] = p.j;
        o["mobius"] = mobius_obj(p.mobius);
        o["local_cost"] = p.local_cost;
        o["variance_score"] = p.variance_score;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

std::string config_to_json(const PipelineConfig& cfg) {
    json j;
    j["n"] = cfg.samples;
    j["r"] = cfg.radius;
    j["k"] = cfg.quadrature;
    j["l"] = cfg.sigma_steps;
    j["lambda"] = cfg.lambda;
    j["q"] = cfg.mass_fraction;
    j["seed"] = cfg.seed;
    j["equal_mass"] = cfg.equal_mass;
    j["threads"] = cfg.threads;
    j["excised_face"] = cfg.excised_face;
    return j.dump(2) + "\n";
}

std::string compare_to_json(const CompareResult& r, const PipelineConfig& cfg) {
    json j;
    j["labels"] = json::array({r.label_a, r.label_b});
    j["T"] = r.transport_value;
    j["config"] = parse(config_to_json(cfg));
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(r.pairs.size());
    for (const ScoredCorrespondence& p : r.pairs) pairs.emplace_back(p.i, p.j);
    j["plan"] = plan_obj(r.plan, pairs, cfg.mass_fraction);
    j["scored_pairs"] = parse(scored_pairs_to_json(r.pairs));
    j["elapsed_seconds"] = r.elapsed_seconds;
    return j.dump(2) + "\n";
}

std::string table_to_json(const DistanceTable& t, const PipelineConfig& cfg) {
    json j;
    j["labels"] = t.labels;
    const int n = static_cast<int>(t.labels.size());
    json rows = json::array();
    for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int jj = 0; jj < n; ++jj) row.push_back(t.at(i, jj));
        rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
    j["config"] = parse(config_to_json(cfg));
    return j.dump(2) + "\n";
}

std::string table_to_csv(const DistanceTable& t) {
    std::ostringstream out;
    out.precision(17);
    const int n = static_cast<int>(t.labels.size());
    out << "label";
    for (const std::string& l : t.labels) out << "," << l;
    out << "\n";
    for (int i = 0; i < n; ++i) {
        out << t.labels[i];
        for (int jj = 0; jj < n; ++jj) out << "," << t.at(i, jj);
        out << "\n";
    }
    return out.str();
}

DistanceTable table_from_json(const std::string& text) {
    json j = parse(text);
    try {
        DistanceTable t;
        t.labels = j.at("labels").get<std::vector<std::string>>();
        const json& rows = j.at("values");
        if (rows.size() != t.labels.size()) throw ValidationError("table shape mismatch");
        for (const auto& row : rows) {
            if (row.size() != t.labels.size()) throw ValidationError("table shape mismatch");
            for (const auto& e : row) t.values.push_back(e.get<double>());
        }
        return t;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad table JSON: ") + e.what());
    }
}

std::string mds_to_json(const MdsResult& r, const std::vector<std::string>& labels) {
    json j;
    j["labels"] = labels;
    json coords = json::array();
    for (int i = 0; i < r.coords.rows(); ++i) {
        json row = json::array();
        for (int c = 0; c < r.coords.cols(); ++c) row.push_back(r.coords(i, c));
        coords.push_back(std::move(row));
    }
    j["coords"] = std::move(coords);
    j["positive_eigenvalues"] = r.positive_eigenvalues;
    j["padded"] = r.padded;
    return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open file for writing: " + path);
    out << content;
    if (!out) throw ValidationError("failed writing file: " + path);
}

} // namespace surfot
