// Copyright 2026 The qsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsd/io.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace qsd::io {

namespace {

const Json &field(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        throw FormatError(std::string("missing field \"") + key + "\"");
    }
    return j.at(key);
}

double number(const Json &j, const char *what) {
    if (!j.is_number()) {
        throw FormatError(std::string(what) + " must be a number");
    }
    return j.get<double>();
}

long integer(const Json &j, const char *what) {
    if (!j.is_number_integer()) {
        throw FormatError(std::string(what) + " must be an integer");
    }
    return j.get<long>();
}

const Json &array(const Json &j, const char *what) {
    if (!j.is_array()) {
        throw FormatError(std::string(what) + " must be an array");
    }
    return j;
}

Label label_from_json(const Json &j) {
    if (!j.is_string()) {
        throw FormatError("labels must be strings");
    }
    try {
        return parse_label(j.get<std::string>());
    } catch (const std::invalid_argument &e) {
        throw FormatError(e.what());
    }
}

Json labels_to_json(const std::vector<Label> &labels) {
    Json out = Json::array();
    for (const auto &l : labels) {
        out.push_back(to_string(l));
    }
    return out;
}

std::vector<Label> labels_from_json(const Json &j) {
    std::vector<Label> out;
    for (const auto &l : array(j, "label list")) {
        out.push_back(label_from_json(l));
    }
    return out;
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json &j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw FormatError("complex numbers must be [re, im] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const CVector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(to_json(v(i)));
    }
    return out;
}

CVector vector_from_json(const Json &j) {
    array(j, "vector");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    }
    return v;
}

Json to_json(const CMatrix &m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(to_json(m(r, c)));
        }
        out.push_back(std::move(row));
    }
    return out;
}

CMatrix matrix_from_json(const Json &j) {
    array(j, "matrix");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(array(j[0], "matrix row").size());
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json &row = array(j[static_cast<std::size_t>(r)], "matrix row");
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw FormatError("matrix rows must all have the same length");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
        }
    }
    return m;
}

Json to_json(const RMatrix &m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        out.push_back(std::move(row));
    }
    return out;
}

ProblemSpec problem_from_json(const Json &j) {
    try {
        const long nq = integer(field(j, "num_qubits"), "num_qubits");
        if (nq < 1 || nq > 12) {
            throw FormatError("num_qubits must lie in [1, 12]");
        }
        const int n = static_cast<int>(nq);
        std::vector<DensityMatrix> states;
        for (const auto &s : array(field(j, "states"), "states")) {
            const std::string type = field(s, "type").get<std::string>();
            if (type == "pure") {
                CVector amps = vector_from_json(field(s, "amplitudes"));
                const bool normalize = s.value("normalize", false);
                PureState psi = normalize ? PureState::normalized(n, std::move(amps)) : PureState(n, std::move(amps));
                states.push_back(density_of(psi));
            } else if (type == "density") {
                CMatrix m = matrix_from_json(field(s, "matrix"));
                if (m.rows() != (Eigen::Index{1} << n)) {
                    throw FormatError("density matrix dimension must be 2^num_qubits");
                }
                states.emplace_back(std::move(m));
            } else if (type == "coherent") {
                states.push_back(density_of(make_coherent_state(complex_from_json(field(s, "alpha")), n)));
            } else if (type == "benchmark2q") {
                if (n != 2) {
                    throw FormatError("benchmark2q states need num_qubits = 2");
                }
                std::vector<double> a;
                for (const auto &v : array(field(s, "a"), "a")) {
                    a.push_back(number(v, "benchmark coefficient"));
                }
                for (const auto &psi : make_benchmark_two_qubit_states(a)) {
                    states.push_back(density_of(psi));
                }
            } else {
                throw FormatError("unknown state type \"" + type + "\"");
            }
        }
        const double lambda = j.contains("noise_lambda") ? number(j.at("noise_lambda"), "noise_lambda") : 0.0;
        if (!j.contains("priors")) {
            return ProblemSpec::uniform(std::move(states), lambda);
        }
        std::vector<double> priors;
        for (const auto &p : array(j.at("priors"), "priors")) {
            priors.push_back(number(p, "prior"));
        }
        return ProblemSpec(std::move(states), std::move(priors), lambda);
    } catch (const FormatError &) {
        throw;
    } catch (const std::exception &e) {
        throw FormatError(std::string("invalid problem: ") + e.what());
    }
}

Json problem_to_json(const ProblemSpec &spec) {
    Json states = Json::array();
    for (const auto &s : spec.states()) {
        states.push_back({{"type", "density"}, {"matrix", to_json(s.matrix())}});
    }
    return {{"num_qubits", qubits_for_dim(spec.dim())},
            {"states", std::move(states)},
            {"priors", spec.priors()},
            {"noise_lambda", spec.noise_lambda()}};
}

Json povm_to_json(const Povm &povm) {
    Json elements = Json::array();
    for (std::size_t e = 0; e < povm.size(); ++e) {
        elements.push_back({{"label", to_string(povm.labels()[e])}, {"matrix", to_json(povm.elements()[e])}});
    }
    return {{"dim", povm.dim()}, {"elements", std::move(elements)}};
}

Povm povm_from_json(const Json &j) {
    try {
        const long dim = integer(field(j, "dim"), "dim");
        std::vector<CMatrix> elements;
        std::vector<Label> labels;
        for (const auto &e : array(field(j, "elements"), "elements")) {
            labels.push_back(label_from_json(field(e, "label")));
            elements.push_back(matrix_from_json(field(e, "matrix")));
            if (elements.back().rows() != dim || elements.back().cols() != dim) {
                throw FormatError("POVM element shape does not match \"dim\"");
            }
        }
        return Povm(std::move(elements), std::move(labels));
    } catch (const FormatError &) {
        throw;
    } catch (const std::exception &e) {
        throw FormatError(std::string("invalid POVM: ") + e.what());
    }
}

Json dilation_to_json(const DilationResult &dil) {
    return {{"domain_dim", dil.domain_dim},
            {"domain_qubits", dil.domain_qubits},
            {"target_qubits", dil.target_qubits},
            {"total_rank", dil.total_rank},
            {"delta", dil.delta},
            {"outcome_map", labels_to_json(dil.outcome_map)},
            {"element_labels", labels_to_json(dil.element_labels)},
            {"matrix", to_json(dil.isometry)}};
}

DilationResult dilation_from_json(const Json &j) {
    try {
        DilationResult d;
        const long domain = integer(field(j, "domain_dim"), "domain_dim");
        const long target = integer(field(j, "target_qubits"), "target_qubits");
        if (domain < 1 || target < 0 || target > 24) {
            throw FormatError("dimensions out of range");
        }
        d.domain_dim = static_cast<std::size_t>(domain);
        d.domain_qubits = qubits_for_dim(d.domain_dim);
        d.target_qubits = static_cast<int>(target);
        d.delta = number(field(j, "delta"), "delta");
        d.outcome_map = labels_from_json(field(j, "outcome_map"));
        d.isometry = matrix_from_json(field(j, "matrix"));
        const auto rows = Eigen::Index{1} << target;
        if (d.isometry.rows() != rows || d.isometry.cols() != domain) {
            throw FormatError("isometry matrix must be 2^target_qubits x domain_dim");
        }
        if (static_cast<Eigen::Index>(d.outcome_map.size()) != rows) {
            throw FormatError("outcome_map needs one label per target basis state");
        }
        if (j.contains("element_labels")) {
            d.element_labels = labels_from_json(j.at("element_labels"));
        } else {
            // Recover the element labels from the outcome map.
            for (const auto &l : d.outcome_map) {
                if (l.kind != Label::Kind::Residual &&
                    std::find(d.element_labels.begin(), d.element_labels.end(), l) == d.element_labels.end()) {
                    d.element_labels.push_back(l);
                }
            }
        }
        d.total_rank = static_cast<std::size_t>(
            std::count_if(d.outcome_map.begin(), d.outcome_map.end(),
                          [](const Label &l) { return l.kind != Label::Kind::Residual; }));
        return d;
    } catch (const FormatError &) {
        throw;
    } catch (const std::exception &e) {
        throw FormatError(std::string("invalid isometry file: ") + e.what());
    }
}

Json meta(std::uint64_t seed, const Json &tolerances) {
    return {{"tool", kToolName}, {"version", kToolVersion}, {"seed", seed}, {"tolerances", tolerances}};
}

Json solver_tolerances(double tol, long max_iters) { return {{"solver_tol", tol}, {"max_iters", max_iters}}; }

Json read_json_file(const std::string &path) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
        std::ifstream in(path);
        if (!in) {
            throw FormatError("cannot open " + path);
        }
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw FormatError(path + ": " + e.what());
    }
}

void write_text_file(const std::string &path, const std::string &text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

void write_json_file(const std::string &path, const Json &j) { write_text_file(path, j.dump(2) + "\n"); }

}  // namespace qsd::io
