// Python surface: thin wrappers over the core library. Spin and edge
// configurations cross the boundary as plain lists of ints (+1/-1 spins,
// 0/1 edges); weight vectors as lists of floats.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "isinglo/concentration.hpp"
#include "isinglo/edwards_sokal.hpp"
#include "isinglo/exploration.hpp"
#include "isinglo/families.hpp"
#include "isinglo/gibbs.hpp"
#include "isinglo/graph.hpp"
#include "isinglo/rng.hpp"

namespace py = pybind11;
using namespace isinglo;

namespace {

SpinConfig to_spins(const std::vector<int>& s) {
    SpinConfig sc;
    sc.s.reserve(s.size());
    for (const int x : s) {
        if (x != 1 && x != -1)
            throw std::invalid_argument("spins must be +1 or -1");
        sc.s.push_back(static_cast<std::int8_t>(x));
    }
    return sc;
}

std::vector<int> from_spins(const SpinConfig& sc) {
    return std::vector<int>(sc.s.begin(), sc.s.end());
}

EdgeConfig to_edge_config(const std::vector<int>& e) {
    EdgeConfig ec;
    ec.open.reserve(e.size());
    for (const int x : e) {
        if (x != 0 && x != 1)
            throw std::invalid_argument("edge states must be 0 or 1");
        ec.open.push_back(static_cast<std::uint8_t>(x));
    }
    return ec;
}

std::vector<int> from_edge_config(const EdgeConfig& ec) {
    return std::vector<int>(ec.open.begin(), ec.open.end());
}

FamilyConfig family_config(const std::string& name, std::size_t size,
                           double coupling, double field,
                           const std::string& boundary) {
    FamilyConfig cfg;
    cfg.name = name;
    cfg.size = size;
    cfg.coupling = coupling;
    cfg.field = field;
    cfg.boundary = parse_boundary(boundary);
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Concentration and exploration toolkit for coupled spin systems";
    m.attr("__version__") = "0.1.0";
    m.attr("DEFAULT_ENUMERATION_CAP") = kDefaultEnumerationCap;

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("stream", &Rng::stream, py::arg("index"))
        .def("uniform01", &Rng::uniform01)
        .def("bernoulli", &Rng::bernoulli, py::arg("p"))
        .def("poisson", &Rng::poisson, py::arg("rate"))
        .def("below", &Rng::below, py::arg("n"));

    py::class_<CouplingGraph>(m, "CouplingGraph")
        .def_property_readonly("vertex_count", &CouplingGraph::vertex_count)
        .def_property_readonly("region_size", &CouplingGraph::region_size)
        .def_property_readonly("region_names",
                               [](const CouplingGraph& g) {
                                   std::vector<std::string> names;
                                   for (const VertexId v : g.region())
                                       names.push_back(g.name(v));
                                   return names;
                               })
        .def("name", &CouplingGraph::name, py::arg("vertex"))
        .def("in_region", &CouplingGraph::in_region, py::arg("vertex"))
        .def("field_at", &CouplingGraph::field_at, py::arg("vertex"))
        .def("boundary_spin", &CouplingGraph::boundary_spin, py::arg("vertex"));

    m.def("parse_instance", &parse_instance_text, py::arg("text"));
    m.def("load_instance", &load_instance, py::arg("path"));
    m.def("instance_to_text", &instance_to_text, py::arg("graph"));
    m.def("absorb_field", &absorb_field, py::arg("graph"));
    m.def("interaction_budget", &interaction_budget, py::arg("graph"));
    m.def(
        "make_family",
        [](const std::string& name, std::size_t size, double coupling,
           double field, const std::string& boundary) {
            return make_family(
                family_config(name, size, coupling, field, boundary));
        },
        py::arg("name"), py::arg("size"), py::arg("J") = 1.0,
        py::arg("h") = 0.0, py::arg("boundary") = "free");

    m.def(
        "hamiltonian",
        [](const CouplingGraph& g, const std::vector<int>& spins) {
            return hamiltonian(g, to_spins(spins));
        },
        py::arg("graph"), py::arg("spins"));

    py::class_<ExactDistribution>(m, "ExactDistribution")
        .def_readonly("n", &ExactDistribution::n)
        .def_readonly("prob", &ExactDistribution::prob)
        .def_readonly("energy", &ExactDistribution::energy)
        .def_readonly("log_partition", &ExactDistribution::log_partition)
        .def("spins_of", [](const ExactDistribution& d, std::uint64_t mask) {
            return from_spins(d.config(mask));
        });

    m.def("enumerate_gibbs", &enumerate_gibbs, py::arg("graph"),
          py::arg("cap") = kDefaultEnumerationCap);
    m.def("total_variation", &total_variation, py::arg("p"), py::arg("q"));
    m.def(
        "glauber_sample",
        [](const CouplingGraph& g, std::uint64_t sweeps, Rng& rng) {
            return from_spins(glauber_sample(g, sweeps, rng));
        },
        py::arg("graph"), py::arg("sweeps"), py::arg("rng"));

    m.def("open_probability", &open_probability, py::arg("coupling"));
    m.def(
        "fksw_weight",
        [](const CouplingGraph& g, const std::vector<int>& spins,
           const std::vector<int>& open) {
            return fksw_weight(g, to_spins(spins), to_edge_config(open));
        },
        py::arg("graph"), py::arg("spins"), py::arg("open"));

    py::class_<JointEnumeration>(m, "JointEnumeration")
        .def_readonly("n", &JointEnumeration::n)
        .def_readonly("edge_count", &JointEnumeration::edge_count)
        .def_readonly("joint", &JointEnumeration::joint)
        .def_readonly("spin_marginal", &JointEnumeration::spin_marginal)
        .def_readonly("edge_marginal", &JointEnumeration::edge_marginal)
        .def_readonly("weight_sum", &JointEnumeration::weight_sum);
    m.def("enumerate_fksw", &enumerate_fksw, py::arg("graph"),
          py::arg("cap_bits") = 24);

    py::class_<ClusterDecomposition>(m, "ClusterDecomposition")
        .def_readonly("clusters", &ClusterDecomposition::clusters)
        .def_readonly("inner_count", &ClusterDecomposition::inner_count)
        .def_readonly("boundary_count", &ClusterDecomposition::boundary_count)
        .def_readonly("representatives", &ClusterDecomposition::representatives)
        .def_readonly("relative_sign", &ClusterDecomposition::relative_sign);
    m.def(
        "cluster_decompose",
        [](const CouplingGraph& g, const std::vector<int>& open) {
            return cluster_decompose(g, to_edge_config(open));
        },
        py::arg("graph"), py::arg("open"));
    m.def("boundary_cluster_spins", &boundary_cluster_spins, py::arg("graph"),
          py::arg("decomposition"));
    m.def(
        "reduce_weights",
        [](const CouplingGraph& g, const ClusterDecomposition& d,
           const std::vector<double>& v) {
            const ReducedSeries rs = reduce_weights(g, d, v);
            return py::make_tuple(rs.weights, rs.offset);
        },
        py::arg("graph"), py::arg("decomposition"), py::arg("weights"));

    py::class_<JointSampler>(m, "JointSampler")
        .def(py::init([](const CouplingGraph& g, std::uint64_t seed,
                         std::size_t cap) {
                 return JointSampler(g, Rng(seed), cap);
             }),
             py::arg("graph"), py::arg("seed"),
             py::arg("cap") = kDefaultEnumerationCap, py::keep_alive<1, 2>())
        .def("next",
             [](JointSampler& s) {
                 const auto [sc, ec] = s.next();
                 return py::make_tuple(from_spins(sc), from_edge_config(ec));
             })
        .def("next_spins",
             [](JointSampler& s) { return from_spins(s.next_spins()); });

    m.def("erdos_bound", &erdos_bound, py::arg("n"));

    py::class_<ConcentrationReport>(m, "ConcentrationReport")
        .def_readonly("x_star", &ConcentrationReport::x_star)
        .def_readonly("value", &ConcentrationReport::value)
        .def_readonly("exact", &ConcentrationReport::exact)
        .def_readonly("ci_halfwidth", &ConcentrationReport::ci_halfwidth)
        .def_readonly("samples", &ConcentrationReport::samples)
        .def_readonly("hits", &ConcentrationReport::hits);

    m.def(
        "concentration_exact",
        [](const CouplingGraph& g, const std::vector<double>& v, double x) {
            return concentration_exact(g, WeightVector::checked(v), x);
        },
        py::arg("graph"), py::arg("weights"), py::arg("x"));
    m.def(
        "concentration_sup_x",
        [](const CouplingGraph& g, const std::vector<double>& v) {
            return concentration_sup_x(g, WeightVector::checked(v));
        },
        py::arg("graph"), py::arg("weights"));
    m.def(
        "concentration_mc",
        [](const CouplingGraph& g, const std::vector<double>& v, double x,
           std::uint64_t samples, Rng& rng) {
            return concentration_mc(g, WeightVector::checked(v), x, samples,
                                    rng);
        },
        py::arg("graph"), py::arg("weights"), py::arg("x"),
        py::arg("samples"), py::arg("rng"));
    m.def(
        "mc_window_center",
        [](const CouplingGraph& g, const std::vector<double>& v,
           std::uint64_t pilot_samples, Rng& rng) {
            return mc_window_center(g, WeightVector::checked(v), pilot_samples,
                                    rng);
        },
        py::arg("graph"), py::arg("weights"), py::arg("pilot_samples"),
        py::arg("rng"));
    m.def("symmetrized_distribution", &symmetrized_distribution,
          py::arg("graph"), py::arg("cap") = 13);

    py::class_<CertificateResult>(m, "CertificateResult")
        .def_readonly("bound", &CertificateResult::bound)
        .def_readonly("rademacher", &CertificateResult::rademacher)
        .def_readonly("passes", &CertificateResult::passes)
        .def_readonly("exhaustive", &CertificateResult::exhaustive)
        .def_readonly("tau_checked", &CertificateResult::tau_checked)
        .def_readonly("best_tau", &CertificateResult::best_tau);
    m.def(
        "lower_bound_certificate",
        [](const CouplingGraph& g) { return lower_bound_certificate(g); },
        py::arg("graph"));

    py::class_<ScalingRow>(m, "ScalingRow")
        .def_readonly("n", &ScalingRow::n)
        .def_readonly("samples", &ScalingRow::samples)
        .def_readonly("x_star", &ScalingRow::x_star)
        .def_readonly("q_hat", &ScalingRow::q_hat)
        .def_readonly("ci", &ScalingRow::ci)
        .def_readonly("q_hat_sqrt_n", &ScalingRow::q_hat_sqrt_n);
    m.def(
        "scaling_experiment",
        [](const std::string& family, const std::vector<std::uint64_t>& sizes,
           std::uint64_t samples, Rng& rng, double coupling, double field,
           const std::string& boundary) {
            return scaling_experiment(
                family_config(family, 1, coupling, field, boundary), sizes,
                samples, rng);
        },
        py::arg("family"), py::arg("sizes"), py::arg("samples"),
        py::arg("rng"), py::arg("J") = 1.0, py::arg("h") = 0.0,
        py::arg("boundary") = "free");

    py::class_<PercolationInstance::Edge>(m, "PercolationEdge")
        .def_readonly("u", &PercolationInstance::Edge::u)
        .def_readonly("v", &PercolationInstance::Edge::v)
        .def_readonly("p", &PercolationInstance::Edge::p);
    py::class_<PercolationInstance>(m, "PercolationInstance")
        .def_readonly("vertex_count", &PercolationInstance::vertex_count)
        .def_readonly("labels", &PercolationInstance::labels)
        .def_readonly("target", &PercolationInstance::target)
        .def_readonly("edges", &PercolationInstance::edges);
    m.def(
        "make_percolation",
        [](std::uint32_t vertex_count, std::vector<std::uint32_t> target,
           const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>&
               edges,
           std::vector<std::string> labels) {
            std::vector<PercolationInstance::Edge> es;
            es.reserve(edges.size());
            for (const auto& [u, v, p] : edges) es.push_back({u, v, p});
            return make_percolation(vertex_count, std::move(target),
                                    std::move(es), std::move(labels));
        },
        py::arg("vertex_count"), py::arg("target"), py::arg("edges"),
        py::arg("labels") = std::vector<std::string>{});
    m.def("percolation_budget", &percolation_budget, py::arg("instance"));
    m.def(
        "conditioned_instance",
        [](const CouplingGraph& g, const std::vector<int>& spins) {
            return conditioned_instance(g, to_spins(spins));
        },
        py::arg("graph"), py::arg("spins"));

    py::class_<ExplorationStep>(m, "ExplorationStep")
        .def_readonly("vertex", &ExplorationStep::vertex)
        .def_readonly("revealed", &ExplorationStep::revealed);
    py::class_<ExplorationTrace>(m, "ExplorationTrace")
        .def_readonly("steps", &ExplorationTrace::steps)
        .def_readonly("turns", &ExplorationTrace::turns)
        .def_readonly("isolated_count", &ExplorationTrace::isolated_count);
    m.def("search_isolated", &search_isolated, py::arg("instance"),
          py::arg("rng"));
    m.def(
        "search_isolated_on",
        [](const PercolationInstance& inst, const std::vector<int>& open) {
            std::vector<std::uint8_t> o(open.begin(), open.end());
            return search_isolated_on(inst, o);
        },
        py::arg("instance"), py::arg("open"));
    m.def(
        "sample_edge_config",
        [](const PercolationInstance& inst, Rng& rng) {
            const std::vector<std::uint8_t> o = sample_edge_config(inst, rng);
            return std::vector<int>(o.begin(), o.end());
        },
        py::arg("instance"), py::arg("rng"));
    m.def(
        "isolated_count_direct",
        [](const PercolationInstance& inst, const std::vector<int>& open) {
            std::vector<std::uint8_t> o(open.begin(), open.end());
            return isolated_count_direct(inst, o);
        },
        py::arg("instance"), py::arg("open"));

    py::class_<DominatingOutcome>(m, "DominatingOutcome")
        .def_readonly("turns", &DominatingOutcome::turns)
        .def_readonly("zero_steps", &DominatingOutcome::zero_steps);
    m.def("dominating_process", &dominating_process, py::arg("m"),
          py::arg("rate"), py::arg("rng"));

    py::class_<DominationRow>(m, "DominationRow")
        .def_readonly("k", &DominationRow::k)
        .def_readonly("p_search", &DominationRow::p_search)
        .def_readonly("p_poisson", &DominationRow::p_poisson);
    py::class_<DominationReport>(m, "DominationReport")
        .def_readonly("exact", &DominationReport::exact)
        .def_readonly("rate", &DominationReport::rate)
        .def_readonly("target_size", &DominationReport::target_size)
        .def_readonly("trials", &DominationReport::trials)
        .def_readonly("band", &DominationReport::band)
        .def_readonly("rows", &DominationReport::rows)
        .def_readonly("worst_margin", &DominationReport::worst_margin)
        .def_readonly("pass_", &DominationReport::pass);
    m.def("domination_check", &domination_check, py::arg("instance"),
          py::arg("trials"), py::arg("rng"));

    py::class_<IsolatedFractionRow>(m, "IsolatedFractionRow")
        .def_readonly("c", &IsolatedFractionRow::c)
        .def_readonly("threshold", &IsolatedFractionRow::threshold)
        .def_readonly("frequency", &IsolatedFractionRow::frequency);
    py::class_<IsolatedFractionReport>(m, "IsolatedFractionReport")
        .def_readonly("n", &IsolatedFractionReport::n)
        .def_readonly("trials", &IsolatedFractionReport::trials)
        .def_readonly("mean_fraction", &IsolatedFractionReport::mean_fraction)
        .def_readonly("rows", &IsolatedFractionReport::rows);
    m.def(
        "isolated_fraction_experiment",
        [](const CouplingGraph& g, std::uint64_t trials, Rng& rng) {
            return isolated_fraction_experiment(g, trials, rng);
        },
        py::arg("graph"), py::arg("trials"), py::arg("rng"));
}
