import dataclasses
import json

import pytest
from hypothesis import given, settings

from conftest import instances
from treeflow.certificate import (
    CHECK_NAMES,
    ClaimedSolution,
    CutCertificate,
    DecompositionError,
    PathDecomposition,
    certify,
    decompose_flow,
    decompose_solution,
    extract_cut_system,
    format_solution,
    parse_solution,
    solution_to_json,
    structural_violations,
    verify_solution,
)
from treeflow.instance import Instance, parse_instance
from treeflow.oracle import GenParams, brute_force_value, random_instance
from treeflow.solver import FlowAssignment, solve


def claimed(inst):
    sol = solve(inst)
    return ClaimedSolution(sol.value2, sol.edge_flows, decompose_solution(sol), certify(sol))


def test_star_certificate(star):
    cert = certify(solve(star))
    assert cert.cuts == {2: (2,), 3: (3,), 4: (4,)}
    assert cert.odd_sets == [((1,), 2)]
    assert (cert.gamma, cert.kappa) == (3, 1)


def test_dominating_certificate(dominating):
    cert = certify(solve(dominating))
    assert cert.cuts == {1: (1,), 3: (2, 3), 4: (4,)}
    assert cert.odd_sets == []
    assert (cert.gamma, cert.kappa) == (6, 0)


def test_single_saturated_edge_certificate():
    cert = certify(solve(parse_instance("p tree 2 2\ne 1 2 4\nt 1\nt 2\n")))
    assert cert.cuts == {1: (1,), 2: (2,)}
    assert (cert.gamma, cert.kappa) == (8, 0)


def test_canonical_cut_system_on_the_star(star):
    sol = solve(star)
    cs = extract_cut_system(sol.forest, sol.assignment)
    assert (cs.gamma, cs.kappa) == (3, 1)
    assert cs.odd_tops == [1]
    assert structural_violations(sol.forest, sol.labels, sol.assignment, cs) == []


def test_zero_capacity_edges_do_not_join_odd_sets():
    # two unit 3-stars whose centres are joined by a 0-capacity edge: each
    # centre is its own odd set, otherwise gamma - kappa would read 6
    inst = Instance.from_edges(
        8,
        [(1, 2, 1), (1, 3, 1), (1, 4, 1), (1, 5, 0), (5, 6, 1), (5, 7, 1), (5, 8, 1)],
        [2, 3, 4, 6, 7, 8],
    )
    assert brute_force_value(inst)[0] == 2
    cert = certify(solve(inst))
    assert (cert.gamma, cert.kappa) == (6, 2)
    assert sorted(vs for vs, _ in cert.odd_sets) == [(1,), (5,)]
    assert verify_solution(inst, claimed(inst)).passed


def test_decomposition_examples(star, dominating):
    assert decompose_solution(solve(star)).entries == {(3, 4): 1}
    assert decompose_solution(solve(dominating)).entries == {(1, 3): 2, (3, 4): 1}
    zero = parse_instance("p tree 3 3\ne 1 2 0\ne 2 3 0\nt 1\nt 2\nt 3\n")
    assert decompose_solution(solve(zero)).entries == {}


def test_decomposition_rejects_unpairable_flow(star):
    sol = solve(star)
    bad = FlowAssignment(sol.assignment.x, sol.assignment.sigma, [0, 1, 1, 1])
    with pytest.raises(DecompositionError):
        decompose_flow(sol.forest, bad)


def test_star_verifies(star):
    report = verify_solution(star, claimed(star))
    assert report.passed and report.summary() == "PASS (6/6 checks)"
    assert [name for name, _, _ in report.checks] == list(CHECK_NAMES)


def test_tampered_root_flow_breaks_decomposition(star):
    sol = claimed(star)
    flows = [(a, b, f + 1) if (a, b) == (1, 2) else (a, b, f) for a, b, f in sol.edge_flows]
    report = verify_solution(star, dataclasses.replace(sol, edge_flows=flows, decomposition=None))
    assert not report.passed
    assert "decomposition" in report.failed()
    assert "feasibility" not in report.failed()


def test_misreported_kappa_fails_recount_and_duality(star):
    sol = claimed(star)
    cert = dataclasses.replace(sol.certificate, kappa=0)
    report = verify_solution(star, sol, cert)
    assert set(report.failed()) == {"odd sets", "duality"}


@pytest.mark.parametrize(
    "cuts,fragment",
    [
        ({2: (2,), 3: (3,)}, "exactly one set per terminal"),
        ({2: (2, 1), 3: (3, 1), 4: (4,)}, "overlaps"),
        ({2: (2, 2), 3: (3,), 4: (4,)}, "repeats"),
        ({2: (1,), 3: (3,), 4: (4,)}, "does not contain"),
        ({2: (2, 1, 3), 3: (3,), 4: (4,)}, "overlaps"),
        ({2: (2, 9), 3: (3,), 4: (4,)}, "out of range"),
    ],
)
def test_invalid_cut_systems_are_reported(star, cuts, fragment):
    sol = claimed(star)
    report = verify_solution(star, sol, CutCertificate(cuts, [], None, 1))
    ok, detail = {name: (ok, d) for name, ok, d in report.checks}["cut-system"]
    assert not ok and fragment in detail


def test_disconnected_or_crowded_sets_are_reported():
    path = parse_instance("p tree 4 2\ne 1 2 1\ne 2 3 1\ne 3 4 1\nt 1\nt 4\n")
    sol = claimed(path)
    for cuts, fragment in [
        ({1: (1, 3), 4: (4,)}, "not connected"),
        ({1: (1, 2, 3, 4), 4: (4,)}, "overlaps"),
    ]:
        report = verify_solution(path, sol, CutCertificate(cuts, [], None, 0))
        detail = {name: d for name, _, d in report.checks}["cut-system"]
        assert fragment in detail


def test_wrong_decomposition_is_caught(dominating):
    sol = claimed(dominating)
    bogus = PathDecomposition({(1, 4): 1, (1, 3): 1, (3, 4): 1})
    report = verify_solution(dominating, dataclasses.replace(sol, decomposition=bogus))
    assert report.failed() == ["decomposition"]


def test_solution_for_another_instance_fails_cleanly(star, dominating):
    report = verify_solution(dominating, claimed(star))
    assert not report.passed
    assert "feasibility" in report.failed()


def test_missing_certificate_fails_the_certificate_checks(star):
    sol = dataclasses.replace(claimed(star), certificate=None)
    assert verify_solution(star, sol).failed() == ["cut-system", "odd sets", "duality"]


def test_text_round_trip(dominating):
    sol = solve(dominating)
    text = format_solution(sol, certify(sol), decompose_solution(sol))
    assert text.splitlines()[0] == "value 6"
    back = parse_solution(text)
    assert back.value2 == 6 and back.edge_flows == sol.edge_flows
    assert back.decomposition.entries == {(1, 3): 2, (3, 4): 1}
    assert verify_solution(dominating, back).passed


def test_json_round_trip(star):
    sol = solve(star)
    doc = json.loads(solution_to_json(sol, certify(sol), decompose_solution(sol)))
    assert set(doc) == {"value", "alpha", "edges", "pairs", "cuts", "odd_sets", "gamma", "kappa"}
    assert (doc["value"], doc["alpha"], doc["kappa"]) == (2, 1, 1)
    assert verify_solution(star, parse_solution(json.dumps(doc))).passed


def test_plain_cut_lines_without_totals_are_accepted(star):
    text = "value 2\nf 1 2 0\nf 1 3 1\nf 1 4 1\nX 2\nX 3\nX 4\nW 1\n"
    sol = parse_solution(text)
    assert sol.certificate.gamma is None and sol.certificate.kappa == 1
    assert verify_solution(star, sol).passed


@pytest.mark.parametrize("text", ["f 1 2 3\n", "value 2\nf 1 2\n", "value x\n", "value 2\nX 1\nX 1 2\n", "value 2\nzz 1\n"])
def test_malformed_solution_text(text):
    with pytest.raises(ValueError):
        parse_solution(text)


@settings(max_examples=150)
@given(instances(max_n=60, max_cap=12))
def test_every_solution_verifies(inst):
    sol = solve(inst)
    cs = extract_cut_system(sol.forest, sol.assignment)
    assert cs.gamma - cs.kappa == sol.value2
    assert structural_violations(sol.forest, sol.labels, sol.assignment, cs) == []
    assert decompose_solution(sol).total() == sol.alpha
    report = verify_solution(inst, claimed(inst))
    assert report.passed, str(report)


def test_medium_random_instances_verify():
    for seed in range(4):
        inst = random_instance(GenParams(3000, terminal_fraction=(0.05, 0.3, 0.7, 1.0)[seed], max_cap=50, seed=seed))
        assert verify_solution(inst, claimed(inst)).passed
