import pytest

from uesroute.cubic import labeled_cubic_matchings, matching_to_graph, mate_is_connected
from uesroute.exploration import ExplorationSequence, walk_visited
from uesroute.search import SearchBudget, SearchFailure, SequenceFamily, find_ues
from uesroute.verify import certify, covers_from, is_universal


def _brute_universal(steps, n):
    """Third path: every dart matching, walked with trace_walk."""
    for mate in labeled_cubic_matchings(n):
        if not mate_is_connected(mate):
            continue
        g = matching_to_graph(mate)
        for d in g.darts():
            if len(walk_visited(g, d, steps)) != n:
                return False
    return True


def test_empty_sequence_is_not_universal_for_two():
    v = is_universal(ExplorationSequence.of(""), 2)
    assert not v
    assert v.counterexample is not None
    assert len(v.counterexample.visited) == 1
    assert "missing" in v.counterexample.describe()


def test_single_step_covers_n2():
    # any step from a 2-vertex cubic graph either crosses or loops back
    assert not is_universal([0], 2)
    for steps in ([1], [1, 1], [2, 0], [1, 2]):
        assert bool(is_universal(steps, 2)) == _brute_universal(steps, 2)


def test_odd_bound_rejected():
    with pytest.raises(ValueError):
        is_universal([], 3)
    with pytest.raises(ValueError):
        is_universal([], 8, "exhaustive")


def test_covers_from_agrees_with_trace():
    g = matching_to_graph([3, 4, 5, 0, 1, 2])
    ok, vis = covers_from(g, (0, 0), [0])
    assert ok and vis == {0, 1}


def test_find_ues_bound_2():
    seq = find_ues(2, seed=0)
    assert seq and len(seq) <= 8
    assert seq.certificate.to_line() == "exhaustive 2"
    assert _brute_universal(seq.steps, 2)


def test_find_ues_is_deterministic():
    a = find_ues(4, "incremental_fix", seed=5)
    b = find_ues(4, "incremental_fix", seed=5)
    assert a.steps == b.steps


def test_bound_4_certified_by_three_paths(t4):
    assert t4.certificate.to_line() == "exhaustive 4"
    v = is_universal(t4, 4)
    assert v and v.exhaustive
    assert _brute_universal(t4.steps, 2) and _brute_universal(t4.steps, 4)


def test_truncated_sequence_fails(t4):
    # the search trims to the shortest covering prefix
    assert not is_universal(t4.steps[:-1], 4)


def test_budget_exhaustion_reports_failure():
    res = find_ues(4, "random_extend", SearchBudget(max_length=3))
    assert isinstance(res, SearchFailure) and not res
    assert res.uncovered > 0


def test_sampled_certificate():
    seq = find_ues(8, "incremental_fix", seed=1, samples=40)
    assert seq.certificate.kind == "sampled"
    assert seq.certificate.bound == 8
    again, verdict = certify(seq, 8, "sampled", samples=seq.certificate.samples, seed=seq.certificate.seed)
    assert verdict and again.certificate == seq.certificate


def test_family_is_cached_and_monotone(family):
    assert family.get(0).steps == ()
    assert family.get(1) is family[1]
    lengths = [len(family.get(k)) for k in range(4)]
    assert lengths == sorted(lengths)
    assert family.rated_at_least(5) == (3, family.get(3))
    assert family.rated_at_least(1)[0] == 0
    assert family.get(2).certificate.exhaustive
    assert family.get(3).certificate.kind == "sampled"


def test_family_is_deterministic():
    a, b = SequenceFamily(3), SequenceFamily(3)
    assert a.get(2).steps == b.get(2).steps
