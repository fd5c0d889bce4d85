from __future__ import annotations

import pytest

from tracelens import queries
from tracelens.engine import EnumLimits
from tracelens.errors import (
    FlowExists,
    InvalidParams,
    NoFlow,
    NotASink,
    NotASource,
    NotReachable,
    UnknownApi,
    UnknownId,
)
from tracelens.factbase import ACTUAL, PLAUSIBLE, ApiRecord, EdgeRecord, NodeRecord, build_factbase


def _fb(edge_pairs, sources, sinks, lib_flows=None, apis=(), plausible=(), n=None):
    n = n or max(
        [max(s, d) for s, d in edge_pairs] + list(sources) + list(sinks), default=1
    )
    return build_factbase(
        nodes=[NodeRecord(i, f"n{i}", "f.java", i, 1) for i in range(1, n + 1)],
        edges=[
            EdgeRecord(i + 1, s, d, PLAUSIBLE if i + 1 in plausible else ACTUAL)
            for i, (s, d) in enumerate(edge_pairs)
        ],
        sources=set(sources),
        sinks=set(sinks),
        lib_flows=lib_flows or {},
        apis=[ApiRecord(i, f"api{i}()") for i in apis],
    )


class TestWhyFlow:
    def test_surfaces_passthrough_api(self, g1_fb):
        ans = queries.why_flow(g1_fb, 1, 4)
        assert [p.nodes for p in ans.paths.paths] == [(1, 2, 3, 4)]
        assert ans.apis_on_paths == ((1, "encrypt(SSN)"),)

    def test_source_equals_sink(self):
        fb = _fb([], sources={1}, sinks={1}, n=1)
        ans = queries.why_flow(fb, 1, 1)
        assert [p.nodes for p in ans.paths.paths] == [(1,)]
        assert ans.apis_on_paths == ()

    def test_no_flow_redirects_to_whynot(self, g2_fb):
        with pytest.raises(NoFlow):
            queries.why_flow(g2_fb, 1, 4)

    def test_not_a_source(self, g1_fb):
        with pytest.raises(NotASource):
            queries.why_flow(g1_fb, 2, 4)

    def test_not_a_sink(self, g1_fb):
        with pytest.raises(NotASink):
            queries.why_flow(g1_fb, 1, 3)

    def test_unknown_node_id(self, g1_fb):
        with pytest.raises(UnknownId):
            queries.why_flow(g1_fb, 9999, 4)

    def test_api_order_first_appearance_then_signature(self):
        # Two paths: the shorter one (via node 2) carries api2, the longer
        # one api1; first appearance puts api2 first.
        fb = _fb(
            [(1, 2), (2, 4), (1, 3), (3, 4)],
            sources={1},
            sinks={4},
            lib_flows={2: 2, 4: 1},
            apis=(1, 2),
        )
        ans = queries.why_flow(fb, 1, 4)
        assert [a for a, _ in ans.apis_on_paths] == [2, 1]


class TestWhyNotFlow:
    def test_names_blocking_api(self, g2_fb):
        ans = queries.why_not_flow(g2_fb, 1, 4)
        assert [p.nodes for p in ans.plausible_paths.paths] == [(1, 2, 3, 4)]
        assert [p.edges for p in ans.plausible_paths.paths] == [(1, 2, 3)]
        assert ans.blocking_apis == ((1, "format(SSN)"),)

    def test_structural_absence_gives_empty_answer(self):
        fb = _fb([(1, 2)], sources={1}, sinks={3}, n=3)
        ans = queries.why_not_flow(fb, 1, 3)
        assert ans.plausible_paths.paths == ()
        assert ans.blocking_apis == ()

    def test_flow_exists_redirects_to_whyflow(self, g1_fb):
        with pytest.raises(FlowExists):
            queries.why_not_flow(g1_fb, 1, 4)

    def test_unmarked_plausible_edges_cannot_explain(self):
        # A plausible edge with no mark has no assumption to toggle.
        fb = _fb([(1, 2), (2, 3)], sources={1}, sinks={3}, plausible={2})
        ans = queries.why_not_flow(fb, 1, 3)
        assert ans.plausible_paths.paths == ()
        assert ans.blocking_apis == ()


class TestAffectedSinks:
    def test_killed_and_surviving_split(self, g1_fb):
        ans = queries.affected_sinks(g1_fb, 1, 1)
        assert ans.killed == (4,)
        assert ans.surviving == (5,)
        assert ans.api_unused is False

    def test_unused_api_warns_and_kills_nothing(self):
        fb = _fb(
            [(1, 2), (2, 3)],
            sources={1},
            sinks={3},
            lib_flows={},
            apis=(1,),
        )
        ans = queries.affected_sinks(fb, 1, 1)
        assert ans.killed == ()
        assert ans.surviving == (3,)
        assert ans.api_unused is True

    def test_api_marking_only_plausible_edges_is_unused(self, g2_fb):
        ans = queries.affected_sinks(g2_fb, 1, 1)
        assert ans.api_unused is True
        assert ans.killed == ()

    def test_unknown_api(self, g1_fb):
        with pytest.raises(UnknownApi):
            queries.affected_sinks(g1_fb, 1, 99)


class TestDivergence:
    def test_split_point_on_shared_prefix(self, g1_fb):
        ans = queries.divergent_sinks(g1_fb, 1, 4, 5)
        assert ans.points == (2,)
        assert ans.mode == "divergent_sinks"

    def test_source_is_the_split_when_nothing_is_shared(self):
        fb = _fb([(1, 2), (1, 3)], sources={1}, sinks={2, 3})
        ans = queries.divergent_sinks(fb, 1, 2, 3)
        assert ans.points == (1,)

    def test_unreachable_sink_names_the_offender(self):
        fb = _fb([(1, 2)], sources={1}, sinks={2, 3}, n=3)
        with pytest.raises(NotReachable) as err:
            queries.divergent_sinks(fb, 1, 2, 3)
        assert err.value.details["sink"] == 3

    def test_equal_sinks_rejected(self, g1_fb):
        with pytest.raises(InvalidParams):
            queries.divergent_sinks(g1_fb, 1, 4, 4)

    def test_merge_point_of_two_sources(self, g4_fb):
        ans = queries.divergent_sources(g4_fb, 1, 2, 4)
        assert ans.points == (3,)
        assert ans.mode == "divergent_sources"

    def test_sink_is_the_merge_when_nothing_is_shared(self):
        fb = _fb([(1, 3), (2, 3)], sources={1, 2}, sinks={3})
        ans = queries.divergent_sources(fb, 1, 2, 3)
        assert ans.points == (3,)

    def test_unreachable_source_names_the_offender(self):
        fb = _fb([(1, 3)], sources={1, 2}, sinks={3})
        with pytest.raises(NotReachable) as err:
            queries.divergent_sources(fb, 1, 2, 3)
        assert err.value.details["source"] == 2

    def test_cycle_collapses_into_one_divergence_point_set(self):
        # 1 -> {2 <-> 3} -> sinks 4 and 5: the whole cycle is the last
        # common component.
        fb = _fb(
            [(1, 2), (2, 3), (3, 2), (2, 4), (3, 5)],
            sources={1},
            sinks={4, 5},
        )
        ans = queries.divergent_sinks(fb, 1, 4, 5)
        assert ans.points == (2, 3)


class TestGlobalImpact:
    def test_ranking_orders_by_path_containment(self, g3_fb):
        ans = queries.global_impact(g3_fb, 1, 6)
        assert ans.ranking == (
            (1, "extractParts(standardizedSSN)", 2),
            (2, "standardize(SSN)", 1),
        )
        assert len(ans.paths.paths) == 3

    def test_single_path_single_api(self, g1_fb):
        ans = queries.global_impact(g1_fb, 1, 4)
        assert ans.ranking == ((1, "encrypt(SSN)", 1),)

    def test_repeated_api_on_one_path_counts_once(self):
        fb = _fb(
            [(1, 2), (2, 3), (3, 4)],
            sources={1},
            sinks={4},
            lib_flows={1: 1, 3: 1},
            apis=(1,),
        )
        ans = queries.global_impact(fb, 1, 4)
        assert ans.ranking == ((1, "api1()", 1),)

    def test_tie_breaks_by_signature(self):
        fb = _fb(
            [(1, 2), (2, 4), (1, 3), (3, 4)],
            sources={1},
            sinks={4},
            lib_flows={1: 2, 3: 1},
            apis=(1, 2),
        )
        ans = queries.global_impact(fb, 1, 4)
        assert [a for a, _, _ in ans.ranking] == [1, 2]  # api1() < api2()

    def test_no_flow(self, g2_fb):
        with pytest.raises(NoFlow):
            queries.global_impact(g2_fb, 1, 4)


class TestBranchPoints:
    def test_split_node_reported(self, g1_fb):
        assert queries.branch_points(g1_fb).points == (2,)

    def test_linear_chain_has_none(self):
        fb = _fb([(1, 2), (2, 3)], sources=set(), sinks=set())
        assert queries.branch_points(fb).points == ()

    def test_parallel_edges_to_one_target_count(self):
        fb = _fb([(1, 2), (1, 2)], sources=set(), sinks=set())
        assert queries.branch_points(fb).points == (1,)

    def test_inactive_plausible_edges_do_not_count(self, g2_fb):
        # Node 2's only outgoing edge is plausible and inert.
        assert queries.branch_points(g2_fb).points == ()


class TestCounts:
    def test_count_paths_disconnected(self):
        fb = _fb([(1, 2)], sources={1}, sinks={3}, n=3)
        ans = queries.count_paths(fb, 1, 3)
        assert (ans.count, ans.truncated) == (0, False)

    def test_count_paths_diamond(self):
        fb = _fb([(1, 2), (1, 3), (2, 4), (3, 4)], sources={1}, sinks={4})
        assert queries.count_paths(fb, 1, 4).count == 2

    def test_count_paths_matches_construction(self, g3_fb):
        assert queries.count_paths(g3_fb, 1, 6).count == 3

    def test_count_paths_truncation_flag(self, g3_fb):
        ans = queries.count_paths(g3_fb, 1, 6, EnumLimits(max_paths=2))
        assert (ans.count, ans.truncated) == (2, True)

    def test_passthrough_count_on_fixture(self, g1_fb):
        assert queries.count_passthrough_apis(g1_fb, 1, 4).count == 1

    def test_passthrough_count_without_marks(self, g4_fb):
        assert queries.count_passthrough_apis(g4_fb, 1, 4).count == 0

    def test_passthrough_exact_on_cycles_without_enumeration(self):
        # Cycle between source and sink; closure-based counting stays exact.
        fb = _fb(
            [(1, 2), (2, 3), (3, 2), (2, 4)],
            sources={1},
            sinks={4},
            lib_flows={2: 1, 3: 1},
            apis=(1,),
        )
        assert queries.count_passthrough_apis(fb, 1, 4).count == 2


class TestRunQueryDispatch:
    def test_unknown_type(self, g1_fb):
        with pytest.raises(InvalidParams):
            queries.run_query(g1_fb, "nonsense", {})

    def test_missing_param(self, g1_fb):
        with pytest.raises(InvalidParams) as err:
            queries.run_query(g1_fb, "whyflow", {"source": 1})
        assert "sink" in err.value.message

    def test_extra_param(self, g1_fb):
        with pytest.raises(InvalidParams):
            queries.run_query(g1_fb, "branch-points", {"source": 1})

    def test_non_integer_param(self, g1_fb):
        with pytest.raises(InvalidParams):
            queries.run_query(g1_fb, "whyflow", {"source": "1", "sink": 4})
        with pytest.raises(InvalidParams):
            queries.run_query(g1_fb, "whyflow", {"source": True, "sink": 4})

    def test_dispatches_every_type(self, g1_fb, g4_fb):
        assert queries.run_query(g1_fb, "whyflow", {"source": 1, "sink": 4})
        assert queries.run_query(
            g1_fb, "affected-sinks", {"source": 1, "api": 1}
        ).killed == (4,)
        assert queries.run_query(
            g1_fb, "divergent-sinks", {"source": 1, "sinkA": 4, "sinkB": 5}
        ).points == (2,)
        assert queries.run_query(
            g4_fb, "divergent-sources", {"sourceA": 1, "sourceB": 2, "sink": 4}
        ).points == (3,)
        assert queries.run_query(g1_fb, "global-impact", {"source": 1, "sink": 4})
        assert queries.run_query(g1_fb, "branch-points", {}).points == (2,)
        assert queries.run_query(g1_fb, "count-paths", {"source": 1, "sink": 4}).count == 1
        assert queries.run_query(g1_fb, "count-apis", {"source": 1, "sink": 4}).count == 1
