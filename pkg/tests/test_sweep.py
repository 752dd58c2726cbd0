"""Grid sweeps, ratio projection, isoquants, hardness, kappa, and CSV output."""

import csv
import math
from fractions import Fraction

import numpy as np
import pytest

import kpphase as kp


def tiny_grid(**overrides) -> kp.ProbabilityGrid:
    defaults = dict(
        model=kp.SamplingModel(n=6, master_seed=31),
        step=Fraction(1, 2),
        trials_per_cell=20,
    )
    defaults.update(overrides)
    return kp.run_grid(kp.GridConfig(**defaults))


def synthetic_grid(solvable_row, trials, nodes_row=None):
    """Single-c-row grid with fabricated counts over the 1/4 axis."""
    axis = kp.grid_axis(Fraction(1, 4))
    cells = len(axis)
    assert len(solvable_row) == cells
    solvable = np.array([solvable_row], dtype=np.int64)
    nodes = np.ones((1, cells, trials), dtype=np.int32)
    if nodes_row is not None:
        for i, val in enumerate(nodes_row):
            nodes[0, i, :] = val
    config = kp.GridConfig(
        model=kp.SamplingModel(n=4, master_seed=0),
        step=Fraction(1, 4),
        trials_per_cell=trials,
    )
    return kp.ProbabilityGrid(
        config=config,
        c_values=(Fraction(1, 2),),
        p_values=axis,
        solvable=solvable,
        unknown=np.zeros((1, cells), dtype=np.int64),
        nodes=nodes,
        time_ns=np.zeros((1, cells), dtype=np.int64),
    )


# ---------------------------------------------------------------- axis and config


def test_grid_axis_frozen():
    assert kp.grid_axis(Fraction(1, 4)) == (
        Fraction(0),
        Fraction(1, 4),
        Fraction(1, 2),
        Fraction(3, 4),
        Fraction(1),
    )
    assert len(kp.grid_axis(Fraction(1, 25))) == 26


@pytest.mark.parametrize("step", [Fraction(3, 10), Fraction(0), Fraction(2)])
def test_grid_axis_rejects_non_divisors(step):
    with pytest.raises(ValueError):
        kp.grid_axis(step)


def test_grid_config_validation():
    model = kp.SamplingModel(n=4, master_seed=0)
    with pytest.raises(ValueError):
        kp.GridConfig(model=model, step=Fraction(1, 4), trials_per_cell=0)
    with pytest.raises(ValueError):
        kp.GridConfig(model=model, step=Fraction(3, 10))
    with pytest.raises(ValueError):
        kp.GridConfig(model=model, step=Fraction(1, 4), node_budget=0)


# ---------------------------------------------------------------- run_grid


def test_grid_counts_match_per_instance_reruns():
    grid = tiny_grid()
    axis = kp.grid_axis(Fraction(1, 2))
    model = grid.config.model
    for ci, c in enumerate(axis):
        for pi, p in enumerate(axis):
            cp = kp.ConstraintPair(c, p)
            wins = sum(
                kp.branch_and_bound_decide(kp.sample_instance(model, t), cp).solvable
                for t in range(20)
            )
            assert grid.solvable[ci, pi] == wins
    assert not grid.unknown.any()
    assert grid.nodes.shape == (3, 3, 20)


def test_grid_probability_and_node_stats():
    grid = tiny_grid()
    assert np.allclose(grid.probability, grid.solvable / 20)
    assert grid.probability[2, 0] == 1.0  # c = 1, p = 0 always solvable
    assert grid.probability[0, 2] == 0.0  # c = 0, p = 1 never solvable
    assert np.all(grid.nodes_median <= grid.nodes_max)
    assert np.all(grid.nodes >= 1)


def test_grid_thread_count_invariance():
    one = tiny_grid()
    two = kp.run_grid(
        kp.GridConfig(
            model=kp.SamplingModel(n=6, master_seed=31),
            step=Fraction(1, 2),
            trials_per_cell=20,
        ),
        threads=2,
    )
    assert np.array_equal(one.solvable, two.solvable)
    assert np.array_equal(one.unknown, two.unknown)
    assert np.array_equal(one.nodes, two.nodes)


def test_grid_bounds_indicators_match_prefix_scans():
    grid = tiny_grid(include_bounds=True)
    model = grid.config.model
    axis = kp.grid_axis(Fraction(1, 2))
    for ci, c in enumerate(axis):
        for pi, p in enumerate(axis):
            cp = kp.ConstraintPair(c, p)
            el = sum(
                kp.prefix_feasible(kp.sample_instance(model, t), range(6), cp).profit_met
                for t in range(20)
            )
            eL = sum(
                kp.weight_greedy_feasible(kp.sample_instance(model, t), cp).profit_met
                for t in range(20)
            )
            assert grid.el[ci, pi] == el
            assert grid.eL[ci, pi] == eL
    assert grid.p_El is not None and grid.p_EL is not None


def test_grid_without_bounds_has_no_event_arrays():
    grid = tiny_grid()
    assert grid.el is None and grid.p_El is None


def test_grid_budget_produces_unknowns_and_nan_probability():
    grid = tiny_grid(
        model=kp.SamplingModel(n=24, master_seed=37),
        trials_per_cell=4,
        node_budget=2,
    )
    assert grid.unknown.sum() > 0
    cell = np.argwhere(grid.unknown == 4)
    if cell.size:  # all trials unknown leaves the estimate undefined
        ci, pi = cell[0]
        assert math.isnan(grid.probability[ci, pi])


# ---------------------------------------------------------------- ratio projection


def test_ratio_projection_skips_zero_cells_and_sorts():
    grid = tiny_grid()
    proj = kp.ratio_projection(grid)
    # 3x3 grid: five cells touch c = 0 or p = 0
    assert proj.skipped == 5
    assert len(proj.points) == 4
    ratios = [pt.log_ratio for pt in proj.points]
    assert ratios == sorted(ratios)
    for pt in proj.points:
        assert pt.log_ratio == pytest.approx(math.log(float(pt.c / pt.p)))


def test_ratio_level_crossing_picks_last_point_below_level():
    mk = lambda lr, prob: kp.RatioPoint(
        log_ratio=lr, probability=prob, median_nodes=1.0, c=Fraction(1), p=Fraction(1)
    )
    proj = kp.RatioProjection(
        points=(mk(-2.0, 0.1), mk(-1.0, 0.4), mk(0.5, 0.7), mk(1.0, 0.9)),
        skipped=0,
    )
    assert kp.ratio_level_crossing(proj, 0.5) == -1.0
    # every point at or above the level
    assert kp.ratio_level_crossing(proj, 0.05) == -math.inf


# ---------------------------------------------------------------- isoquants


def test_isoquant_interpolates_the_crossing():
    grid = synthetic_grid([10, 10, 8, 2, 0], trials=10)
    iso = kp.extract_isoquant(grid, 0.5)
    assert iso.level == 0.5
    # crossing between p = 1/2 (0.8) and p = 3/4 (0.2): half the step past 1/2
    assert iso.points == ((Fraction(1, 2), pytest.approx(0.625)),)


def test_isoquant_skips_nan_pairs():
    grid = synthetic_grid([10, 10, 8, 2, 0], trials=10)
    grid.unknown[0, 1] = 10  # probability at p = 1/4 becomes nan
    iso = kp.extract_isoquant(grid, 0.5)
    assert iso.points == ((Fraction(1, 2), pytest.approx(0.625)),)


def test_isoquant_omits_columns_without_a_crossing():
    grid = synthetic_grid([10, 10, 9, 8, 7], trials=10)
    assert kp.extract_isoquant(grid, 0.5).points == ()


def test_isoquant_level_must_be_interior():
    grid = synthetic_grid([10, 10, 8, 2, 0], trials=10)
    with pytest.raises(ValueError):
        kp.extract_isoquant(grid, 1.0)
    with pytest.raises(ValueError):
        kp.extract_isoquant(grid, 0.0)


# ---------------------------------------------------------------- hardness


def test_hardness_summary_on_fabricated_counts():
    # probabilities 1, 1, .5, 0, 0; node medians 1, 1, 7, 99, 1
    grid = synthetic_grid([10, 10, 5, 0, 0], trials=10, nodes_row=[1, 1, 7, 99, 1])
    hs = kp.hardness_summary(grid)
    assert hs.argmax_cell == (Fraction(1, 2), Fraction(3, 4))
    assert hs.argmax_median == 99.0
    assert hs.argmax_probability == 0.0
    assert hs.in_band.sum() == 1 and hs.in_band[0, 2]
    assert hs.band_median_nodes == 7.0
    assert hs.outside_median_nodes == np.median([1, 1, 99, 1])


def test_hardness_argmax_tiebreak_is_first_in_row_major_order():
    grid = synthetic_grid([10, 10, 5, 0, 0], trials=10, nodes_row=[3, 3, 3, 3, 3])
    hs = kp.hardness_summary(grid)
    assert hs.argmax_cell == (Fraction(1, 2), Fraction(0))


# ---------------------------------------------------------------- kappa


def test_kappa_value_exact_anchors():
    assert kp.kappa_value(1.0, 15) == 1.0
    assert kp.kappa_value(0.0, 15) == math.inf
    assert kp.kappa_value(2.0**10, 10) == 0.0
    assert kp.kappa_value(2.0, 4) == 0.75
    with pytest.raises(ValueError):
        kp.kappa_value(-1.0, 4)
    with pytest.raises(ValueError):
        kp.kappa_value(1.0, 0)


def test_kappa_matches_census_average():
    model = kp.SamplingModel(n=6, master_seed=41)
    cp = kp.ConstraintPair(Fraction(1, 2), Fraction(2, 5))
    est = kp.kappa(model, cp, 30)
    total = sum(kp.lattice_census(kp.sample_instance(model, t), cp).n_both for t in range(30))
    assert est.expected_solutions == total / 30
    assert est.kappa == kp.kappa_value(total / 30, 6)
    assert est == kp.kappa_line(model, [cp], 30)[0]


def test_kappa_line_is_exactly_monotone_on_shared_instances():
    model = kp.SamplingModel(n=10, master_seed=43)
    half = Fraction(1, 2)
    along_c = [kp.ConstraintPair(Fraction(k, 5), half) for k in range(6)]
    kappas = [e.kappa for e in kp.kappa_line(model, along_c, 50)]
    assert all(a >= b for a, b in zip(kappas, kappas[1:]))  # looser c, more solutions
    along_p = [kp.ConstraintPair(half, Fraction(k, 5)) for k in range(6)]
    kappas = [e.kappa for e in kp.kappa_line(model, along_p, 50)]
    assert all(a <= b for a, b in zip(kappas, kappas[1:]))  # higher floor, fewer


def test_kappa_needs_census_sized_instances():
    cp = kp.ConstraintPair(Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(ValueError):
        kp.kappa(kp.SamplingModel(n=26, master_seed=0), cp, 10)
    with pytest.raises(ValueError):
        kp.kappa(kp.SamplingModel(n=4, master_seed=0), cp, 0)


def test_kappa_contour_bracket_properties():
    model = kp.SamplingModel(n=10, master_seed=47)
    kc = kp.kappa_contour(model, Fraction(1, 2), 40)
    assert 0 <= kc.delta_low < kc.delta_high <= Fraction(1, 2)
    assert kc.delta_high - kc.delta_low <= Fraction(1, 1 << 20)
    assert kc.expected_solutions >= 1.0  # evaluated on the feasible side
    assert 0.0 <= kc.prob_solvable <= 1.0


def test_kappa_contour_guards():
    cp_model = kp.SamplingModel(n=21, master_seed=0)
    with pytest.raises(ValueError):
        kp.kappa_contour(cp_model, Fraction(1, 2), 10)
    model = kp.SamplingModel(n=8, master_seed=0)
    with pytest.raises(ValueError):
        kp.kappa_contour(model, Fraction(1), 10)
    with pytest.raises(ValueError):
        kp.kappa_contour(model, Fraction(1, 2), 0)


# ---------------------------------------------------------------- csv output


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_grid_csv_layout(tmp_path):
    grid = tiny_grid()
    path = tmp_path / "grid.csv"
    kp.write_grid_csv(grid, path)
    rows = read_csv(path)
    assert rows[0] == [
        "n", "c", "p", "trials", "solvable", "unknown",
        "probability", "nodes_mean", "nodes_median", "nodes_max",
    ]
    assert len(rows) == 1 + 9
    assert rows[1][:4] == ["6", "0.000000", "0.000000", "20"]
    # rows are c-major: the second block starts at c = 1/2
    assert rows[4][1] == "0.500000"
    text = path.read_text()
    assert "\r" not in text and text.endswith("\n")


def test_grid_csv_optional_columns(tmp_path):
    grid = tiny_grid(include_bounds=True)
    kp.write_grid_csv(grid, tmp_path / "g.csv", include_time=True)
    rows = read_csv(tmp_path / "g.csv")
    assert rows[0][-3:] == ["p_El", "p_EL", "time_us_mean"]
    assert len(rows[1]) == 13


def test_grid_bounds_csv_requires_bounds(tmp_path):
    with pytest.raises(ValueError):
        kp.write_grid_bounds_csv(tiny_grid(), tmp_path / "b.csv")


def test_grid_bounds_csv_layout(tmp_path):
    grid = tiny_grid(include_bounds=True)
    path = tmp_path / "b.csv"
    kp.write_grid_bounds_csv(grid, path)
    rows = read_csv(path)
    assert rows[0] == [
        "n", "c", "p", "trials", "p_E", "p_El", "p_EL",
        "se_E", "se_El", "se_EL", "unknown_count",
    ]
    assert len(rows) == 1 + 9
    # estimated probabilities never drop below the exact prefix events here
    for row in rows[1:]:
        assert float(row[4]) >= float(row[5]) - 1e-9


def test_ratio_and_isoquant_and_kappa_csv(tmp_path):
    grid = tiny_grid()
    kp.write_ratio_csv(kp.ratio_projection(grid), tmp_path / "r.csv")
    rows = read_csv(tmp_path / "r.csv")
    assert rows[0] == ["log_ratio", "probability", "nodes_median"]
    assert len(rows) == 1 + 4

    iso = kp.extract_isoquant(synthetic_grid([10, 10, 8, 2, 0], trials=10), 0.5)
    kp.write_isoquant_csv([iso], tmp_path / "i.csv")
    rows = read_csv(tmp_path / "i.csv")
    assert rows[0] == ["level", "c", "p"]
    assert rows[1] == ["0.500000", "0.500000", "0.625000"]

    model = kp.SamplingModel(n=6, master_seed=41)
    ests = kp.kappa_line(model, [kp.ConstraintPair(Fraction(0), Fraction(1))], 10)
    kp.write_kappa_csv(ests, tmp_path / "k.csv")
    rows = read_csv(tmp_path / "k.csv")
    assert rows[0] == ["n", "c", "p", "trials", "expected_solutions", "kappa"]
    # no subset fits a zero capacity with a full-value floor: kappa diverges
    assert rows[1][4] == "0.000000" and rows[1][5] == "inf"


def test_grid_csv_identical_across_thread_counts(tmp_path):
    config = dict(
        model=kp.SamplingModel(n=8, master_seed=53),
        step=Fraction(1, 2),
        trials_per_cell=10,
        include_bounds=True,
    )
    kp.write_grid_csv(kp.run_grid(kp.GridConfig(**config), threads=1), tmp_path / "a.csv")
    kp.write_grid_csv(kp.run_grid(kp.GridConfig(**config), threads=2), tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
