import os
import tempfile
from dataclasses import replace
from typing import List, Sequence
from unittest import TestCase

import pandas

from dspoly.core import NullModel, SimplexPoint, TestConfig
from dspoly.core.exceptions import InvalidConfig, ScenarioError
from dspoly.simlab import (
    Scenario,
    StudyKind,
    StudyRow,
    run_certainty_study,
    run_sample_size_study,
    run_study,
    run_weakening_study,
)
from dspoly.simlab.emit import CSV_COLUMNS, emit_study, study_frame


def _scenario(
    truth: Sequence[float], sizes: Sequence[int], datasets: int = 40
) -> Scenario:
    return Scenario(
        truth=SimplexPoint(p=tuple(truth)),
        null=NullModel.uniform(len(truth)),
        sample_sizes=tuple(sizes),
        config=TestConfig(seed=2024, replicates=200),
        datasets_per_size=datasets,
        weaken_grid=(0.0, 5.0, 20.0),
        freq_resamples=200,
        name="test",
    )


class ScenarioTest(TestCase):
    def test_validation(self) -> None:
        scenario = _scenario((0.5, 0.3, 0.2), (10,))
        with self.assertRaises(ScenarioError):
            replace(scenario, sample_sizes=())
        with self.assertRaises(ScenarioError):
            replace(scenario, sample_sizes=(0,))
        with self.assertRaises(ScenarioError):
            replace(scenario, weaken_grid=(-1.0,))
        with self.assertRaises(ScenarioError):
            replace(scenario, datasets_per_size=0)
        with self.assertRaises(ScenarioError):
            replace(scenario, null=NullModel.uniform(4))

    def test_truth_is_null(self) -> None:
        self.assertTrue(_scenario((0.25, 0.25, 0.25, 0.25), (10,)).truth_is_null)
        self.assertFalse(_scenario((0.5, 0.3, 0.2), (10,)).truth_is_null)


class StudyTest(TestCase):
    def _assert_fractions(self, rows: List[StudyRow]) -> None:
        for row in rows:
            total = row.fraction_reject + row.fraction_accept + row.fraction_unknown
            self.assertAlmostEqual(total, 1.0)

    def test_certainty_study(self) -> None:
        scenario = _scenario((0.3, 0.3, 0.3, 0.1), (20, 500))
        rows = run_certainty_study(scenario)
        self._assert_fractions(rows)
        self.assertEqual([row.n for row in rows], [20, 500])
        self.assertEqual({row.study for row in rows}, {"certainty"})
        small, large = rows
        self.assertGreaterEqual(large.fraction_reject, 0.9)
        assert large.total_correct is not None and small.total_correct is not None
        self.assertGreaterEqual(large.total_correct, small.total_correct)
        assert large.certain_correct is not None
        self.assertGreaterEqual(large.certain_correct, large.total_correct)
        self.assertEqual(large.datasets, 40)
        self.assertEqual(large.seed, 2024)

    def test_weakening_study(self) -> None:
        scenario = _scenario((0.4, 0.3, 0.3), (50,))
        rows = run_weakening_study(scenario)
        self._assert_fractions(rows)
        self.assertEqual([row.weaken_alpha for row in rows], [0.0, 5.0, 20.0])
        unknowns = [row.fraction_unknown for row in rows]
        self.assertEqual(unknowns, sorted(unknowns))
        self.assertGreaterEqual(unknowns[-1], 0.5)

    def test_sample_size_study(self) -> None:
        scenario = _scenario((0.5, 0.3, 0.2), (10, 1000))
        rows = run_sample_size_study(scenario)
        self._assert_fractions(rows)
        self.assertEqual(
            [row.study for row in rows],
            ["samplesize-null"] * 2 + ["samplesize-alt"] * 2,
        )
        small, large = rows[2:]
        self.assertLessEqual(large.fraction_unknown, small.fraction_unknown)
        self.assertGreaterEqual(large.fraction_reject, 0.9)

    def test_deterministic_across_workers(self) -> None:
        scenario = _scenario((0.5, 0.3, 0.2), (30,), datasets=16)
        single = run_study(StudyKind.CERTAINTY, scenario, workers=1)
        many = run_study(StudyKind.CERTAINTY, scenario, workers=4)
        self.assertEqual(single, many)

    def test_seed_is_recorded(self) -> None:
        scenario = _scenario((0.5, 0.3, 0.2), (30,), datasets=4)
        other = replace(scenario, config=replace(scenario.config, seed=7))
        self.assertEqual(run_certainty_study(other)[0].seed, 7)


LOPSIDED = (2 / 6, 1 / 6, 2 / 6, 1 / 6)


def _full_scenario(
    truth: Sequence[float],
    sizes: Sequence[int],
    datasets: int,
    replicates: int,
    freq_resamples: int = 200,
) -> Scenario:
    return Scenario(
        truth=SimplexPoint(p=tuple(truth)),
        null=NullModel.uniform(len(truth)),
        sample_sizes=tuple(sizes),
        config=TestConfig(seed=2024, replicates=replicates),
        datasets_per_size=datasets,
        weaken_grid=(0.0, 2.0, 5.0, 10.0, 20.0),
        freq_resamples=freq_resamples,
        name="full",
    )


class FullScaleStudyTest(TestCase):
    WORKERS = 4

    def test_unknown_vanishes_with_sample_size(self) -> None:
        scenario = _full_scenario(LOPSIDED, (8, 256), datasets=500, replicates=100)
        rows = run_sample_size_study(scenario, self.WORKERS)
        small, large = [row for row in rows if row.study == "samplesize-alt"]
        self.assertLess(large.fraction_unknown, 0.05)
        self.assertLess(large.fraction_unknown, small.fraction_unknown)

    def test_certainty_ordering(self) -> None:
        scenario = _full_scenario(
            (0.3, 0.3, 0.3, 0.1),
            (60,),
            datasets=250,
            replicates=1000,
            freq_resamples=1000,
        )
        (row,) = run_certainty_study(scenario, self.WORKERS)
        assert row.certain_correct is not None and row.total_correct is not None
        self.assertGreaterEqual(row.certain_correct, row.total_correct)
        self.assertLessEqual(row.fraction_unknown, 0.2)
        # a certain rejection needs the upper tail at or below alpha, which is
        # stricter than the resampled p-value
        self.assertLessEqual(row.fraction_reject, row.freq_fraction_reject)

    def test_null_level(self) -> None:
        scenario = _full_scenario(
            (0.25, 0.25, 0.25, 0.25), (100,), datasets=250, replicates=1000
        )
        (row,) = run_certainty_study(scenario, self.WORKERS)
        self.assertGreaterEqual(row.fraction_reject, 0.03)
        self.assertLessEqual(row.fraction_reject, 0.07)
        self.assertEqual(row.total_correct, row.fraction_accept)

    def test_weakening_grid(self) -> None:
        scenario = _full_scenario(
            LOPSIDED, (128,), datasets=250, replicates=1000, freq_resamples=50
        )
        rows = run_weakening_study(scenario, self.WORKERS)
        self.assertEqual(
            [row.weaken_alpha for row in rows], [0.0, 2.0, 5.0, 10.0, 20.0]
        )
        unknowns = [row.fraction_unknown for row in rows]
        self.assertEqual(unknowns, sorted(unknowns))
        self.assertGreaterEqual(unknowns[-1], 0.8)


class EmitTest(TestCase):
    def _rows(self) -> List[StudyRow]:
        return [
            StudyRow(
                study="samplesize-null",
                n=n,
                weaken_alpha=0.0,
                fraction_reject=0.0,
                fraction_accept=0.5,
                fraction_unknown=0.5,
                freq_fraction_reject=0.05,
                certain_correct=1.0,
                total_correct=0.5,
                datasets=10,
                replicates=100,
                seed=1,
            )
            for n in (10, 100)
        ] + [
            StudyRow(
                study="samplesize-alt",
                n=10,
                weaken_alpha=0.0,
                fraction_reject=0.0,
                fraction_accept=0.0,
                fraction_unknown=1.0,
                freq_fraction_reject=0.2,
                certain_correct=None,
                total_correct=0.0,
                datasets=10,
                replicates=100,
                seed=1,
            )
        ]

    def test_frame(self) -> None:
        frame = study_frame(self._rows())
        self.assertEqual(list(frame.columns), CSV_COLUMNS)
        self.assertEqual(len(frame), 3)

    def test_emit_csv_and_svg(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "nested", "samplesize.csv")
            written = emit_study(self._rows(), path, svg=True)
            svg_path = os.path.join(directory, "nested", "samplesize.svg")
            self.assertEqual(written, [path, svg_path])
            with open(path, encoding="utf-8") as fd:
                lines = fd.read().split("\n")
            self.assertEqual(lines[0], ",".join(CSV_COLUMNS))
            self.assertEqual(
                lines[1],
                "samplesize-null,10,0.000000,0.000000,0.500000,0.500000,"
                "0.050000,1.000000,0.500000,10,100,1",
            )
            self.assertEqual(lines[3].split(",")[7], "")
            frame = pandas.read_csv(path)
            self.assertEqual(len(frame), 3)
            with open(svg_path, encoding="utf-8") as fd:
                svg = fd.read()
            self.assertIn('id="series-samplesize-null-reject"', svg)
            self.assertIn('id="series-samplesize-alt-unknown"', svg)

    def test_svg_is_reproducible(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            first = os.path.join(directory, "a", "study.csv")
            second = os.path.join(directory, "b", "study.csv")
            emit_study(self._rows(), first, svg=True)
            emit_study(self._rows(), second, svg=True)
            with open(first.replace(".csv", ".svg"), encoding="utf-8") as fd:
                first_svg = fd.read()
            with open(second.replace(".csv", ".svg"), encoding="utf-8") as fd:
                second_svg = fd.read()
            self.assertEqual(first_svg, second_svg)

    def test_empty_rows(self) -> None:
        with self.assertRaises(InvalidConfig):
            emit_study([], "unused.csv")
