from __future__ import annotations

from treeforce.generators import complete_digraph
from treeforce.lab import spider_scan, theorem_trials, tree_census
from treeforce.plotting import plot_census, plot_spider_scan, plot_trials


def test_figures_written(tmp_path):
    paths = [
        plot_trials(theorem_trials("T18", {"l": 1, "n": 40}, 3), str(tmp_path / "a.png")),
        plot_trials(
            theorem_trials("T34", {"k": 1, "l": 2, "d": 5, "n": 40}, 3), str(tmp_path / "b.svg")
        ),
        plot_census(tree_census(4), str(tmp_path / "c.png")),
        plot_spider_scan(spider_scan(2, 1, [complete_digraph(4)], 1), str(tmp_path / "d.pdf")),
    ]
    for p in paths:
        with open(p, "rb") as fh:
            assert len(fh.read()) > 500
