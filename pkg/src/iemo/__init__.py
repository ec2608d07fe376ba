"""Interactive evolutionary multi-objective optimization with learned preferences.

The package couples three decomposition/dominance based evolutionary algorithms
(NSGA-II, MOEA/D, R2-IBEA) with a pairwise learning-to-rank utility model that
is trained from decision-maker comparisons collected during the run.
"""

__version__ = "0.1.0"
