"""Group comparisons, correlations, and stepwise regression over norms.

Structure membership (kernel, core, grounding set) is compared against the
rest of the dictionary on each psycholinguistic variable with two-group
one-way ANOVAs, and regressed on all variables at once with forward stepwise
selection. Membership is the outcome, fitted as a linear probability model
by ordinary least squares on standardized variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betainc

from .decomposition import Decomposition, Label
from .lexicon import NORM_VARIABLES, NormRecord, NormsTable
from .mgs import GroundingSet


class InsufficientDataError(ValueError):
    """Too few usable rows to run the requested analysis."""


@dataclass(frozen=True)
class FrameRow:
    label: Label
    in_mgs: bool
    norms: NormRecord


@dataclass
class AnalysisFrame:
    """Per-word labels and norms, the input to every analysis here."""

    rows: dict[str, FrameRow]
    coverage: float
    has_mgs: bool
    warnings: list[str] = field(default_factory=list)

    def words(self) -> list[str]:
        return sorted(self.rows)

    def values(self, variable: str, words) -> list[float]:
        out = []
        for w in words:
            value = self.rows[w].norms.get(variable)
            if value is not None:
                out.append(value)
        return out


@dataclass(frozen=True)
class GroupSplit:
    """A named two-group partition of (part of) the dictionary."""

    name: str
    a_name: str
    a_words: frozenset[str]
    b_name: str
    b_words: frozenset[str]


@dataclass(frozen=True)
class GroupComparison:
    split: str
    variable: str
    mean_a: float
    mean_b: float
    n_a: int
    n_b: int
    f: float
    df_between: int
    df_within: int
    p: float

    def to_record(self) -> dict:
        return {
            "split": self.split,
            "variable": self.variable,
            "mean_a": self.mean_a,
            "mean_b": self.mean_b,
            "n_a": self.n_a,
            "n_b": self.n_b,
            "f": self.f,
            "df_between": self.df_between,
            "df_within": self.df_within,
            "p": self.p,
        }


@dataclass(frozen=True)
class RegressionStep:
    variable: str
    standardized_beta: float
    incremental_r2: float
    p: float
    bivariate_r: float


@dataclass
class RegressionReport:
    outcome: str
    steps: list[RegressionStep]
    total_r2: float
    n: int
    warnings: list[str] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "outcome": self.outcome,
            "n": self.n,
            "total_r2": self.total_r2,
            "steps": [
                {
                    "variable": s.variable,
                    "standardized_beta": s.standardized_beta,
                    "incremental_r2": s.incremental_r2,
                    "p": s.p,
                    "bivariate_r": s.bivariate_r,
                }
                for s in self.steps
            ],
            "warnings": list(self.warnings),
        }


def f_upper_tail(f: float, d1: int, d2: int) -> float:
    """P(F > f) for an F distribution, via the regularized incomplete beta."""
    if d1 <= 0 or d2 <= 0:
        raise ValueError("degrees of freedom must be positive")
    if f <= 0:
        return 1.0
    if math.isinf(f):
        return 0.0
    x = d2 / (d2 + d1 * f)
    return float(betainc(d2 / 2.0, d1 / 2.0, x))


def attach_norms(
    d: Decomposition, norms: NormsTable, mgs: GroundingSet | None = None
) -> AnalysisFrame:
    """Join labels with norms over all dictionary words.

    Words without norms stay in the frame (they count toward coverage) but
    drop out of each statistic; norms rows for unknown words are ignored
    with a warning.
    """
    rows: dict[str, FrameRow] = {}
    for w in sorted(d.label):
        rows[w] = FrameRow(
            label=d.label[w],
            in_mgs=mgs is not None and w in mgs.words,
            norms=norms.rows.get(w, NormRecord()),
        )
    warnings = list(norms.warnings)
    extra = sorted(set(norms.rows) - set(rows))
    if extra:
        shown = ", ".join(extra[:5])
        warnings.append(f"{len(extra)} norms rows are not dictionary words (e.g. {shown})")
    with_norms = sum(1 for r in rows.values() if r.norms.any_present())
    coverage = with_norms / len(rows) if rows else 0.0
    return AnalysisFrame(rows=rows, coverage=coverage, has_mgs=mgs is not None, warnings=warnings)


def standard_splits(frame: AnalysisFrame) -> list[GroupSplit]:
    """The four comparisons run on every dictionary."""
    kernel = frozenset(w for w, r in frame.rows.items() if r.label is not Label.OUTSIDE)
    core = frozenset(w for w, r in frame.rows.items() if r.label is Label.CORE)
    satellites = frozenset(w for w, r in frame.rows.items() if r.label is Label.SATELLITE)
    outside = frozenset(frame.rows) - kernel
    splits = [
        GroupSplit("K vs D-K", "K", kernel, "D-K", outside),
        GroupSplit("C vs D-C", "C", core, "D-C", frozenset(frame.rows) - core),
    ]
    if frame.has_mgs:
        mgs = frozenset(w for w, r in frame.rows.items() if r.in_mgs)
        splits.append(GroupSplit("MGS vs D-MGS", "MGS", mgs, "D-MGS", frozenset(frame.rows) - mgs))
    splits.append(GroupSplit("C vs S", "C", core, "S", satellites))
    return splits


def anova_compare(frame: AnalysisFrame, split: GroupSplit, variable: str) -> GroupComparison:
    """One-way two-group ANOVA on the raw values of one variable."""
    a = frame.values(variable, sorted(split.a_words))
    b = frame.values(variable, sorted(split.b_words))
    for name, values in ((split.a_name, a), (split.b_name, b)):
        if len(values) < 2:
            raise InsufficientDataError(
                f"group {name} has {len(values)} values for {variable}; need at least 2"
            )
    n = len(a) + len(b)
    grand = (sum(a) + sum(b)) / n
    mean_a = sum(a) / len(a)
    mean_b = sum(b) / len(b)
    ss_between = len(a) * (mean_a - grand) ** 2 + len(b) * (mean_b - grand) ** 2
    ss_within = sum((x - mean_a) ** 2 for x in a) + sum((x - mean_b) ** 2 for x in b)
    df_between = 1
    df_within = n - 2
    if ss_within == 0:
        f = 0.0 if ss_between == 0 else math.inf
    else:
        f = (ss_between / df_between) / (ss_within / df_within)
    return GroupComparison(
        split=split.name,
        variable=variable,
        mean_a=mean_a,
        mean_b=mean_b,
        n_a=len(a),
        n_b=len(b),
        f=f,
        df_between=df_between,
        df_within=df_within,
        p=f_upper_tail(f, df_between, df_within),
    )


def correlation_matrix(frame: AnalysisFrame) -> list[list[float | None]]:
    """Pairwise-complete Pearson correlations of the five variables.

    Cells with fewer than 3 complete pairs, or a constant variable, are None.
    """
    words = frame.words()
    columns = {
        v: [frame.rows[w].norms.get(v) for w in words] for v in NORM_VARIABLES
    }
    size = len(NORM_VARIABLES)
    matrix: list[list[float | None]] = [[None] * size for _ in range(size)]
    for i, vi in enumerate(NORM_VARIABLES):
        for j in range(i, size):
            vj = NORM_VARIABLES[j]
            pairs = [
                (x, y)
                for x, y in zip(columns[vi], columns[vj])
                if x is not None and y is not None
            ]
            if len(pairs) < 3:
                continue
            xs = np.array([p[0] for p in pairs])
            ys = np.array([p[1] for p in pairs])
            sx = xs - xs.mean()
            sy = ys - ys.mean()
            denom = math.sqrt(float(sx @ sx) * float(sy @ sy))
            if denom == 0:
                continue
            r = float(sx @ sy) / denom
            matrix[i][j] = matrix[j][i] = max(-1.0, min(1.0, r))
    return matrix


def _complete_rows(
    frame: AnalysisFrame, split: GroupSplit, predictors: tuple[str, ...]
) -> tuple[np.ndarray, np.ndarray]:
    xs: list[list[float]] = []
    ys: list[float] = []
    for w in sorted(split.a_words | split.b_words):
        record = frame.rows[w].norms
        values = [record.get(v) for v in predictors]
        if any(v is None for v in values):
            continue
        xs.append([float(v) for v in values])  # type: ignore[arg-type]
        ys.append(1.0 if w in split.a_words else 0.0)
    return np.array(xs, dtype=float), np.array(ys, dtype=float)


def _partial_f_p(r2_old: float, r2_new: float, n: int, p_new: int) -> float:
    gain = r2_new - r2_old
    df2 = n - p_new - 1
    if df2 <= 0:
        return 1.0
    denom = (1.0 - r2_new) / df2
    if denom <= 1e-300:
        return 0.0 if gain > 1e-12 else 1.0
    return f_upper_tail(gain / denom, 1, df2)


def stepwise_regression(
    frame: AnalysisFrame,
    split: GroupSplit,
    predictors: tuple[str, ...] = NORM_VARIABLES,
    entry_p: float = 0.05,
) -> RegressionReport:
    """Forward stepwise OLS of group membership on standardized predictors.

    At each step the candidate with the largest incremental R-squared enters
    if its partial F-test clears entry_p. Betas are fully standardized (both
    sides z-scored), so they are comparable across variables and invariant
    under affine rescaling of any predictor.
    """
    x_raw, y_raw = _complete_rows(frame, split, predictors)
    n = len(y_raw)
    if n < 10:
        raise InsufficientDataError(f"only {n} complete rows; need at least 10")
    warnings: list[str] = []

    y_std = float(y_raw.std())
    if y_std == 0:
        raise InsufficientDataError("outcome indicator is constant over the complete rows")
    y = (y_raw - y_raw.mean()) / y_std

    usable: list[int] = []
    columns: dict[int, np.ndarray] = {}
    for idx, name in enumerate(predictors):
        col = x_raw[:, idx]
        std = float(col.std())
        if std == 0 or not math.isfinite(std):
            warnings.append(f"predictor {name} is constant; skipped")
            continue
        columns[idx] = (col - col.mean()) / std
        usable.append(idx)

    ss_tot = float(y @ y)

    def r_squared(selected: list[int]) -> float:
        design = np.column_stack([columns[i] for i in selected])
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        resid = y - design @ coef
        return 1.0 - float(resid @ resid) / ss_tot

    selected: list[int] = []
    steps: list[RegressionStep] = []
    skipped: set[int] = set()
    r2_current = 0.0
    while True:
        best: tuple[float, int] | None = None
        for idx in usable:
            if idx in selected or idx in skipped:
                continue
            design = np.column_stack([columns[i] for i in selected + [idx]])
            if np.linalg.cond(design) > 1e10:
                warnings.append(f"predictor {predictors[idx]} is collinear; skipped")
                skipped.add(idx)
                continue
            gain = r_squared(selected + [idx]) - r2_current
            if best is None or gain > best[0] + 1e-15:
                best = (gain, idx)
        if best is None:
            break
        gain, idx = best
        r2_new = r2_current + gain
        p = _partial_f_p(r2_current, r2_new, n, len(selected) + 1)
        if p > entry_p:
            break
        selected.append(idx)
        steps.append(
            RegressionStep(
                variable=predictors[idx],
                standardized_beta=0.0,  # filled from the final model below
                incremental_r2=gain,
                p=p,
                bivariate_r=float(columns[idx] @ y) / n,
            )
        )
        r2_current = r2_new
        if r2_current >= 1.0 - 1e-12:
            break

    if selected:
        design = np.column_stack([columns[i] for i in selected])
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        steps = [
            RegressionStep(
                variable=s.variable,
                standardized_beta=float(coef[pos]),
                incremental_r2=s.incremental_r2,
                p=s.p,
                bivariate_r=s.bivariate_r,
            )
            for pos, s in enumerate(steps)
        ]
    return RegressionReport(
        outcome=split.name,
        steps=steps,
        total_r2=r2_current,
        n=n,
        warnings=warnings,
    )


def layer_means(frame: AnalysisFrame, variable: str) -> dict[str, float | None]:
    """Raw group means per structural layer, for the means table."""
    groups: dict[str, list[str]] = {"MGS": [], "C": [], "S": [], "K": [], "D-K": []}
    for w, row in frame.rows.items():
        if row.in_mgs:
            groups["MGS"].append(w)
        if row.label is Label.CORE:
            groups["C"].append(w)
            groups["K"].append(w)
        elif row.label is Label.SATELLITE:
            groups["S"].append(w)
            groups["K"].append(w)
        else:
            groups["D-K"].append(w)
    means: dict[str, float | None] = {}
    for name, words in groups.items():
        values = frame.values(variable, sorted(words))
        means[name] = sum(values) / len(values) if values else None
    if not frame.has_mgs:
        means["MGS"] = None
    return means


def comparisons_to_text(comparisons: list[GroupComparison]) -> str:
    lines = [
        f"{'comparison':<14}{'variable':<14}{'mean A':>12}{'mean B':>12}"
        f"{'F':>12}{'df':>10}{'p':>12}"
    ]
    for c in comparisons:
        df = f"({c.df_between},{c.df_within})"
        lines.append(
            f"{c.split:<14}{c.variable:<14}{c.mean_a:>12.3f}{c.mean_b:>12.3f}"
            f"{c.f:>12.3f}{df:>10}{c.p:>12.3g}"
        )
    return "\n".join(lines)


def regression_to_text(report: RegressionReport) -> str:
    lines = [f"stepwise regression, outcome {report.outcome} (n={report.n})"]
    lines.append(f"{'step':<6}{'variable':<14}{'dir':<5}{'beta':>10}{'dR2':>10}{'p':>12}")
    for i, s in enumerate(report.steps, 1):
        direction = "+" if s.standardized_beta >= 0 else "-"
        lines.append(
            f"{i:<6}{s.variable:<14}{direction:<5}"
            f"{s.standardized_beta:>10.4f}{s.incremental_r2:>10.4f}{s.p:>12.3g}"
        )
    lines.append(f"total R2: {report.total_r2:.4f}")
    for w in report.warnings:
        lines.append(f"note: {w}")
    return "\n".join(lines)
