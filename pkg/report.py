"""
Robustness reports: an nb value, its band, the inputs it came from and the
intermediates worth auditing, rendered as text or JSON.
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import pandas as pd

from anova import (AnovaSummary, GroupData, anova_from_raw, cohens_f, nb_cohens_f,
                   nb_partial_eta_sq)
from classify import RobustnessBand, classify
from contingency import (ContingencyTable, cross_product_diff, lattice_step, nb_2x2, nb_rxc,
                         neutrality_steps, rq_2x2, rq_rxc)
from core import NbValue, ValidationError
from correlation import CorrelationValue, PairedSample, fisher_z, nb_dti, pearson_r
from invariance import SimulationResult

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 6

Number = Union[int, float]

PARTIAL_ETA_SQ = "partial_eta_sq"
COHENS_F_NB = "cohens_f_nb"
ANOVA_FORMS = (PARTIAL_ETA_SQ, COHENS_F_NB)


def format_number(value: Number) -> str:
    """Render a number for text output: integers as is, floats to 6 significant digits."""
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def reported_band(value: float) -> RobustnessBand:
    """
    Band of a value as it is displayed.

    Text output shows 6 significant digits; classifying the displayed number
    keeps the printed value and its band consistent (0.49999994 prints as 0.5
    and is reported very_robust).
    """
    shown = float(format_number(value))
    return classify(shown if shown < 1.0 else value)


@dataclass(frozen=True)
class RobustnessReport:
    """
    The unit of CLI output.

    Attributes:
        metric: One of nb_2x2, nb_rxc, partial_eta_sq, cohens_f_nb, dti, or nb
            for a value supplied directly
        value: nb value in [0, 1), full precision
        band: Robustness band of the displayed value
        inputs: Copy of the parsed inputs, enough to recompute value
        warnings: Conditions worth flagging (e.g. degenerate margins)
        auxiliary: Named intermediates (rq, z, f_stat, eta_sq, ...)
    """
    metric: str
    value: float
    band: RobustnessBand
    inputs: Dict[str, Any]
    warnings: Tuple[str, ...] = field(default=())
    auxiliary: Dict[str, Number] = field(default_factory=dict)

    @property
    def displayed_value(self) -> float:
        """value rounded to the significant digits text output shows."""
        return float(format_number(self.value))

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "metric": self.metric,
            "value": self.value,
            "displayed_value": self.displayed_value,
        }
        payload.update(self.auxiliary)
        payload.update({
            "band": self.band.label.value,
            "meaning": self.band.meaning,
            "warnings": list(self.warnings),
            "inputs": self.inputs,
        })
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_text(self) -> str:
        lines = [
            f"metric: {self.metric}",
            f"value: {format_number(self.value)}",
            f"band: {self.band.label.value}",
            f"meaning: {self.band.meaning}",
        ]
        lines += [f"{name}: {format_number(value)}" for name, value in self.auxiliary.items()]
        lines += [f"warning: {message}" for message in self.warnings]
        return "\n".join(lines)


def _report(metric: str, nb: Union[NbValue, float], inputs: Dict[str, Any],
            warnings: Tuple[str, ...] = (), auxiliary: Optional[Dict[str, Number]] = None) -> RobustnessReport:
    value = nb.value if isinstance(nb, NbValue) else NbValue(float(nb)).value
    return RobustnessReport(metric, value, reported_band(value), inputs, warnings, dict(auxiliary or {}))


def table_report(table: ContingencyTable, force_rxc: bool = False) -> RobustnessReport:
    """
    Report for a contingency table.

    2x2 tables use the Risk Quotient form unless force_rxc is set; larger
    tables always use the generalized form.
    """
    warnings: Tuple[str, ...] = ()
    if table.has_degenerate_margins:
        warnings = ("degenerate margins: an all-zero row or column gives expected counts of 0",)
        logger.warning(warnings[0])
    inputs = {"cells": [list(row) for row in table.cells], "force_rxc": force_rxc}

    if table.is_2x2 and not force_rxc:
        logger.debug("routing %s to nb_2x2", table.cells)
        return _report("nb_2x2", nb_2x2(table), inputs, warnings, {
            "rq": rq_2x2(table),
            "cross_product": cross_product_diff(table),
            "lattice_step": lattice_step(table),
            "neutrality_steps": neutrality_steps(table),
        })
    logger.debug("routing %dx%d table to nb_rxc", *table.shape)
    return _report("nb_rxc", nb_rxc(table), inputs, warnings, {"rq": rq_rxc(table)})


def _anova_report(summary: AnovaSummary, form: str, inputs: Dict[str, Any]) -> RobustnessReport:
    if form not in ANOVA_FORMS:
        raise ValidationError(f"form must be one of {', '.join(ANOVA_FORMS)}, got {form!r}", field="form")
    eta_sq = nb_partial_eta_sq(summary)
    auxiliary: Dict[str, Number] = {
        "f_stat": summary.f_stat,
        "eta_sq": eta_sq.value,
        "f": cohens_f(eta_sq.value),
        "df_between": summary.df_between,
        "df_within": summary.df_within,
    }
    nb = eta_sq if form == PARTIAL_ETA_SQ else nb_cohens_f(summary)
    return _report(form, nb, dict(inputs, form=form), auxiliary=auxiliary)


def summary_report(summary: AnovaSummary, form: str = PARTIAL_ETA_SQ) -> RobustnessReport:
    """Report for a supplied ANOVA summary (df_between, df_within, F)."""
    inputs = {"df_between": summary.df_between, "df_within": summary.df_within, "f_stat": summary.f_stat}
    return _anova_report(summary, form, inputs)


def groups_report(data: GroupData, form: str = PARTIAL_ETA_SQ) -> RobustnessReport:
    """Report for raw one-way group data; the F summary is derived first."""
    inputs = {"groups": {label: list(group) for label, group in zip(data.labels or (), data.groups)}}
    return _anova_report(anova_from_raw(data), form, inputs)


def correlation_report(r: CorrelationValue, sample: Optional[PairedSample] = None) -> RobustnessReport:
    """Report the Distance to Independence of r, echoing the pairs when r came from data."""
    inputs: Dict[str, Any] = {"r": r.r} if sample is None else {"pairs": [list(p) for p in sample.pairs]}
    return _report("dti", nb_dti(r), inputs, auxiliary={"r": r.r, "z": fisher_z(r)})


def pairs_report(sample: PairedSample) -> RobustnessReport:
    return correlation_report(pearson_r(sample), sample)


def value_report(value: float) -> RobustnessReport:
    """Report for an nb value supplied directly, for classification only."""
    return _report("nb", value, {"value": value}, auxiliary={})


def recompute(payload: Mapping[str, Any]) -> float:
    """
    Recompute a report's value from its inputs echo.

    Args:
        payload: A report as produced by RobustnessReport.to_dict (or parsed JSON)

    Returns:
        float: The nb value recomputed from payload["inputs"]

    Raises:
        ValidationError: If the metric is unknown or the inputs are invalid
    """
    metric = payload["metric"]
    inputs = payload["inputs"]
    if metric in ("nb_2x2", "nb_rxc"):
        table = ContingencyTable(tuple(tuple(row) for row in inputs["cells"]))
        return (nb_2x2(table) if metric == "nb_2x2" else nb_rxc(table)).value
    if metric in ANOVA_FORMS:
        if "groups" in inputs:
            summary = anova_from_raw(GroupData(tuple(inputs["groups"].values()), tuple(inputs["groups"].keys())))
        else:
            summary = AnovaSummary(inputs["df_between"], inputs["df_within"], inputs["f_stat"])
        return (nb_partial_eta_sq(summary) if metric == PARTIAL_ETA_SQ else nb_cohens_f(summary)).value
    if metric == "dti":
        if "pairs" in inputs:
            return nb_dti(pearson_r(PairedSample(tuple(tuple(p) for p in inputs["pairs"])))).value
        return nb_dti(CorrelationValue(inputs["r"])).value
    if metric == "nb":
        return NbValue(float(inputs["value"])).value
    raise ValidationError(f"unknown metric {metric!r}", field="metric")


def simulation_text(result: SimulationResult) -> str:
    """Tabular text rendering of a simulation result."""
    df = pd.DataFrame([
        {
            "n": e.n,
            "mean_nb_hat": e.mean_nb_hat,
            "sd_nb_hat": e.sd_nb_hat if e.sd_nb_hat is not None else float("nan"),
            "replicates": e.replicates,
        }
        for e in result.per_n_estimates
    ])
    lines = [
        f"population_nb: {format_number(result.population_nb)}",
        f"seed: {result.seed}",
        f"generator: {result.generator}",
        df.to_string(index=False, float_format=format_number, na_rep="undefined"),
    ]
    lines += [f"warning: {message}" for message in result.warnings]
    return "\n".join(lines)


def simulation_json(result: SimulationResult) -> str:
    return json.dumps(result.to_dict())
