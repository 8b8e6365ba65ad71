from typing import Iterable, List

from base import MetricInput, NbMetric
from core import NbValue


def evaluate(metric: NbMetric[MetricInput], inputs: Iterable[MetricInput]) -> List[NbValue]:
    """
    Compute a metric for each input in order.

    Args:
        metric: The metric to apply
        inputs: Inputs of the metric's type

    Returns:
        List[NbValue]: One value per input, in input order
    """
    return [metric.compute(data) for data in inputs]
