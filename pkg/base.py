from abc import ABC, abstractmethod
from dataclasses import replace
from typing import ClassVar, Generic, TypeVar

from core import Contrast, Domain, NbValue, nb_general

MetricInput = TypeVar('MetricInput')


class NbMetric(ABC, Generic[MetricInput]):
    """
    Abstract base class for domain-specific neutrality boundary metrics.

    Every metric can state its input as a contrast (delta, delta0, scale) of
    the general form, and computes its own nb value with the domain formula.
    The two must agree; that agreement is what makes the metrics one family.

    Type Parameters:
        MetricInput: The input a metric is computed from (a table, an ANOVA
            summary, a correlation, ...)

    Attributes:
        domain: Domain stamped on every value the metric produces
        metric_name: Name stamped on every value the metric produces
    """
    domain: ClassVar[Domain]
    metric_name: ClassVar[str]

    @abstractmethod
    def contrast(self, data: MetricInput) -> Contrast:
        """
        Express the input as a contrast of the general form.

        Args:
            data: The metric input

        Returns:
            Contrast: delta, delta0 and scale such that nb_general reproduces
                the domain formula
        """
        pass

    @abstractmethod
    def compute(self, data: MetricInput) -> NbValue:
        """
        Compute the nb value with the domain-specific formula.

        Args:
            data: The metric input

        Returns:
            NbValue: The value, labelled with this metric's domain and name
        """
        pass

    def compute_general(self, data: MetricInput) -> NbValue:
        """Compute the nb value through the general form, labelled as this metric."""
        return self.label(nb_general(self.contrast(data)))

    def label(self, nb: NbValue) -> NbValue:
        return replace(nb, domain=self.domain, metric_name=self.metric_name)
