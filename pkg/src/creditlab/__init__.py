"""creditlab: credit-scoring pipelines, from-scratch learners, fairness
metrics and mitigation, reject inference, and model explanation tooling."""

__version__ = "0.1.0"
