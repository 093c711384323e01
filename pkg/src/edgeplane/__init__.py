"""Edge-cluster control plane with a simulated multi-architecture backend,
protocol-translation middleware, and a batched sensor-classification
pipeline."""

__version__ = "0.1.0"
