"""Shifted Waring Lab: Observability (Prometheus metrics)."""
