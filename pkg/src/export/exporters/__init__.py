"""Shifted Waring Lab: Built-in Exporters.

To add a new exporter:
1. Create a new module in this package
2. Implement a class inheriting from BaseExporter
3. Import and register in src/export/registry.py's get_export_registry()
"""

from src.export.exporters.csv_exporter import CSVExporter
from src.export.exporters.json_exporter import JSONExporter
from src.export.exporters.svg import SVGExporter

__all__ = ["CSVExporter", "JSONExporter", "SVGExporter"]
