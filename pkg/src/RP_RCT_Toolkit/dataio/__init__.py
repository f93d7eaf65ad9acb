"""
Dataset and config serialization, and report rendering.
"""
from .config_io import (
    SimulationConfig,
    design_from_dict,
    load_design,
    load_json,
    load_simulation_config,
    overrides,
    population_from_dict,
    save_json,
)
from .csv_io import (
    dataset_path,
    read_dataset,
    read_outcomes,
    read_sidecar,
    sidecar_path,
    write_dataset,
    write_sidecar,
)
from .exporters import (
    LatexExporter,
    parse_reports,
    render_document,
    render_report,
    render_rows,
)
from .schema import DatasetSchema, is_sidecar_column

__all__ = [
    'SimulationConfig',
    'design_from_dict',
    'load_design',
    'load_json',
    'load_simulation_config',
    'overrides',
    'population_from_dict',
    'save_json',
    'dataset_path',
    'read_dataset',
    'read_outcomes',
    'read_sidecar',
    'sidecar_path',
    'write_dataset',
    'write_sidecar',
    'LatexExporter',
    'parse_reports',
    'render_document',
    'render_report',
    'render_rows',
    'DatasetSchema',
    'is_sidecar_column',
]
