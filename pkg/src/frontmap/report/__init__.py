"""Pipeline orchestration, deterministic layout/styling, and file exports."""

from .layout import NodeStyle, color_for_rate, layout_spring, node_styles
from .exports import (
    export_dot,
    export_graphml,
    import_graphml,
    write_annotations_csv,
    write_assignees_csv,
    write_ca_csv,
    write_ca_svg,
    write_cluster_edges_csv,
    write_countries_csv,
    write_distinctive_csv,
    write_partition_csv,
    write_rates_csv,
    write_regions_csv,
    write_selection_csv,
    write_term_tables_csv,
)
from .pipeline import RunConfig, RunReport, run_pipeline, verify_run

__all__ = [
    "NodeStyle",
    "color_for_rate",
    "layout_spring",
    "node_styles",
    "export_dot",
    "export_graphml",
    "import_graphml",
    "write_annotations_csv",
    "write_assignees_csv",
    "write_ca_csv",
    "write_ca_svg",
    "write_cluster_edges_csv",
    "write_countries_csv",
    "write_distinctive_csv",
    "write_partition_csv",
    "write_rates_csv",
    "write_regions_csv",
    "write_selection_csv",
    "write_term_tables_csv",
    "RunConfig",
    "RunReport",
    "run_pipeline",
    "verify_run",
]
