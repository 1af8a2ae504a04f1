"""CSV and SVG output for separation scans."""

from .csv_records import read_records_csv, thin_records, write_points_csv, write_records_csv
from .svg_plot import PlotSpec, render_svg, write_svg

__all__ = [
    'read_records_csv', 'thin_records', 'write_points_csv', 'write_records_csv',
    'PlotSpec', 'render_svg', 'write_svg',
]
