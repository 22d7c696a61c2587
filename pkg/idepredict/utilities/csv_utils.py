import csv
import io
import logging
from pathlib import Path
from typing import List, Mapping, Optional, Sequence, Union

NUMBER_FORMAT = "%.10e"
INTEGER_COLUMNS = frozenset(["n_runs", "n_evals"])


class CsvUtils:
    """Utility class for the result table CSV format.

    Comma-separated, one header row, ``%.10e`` for real values, plain
    integers for count columns, Unix newlines.
    """

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    @staticmethod
    def format_value(column: str, value: Union[int, float]) -> str:
        """Format one cell according to its column."""
        if column in INTEGER_COLUMNS:
            return str(int(value))
        return NUMBER_FORMAT % float(value)

    def emit(self, rows: Sequence[Mapping[str, Union[int, float]]],
             columns: Optional[Sequence[str]] = None) -> str:
        """
        Render rows as CSV text

        Args:
            rows: Row mappings sharing the same keys
            columns: Column order; defaults to the keys of the first row

        Returns:
            str: CSV document ending with a newline
        """
        if columns is None:
            columns = list(rows[0].keys()) if rows else []
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([self.format_value(col, row[col]) for col in columns])
        return buffer.getvalue()

    def parse(self, text: str) -> List[dict]:
        """
        Parse CSV text produced by ``emit``

        Args:
            text: CSV document

        Returns:
            List[dict]: Row dictionaries with numeric values
        """
        reader = csv.DictReader(io.StringIO(text))
        rows = []
        for record in reader:
            rows.append({
                key: int(value) if key in INTEGER_COLUMNS else float(value)
                for key, value in record.items()
            })
        return rows

    def write_csv_file(self, rows: Sequence[Mapping[str, Union[int, float]]],
                       file_path: str, columns: Optional[Sequence[str]] = None) -> str:
        """
        Write rows to a CSV file

        Args:
            rows: Row mappings
            file_path: Destination path; parent directories are created
            columns: Column order

        Returns:
            str: The text that was written
        """
        text = self.emit(rows, columns)
        Path(file_path).parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, 'w', encoding='utf-8', newline='') as file:
            file.write(text)
        self.logger.info(f"Wrote CSV file: {file_path} ({len(rows)} rows)")
        return text

    def read_csv_file(self, file_path: str) -> List[dict]:
        """
        Read a result CSV file

        Args:
            file_path: CSV file path

        Returns:
            List[dict]: Row dictionaries with numeric values
        """
        with open(file_path, 'r', encoding='utf-8', newline='') as file:
            rows = self.parse(file.read())
        self.logger.info(f"Read CSV file: {file_path} ({len(rows)} rows)")
        return rows
