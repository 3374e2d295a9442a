from typing import Iterable, List, Sequence, TextIO


def format_accuracy(accuracy: float, ci_halfwidth: float) -> str:
    """Percentages the way result tables print them, e.g. "99.60 (±0.39)"."""
    return f"{100.0 * accuracy:.2f} (±{100.0 * ci_halfwidth:.2f})"


class ReportWriter:
    """Writes plain-text reports as markdown: headers, paragraphs and column-aligned tables."""

    def __init__(self, text_io: TextIO):
        self._text_io = text_io

    def write(self, text: str) -> None:
        self._text_io.write(text)

    def print_header(self, text: str, level: int) -> None:
        self._text_io.write("#" * (1 + level) + f" {text}\n\n")

    def print_description(self, description: str) -> None:
        for line in description.splitlines(keepends=False):
            self._text_io.write(line.strip() + "\n")
        self._text_io.write("\n")

    def print_table(self, headers: Sequence[str], rows: Iterable[Iterable[str]]) -> None:
        column_count = len(headers)
        table: List[List[str]] = [list(headers)]
        for row in rows:
            row_elements = list(row)
            if len(row_elements) != column_count:
                raise RuntimeError("Failed to put row into table, it has the wrong number of entries!")
            table.append(row_elements)
        widths = [max(len(row[column]) for row in table) for column in range(column_count)]
        self._print_table_row(table[0], widths)
        self._print_table_row(["-" * width for width in widths], widths)
        for row_elements in table[1:]:
            self._print_table_row(row_elements, widths)
        self._text_io.write("\n")

    def _print_table_row(self, row: Sequence[str], widths: Sequence[int]) -> None:
        self._text_io.write("| " + " | ".join(cell.ljust(width) for cell, width in zip(row, widths)) + " |\n")
