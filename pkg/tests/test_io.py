from io import StringIO

from pytest import raises

from ian_networks.io import ReportWriter, format_accuracy


def test_format_accuracy():
    assert format_accuracy(0.996, 0.0039) == "99.60 (±0.39)"
    assert format_accuracy(1.0, 0.0) == "100.00 (±0.00)"


def test_table_columns_are_aligned():
    buffer = StringIO()
    writer = ReportWriter(buffer)
    writer.print_header("Results", 1)
    writer.print_table(["case", "accuracy"], [["xor", "100.00 (±0.00)"], ["circle", "99.60 (±0.39)"]])
    lines = buffer.getvalue().splitlines()
    assert lines[0] == "## Results"
    assert lines[2] == "| case   | accuracy       |"
    assert lines[3] == "| ------ | -------------- |"
    assert lines[4] == "| xor    | 100.00 (±0.00) |"
    assert len({len(line) for line in lines[2:6]}) == 1


def test_description_is_stripped():
    buffer = StringIO()
    ReportWriter(buffer).print_description("  first line\n    second line  ")
    assert buffer.getvalue() == "first line\nsecond line\n\n"


def test_table_rejects_wrong_row_length():
    with raises(RuntimeError):
        ReportWriter(StringIO()).print_table(["a", "b"], [["only one"]])
